#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ringflow/diagram.hpp"

using namespace ringflow;

namespace {

const ControlSet kThreePhase{{{1.0, 0.0}, {1.0 / 3.0, 1.0 / 8.0}, {-1.0, 1.0}}};

GameControlSet a6_game() {
    return GameControlSet{{{"u1", {{1.0, 0.0}}},
                           {"u2", {{0.27, 0.07}}},
                           {"u3", {{-0.19, 0.18}}},
                           {"u4", {{-0.25, 0.2}, {-0.2, 0.17}, {0.0, 0.0}}}}};
}

double a6_formula(double d) {
    return std::min({d, 0.27 * d + 0.07, -0.19 * d + 0.18,
                     std::max({-0.25 * d + 0.2, -0.2 * d + 0.17, 0.0})});
}

}  // namespace

TEST_CASE("diagram_minplus") {
    const auto curve = diagram_minplus(2.0, 1.0);
    CHECK(curve.evaluate(0.2) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(curve.evaluate(0.8) == doctest::Approx(0.2).epsilon(1e-12));
    SUBCASE("breakpoint: both branches equal") {
        const double d = 1.0 / 3.0;  // 1/(v+sigma)
        CHECK(curve.evaluate(d) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(2.0 * d == doctest::Approx(1.0 - d).epsilon(1e-12));
    }
    SUBCASE("jam at d = 1/sigma") { CHECK(diagram_minplus(2.0, 1.0).evaluate(1.0) == 0.0); }
    SUBCASE("pointwise identical to the two-control family") {
        const auto as_control = diagram_control(ControlSet{{{2.0, 0.0}, {-1.0, 1.0}}});
        for (double d : density_grid()) CHECK(curve.evaluate(d) == as_control.evaluate(d));
    }
}

TEST_CASE("diagram_control matches the three-phase formula exactly") {
    const auto curve = diagram_control(kThreePhase);
    for (double d : density_grid(101))
        CHECK(curve.evaluate(d) == std::min({1.0 * d, (1.0 / 3.0) * d + 0.125, 1.0 - d}));
    CHECK(curve.evaluate(0.25) == doctest::Approx(5.0 / 24.0).epsilon(1e-12));
    CHECK(curve.is_min_form());
    SUBCASE("single control is the free-flow line") {
        const auto line = diagram_control(ControlSet{{{2.0, 0.25}}});
        for (double d : {0.1, 0.5, 1.0}) CHECK(line.evaluate(d) == 2.0 * d + 0.25);
    }
}

TEST_CASE("diagram_game reproduces the six-segment formula") {
    const auto curve = diagram_game(a6_game());
    CHECK_FALSE(curve.is_min_form());
    for (double d : density_grid(101)) CHECK(curve.evaluate(d) == a6_formula(d));
    CHECK(curve.evaluate(0.6) == doctest::Approx(0.05).epsilon(1e-12));
    SUBCASE("the fitted tail dips below zero at full density; never clamped silently") {
        CHECK(curve.evaluate(1.0) == doctest::Approx(-0.01).epsilon(1e-12));
        CHECK(curve.evaluate_clamped(1.0) == 0.0);
    }
}

TEST_CASE("evaluate rejects densities outside [0,1]") {
    const auto curve = diagram_minplus(1.0, 1.0);
    CHECK_THROWS_AS(curve.evaluate(-0.1), std::domain_error);
    CHECK_THROWS_AS(curve.evaluate(1.1), std::domain_error);
    CHECK(curve.evaluate(0.0) == 0.0);
}

TEST_CASE("samples cover the default grid") {
    const auto curve = diagram_control(kThreePhase);
    CHECK(curve.samples().size() == 101);
    CHECK(curve.samples().front().first == 0.0);
    CHECK(curve.samples().back().first == 1.0);
}

TEST_CASE("fenchel_check is identically zero") {
    const auto grid = density_grid(101);
    CHECK(fenchel_check(ControlSet{{{2.0, 0.0}, {-1.0, 1.0}}}, grid) <= 1e-12);
    CHECK(fenchel_check(kThreePhase, grid) <= 1e-12);
    CHECK(fenchel_check(ControlSet{{{0.5, 0.5}}}, grid) <= 1e-12);
    SUBCASE("random families") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 25; ++trial)
            CHECK(fenchel_check(oracles::random_control_set(rng), grid) <= 1e-12);
    }
}

TEST_CASE("triangle_check") {
    const auto grid = density_grid(101);
    CHECK(triangle_check(diagram_minplus(2.0, 1.0), grid).inside);
    CHECK(triangle_check(diagram_control(kThreePhase), grid).inside);
    SUBCASE("a legal beta can still leave the triangle") {
        const auto report = triangle_check(diagram_control(ControlSet{{{5.0, 0.5}}}), grid);
        CHECK_FALSE(report.inside);
        CHECK(report.worst_d == 1.0);
        CHECK(report.worst_excess == doctest::Approx(5.5).epsilon(1e-12));
    }
}

TEST_CASE("normalize_measurements") {
    SUBCASE("worked flow scale of 600") {
        MeasuredDiagram raw;
        raw.points = {{0.1, 60.0}, {0.5, 90.0}};
        raw.ref_density = 0.1;
        raw.ref_flow = 60.0;
        const auto normalized = normalize_measurements(raw);
        CHECK(raw.scale == doctest::Approx(600.0));
        CHECK(normalized[1].first == 0.5);
        CHECK(normalized[1].second == doctest::Approx(0.15).epsilon(1e-12));
    }
    SUBCASE("zero reference flow is rejected") {
        MeasuredDiagram raw;
        raw.points = {{0.1, 0.0}, {0.5, 0.0}};
        raw.ref_density = 0.1;
        raw.ref_flow = 0.0;
        CHECK_THROWS_AS(normalize_measurements(raw), std::invalid_argument);
    }
    SUBCASE("already-normalized input is the identity") {
        MeasuredDiagram raw;
        raw.points = {{0.1, 0.1}, {0.4, 0.3}};
        raw.ref_density = 0.1;
        raw.ref_flow = 0.1;
        const auto normalized = normalize_measurements(raw);
        CHECK(raw.scale == 1.0);
        CHECK(normalized == raw.points);
    }
}

TEST_CASE("MIN curves satisfy the midpoint concavity inequality") {
    std::mt19937_64 rng(41);
    const auto grid = density_grid(51);
    for (int trial = 0; trial < 15; ++trial) {
        const auto curve = diagram_control(oracles::random_control_set(rng));
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = i + 1; j < grid.size(); j += 7) {
                const double mid = (grid[i] + grid[j]) / 2.0;
                CHECK(curve.evaluate(mid) >=
                      (curve.evaluate(grid[i]) + curve.evaluate(grid[j])) / 2.0 - 1e-12);
            }
    }
}

TEST_CASE("simulated sweep tracks the closed form") {
    SUBCASE("min-plus") {
        const Model model = MinPlusModel{2.0, 1.0};
        const std::vector<RingConfig> rings{{1, 5}, {2, 5}, {3, 5}, {4, 5}};
        for (const auto& pt : simulated_sweep(model, rings))
            CHECK(std::fabs(pt.flow_simulated - pt.flow_closed_form) <= 1e-6);
    }
    SUBCASE("three-phase control family") {
        const Model model = kThreePhase;
        std::vector<RingConfig> rings;
        for (int k = 1; k <= 9; ++k) rings.push_back(ring_for_density({k, 10}, 4));
        for (const auto& pt : simulated_sweep(model, rings))
            CHECK(std::fabs(pt.flow_simulated - pt.flow_closed_form) <= 1e-6);
    }
}
