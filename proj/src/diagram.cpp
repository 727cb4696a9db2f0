#include "ringflow/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "ringflow/minplus.hpp"

namespace ringflow {

DiagramCurve DiagramCurve::min_form(std::vector<AffineSegment> segments) {
    std::vector<DiagramBranch> branches;
    branches.reserve(segments.size());
    for (const AffineSegment& s : segments) branches.push_back({{s}});
    return minmax_form(std::move(branches));
}

DiagramCurve DiagramCurve::minmax_form(std::vector<DiagramBranch> branches) {
    if (branches.empty()) throw std::invalid_argument("diagram: need at least one branch");
    for (const DiagramBranch& b : branches)
        if (b.segments.empty()) throw std::invalid_argument("diagram: empty branch");
    DiagramCurve curve;
    curve.branches_ = std::move(branches);
    for (double d : density_grid()) curve.samples_.emplace_back(d, curve.evaluate(d));
    return curve;
}

double DiagramCurve::evaluate(double d) const {
    if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("diagram: density outside [0,1]");
    double outer = std::numeric_limits<double>::infinity();
    for (const DiagramBranch& b : branches_) {
        double inner = -std::numeric_limits<double>::infinity();
        for (const AffineSegment& s : b.segments) inner = std::max(inner, s.eval(d));
        outer = std::min(outer, inner);
    }
    return outer;
}

bool DiagramCurve::is_min_form() const {
    return std::all_of(branches_.begin(), branches_.end(),
                       [](const DiagramBranch& b) { return b.segments.size() == 1; });
}

std::vector<double> density_grid(int points) {
    if (points < 2) throw std::invalid_argument("density grid: need at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
    return grid;
}

DiagramCurve diagram_minplus(double v, double sigma) {
    if (v < 0.0 || sigma < 0.0)
        throw std::invalid_argument("diagram: speed and safety distance must be >= 0");
    return DiagramCurve::min_form({{v, 0.0}, {-sigma, 1.0}});
}

DiagramCurve diagram_control(const ControlSet& set) {
    if (has_errors(validate_control_set(set)))
        throw std::invalid_argument("diagram: invalid control set");
    std::vector<AffineSegment> segments;
    segments.reserve(set.controls.size());
    for (const Control& c : set.controls) segments.push_back({c.alpha, c.beta});
    return DiagramCurve::min_form(std::move(segments));
}

DiagramCurve diagram_game(const GameControlSet& set) {
    if (has_errors(validate_control_set(set)))
        throw std::invalid_argument("diagram: invalid game control set");
    std::vector<DiagramBranch> branches;
    branches.reserve(set.rows.size());
    for (const GameRow& row : set.rows) {
        DiagramBranch b;
        for (const Control& c : row.options) b.segments.push_back({c.alpha, c.beta});
        branches.push_back(std::move(b));
    }
    return DiagramCurve::minmax_form(std::move(branches));
}

DiagramCurve diagram_of(const Model& model) {
    return std::visit(
        [](const auto& m) -> DiagramCurve {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MinPlusModel>)
                return diagram_minplus(m.v, m.sigma);
            else if constexpr (std::is_same_v<T, ControlSet>)
                return diagram_control(m);
            else
                return diagram_game(m);
        },
        model);
}

double fenchel_check(const ControlSet& set, std::span<const double> grid) {
    if (has_errors(validate_control_set(set)))
        throw std::invalid_argument("fenchel_check: invalid control set");
    // g lives on V = {alpha_u}; duplicate slopes keep the smaller beta, which
    // is the only one the min can ever select.
    std::vector<AffineSegment> support;
    for (const Control& c : set.controls) {
        bool merged = false;
        for (AffineSegment& s : support)
            if (s.slope == c.alpha) {
                s.intercept = std::min(s.intercept, c.beta);
                merged = true;
                break;
            }
        if (!merged) support.push_back({c.alpha, c.beta});
    }
    const DiagramCurve curve = diagram_control(set);
    double worst = 0.0;
    for (double d : grid) {
        double conj = std::numeric_limits<double>::infinity();
        for (const AffineSegment& s : support)
            conj = std::min(conj, d * s.slope - (-s.intercept));  // d*v - g(v)
        worst = std::max(worst, std::fabs(curve.evaluate(d) - conj));
    }
    return worst;
}

TriangleReport triangle_check(const DiagramCurve& curve, std::span<const double> grid) {
    TriangleReport report;
    report.worst_excess = -std::numeric_limits<double>::infinity();
    for (double d : grid) {
        const double excess = curve.evaluate(d) - (1.0 - d);
        if (excess > report.worst_excess) {
            report.worst_excess = excess;
            report.worst_d = d;
        }
    }
    report.inside = report.worst_excess <= 1e-12;
    return report;
}

std::vector<std::pair<double, double>> normalize_measurements(MeasuredDiagram& raw) {
    if (!(raw.ref_density > 0.0))
        throw std::invalid_argument("normalize: free-speed reference density must be positive");
    if (!(raw.ref_flow > 0.0))
        throw std::invalid_argument("normalize: free-speed reference flow must be positive");
    for (const auto& [d, f] : raw.points) {
        if (!(d >= 0.0 && d <= 1.0))
            throw std::invalid_argument("normalize: occupancy outside [0,1]");
        if (!(f >= 0.0)) throw std::invalid_argument("normalize: negative flow");
    }
    const double free_speed = raw.ref_flow / raw.ref_density;
    raw.scale = free_speed;  // max flow: full density moving at free speed
    std::vector<std::pair<double, double>> out;
    out.reserve(raw.points.size());
    for (const auto& [d, f] : raw.points) out.emplace_back(d, f / raw.scale);
    return out;
}

namespace {

SweepPoint sweep_one(const Model& model, const RingConfig& ring, const SweepOptions& options) {
    SweepPoint pt;
    pt.ring = ring;
    pt.density = ring.density();
    pt.mu_closed_form = closed_form_speed(model, pt.density);
    pt.flow_closed_form = pt.density * pt.mu_closed_form;

    if (const auto* mp = std::get_if<MinPlusModel>(&model)) {
        const auto A = build_traffic_matrix(mp->v, mp->sigma, ring);
        const auto result = power_iteration(A, initial_state(InitialCondition::platoon, ring),
                                            options.power_max_steps);
        pt.mu_simulated = result.mu;
        pt.steps_used = result.transient + result.period;
    } else {
        auto x0 = initial_state(options.init, ring, options.seed);
        const auto t = run_trajectory(model, ring, std::move(x0), options.steps);
        const long burn = options.burn_in >= 0 ? options.burn_in : options.steps / 2;
        pt.mu_simulated = estimate_growth_rate(t, burn).mu;
        pt.steps_used = t.periodic ? t.converged_at + t.period : t.steps;
    }
    pt.flow_simulated = pt.density * pt.mu_simulated;
    return pt;
}

}  // namespace

std::vector<SweepPoint> simulated_sweep(const Model& model, std::span<const RingConfig> densities,
                                        const SweepOptions& options) {
    if (has_errors(validate_model(model))) throw std::invalid_argument("sweep: invalid model");
    std::vector<SweepPoint> out(densities.size());
    if (options.parallel && densities.size() > 1) {
        std::vector<std::future<SweepPoint>> jobs;
        jobs.reserve(densities.size());
        for (const RingConfig& ring : densities)
            jobs.push_back(std::async(std::launch::async, sweep_one, std::cref(model), ring,
                                      std::cref(options)));
        for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < densities.size(); ++i)
            out[i] = sweep_one(model, densities[i], options);
    }
    return out;
}

}  // namespace ringflow
