#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ringflow/diagram.hpp"
#include "ringflow/fit.hpp"
#include "ringflow/io.hpp"
#include "ringflow/minplus.hpp"
#include "ringflow/model_spec.hpp"
#include "ringflow/models.hpp"
#include "ringflow/ring.hpp"
#include "ringflow/simulate.hpp"

namespace {

using nlohmann::json;
using namespace ringflow;

// exit 2: bad configuration / inputs; exit 3: numerical non-convergence
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("no such file: " + path);
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw ConfigError("invalid JSON in " + path);
    return j;
}

Model load_model(const std::string& path) {
    const ModelParse parsed = parse_model(load_json(path));
    for (const Violation& v : parsed.violations)
        if (!v.is_error())
            std::cerr << json{{"warning", v.message}, {"where", v.where}}.dump() << "\n";
    if (!parsed.ok()) {
        std::cerr << json{{"error", "model spec rejected"},
                          {"violations", violations_to_json(parsed.violations)}}
                         .dump()
                  << "\n";
        std::exit(2);
    }
    return *parsed.model;
}

RingConfig parse_ring(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("--ring expects N,M");
    try {
        return RingConfig(std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--ring: ") + e.what());
    } catch (const std::exception&) {
        throw ConfigError("--ring expects integers N,M");
    }
}

// Tokens are exact fractions "n/m" (used verbatim) or decimals (converted to
// a bounded-denominator ratio, then scaled to at least min_cars cars).
std::vector<RingConfig> parse_densities(const std::string& list, int min_cars) {
    std::vector<RingConfig> rings;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = list.find(',', start);
        const std::string token =
            list.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!token.empty()) {
            try {
                const auto slash = token.find('/');
                if (slash != std::string::npos) {
                    rings.emplace_back(std::stoi(token.substr(0, slash)),
                                       std::stoi(token.substr(slash + 1)));
                } else {
                    const double value = std::stod(token);
                    const Ratio r = approximate_ratio(value, 10000);
                    rings.push_back(ring_for_density(r, min_cars));
                    if (std::fabs(r.value() - value) > 0.0)
                        std::cerr << json{{"warning", "density rounded to exact ratio"},
                                          {"requested", token},
                                          {"used", std::to_string(r.num) + "/" + std::to_string(r.den)}}
                                         .dump()
                                  << "\n";
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigError("--densities: " + token + ": " + e.what());
            } catch (const std::exception&) {
                throw ConfigError("--densities: cannot parse token '" + token + "'");
            }
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    if (rings.empty()) throw ConfigError("--densities: empty list");
    return rings;
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("RINGFLOW_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("RINGFLOW_SEED is not an integer");
        }
    }
    return flag_seed;
}

InitialCondition parse_init(const std::string& name) {
    if (name == "uniform") return InitialCondition::uniform;
    if (name == "platoon") return InitialCondition::platoon;
    if (name == "random") return InitialCondition::random;
    throw ConfigError("--init expects uniform|platoon|random");
}

void emit(const std::optional<std::string>& out_prefix, const std::string& suffix,
          const std::string& content, bool echo = false) {
    if (out_prefix) {
        write_file_atomic(*out_prefix + suffix, content);
        if (echo) std::cout << content;
    } else {
        std::cout << content;
    }
}

std::string model_kind(const Model& model) {
    if (std::holds_alternative<MinPlusModel>(model)) return "minplus";
    if (std::holds_alternative<ControlSet>(model)) return "control";
    return "game";
}

json diagram_json(const DiagramCurve& curve, std::span<const double> grid, bool clamp) {
    json rows = json::array();
    for (double d : grid) {
        const double f = clamp ? curve.evaluate_clamped(d) : curve.evaluate(d);
        rows.push_back({{"density", d}, {"flow_closed_form", f}});
    }
    return rows;
}

// ----- subcommands ---------------------------------------------------------

int run_eigen(const std::string& model_path, const std::string& ring_text,
              const std::optional<std::string>& out) {
    const Model model = load_model(model_path);
    const RingConfig ring = parse_ring(ring_text);
    const double d = ring.density();

    json result{{"model", model_kind(model)},
                {"ring", {{"n", ring.n}, {"m", ring.m}}},
                {"density", d},
                {"mu", closed_form_speed(model, d)}};

    if (const auto* mp = std::get_if<MinPlusModel>(&model)) {
        const MinPlusMatrix A = build_traffic_matrix(mp->v, mp->sigma, ring);
        result["mu_karp"] = karp_eigenvalue(A);
        const auto power = power_iteration(A, initial_state(InitialCondition::platoon, ring));
        result["mu_power"] = power.mu;
        result["power"] = {{"transient", power.transient}, {"period", power.period}};
    } else if (const auto* cs = std::get_if<ControlSet>(&model)) {
        result["argmin"] = closed_form_speed_control(*cs, d).argmin;
    } else {
        const auto speed = closed_form_speed_game(std::get<GameControlSet>(model), d);
        result["argmin_row"] = speed.argmin_row;
        result["argmax_option"] = speed.argmax_option;
    }
    result["eigenvector_check"] =
        verify_eigenpair(result["mu"].get<double>(), uniform_eigenvector(ring), model, ring);

    emit(out, "_eigen.json", result.dump() + "\n", true);
    return 0;
}

int run_simulate(const std::string& model_path, const std::string& ring_text, long steps,
                 long burn_in, std::uint64_t seed, long stride, const std::string& init_name,
                 const std::optional<std::string>& out) {
    const Model model = load_model(model_path);
    const RingConfig ring = parse_ring(ring_text);
    const InitialCondition init = parse_init(init_name);
    seed = resolve_seed(seed);
    if (burn_in < 0) burn_in = steps / 2;
    if (burn_in >= steps) throw ConfigError("--burn-in must be smaller than --steps");

    TrajectoryOptions options;
    options.snapshot_stride = stride;
    const Trajectory t = run_trajectory(model, ring, initial_state(init, ring, seed), steps, options);
    const GrowthEstimate est = estimate_growth_rate(t, burn_in);
    const double mu_closed = closed_form_speed(model, ring.density());
    const GapStats gaps =
        gap_stats(ring_positions(t.final_state, static_cast<double>(ring.m)),
                  static_cast<double>(ring.m), t.steps);

    json summary{{"mu_estimate", est.mu},
                 {"mu_closed_form", mu_closed},
                 {"abs_error", std::fabs(est.mu - mu_closed)},
                 {"steps_used", t.steps},
                 {"seed", seed},
                 {"burn_in", burn_in},
                 {"init", init_name},
                 {"ring", {{"n", ring.n}, {"m", ring.m}}},
                 {"spread", est.spread},
                 {"gap_max_dev", gaps.max_dev},
                 {"periodic", t.periodic}};
    if (t.periodic) {
        summary["period"] = t.period;
        summary["transient"] = t.converged_at;
    }

    if (out) {
        write_file_atomic(*out + "_snapshots.csv", snapshots_csv(t));
        write_file_atomic(*out + "_summary.json", summary.dump() + "\n");
    }
    std::cout << summary.dump() << "\n";
    return 0;
}

int run_diagram(const std::string& model_path, int grid_points, const std::string& format,
                bool clamp, const std::optional<std::string>& out) {
    const Model model = load_model(model_path);
    const DiagramCurve curve = diagram_of(model);
    const auto grid = density_grid(grid_points);
    if (format == "json") {
        emit(out, "_diagram.json", diagram_json(curve, grid, clamp).dump() + "\n");
    } else {
        std::string csv = "density,flow_closed_form,flow_simulated\n";
        for (double d : grid) {
            const double f = clamp ? curve.evaluate_clamped(d) : curve.evaluate(d);
            csv += format_double(d);
            csv += ',';
            csv += format_double(f);
            csv += ",\n";
        }
        emit(out, "_diagram.csv", csv);
    }
    return 0;
}

int run_sweep(const std::string& model_path, const std::string& densities, int min_cars, long steps,
              long burn_in, std::uint64_t seed, const std::string& init_name,
              const std::string& format, const std::optional<std::string>& out) {
    const Model model = load_model(model_path);
    const auto rings = parse_densities(densities, min_cars);
    SweepOptions options;
    options.steps = steps;
    options.burn_in = burn_in;
    options.seed = resolve_seed(seed);
    options.init = parse_init(init_name);
    const auto points = simulated_sweep(model, rings, options);

    if (format == "json") {
        json rows = json::array();
        for (const SweepPoint& pt : points)
            rows.push_back({{"density", pt.density},
                            {"n", pt.ring.n},
                            {"m", pt.ring.m},
                            {"flow_closed_form", pt.flow_closed_form},
                            {"flow_simulated", pt.flow_simulated},
                            {"mu_closed_form", pt.mu_closed_form},
                            {"mu_simulated", pt.mu_simulated},
                            {"steps_used", pt.steps_used}});
        emit(out, "_sweep.json", rows.dump() + "\n");
    } else {
        emit(out, "_sweep.csv", sweep_csv(points));
    }
    return 0;
}

DiagramCurve template_curve(const json& spec) {
    // Same shape as a model spec, but coefficients are free: no beta gating.
    std::vector<DiagramBranch> branches;
    const std::string type = spec.value("type", "");
    if (type == "control" && spec.contains("controls")) {
        for (const auto& c : spec.at("controls"))
            branches.push_back({{{c.at("alpha").get<double>(), c.at("beta").get<double>()}}});
    } else if (type == "game" && spec.contains("rows")) {
        for (const auto& row : spec.at("rows")) {
            DiagramBranch b;
            for (const auto& c : row.at("options"))
                b.segments.push_back({c.at("alpha").get<double>(), c.at("beta").get<double>()});
            branches.push_back(std::move(b));
        }
    } else {
        throw ConfigError("--template: expected a control or game spec");
    }
    return DiagramCurve::minmax_form(std::move(branches));
}

json fit_model_json(const DiagramCurve& curve, bool clamp) {
    if (curve.is_min_form()) {
        json controls = json::array();
        for (const DiagramBranch& b : curve.branches()) {
            const AffineSegment& s = b.segments.front();
            const double beta = clamp ? std::clamp(s.intercept, 0.0, 1.0) : s.intercept;
            controls.push_back({{"alpha", s.slope}, {"beta", beta}});
        }
        return json{{"type", "control"}, {"controls", controls}};
    }
    json rows = json::array();
    for (std::size_t i = 0; i < curve.branches().size(); ++i) {
        json options = json::array();
        for (const AffineSegment& s : curve.branches()[i].segments) {
            const double beta = clamp ? std::clamp(s.intercept, 0.0, 1.0) : s.intercept;
            options.push_back({{"alpha", s.slope}, {"beta", beta}});
        }
        rows.push_back({{"u", "u" + std::to_string(i + 1)}, {"options", options}});
    }
    return json{{"type", "game"}, {"rows", rows}};
}

int run_fit(const std::string& input_path, const std::string& free_ref,
            const std::string& template_path, int max_segments, const std::string& model_export,
            const std::optional<std::string>& out) {
    if (!std::filesystem::exists(input_path)) throw ConfigError("no such file: " + input_path);
    auto points = parse_measured_csv(read_file(input_path));

    double scale = 1.0;
    if (!free_ref.empty()) {
        const auto comma = free_ref.find(',');
        if (comma == std::string::npos) throw ConfigError("--free-ref expects D,FLOW");
        MeasuredDiagram raw;
        raw.points = std::move(points);
        try {
            raw.ref_density = std::stod(free_ref.substr(0, comma));
            raw.ref_flow = std::stod(free_ref.substr(comma + 1));
        } catch (const std::exception&) {
            throw ConfigError("--free-ref expects numbers D,FLOW");
        }
        points = normalize_measurements(raw);
        scale = raw.scale;
    }

    const bool clamp = model_export == "clamped";
    json result;
    if (!template_path.empty()) {
        const MinMaxFit fit = fit_minmax(points, template_curve(load_json(template_path)));
        result = fit_model_json(fit.curve, clamp);
        result["fit"] = {{"max_residual", fit.report.max_residual},
                         {"mean_abs_residual", fit.report.mean_abs_residual},
                         {"converged", fit.report.converged}};
        if (!fit.report.converged) {
            std::cerr << json{{"error", "fit did not converge; best coefficients reported"},
                              {"max_residual", fit.report.max_residual}}
                             .dump()
                      << "\n";
            emit(out, "_fit.json", result.dump() + "\n", true);
            return 3;
        }
    } else {
        const ConcaveFit fit = fit_concave(points, max_segments);
        result = fit_model_json(fit.curve, clamp);
        result["fit"] = {{"max_residual", fit.report.max_residual},
                         {"mean_abs_residual", fit.report.mean_abs_residual},
                         {"converged", true}};
    }
    result["fit"]["scale"] = scale;
    result["fit"]["export"] = clamp ? "clamped" : "raw";
    emit(out, "_fit.json", result.dump() + "\n", true);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fundamental traffic diagrams on a ring: eigenvalues, simulation, fitting"};
    app.require_subcommand(1);

    std::string model_path, ring_text, densities, init_name = "platoon", format = "csv";
    std::string input_path, template_path, free_ref, model_export = "raw";
    std::optional<std::string> out;
    long steps = 1000, burn_in = -1, stride = 0;
    std::uint64_t seed = kDefaultSeed;
    int grid_points = 101, max_segments = 3, min_cars = 4;
    bool clamp_zero = false;

    auto* eigen = app.add_subcommand("eigen", "closed-form and iterative average speeds");
    eigen->add_option("--model", model_path, "model spec JSON")->required();
    eigen->add_option("--ring", ring_text, "ring as N,M")->required();
    eigen->add_option("--out", out, "output path prefix");

    auto* simulate = app.add_subcommand("simulate", "iterate the dynamics, write snapshots");
    simulate->add_option("--model", model_path)->required();
    simulate->add_option("--ring", ring_text)->required();
    simulate->add_option("--steps", steps);
    simulate->add_option("--burn-in", burn_in);
    simulate->add_option("--seed", seed);
    simulate->add_option("--stride", stride);
    simulate->add_option("--init", init_name, "uniform|platoon|random");
    simulate->add_option("--out", out);

    auto* diagram = app.add_subcommand("diagram", "closed-form fundamental diagram");
    diagram->add_option("--model", model_path)->required();
    diagram->add_option("--grid", grid_points);
    diagram->add_option("--format", format, "csv|json");
    diagram->add_flag("--clamp-zero", clamp_zero, "floor flows at zero");
    diagram->add_option("--out", out);

    auto* sweep = app.add_subcommand("sweep", "simulated diagram over a density list");
    sweep->add_option("--model", model_path)->required();
    sweep->add_option("--densities", densities, "comma list of n/m or decimals")->required();
    sweep->add_option("--min-cars", min_cars, "scale decimal densities to at least this many cars");
    sweep->add_option("--steps", steps);
    sweep->add_option("--burn-in", burn_in);
    sweep->add_option("--seed", seed);
    sweep->add_option("--init", init_name);
    sweep->add_option("--format", format, "csv|json");
    sweep->add_option("--out", out);

    auto* fit = app.add_subcommand("fit", "piecewise-affine fit of a measured diagram");
    fit->add_option("--input", input_path, "measured CSV (occupancy,flow)")->required();
    fit->add_option("--free-ref", free_ref, "free-speed reference D,FLOW for normalization");
    fit->add_option("--template", template_path, "min-max template JSON (start coefficients)");
    fit->add_option("--max-segments", max_segments, "segment budget for the concave fit");
    fit->add_option("--model-export", model_export, "raw|clamped beta export");
    fit->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(eigen)) return run_eigen(model_path, ring_text, out);
        if (app.got_subcommand(simulate))
            return run_simulate(model_path, ring_text, steps, burn_in, seed, stride, init_name, out);
        if (app.got_subcommand(diagram))
            return run_diagram(model_path, grid_points, format, clamp_zero, out);
        if (app.got_subcommand(sweep))
            return run_sweep(model_path, densities, min_cars, steps, burn_in, seed, init_name,
                             format, out);
        if (app.got_subcommand(fit))
            return run_fit(input_path, free_ref, template_path, max_segments, model_export, out);
    } catch (const ConvergenceError& e) {
        std::cerr << nlohmann::json{{"error", e.what()}, {"best_mu", e.best_mu}}.dump() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
