#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ringflow/diagram.hpp"
#include "ringflow/fit.hpp"
#include "ringflow/minplus.hpp"
#include "ringflow/model_spec.hpp"
#include "ringflow/models.hpp"
#include "ringflow/ring.hpp"
#include "ringflow/simulate.hpp"

namespace py = pybind11;
using namespace ringflow;

namespace {

std::vector<std::vector<double>> matrix_rows(const MinPlusMatrix& A) {
    std::vector<std::vector<double>> rows(A.size(), std::vector<double>(A.size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j) rows[i][j] = A.at(i, j).v;
    return rows;
}

}  // namespace

PYBIND11_MODULE(_ringflow, m) {
    m.doc() = "Fundamental traffic diagrams on a circular road: min-plus, "
              "optimal-control and game models solved in closed form and by simulation.";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<RingConfig>(m, "RingConfig")
        .def(py::init<int, int>(), py::arg("n"), py::arg("m"))
        .def_readonly("n", &RingConfig::n)
        .def_readonly("m", &RingConfig::m)
        .def("density", &RingConfig::density)
        .def("__repr__", [](const RingConfig& r) {
            return "RingConfig(n=" + std::to_string(r.n) + ", m=" + std::to_string(r.m) + ")";
        });

    py::class_<Control>(m, "Control")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_readwrite("alpha", &Control::alpha)
        .def_readwrite("beta", &Control::beta);

    py::class_<ControlSet>(m, "ControlSet")
        .def(py::init([](const std::vector<std::pair<double, double>>& pairs) {
                 ControlSet set;
                 for (const auto& [a, b] : pairs) set.controls.push_back({a, b});
                 return set;
             }),
             py::arg("controls"))
        .def_readwrite("controls", &ControlSet::controls);

    py::class_<GameRow>(m, "GameRow")
        .def(py::init([](const std::string& label, const std::vector<std::pair<double, double>>& opts) {
                 GameRow row{label, {}};
                 for (const auto& [a, b] : opts) row.options.push_back({a, b});
                 return row;
             }),
             py::arg("label"), py::arg("options"))
        .def_readwrite("label", &GameRow::label)
        .def_readwrite("options", &GameRow::options);

    py::class_<GameControlSet>(m, "GameControlSet")
        .def(py::init<std::vector<GameRow>>(), py::arg("rows"))
        .def_readwrite("rows", &GameControlSet::rows);

    py::class_<MinPlusModel>(m, "MinPlusModel")
        .def(py::init<double, double>(), py::arg("v"), py::arg("sigma"))
        .def_readwrite("v", &MinPlusModel::v)
        .def_readwrite("sigma", &MinPlusModel::sigma);

    py::class_<MinPlusMatrix>(m, "MinPlusMatrix")
        .def(py::init(&MinPlusMatrix::from_rows), py::arg("rows"),
             "Dense rows; use math.inf for missing arcs.")
        .def("rows", &matrix_rows)
        .def("__len__", &MinPlusMatrix::size);

    py::class_<PowerIterationResult>(m, "PowerIterationResult")
        .def_readonly("mu", &PowerIterationResult::mu)
        .def_readonly("transient", &PowerIterationResult::transient)
        .def_readonly("period", &PowerIterationResult::period)
        .def_readonly("final_state", &PowerIterationResult::final_state);

    m.def("matvec",
          [](const MinPlusMatrix& A, const std::vector<double>& x) { return matvec(A, x); });
    m.def("is_strongly_connected", &is_strongly_connected);
    m.def("karp_eigenvalue", &karp_eigenvalue);
    m.def("power_iteration", &power_iteration, py::arg("A"), py::arg("x0"),
          py::arg("max_steps") = 5000, py::arg("tol") = 1e-9);
    m.def("build_traffic_matrix", &build_traffic_matrix, py::arg("v"), py::arg("sigma"),
          py::arg("ring"));

    m.def("validate_control_set",
          [](const ControlSet& set) {
              std::vector<std::pair<std::string, std::string>> out;
              for (const auto& v : validate_control_set(set))
                  out.emplace_back(v.is_error() ? "error" : "warning", v.where + ": " + v.message);
              return out;
          });
    m.def("apply_control_operator", [](const std::vector<double>& x, const ControlSet& set,
                                       const RingConfig& ring) {
        return apply_control_operator(x, set, ring);
    });
    m.def("apply_game_operator", [](const std::vector<double>& x, const GameControlSet& set,
                                    const RingConfig& ring) {
        return apply_game_operator(x, set, ring);
    });
    m.def("apply_model_operator", [](const std::vector<double>& x, const Model& model,
                                     const RingConfig& ring) {
        return apply_model_operator(x, model, ring);
    });
    m.def("closed_form_speed_control", [](const ControlSet& set, double density) {
        const auto r = closed_form_speed_control(set, density);
        return std::make_pair(r.mu, r.argmin);
    });
    m.def("closed_form_speed_game", [](const GameControlSet& set, double density) {
        const auto r = closed_form_speed_game(set, density);
        return std::make_tuple(r.mu, r.argmin_row, r.argmax_option);
    });
    m.def("closed_form_speed", &closed_form_speed, py::arg("model"), py::arg("density"));
    m.def("uniform_eigenvector", &uniform_eigenvector);
    m.def("verify_eigenpair",
          [](double mu, const std::vector<double>& x, const Model& model, const RingConfig& ring,
             double tol) { return verify_eigenpair(mu, x, model, ring, tol); },
          py::arg("mu"), py::arg("x"), py::arg("model"), py::arg("ring"), py::arg("tol") = 1e-9);

    py::enum_<InitialCondition>(m, "InitialCondition")
        .value("uniform", InitialCondition::uniform)
        .value("platoon", InitialCondition::platoon)
        .value("random", InitialCondition::random);
    m.def("initial_state", &initial_state, py::arg("kind"), py::arg("ring"),
          py::arg("seed") = kDefaultSeed);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("ring", &Trajectory::ring)
        .def_readonly("steps", &Trajectory::steps)
        .def_readonly("snapshots", &Trajectory::snapshots)
        .def_readonly("first_car", &Trajectory::first_car)
        .def_readonly("final_state", &Trajectory::final_state)
        .def_readonly("periodic", &Trajectory::periodic)
        .def_readonly("converged_at", &Trajectory::converged_at)
        .def_readonly("period", &Trajectory::period)
        .def_readonly("drift", &Trajectory::drift);

    m.def("run_trajectory",
          [](const Model& model, const RingConfig& ring, std::vector<double> x0, long steps) {
              return run_trajectory(model, ring, std::move(x0), steps);
          },
          py::arg("model"), py::arg("ring"), py::arg("x0"), py::arg("steps"));
    m.def("estimate_growth_rate", [](const Trajectory& t, long burn_in) {
        const auto est = estimate_growth_rate(t, burn_in);
        return std::make_tuple(est.mu, est.spread, est.window);
    });
    m.def("ring_positions",
          [](const std::vector<double>& x, double m_) { return ring_positions(x, m_); });

    py::class_<GapStats>(m, "GapStats")
        .def_readonly("gaps", &GapStats::gaps)
        .def_readonly("max_dev", &GapStats::max_dev)
        .def_readonly("step", &GapStats::step);
    m.def("gap_stats", [](const std::vector<double>& positions, double m_, long step) {
        return gap_stats(positions, m_, step);
    }, py::arg("positions"), py::arg("m"), py::arg("step") = 0);

    py::class_<AffineSegment>(m, "AffineSegment")
        .def(py::init<double, double>(), py::arg("slope"), py::arg("intercept"))
        .def_readonly("slope", &AffineSegment::slope)
        .def_readonly("intercept", &AffineSegment::intercept)
        .def("eval", &AffineSegment::eval);

    py::class_<DiagramCurve>(m, "DiagramCurve")
        .def("evaluate", &DiagramCurve::evaluate)
        .def("evaluate_clamped", &DiagramCurve::evaluate_clamped)
        .def("is_min_form", &DiagramCurve::is_min_form)
        .def("samples", &DiagramCurve::samples)
        .def("segments", [](const DiagramCurve& c) {
            std::vector<std::vector<std::pair<double, double>>> out;
            for (const auto& b : c.branches()) {
                std::vector<std::pair<double, double>> branch;
                for (const auto& s : b.segments) branch.emplace_back(s.slope, s.intercept);
                out.push_back(std::move(branch));
            }
            return out;
        });

    m.def("density_grid", &density_grid, py::arg("points") = 101);
    m.def("diagram_minplus", &diagram_minplus, py::arg("v"), py::arg("sigma"));
    m.def("diagram_control", &diagram_control);
    m.def("diagram_game", &diagram_game);
    m.def("diagram_of", &diagram_of);
    m.def("fenchel_check", [](const ControlSet& set, const std::vector<double>& grid) {
        return fenchel_check(set, grid);
    });
    m.def("triangle_check", [](const DiagramCurve& curve, const std::vector<double>& grid) {
        const auto r = triangle_check(curve, grid);
        return std::make_tuple(r.inside, r.worst_d, r.worst_excess);
    });
    m.def("normalize_measurements",
          [](const std::vector<std::pair<double, double>>& points, double ref_density,
             double ref_flow) {
              MeasuredDiagram raw{points, ref_density, ref_flow};
              auto normalized = normalize_measurements(raw);
              return std::make_pair(normalized, raw.scale);
          },
          py::arg("points"), py::arg("ref_density"), py::arg("ref_flow"));

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("ring", &SweepPoint::ring)
        .def_readonly("density", &SweepPoint::density)
        .def_readonly("mu_simulated", &SweepPoint::mu_simulated)
        .def_readonly("mu_closed_form", &SweepPoint::mu_closed_form)
        .def_readonly("flow_simulated", &SweepPoint::flow_simulated)
        .def_readonly("flow_closed_form", &SweepPoint::flow_closed_form)
        .def_readonly("steps_used", &SweepPoint::steps_used);
    m.def("simulated_sweep",
          [](const Model& model, const std::vector<RingConfig>& densities, long steps) {
              SweepOptions options;
              options.steps = steps;
              return simulated_sweep(model, densities, options);
          },
          py::arg("model"), py::arg("densities"), py::arg("steps") = 10000);

    py::class_<FitReport>(m, "FitReport")
        .def_readonly("max_residual", &FitReport::max_residual)
        .def_readonly("mean_abs_residual", &FitReport::mean_abs_residual)
        .def_readonly("converged", &FitReport::converged);
    py::class_<ConcaveFit>(m, "ConcaveFit")
        .def_readonly("curve", &ConcaveFit::curve)
        .def_readonly("controls", &ConcaveFit::controls)
        .def_readonly("report", &ConcaveFit::report);
    py::class_<MinMaxFit>(m, "MinMaxFit")
        .def_readonly("curve", &MinMaxFit::curve)
        .def_readonly("report", &MinMaxFit::report);
    m.def("fit_concave",
          [](const std::vector<std::pair<double, double>>& points, int max_segments) {
              return fit_concave(points, max_segments);
          },
          py::arg("points"), py::arg("max_segments"));
    m.def("fit_minmax",
          [](const std::vector<std::pair<double, double>>& points, const DiagramCurve& start) {
              return fit_minmax(points, start);
          },
          py::arg("points"), py::arg("start"));
    m.def("fit_minmax_heuristic",
          [](const std::vector<std::pair<double, double>>& points,
             const std::vector<int>& branch_sizes) {
              return fit_minmax_heuristic(points, branch_sizes);
          },
          py::arg("points"), py::arg("branch_sizes"));

    m.def("parse_model", [](const std::string& text) -> Model {
        const ModelParse parsed = parse_model_text(text);
        if (!parsed.ok())
            throw py::value_error(violations_to_json(parsed.violations).dump());
        return *parsed.model;
    });
    m.def("model_to_json", [](const Model& model) { return model_to_json(model).dump(); });

    m.attr("DEFAULT_SEED") = kDefaultSeed;
}
