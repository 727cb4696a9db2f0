#include "ringflow/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ringflow {

ControlSet as_control_set(const MinPlusModel& mp) {
    return ControlSet{{{mp.v, 0.0}, {-mp.sigma, 1.0}}};
}

namespace {

void check_beta(const Control& c, const std::string& where, std::vector<Violation>& out) {
    if (!(c.beta >= 0.0 && c.beta <= 1.0))
        out.push_back({Violation::Severity::error, where, "beta out of [0,1]"});
    if (!std::isfinite(c.alpha))
        out.push_back({Violation::Severity::error, where, "alpha must be finite"});
}

}  // namespace

std::vector<Violation> validate_control_set(const ControlSet& set) {
    std::vector<Violation> out;
    if (set.controls.empty()) {
        out.push_back({Violation::Severity::error, "controls", "control set is empty"});
        return out;
    }
    bool any_positive = false;
    for (std::size_t u = 0; u < set.controls.size(); ++u) {
        check_beta(set.controls[u], "controls[" + std::to_string(u) + "]", out);
        if (set.controls[u].beta > 0.0) any_positive = true;
    }
    if (!any_positive)
        out.push_back({Violation::Severity::error, "controls",
                       "all beta = 0: dynamics decouple (every arc is a loop)"});
    return out;
}

std::vector<Violation> validate_control_set(const GameControlSet& set) {
    std::vector<Violation> out;
    if (set.rows.empty()) {
        out.push_back({Violation::Severity::error, "rows", "game control set is empty"});
        return out;
    }
    bool any_positive = false;
    for (std::size_t u = 0; u < set.rows.size(); ++u) {
        const auto& row = set.rows[u];
        const std::string base = "rows[" + std::to_string(u) + "]";
        if (row.options.empty()) {
            out.push_back({Violation::Severity::error, base, "row has no options"});
            continue;
        }
        for (std::size_t w = 0; w < row.options.size(); ++w) {
            check_beta(row.options[w], base + ".options[" + std::to_string(w) + "]", out);
            if (row.options[w].beta > 0.0) any_positive = true;
        }
    }
    if (!any_positive)
        out.push_back({Violation::Severity::error, "rows",
                       "all beta = 0: dynamics decouple (every arc is a loop)"});
    return out;
}

std::vector<Violation> validate_model(const Model& model) {
    return std::visit(
        [](const auto& m) -> std::vector<Violation> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MinPlusModel>) {
                std::vector<Violation> out;
                if (!(m.v >= 0.0))
                    out.push_back({Violation::Severity::error, "v", "desired speed must be >= 0"});
                if (!(m.sigma >= 0.0))
                    out.push_back({Violation::Severity::error, "sigma", "safety distance must be >= 0"});
                else if (m.sigma < 1.0)
                    out.push_back({Violation::Severity::warning, "sigma",
                                   "safety distance below one car length"});
                return out;
            } else {
                return validate_control_set(m);
            }
        },
        model);
}

bool has_errors(const std::vector<Violation>& violations) {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.is_error(); });
}

namespace {

inline double rule_value(const Control& c, double xi, double xnext, double wrap_length) {
    // alpha + beta*m (wrap only) + (1-beta)*x_i + beta*x_{i+1}
    return c.alpha + c.beta * wrap_length + (1.0 - c.beta) * xi + c.beta * xnext;
}

}  // namespace

std::vector<double> apply_control_operator(std::span<const double> x, const ControlSet& set,
                                           const RingConfig& ring) {
    const std::size_t n = static_cast<std::size_t>(ring.n);
    if (x.size() != n) throw std::invalid_argument("control operator: dimension mismatch");
    if (set.controls.empty()) throw std::invalid_argument("control operator: empty control set");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool last = (i + 1 == n);
        const double xnext = last ? x[0] : x[i + 1];
        const double wrap = last ? static_cast<double>(ring.m) : 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (const Control& c : set.controls) best = std::min(best, rule_value(c, x[i], xnext, wrap));
        y[i] = best;
    }
    return y;
}

std::vector<double> apply_game_operator(std::span<const double> x, const GameControlSet& set,
                                        const RingConfig& ring) {
    const std::size_t n = static_cast<std::size_t>(ring.n);
    if (x.size() != n) throw std::invalid_argument("game operator: dimension mismatch");
    if (set.rows.empty()) throw std::invalid_argument("game operator: empty game set");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool last = (i + 1 == n);
        const double xnext = last ? x[0] : x[i + 1];
        const double wrap = last ? static_cast<double>(ring.m) : 0.0;
        double outer = std::numeric_limits<double>::infinity();
        for (const GameRow& row : set.rows) {
            double inner = -std::numeric_limits<double>::infinity();
            for (const Control& c : row.options) inner = std::max(inner, rule_value(c, x[i], xnext, wrap));
            outer = std::min(outer, inner);
        }
        y[i] = outer;
    }
    return y;
}

std::vector<double> apply_model_operator(std::span<const double> x, const Model& model,
                                         const RingConfig& ring) {
    return std::visit(
        [&](const auto& m) -> std::vector<double> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MinPlusModel>) {
                return matvec(build_traffic_matrix(m.v, m.sigma, ring),
                              std::vector<double>(x.begin(), x.end()));
            } else if constexpr (std::is_same_v<T, ControlSet>) {
                return apply_control_operator(x, m, ring);
            } else {
                return apply_game_operator(x, m, ring);
            }
        },
        model);
}

ControlSpeed closed_form_speed_control(const ControlSet& set, double density) {
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("closed-form speed: density must lie in (0,1]");
    if (set.controls.empty()) throw std::invalid_argument("closed-form speed: empty control set");
    ControlSpeed best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t u = 0; u < set.controls.size(); ++u) {
        const double value = set.controls[u].alpha + set.controls[u].beta / density;
        if (value < best.mu) best = {value, u};
    }
    return best;
}

GameSpeed closed_form_speed_game(const GameControlSet& set, double density) {
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("closed-form speed: density must lie in (0,1]");
    if (set.rows.empty()) throw std::invalid_argument("closed-form speed: empty game set");
    GameSpeed best{std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t u = 0; u < set.rows.size(); ++u) {
        const auto& row = set.rows[u];
        if (row.options.empty()) throw std::invalid_argument("closed-form speed: row has no options");
        double inner = -std::numeric_limits<double>::infinity();
        std::size_t argmax = 0;
        for (std::size_t w = 0; w < row.options.size(); ++w) {
            const double value = row.options[w].alpha + row.options[w].beta / density;
            if (value > inner) {
                inner = value;
                argmax = w;
            }
        }
        if (inner < best.mu) best = {inner, u, argmax};
    }
    return best;
}

double closed_form_speed(const Model& model, double density) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MinPlusModel>) {
                if (!(density > 0.0 && density <= 1.0))
                    throw std::invalid_argument("closed-form speed: density must lie in (0,1]");
                return std::min(m.v, 1.0 / density - m.sigma);
            } else if constexpr (std::is_same_v<T, ControlSet>) {
                return closed_form_speed_control(m, density).mu;
            } else {
                return closed_form_speed_game(m, density).mu;
            }
        },
        model);
}

std::vector<double> uniform_eigenvector(const RingConfig& ring) {
    std::vector<double> x(static_cast<std::size_t>(ring.n));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = static_cast<double>(i) * static_cast<double>(ring.m) / static_cast<double>(ring.n);
    return x;
}

bool verify_eigenpair(double mu, std::span<const double> x, const Model& model,
                      const RingConfig& ring, double tol) {
    const auto hx = apply_model_operator(x, model, ring);
    double worst = 0.0;
    for (std::size_t i = 0; i < hx.size(); ++i)
        worst = std::max(worst, std::fabs(hx[i] - (mu + x[i])));
    return worst <= tol;
}

}  // namespace ringflow
