#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ringflow/minplus.hpp"
#include "ringflow/ring.hpp"

namespace ringflow {

/// One affine speed rule x_i <- x_i + alpha + beta * (x_{i+1} - x_i).
/// beta in [0,1] makes each row of the associated transition matrix a
/// probability distribution.
struct Control {
    double alpha = 0.0;  ///< speed offset, car lengths per step
    double beta = 0.0;   ///< coupling weight to the car ahead

    bool operator==(const Control&) const = default;
};

/// The minimizer's rule family U.
struct ControlSet {
    std::vector<Control> controls;

    bool operator==(const ControlSet&) const = default;
};

/// A maximizer option list attached to one minimizer choice.
struct GameRow {
    std::string label;
    std::vector<Control> options;

    bool operator==(const GameRow&) const = default;
};

/// The two-player rule family: outer min over rows, inner max over options.
struct GameControlSet {
    std::vector<GameRow> rows;

    bool operator==(const GameControlSet&) const = default;
};

/// Two-parameter model: desired speed v, safety distance sigma.
struct MinPlusModel {
    double v = 1.0;
    double sigma = 1.0;

    bool operator==(const MinPlusModel&) const = default;
};

using Model = std::variant<MinPlusModel, ControlSet, GameControlSet>;

/// The equivalent two-control family {(v,0), (-sigma,1)}.
ControlSet as_control_set(const MinPlusModel& mp);

struct Violation {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string where;    ///< which control/field is at fault
    std::string message;

    bool is_error() const { return severity == Severity::error; }
};

/// Checks the beta range and the strong-connectivity condition (some beta > 0).
/// Reports instead of throwing; an empty error list means the set is usable.
std::vector<Violation> validate_control_set(const ControlSet& set);
std::vector<Violation> validate_control_set(const GameControlSet& set);
std::vector<Violation> validate_model(const Model& model);
bool has_errors(const std::vector<Violation>& violations);

/// One step of the control dynamics (min over U of the affine rules; the last
/// car couples to the first through the wrap cost beta * m).
std::vector<double> apply_control_operator(std::span<const double> x, const ControlSet& set,
                                           const RingConfig& ring);

/// One step of the game dynamics: inner max over the row options after
/// fixing the minimizer row, outer min over rows.
std::vector<double> apply_game_operator(std::span<const double> x, const GameControlSet& set,
                                        const RingConfig& ring);

/// Dispatch over the model variant; the min-plus model steps through its
/// traffic matrix.
std::vector<double> apply_model_operator(std::span<const double> x, const Model& model,
                                         const RingConfig& ring);

struct ControlSpeed {
    double mu = 0.0;
    std::size_t argmin = 0;  ///< index of the optimal control (lowest on ties)
};

struct GameSpeed {
    double mu = 0.0;
    std::size_t argmin_row = 0;
    std::size_t argmax_option = 0;
};

/// Average speed min_u { alpha_u + beta_u / d }.
ControlSpeed closed_form_speed_control(const ControlSet& set, double density);

/// Average speed min_u max_w { alpha_uw + beta_uw / d }.
GameSpeed closed_form_speed_game(const GameControlSet& set, double density);

/// Closed-form average speed of any model; min-plus uses min{v, 1/d - sigma}.
double closed_form_speed(const Model& model, double density);

/// The uniformly spaced eigenvector [0, 1/d, 2/d, ..., (n-1)/d].
std::vector<double> uniform_eigenvector(const RingConfig& ring);

/// True iff applying the model operator to x equals mu + x within tol (sup norm).
bool verify_eigenpair(double mu, std::span<const double> x, const Model& model,
                      const RingConfig& ring, double tol = 1e-9);

}  // namespace ringflow
