#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ringflow/models.hpp"
#include "ringflow/ring.hpp"
#include "ringflow/simulate.hpp"

namespace ringflow {

/// One line d -> slope*d + intercept of a piecewise-affine diagram.
struct AffineSegment {
    double slope = 0.0;      ///< flow per unit density (a control's alpha)
    double intercept = 0.0;  ///< flow at d = 0 (a control's beta)

    double eval(double d) const { return slope * d + intercept; }
    bool operator==(const AffineSegment&) const = default;
};

/// A branch evaluates to the max of its segments; a single-segment branch is
/// just that line.
struct DiagramBranch {
    std::vector<AffineSegment> segments;

    bool operator==(const DiagramBranch&) const = default;
};

/// Piecewise-affine density -> flow map: min over branches of (max over the
/// branch's segments).  All branches single-segment = the concave MIN form;
/// any MAX branch makes the curve possibly non-concave.
class DiagramCurve {
   public:
    static DiagramCurve min_form(std::vector<AffineSegment> segments);
    static DiagramCurve minmax_form(std::vector<DiagramBranch> branches);

    /// f(d) for d in [0,1]; throws outside.  Never clamps.
    double evaluate(double d) const;
    /// max(f(d), 0): the floored view for fitted curves whose tail dips below zero.
    double evaluate_clamped(double d) const { return std::max(evaluate(d), 0.0); }

    bool is_min_form() const;
    const std::vector<DiagramBranch>& branches() const { return branches_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

   private:
    std::vector<DiagramBranch> branches_;
    std::vector<std::pair<double, double>> samples_;
};

/// `points` values of d covering [0,1] inclusive, evenly spaced.
std::vector<double> density_grid(int points = 101);

DiagramCurve diagram_minplus(double v, double sigma);
DiagramCurve diagram_control(const ControlSet& set);
DiagramCurve diagram_game(const GameControlSet& set);
DiagramCurve diagram_of(const Model& model);

/// Max pointwise |f(d) - g*(d)| over the grid, where g(alpha_u) = -beta_u and
/// g* is its concave conjugate.  The two expressions are rearrangements of
/// the same min, so anything above ~1e-12 signals a defect.
double fenchel_check(const ControlSet& set, std::span<const double> grid);

struct TriangleReport {
    bool inside = true;     ///< f(d) <= 1 - d at every grid point
    double worst_d = 0.0;
    double worst_excess = 0.0;  ///< max f(d) - (1 - d)
};

TriangleReport triangle_check(const DiagramCurve& curve, std::span<const double> grid);

/// Raw measurements: (occupancy in [0,1], flow in vehicles per time unit),
/// plus the low-density reference point used to set the flow scale.
struct MeasuredDiagram {
    std::vector<std::pair<double, double>> points;
    double ref_density = 0.0;  ///< d_low of the free-speed reference
    double ref_flow = 0.0;     ///< measured flow at d_low
    double scale = 1.0;        ///< set by normalize_measurements
};

/// Sets scale = ref_flow / ref_density (full density at free speed) and
/// returns the points with flows divided by it.
std::vector<std::pair<double, double>> normalize_measurements(MeasuredDiagram& raw);

struct SweepOptions {
    long steps = 10000;
    long burn_in = -1;  ///< -1 = steps/2
    InitialCondition init = InitialCondition::platoon;
    std::uint64_t seed = kDefaultSeed;
    long power_max_steps = 20000;  ///< cap for the min-plus periodic iteration
    bool parallel = true;
};

struct SweepPoint {
    RingConfig ring;
    double density = 0.0;
    double mu_simulated = 0.0;
    double mu_closed_form = 0.0;
    double flow_simulated = 0.0;
    double flow_closed_form = 0.0;
    long steps_used = 0;
};

/// One independent simulation per density; flow = density * measured speed,
/// with the closed form attached for comparison.
std::vector<SweepPoint> simulated_sweep(const Model& model, std::span<const RingConfig> densities,
                                        const SweepOptions& options = {});

}  // namespace ringflow
