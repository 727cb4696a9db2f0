#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ringflow/diagram.hpp"
#include "ringflow/models.hpp"

namespace ringflow {

struct FitReport {
    double max_residual = 0.0;
    double mean_abs_residual = 0.0;
    bool converged = true;  ///< false when the descent hit its iteration cap
};

struct ConcaveFit {
    DiagramCurve curve;     ///< MIN form
    ControlSet controls;    ///< the segments as (alpha, beta) rules; raw, unclamped
    FitReport report;
};

/// Least concave majorant of the point cloud (upper hull, i.e. a double
/// discrete conjugation evaluated at its exact breakpoint slopes), reduced to
/// at most max_segments by greedily dropping the segment whose removal hurts
/// the max residual least.
ConcaveFit fit_concave(std::span<const std::pair<double, double>> points, int max_segments);

struct MinMaxFitOptions {
    int max_sweeps = 2000;        ///< coordinate sweeps before giving up
    double initial_step = 0.04;
    double min_step = 1e-10;
};

struct MinMaxFit {
    DiagramCurve curve;
    FitReport report;
};

/// Coordinate pattern search on every segment coefficient of the template,
/// minimizing the max absolute residual over the points.  `start` fixes both
/// the branch structure and the initial coefficients; deterministic.
MinMaxFit fit_minmax(std::span<const std::pair<double, double>> points, const DiagramCurve& start,
                     const MinMaxFitOptions& options = {});

/// Same, but seeds the coefficients from a concave fit: branch i starts at
/// the i-th supporting segment (cycled, duplicated across a MAX branch).
MinMaxFit fit_minmax_heuristic(std::span<const std::pair<double, double>> points,
                               const std::vector<int>& branch_sizes,
                               const MinMaxFitOptions& options = {});

}  // namespace ringflow
