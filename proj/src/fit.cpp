#include "ringflow/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace ringflow {

namespace {

using Point = std::pair<double, double>;

double envelope_value(const std::vector<AffineSegment>& segments, double d) {
    double best = std::numeric_limits<double>::infinity();
    for (const AffineSegment& s : segments) best = std::min(best, s.eval(d));
    return best;
}

FitReport residuals(const std::vector<AffineSegment>& segments, std::span<const Point> points) {
    FitReport report;
    double total = 0.0;
    for (const auto& [d, f] : points) {
        const double r = std::fabs(envelope_value(segments, d) - f);
        report.max_residual = std::max(report.max_residual, r);
        total += r;
    }
    report.mean_abs_residual = total / static_cast<double>(points.size());
    return report;
}

}  // namespace

ConcaveFit fit_concave(std::span<const Point> points, int max_segments) {
    if (points.size() < 2) throw std::invalid_argument("fit_concave: need at least two points");
    if (max_segments < 1) throw std::invalid_argument("fit_concave: need at least one segment");

    // Collapse duplicate densities onto the highest flow; the majorant cannot
    // pass below any of them anyway.
    std::map<double, double> by_d;
    for (const auto& [d, f] : points) {
        if (!std::isfinite(d) || !std::isfinite(f))
            throw std::invalid_argument("fit_concave: non-finite point");
        auto [it, inserted] = by_d.emplace(d, f);
        if (!inserted) it->second = std::max(it->second, f);
    }
    if (by_d.size() < 2)
        throw std::invalid_argument("fit_concave: degenerate input, all points share one density");

    std::vector<Point> pts(by_d.begin(), by_d.end());

    // Upper convex hull, left to right; collinear interior vertices are dropped.
    std::vector<Point> hull;
    for (const Point& p : pts) {
        while (hull.size() >= 2) {
            const Point& a = hull[hull.size() - 2];
            const Point& b = hull[hull.size() - 1];
            const double cross =
                (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }

    std::vector<AffineSegment> segments;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const double slope = (hull[i + 1].second - hull[i].second) / (hull[i + 1].first - hull[i].first);
        const AffineSegment seg{slope, hull[i].second - slope * hull[i].first};
        // one segment per distinct supporting slope
        if (!segments.empty() && std::fabs(segments.back().slope - slope) <= 1e-6) continue;
        segments.push_back(seg);
    }

    // Trim to the budget: repeatedly drop the segment whose removal raises
    // the max residual least.
    while (static_cast<int>(segments.size()) > max_segments) {
        std::size_t drop = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < segments.size(); ++j) {
            std::vector<AffineSegment> rest;
            rest.reserve(segments.size() - 1);
            for (std::size_t k = 0; k < segments.size(); ++k)
                if (k != j) rest.push_back(segments[k]);
            const double r = residuals(rest, points).max_residual;
            if (r < best) {
                best = r;
                drop = j;
            }
        }
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(drop));
    }

    ConcaveFit fit{DiagramCurve::min_form(segments), {}, residuals(segments, points)};
    for (const AffineSegment& s : segments) fit.controls.controls.push_back({s.slope, s.intercept});
    return fit;
}

namespace {

struct CoefficientView {
    std::vector<int> branch_sizes;
    std::vector<double> coeffs;  // slope, intercept per segment, branch-major

    static CoefficientView flatten(const DiagramCurve& curve) {
        CoefficientView view;
        for (const DiagramBranch& b : curve.branches()) {
            view.branch_sizes.push_back(static_cast<int>(b.segments.size()));
            for (const AffineSegment& s : b.segments) {
                view.coeffs.push_back(s.slope);
                view.coeffs.push_back(s.intercept);
            }
        }
        return view;
    }

    DiagramCurve curve() const {
        std::vector<DiagramBranch> branches;
        std::size_t at = 0;
        for (int size : branch_sizes) {
            DiagramBranch b;
            for (int s = 0; s < size; ++s) {
                b.segments.push_back({coeffs[at], coeffs[at + 1]});
                at += 2;
            }
            branches.push_back(std::move(b));
        }
        return DiagramCurve::minmax_form(std::move(branches));
    }

    double eval(double d) const {
        double outer = std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (int size : branch_sizes) {
            double inner = -std::numeric_limits<double>::infinity();
            for (int s = 0; s < size; ++s) {
                inner = std::max(inner, coeffs[at] * d + coeffs[at + 1]);
                at += 2;
            }
            outer = std::min(outer, inner);
        }
        return outer;
    }

    double objective(std::span<const Point> points) const {
        double worst = 0.0;
        for (const auto& [d, f] : points) worst = std::max(worst, std::fabs(eval(d) - f));
        return worst;
    }
};

}  // namespace

MinMaxFit fit_minmax(std::span<const Point> points, const DiagramCurve& start,
                     const MinMaxFitOptions& options) {
    if (points.empty()) throw std::invalid_argument("fit_minmax: no points");
    CoefficientView view = CoefficientView::flatten(start);
    double obj = view.objective(points);
    double step = options.initial_step;

    int sweeps = 0;
    for (; sweeps < options.max_sweeps && step >= options.min_step && obj > 0.0; ++sweeps) {
        bool improved = false;
        for (double& c : view.coeffs) {
            const double saved = c;
            double best_c = saved, best_obj = obj;
            for (double trial : {saved + step, saved - step}) {
                c = trial;
                const double o = view.objective(points);
                if (o < best_obj) {
                    best_obj = o;
                    best_c = trial;
                }
            }
            c = best_c;
            if (best_obj < obj) {
                obj = best_obj;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }

    MinMaxFit fit{view.curve(), {}};
    double total = 0.0;
    for (const auto& [d, f] : points) total += std::fabs(fit.curve.evaluate(d) - f);
    fit.report.max_residual = obj;
    fit.report.mean_abs_residual = total / static_cast<double>(points.size());
    fit.report.converged = sweeps < options.max_sweeps;  // else the cap cut the descent short
    return fit;
}

MinMaxFit fit_minmax_heuristic(std::span<const Point> points, const std::vector<int>& branch_sizes,
                               const MinMaxFitOptions& options) {
    if (branch_sizes.empty()) throw std::invalid_argument("fit_minmax: no branches");
    for (int s : branch_sizes)
        if (s < 1) throw std::invalid_argument("fit_minmax: branch needs at least one segment");
    const ConcaveFit seed = fit_concave(points, static_cast<int>(branch_sizes.size()));
    const auto& segs = seed.curve.branches();
    std::vector<DiagramBranch> branches;
    for (std::size_t i = 0; i < branch_sizes.size(); ++i) {
        DiagramBranch b;
        const AffineSegment seg = segs[i % segs.size()].segments.front();
        for (int s = 0; s < branch_sizes[i]; ++s) b.segments.push_back(seg);
        branches.push_back(std::move(b));
    }
    return fit_minmax(points, DiagramCurve::minmax_form(std::move(branches)), options);
}

}  // namespace ringflow
