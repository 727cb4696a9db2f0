#include "ringflow/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace ringflow {

std::vector<double> initial_state(InitialCondition kind, const RingConfig& ring, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(ring.n);
    switch (kind) {
        case InitialCondition::uniform:
            return uniform_eigenvector(ring);
        case InitialCondition::platoon: {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
            return x;
        }
        case InitialCondition::random: {
            // Own uniform mapping: distribution classes are not portable across
            // standard libraries, and outputs must be reproducible byte for byte.
            std::mt19937_64 rng(seed);
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                x[i] = u * static_cast<double>(ring.m);
            }
            std::sort(x.begin(), x.end());
            return x;
        }
    }
    throw std::invalid_argument("initial_state: unknown kind");
}

namespace {

long auto_stride(const RingConfig& ring, long steps) {
    if (ring.n <= 64) return 1;
    return (steps + 999) / 1000;
}

// Is new_state - old_state a constant vector?  Returns the common drift
// through *drift when it is.
bool uniform_drift(const std::vector<double>& new_state, const std::vector<double>& old_state,
                   double tol, double* drift) {
    const double d0 = new_state[0] - old_state[0];
    for (std::size_t i = 1; i < new_state.size(); ++i)
        if (std::fabs((new_state[i] - old_state[i]) - d0) > tol) return false;
    *drift = d0;
    return true;
}

}  // namespace

Trajectory run_trajectory(const Model& model, const RingConfig& ring, std::vector<double> x0,
                          long steps, const TrajectoryOptions& options) {
    const std::size_t n = static_cast<std::size_t>(ring.n);
    if (x0.size() != n) throw std::invalid_argument("run_trajectory: initial state has wrong length");
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("run_trajectory: initial state must be finite");
    if (steps < 1) throw std::invalid_argument("run_trajectory: need at least one step");

    Trajectory t;
    t.model = model;
    t.ring = ring;
    t.steps = steps;
    t.stride = options.snapshot_stride > 0 ? options.snapshot_stride : auto_stride(ring, steps);

    const long window =
        options.period_window > 0
            ? options.period_window
            : std::min<long>(256, std::max<long>(16, 4 * static_cast<long>(n)));

    t.first_car.reserve(static_cast<std::size_t>(steps) + 1);
    t.first_car.push_back(x0[0]);
    t.snapshots.emplace_back(0, x0);

    // recent.back() is x^k; depth window+2 so the confirming step k-1 can
    // also look back a full period.
    std::deque<std::vector<double>> recent;
    recent.push_back(x0);

    auto store = [&](long k, const std::vector<double>& x) {
        t.first_car.push_back(x[0]);
        if (k % t.stride == 0 && k != 0) t.snapshots.emplace_back(k, x);
    };

    std::vector<double> x = std::move(x0);
    long k = 0;
    while (k < steps) {
        x = apply_model_operator(x, model, ring);
        ++k;
        for (double v : x)
            if (!std::isfinite(v))
                throw std::runtime_error("run_trajectory: non-finite state at step " +
                                         std::to_string(k));
        store(k, x);
        recent.push_back(x);
        while (static_cast<long>(recent.size()) > window + 2) recent.pop_front();

        if (options.detect_regime) {
            // recent[last - T] is x^{k-T}; confirm the same drift one step earlier.
            const long last = static_cast<long>(recent.size()) - 1;
            for (long T = 1; T <= last - 1; ++T) {
                double drift = 0.0, prev_drift = 0.0;
                if (!uniform_drift(recent[last], recent[last - T], options.regime_tol, &drift))
                    continue;
                if (!uniform_drift(recent[last - 1], recent[last - 1 - T], options.regime_tol,
                                   &prev_drift) ||
                    std::fabs(prev_drift - drift) > options.regime_tol)
                    continue;
                t.periodic = true;
                t.period = T;
                t.drift = drift;
                t.converged_at = k - 1 - T;
                break;
            }
            if (t.periodic) break;
        }
    }

    if (t.periodic && k < steps) {
        // Extend by the exact recurrence x^{j} = x^{j-T} + drift.
        std::deque<std::vector<double>> cycle(recent.end() - t.period, recent.end());
        while (k < steps) {
            std::vector<double> next = cycle.front();
            for (double& v : next) v += t.drift;
            ++k;
            store(k, next);
            cycle.pop_front();
            cycle.push_back(std::move(next));
        }
        x = cycle.back();
    }

    if (t.snapshots.back().first != steps) t.snapshots.emplace_back(steps, x);
    t.final_state = std::move(x);
    return t;
}

GrowthEstimate estimate_growth_rate(const Trajectory& t, long burn_in) {
    if (burn_in < 0 || burn_in >= t.steps)
        throw std::invalid_argument("estimate_growth_rate: trajectory too short for this burn-in");

    long end = t.steps;
    if (t.periodic && t.period > 1) {
        const long span = end - burn_in;
        const long aligned = span - span % t.period;
        if (aligned > 0) end = burn_in + aligned;
    }
    GrowthEstimate est;
    est.window = end - burn_in;
    est.mu = (t.first_car[static_cast<std::size_t>(end)] -
              t.first_car[static_cast<std::size_t>(burn_in)]) /
             static_cast<double>(est.window);

    // Per-car spread between the last stored state at or before burn-in and
    // the final state; a convergence diagnostic, not part of the estimate.
    const std::pair<long, std::vector<double>>* base = &t.snapshots.front();
    for (const auto& snap : t.snapshots)
        if (snap.first <= burn_in) base = &snap;
    const long span = t.steps - base->first;
    if (span > 0) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < t.final_state.size(); ++i) {
            const double rate = (t.final_state[i] - base->second[i]) / static_cast<double>(span);
            lo = std::min(lo, rate);
            hi = std::max(hi, rate);
        }
        est.spread = hi - lo;
    }
    return est;
}

std::vector<double> ring_positions(std::span<const double> x, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("ring_positions: road length must be positive");
    std::vector<double> pos(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("ring_positions: non-finite position");
        double r = std::fmod(x[i], m);
        if (r < 0.0) r += m;
        pos[i] = r;
    }
    return pos;
}

GapStats gap_stats(std::span<const double> positions, double m, long step) {
    const std::size_t n = positions.size();
    if (n == 0) throw std::invalid_argument("gap_stats: need at least one car");
    if (!(m > 0.0)) throw std::invalid_argument("gap_stats: road length must be positive");
    GapStats stats;
    stats.step = step;
    stats.gaps.resize(n);
    const double target = m / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double g = std::fmod(positions[(i + 1) % n] - positions[i], m);
        if (g <= 0.0) g += m;  // a car's gap to itself is the whole ring
        stats.gaps[i] = g;
        stats.max_dev = std::max(stats.max_dev, std::fabs(g - target));
    }
    return stats;
}

}  // namespace ringflow
