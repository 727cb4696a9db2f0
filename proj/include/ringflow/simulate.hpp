#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ringflow/models.hpp"
#include "ringflow/ring.hpp"

namespace ringflow {

inline constexpr std::uint64_t kDefaultSeed = 12345;

enum class InitialCondition { uniform, platoon, random };

/// Built-in starting states: `uniform` is the evenly spaced eigenvector,
/// `platoon` packs the cars bumper to bumper from position 0, `random`
/// draws sorted positions from a seeded generator.
std::vector<double> initial_state(InitialCondition kind, const RingConfig& ring,
                                  std::uint64_t seed = kDefaultSeed);

struct TrajectoryOptions {
    long snapshot_stride = 0;       ///< 0 = auto: 1 when n <= 64, else ceil(steps/1000)
    bool detect_regime = true;      ///< stop iterating once the orbit is affine-periodic
    double regime_tol = 1e-10;
    long period_window = 0;         ///< 0 = auto
};

/// Cumulative car positions over time.  Once an affine-periodic regime
/// x^{k} = x^{k-T} + drift, repeated over two consecutive steps, is detected,
/// the remaining steps are generated by that exact recurrence (additive
/// homogeneity makes the extension exact), and `periodic` records (K, T, drift).
struct Trajectory {
    Model model;
    RingConfig ring;
    long steps = 0;
    long stride = 1;
    std::vector<std::pair<long, std::vector<double>>> snapshots;  ///< (step, state)
    std::vector<double> first_car;  ///< x_1^k for every k = 0..steps
    std::vector<double> final_state;
    bool periodic = false;
    long converged_at = -1;  ///< K
    long period = 0;         ///< T
    double drift = 0.0;      ///< x^{k}_i - x^{k-T}_i, common to all cars
};

Trajectory run_trajectory(const Model& model, const RingConfig& ring, std::vector<double> x0,
                          long steps, const TrajectoryOptions& options = {});

struct GrowthEstimate {
    double mu = 0.0;
    double spread = 0.0;  ///< max - min of the per-car rates over the window
    long window = 0;      ///< steps actually averaged
};

/// (x_1^K - x_1^B) / (K - B) with B = burn_in.  When the trajectory carries a
/// detected period T > 1, K is pulled back to keep K - B a multiple of T so
/// the quotient is the exact growth rate rather than a partial-cycle average.
GrowthEstimate estimate_growth_rate(const Trajectory& t, long burn_in);

/// Positions on the physical ring: x_i mod m in [0, m), car order preserved.
std::vector<double> ring_positions(std::span<const double> x, double m);

struct GapStats {
    std::vector<double> gaps;  ///< distance from each car to the car ahead, in (0, m]
    double max_dev = 0.0;      ///< max |gap - m/n|
    long step = 0;
};

GapStats gap_stats(std::span<const double> positions, double m, long step = 0);

}  // namespace ringflow
