#pragma once

// Test-only helpers: independent oracles and seeded generators.  Nothing here
// may call the code paths it is used to check.

#include <limits>
#include <random>
#include <vector>

#include "ringflow/minplus.hpp"
#include "ringflow/models.hpp"
#include "ringflow/ring.hpp"

namespace oracles {

/// Minimum mean weight over all elementary circuits, by exhaustive DFS
/// enumeration (each circuit is rooted at its smallest node).
inline double min_cycle_mean_bruteforce(const ringflow::MinPlusMatrix& A) {
    const int n = static_cast<int>(A.size());
    // arc j -> i with weight A_ij
    std::vector<std::vector<std::pair<int, double>>> succ(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!A.at(i, j).is_eps()) succ[j].push_back({i, A.at(i, j).v});

    double best = std::numeric_limits<double>::infinity();
    std::vector<char> visited(n, 0);

    struct Dfs {
        const std::vector<std::vector<std::pair<int, double>>>& succ;
        std::vector<char>& visited;
        double& best;
        int root;
        void walk(int u, double weight, int length) {
            for (const auto& [t, w] : succ[u]) {
                if (t == root) {
                    best = std::min(best, (weight + w) / static_cast<double>(length + 1));
                } else if (t > root && !visited[t]) {
                    visited[t] = 1;
                    walk(t, weight + w, length + 1);
                    visited[t] = 0;
                }
            }
        }
    };

    for (int s = 0; s < n; ++s) {
        visited.assign(n, 0);
        visited[s] = 1;
        Dfs dfs{succ, visited, best, s};
        dfs.walk(s, 0.0, 0);
    }
    return best;
}

/// Strongly connected matrix on 2..8 nodes with integer weights in [-5, 5]:
/// a covering permutation cycle plus random extra arcs.
inline ringflow::MinPlusMatrix random_strongly_connected_matrix(std::mt19937_64& rng) {
    const int n = 2 + static_cast<int>(rng() % 7);
    ringflow::MinPlusMatrix A(static_cast<std::size_t>(n));
    auto weight = [&rng]() { return static_cast<double>(static_cast<long long>(rng() % 11) - 5); };

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
    for (int k = 0; k < n; ++k) {
        const int from = order[k], to = order[(k + 1) % n];
        A.at(static_cast<std::size_t>(to), static_cast<std::size_t>(from)) = {weight()};
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (A.at(i, j).is_eps() && rng() % 4 == 0) A.at(i, j) = {weight()};
    return A;
}

/// Dyadic coefficients keep the operator-law probes exact in floating point:
/// alpha is a multiple of 1/16 in [-2, 2], beta a multiple of 1/8 in [0, 1].
inline ringflow::Control random_control(std::mt19937_64& rng, bool allow_zero_beta = true) {
    const double alpha = static_cast<double>(static_cast<long long>(rng() % 65) - 32) / 16.0;
    const long long lo = allow_zero_beta ? 0 : 1;
    const double beta = static_cast<double>(lo + static_cast<long long>(rng() % (9 - lo))) / 8.0;
    return {alpha, beta};
}

inline ringflow::ControlSet random_control_set(std::mt19937_64& rng, int max_controls = 6) {
    ringflow::ControlSet set;
    const int count = 1 + static_cast<int>(rng() % max_controls);
    for (int i = 0; i < count; ++i) set.controls.push_back(random_control(rng));
    bool any = false;
    for (const auto& c : set.controls) any = any || c.beta > 0.0;
    if (!any) set.controls.back() = random_control(rng, /*allow_zero_beta=*/false);
    return set;
}

inline ringflow::GameControlSet random_game_set(std::mt19937_64& rng, int max_rows = 4,
                                                int max_options = 4) {
    ringflow::GameControlSet set;
    const int rows = 1 + static_cast<int>(rng() % max_rows);
    for (int r = 0; r < rows; ++r) {
        ringflow::GameRow row{"u" + std::to_string(r + 1), {}};
        const int options = 1 + static_cast<int>(rng() % max_options);
        for (int w = 0; w < options; ++w) row.options.push_back(random_control(rng));
        set.rows.push_back(std::move(row));
    }
    bool any = false;
    for (const auto& row : set.rows)
        for (const auto& c : row.options) any = any || c.beta > 0.0;
    if (!any) set.rows.back().options.back() = random_control(rng, /*allow_zero_beta=*/false);
    return set;
}

inline ringflow::RingConfig random_ring(std::mt19937_64& rng, int max_cars = 12) {
    const int n = 1 + static_cast<int>(rng() % max_cars);
    const int m = n + static_cast<int>(rng() % (2 * n + 1));
    return {n, m};
}

inline std::vector<double> random_integer_state(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(static_cast<long long>(rng() % 101) - 50);
    return x;
}

}  // namespace oracles
