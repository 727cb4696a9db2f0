#include "ringflow/minplus.hpp"

#include <algorithm>
#include <deque>

namespace ringflow {

MinPlusMatrix MinPlusMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    MinPlusMatrix A(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw std::invalid_argument("min-plus matrix: rows must form a square grid");
        for (std::size_t j = 0; j < rows[i].size(); ++j) A.at(i, j) = {rows[i][j]};
    }
    return A;
}

std::vector<MinPlusScalar> matvec(const MinPlusMatrix& A, const std::vector<MinPlusScalar>& x) {
    const std::size_t n = A.size();
    if (x.size() != n) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<MinPlusScalar> y(n, MinPlusScalar::eps());
    for (std::size_t i = 0; i < n; ++i) {
        MinPlusScalar acc = MinPlusScalar::eps();
        for (std::size_t j = 0; j < n; ++j) acc = oplus(acc, otimes(A.at(i, j), x[j]));
        y[i] = acc;
    }
    return y;
}

std::vector<double> matvec(const MinPlusMatrix& A, const std::vector<double>& x) {
    std::vector<MinPlusScalar> xs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xs[i] = {x[i]};
    auto ys = matvec(A, xs);
    std::vector<double> y(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) y[i] = ys[i].v;
    return y;
}

namespace {

// Successor lists of G(A): arc j -> i for every finite A_ij.
std::vector<std::vector<int>> successors(const MinPlusMatrix& A, bool reversed) {
    const int n = static_cast<int>(A.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!A.at(i, j).is_eps()) {
                if (reversed)
                    adj[i].push_back(j);
                else
                    adj[j].push_back(i);
            }
    return adj;
}

bool reaches_all(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int w : adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                queue.push_back(w);
            }
    }
    return count == n;
}

}  // namespace

bool is_strongly_connected(const MinPlusMatrix& A) {
    return reaches_all(successors(A, false)) && reaches_all(successors(A, true));
}

double karp_eigenvalue(const MinPlusMatrix& A) {
    if (!is_strongly_connected(A))
        throw std::invalid_argument("karp_eigenvalue: no unique eigenvalue, graph not strongly connected");

    const int n = static_cast<int>(A.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // D[k][i] = minimum weight of a walk with exactly k arcs from node 0 to i.
    std::vector<std::vector<double>> D(n + 1, std::vector<double>(n, kInf));
    D[0][0] = 0.0;
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const MinPlusScalar a = A.at(i, j);
                if (a.is_eps() || std::isinf(D[k - 1][j])) continue;
                D[k][i] = std::min(D[k][i], D[k - 1][j] + a.v);
            }

    double mu = kInf;
    for (int i = 0; i < n; ++i) {
        if (std::isinf(D[n][i])) continue;
        double worst = -kInf;
        for (int k = 0; k < n; ++k) {
            if (std::isinf(D[k][i])) continue;
            worst = std::max(worst, (D[n][i] - D[k][i]) / (n - k));
        }
        mu = std::min(mu, worst);
    }
    if (std::isinf(mu)) throw std::invalid_argument("karp_eigenvalue: graph has no circuit");
    return mu;
}

PowerIterationResult power_iteration(const MinPlusMatrix& A, const std::vector<double>& x0,
                                     long max_steps, double tol) {
    const std::size_t n = A.size();
    if (x0.size() != n) throw std::invalid_argument("power_iteration: dimension mismatch");
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("power_iteration: initial state must be finite");
    if (!is_strongly_connected(A))
        throw std::invalid_argument("power_iteration: graph not strongly connected");

    // History of shape-normalized states z^k = x^k - x^k_1 and of x^k_1.
    std::vector<std::vector<double>> shapes;
    std::vector<double> firsts;
    auto shape_of = [n](const std::vector<double>& x) {
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = x[i] - x[0];
        return z;
    };
    shapes.push_back(shape_of(x0));
    firsts.push_back(x0[0]);

    std::vector<double> x = x0;
    for (long k = 1; k <= max_steps; ++k) {
        x = matvec(A, x);
        const auto z = shape_of(x);
        for (long j = k - 1; j >= 0; --j) {
            bool match = true;
            for (std::size_t i = 0; i < n; ++i)
                if (std::fabs(z[i] - shapes[j][i]) > tol) {
                    match = false;
                    break;
                }
            if (match) {
                const long T = k - j;
                return {(x[0] - firsts[j]) / static_cast<double>(T), j, T, x};
            }
        }
        shapes.push_back(z);
        firsts.push_back(x[0]);
    }
    const double best = (x[0] - x0[0]) / static_cast<double>(max_steps);
    throw ConvergenceError("power_iteration: no periodic regime within step cap", best, max_steps);
}

MinPlusMatrix build_traffic_matrix(double v, double sigma, const RingConfig& ring) {
    if (v < 0.0) throw std::invalid_argument("traffic matrix: desired speed must be >= 0");
    if (sigma < 0.0) throw std::invalid_argument("traffic matrix: safety distance must be >= 0");
    const std::size_t n = static_cast<std::size_t>(ring.n);
    MinPlusMatrix A(n);
    const double wrap = static_cast<double>(ring.m) - sigma;
    if (n == 1) {
        A.at(0, 0) = oplus({v}, {wrap});
        return A;
    }
    for (std::size_t i = 0; i < n; ++i) A.at(i, i) = {v};
    for (std::size_t i = 0; i + 1 < n; ++i) A.at(i, i + 1) = {-sigma};
    A.at(n - 1, 0) = {wrap};
    return A;
}

}  // namespace ringflow
