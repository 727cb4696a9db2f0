#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ringflow/ring.hpp"

namespace ringflow {

/// Scalar of the min-plus semiring (R ∪ {+inf}, min, +).
///
/// The semiring "zero" is +inf (written eps(), absorbing under ⊗ and neutral
/// under ⊕) and the "one" is 0.  ⊗ never adds two infinities: the absorbing
/// rule is coded explicitly, so no fp inf-minus-inf can leak out.
struct MinPlusScalar {
    double v = std::numeric_limits<double>::infinity();

    static MinPlusScalar eps() { return {}; }
    static MinPlusScalar unit() { return {0.0}; }

    bool is_eps() const { return std::isinf(v) && v > 0.0; }
    bool operator==(const MinPlusScalar&) const = default;
};

/// a ⊕ b = min(a, b); on ties the left operand wins.
inline MinPlusScalar oplus(MinPlusScalar a, MinPlusScalar b) { return b.v < a.v ? b : a; }

/// a ⊗ b = a + b, with eps absorbing.
inline MinPlusScalar otimes(MinPlusScalar a, MinPlusScalar b) {
    if (a.is_eps() || b.is_eps()) return MinPlusScalar::eps();
    return {a.v + b.v};
}

inline bool approx_equal(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

/// Square matrix over the min-plus semiring.  Entry (i,j) != eps means the
/// associated graph G(A) has an arc from node j to node i with that weight.
class MinPlusMatrix {
   public:
    explicit MinPlusMatrix(std::size_t n) : n_(n), entries_(n * n) {
        if (n == 0) throw std::invalid_argument("min-plus matrix: dimension must be >= 1");
    }

    /// Builds from dense rows; use MinPlusScalar::eps() for missing arcs.
    static MinPlusMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }

    MinPlusScalar& at(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const MinPlusScalar& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    bool operator==(const MinPlusMatrix&) const = default;

   private:
    std::size_t n_;
    std::vector<MinPlusScalar> entries_;
};

/// y_i = ⊕_j A_ij ⊗ x_j, i.e. min_j (A_ij + x_j).
std::vector<MinPlusScalar> matvec(const MinPlusMatrix& A, const std::vector<MinPlusScalar>& x);

/// Convenience overload for finite state vectors.
std::vector<double> matvec(const MinPlusMatrix& A, const std::vector<double>& x);

/// True iff every node of G(A) reaches every other node.
bool is_strongly_connected(const MinPlusMatrix& A);

/// Unique min-plus eigenvalue of a strongly connected matrix: the minimum
/// over circuits of (circuit weight / circuit length), by Karp's dynamic
/// program over walk lengths 0..n from a fixed source.
double karp_eigenvalue(const MinPlusMatrix& A);

struct PowerIterationResult {
    double mu = 0.0;                 ///< growth rate, distance per step
    long transient = 0;              ///< K: first step of the verified periodic regime
    long period = 1;                 ///< T: x^{k+T} = T*mu + x^k for k >= K
    std::vector<double> final_state;
};

/// Raised when an iteration hits its step cap; carries the best estimate so far.
class ConvergenceError : public std::runtime_error {
   public:
    ConvergenceError(const std::string& what, double best_mu_estimate, long steps)
        : std::runtime_error(what), best_mu(best_mu_estimate), steps_used(steps) {}
    double best_mu;
    long steps_used;
};

/// Iterates x^{k+1} = A ⊗ x^k until the orbit is periodic up to a uniform
/// drift.  States are compared shape-normalized (x^k minus its first
/// component), so periodicity is detected as z^k == z^j within tol; then
/// T = k - j and mu = (x^k_1 - x^j_1) / T.
PowerIterationResult power_iteration(const MinPlusMatrix& A, const std::vector<double>& x0,
                                     long max_steps = 5000, double tol = 1e-9);

/// Ring traffic matrix: diagonal v (free move), superdiagonal -sigma (follow
/// at safety distance), wrap entry m - sigma.  For a single car the diagonal
/// and wrap share the entry, combined with ⊕.
MinPlusMatrix build_traffic_matrix(double v, double sigma, const RingConfig& ring);

}  // namespace ringflow
