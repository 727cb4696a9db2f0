#include "ringflow/ring.hpp"

#include <cmath>
#include <numeric>

namespace ringflow {

Ratio reduce(Ratio r) {
    if (r.den == 0) throw std::invalid_argument("ratio: zero denominator");
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    long long g = std::gcd(r.num < 0 ? -r.num : r.num, r.den);
    if (g > 1) {
        r.num /= g;
        r.den /= g;
    }
    return r;
}

Ratio approximate_ratio(double x, long long max_den) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("ratio: need a finite nonnegative value");
    if (max_den < 1) throw std::invalid_argument("ratio: max denominator must be >= 1");

    // Continued-fraction walk; p1/q1 is the last convergent that fits.
    long long p0 = 1, q0 = 0;  // h_{-1}/k_{-1}
    long long p1 = static_cast<long long>(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    while (frac > 1e-15) {
        double inv = 1.0 / frac;
        long long a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        if (a > (max_den - q0) / q1) {
            // The next convergent overflows the cap; take the best semiconvergent.
            long long k = (max_den - q0) / q1;
            long long ps = p0 + k * p1, qs = q0 + k * q1;
            if (qs >= 1 &&
                std::fabs(x - static_cast<double>(ps) / qs) <
                    std::fabs(x - static_cast<double>(p1) / q1))
                return reduce({ps, qs});
            return reduce({p1, q1});
        }
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return reduce({p1, q1});
}

RingConfig ring_for_density(Ratio r, int min_cars) {
    r = reduce(r);
    if (r.num < 1 || r.num > r.den)
        throw std::invalid_argument("density must lie in (0,1]");
    long long s = (min_cars + r.num - 1) / r.num;
    if (s < 1) s = 1;
    long long n = r.num * s, m = r.den * s;
    if (m > 1000000) throw std::invalid_argument("density denominator too large for a ring");
    return RingConfig(static_cast<int>(n), static_cast<int>(m));
}

}  // namespace ringflow
