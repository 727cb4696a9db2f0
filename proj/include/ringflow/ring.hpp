#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ringflow {

/// Physical instance: n cars of unit length on a circular road of length m.
/// The density n/m is always carried as this exact integer ratio; the wrap
/// cost of every operator uses m, never a rounded 1/density.
struct RingConfig {
    int n = 1;  ///< number of cars, >= 1
    int m = 1;  ///< road length in car lengths, >= n

    RingConfig() = default;
    RingConfig(int cars, int length) : n(cars), m(length) {
        if (n < 1) throw std::invalid_argument("ring: need at least one car");
        if (m < n) throw std::invalid_argument("ring: road shorter than the cars on it");
    }

    double density() const { return static_cast<double>(n) / static_cast<double>(m); }

    bool operator==(const RingConfig&) const = default;
};

/// Exact reduced fraction num/den with den >= 1.
struct Ratio {
    long long num = 0;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Ratio&) const = default;
};

Ratio reduce(Ratio r);

/// Best rational approximation of x with denominator <= max_den
/// (continued-fraction convergents plus the closing semiconvergent).
Ratio approximate_ratio(double x, long long max_den = 10000);

/// Ring realizing density `r`, scaled up so the car count is at least
/// `min_cars` (exact density is preserved; only the instance size grows).
RingConfig ring_for_density(Ratio r, int min_cars = 4);

}  // namespace ringflow
