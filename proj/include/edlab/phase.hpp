#pragma once

// Fractional parts of real polynomials at integer points, and e(t) = exp(2 pi i t).
//
// Each term alpha_j * k^j is reduced mod 1 separately in double-double
// arithmetic: frac(alpha_j) is exact in a double, and multiplying by k
// (an integer below 2^53) is done with error-free products, reducing mod 1
// after every step. The terms are then combined with compensated addition.
// When every alpha_j is a multiple of 2^-64 (any double with |alpha_j| >= 2^-11)
// and k < 2^42, each intermediate fits in 106 bits and the result is exact
// before the final rounding to one double.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

#include "edlab/sequence.hpp"

namespace edlab::phase {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) noexcept {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) noexcept {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

/// Renormalize so that hi + lo lies in [0, 1).
inline DoubleDouble reduce_mod1(DoubleDouble x) noexcept {
    x.hi -= std::floor(x.hi);
    DoubleDouble r = two_sum(x.hi, x.lo);
    r.hi -= std::floor(r.hi);
    r = two_sum(r.hi, r.lo);
    if (r.hi + r.lo < 0.0) r = two_sum(r.hi + 1.0, r.lo);
    if (r.hi + r.lo >= 1.0) r = two_sum(r.hi - 1.0, r.lo);
    return r;
}

inline DoubleDouble add_mod1(DoubleDouble a, DoubleDouble b) noexcept {
    DoubleDouble s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return reduce_mod1(s);
}

/// frac(x * k) for x in [0, 1) and integer k < 2^53.
inline DoubleDouble mul_mod1(DoubleDouble x, std::uint64_t k) noexcept {
    double kd = static_cast<double>(k);
    DoubleDouble p1 = two_prod(x.hi, kd);
    DoubleDouble p2 = two_prod(x.lo, kd);
    p1.hi -= std::floor(p1.hi);
    p2.hi -= std::floor(p2.hi);
    DoubleDouble s = two_sum(p1.hi, p2.hi);
    s.lo += p1.lo + p2.lo;
    return reduce_mod1(s);
}

inline DoubleDouble frac_dd(double alpha) noexcept { return reduce_mod1({alpha - std::floor(alpha), 0.0}); }

inline double to_unit_interval(DoubleDouble x) noexcept {
    double v = x.hi + x.lo;
    if (v >= 1.0) v -= 1.0;
    if (v < 0.0) v += 1.0;
    return v;
}

/// frac(P(k)) for P with coefficients in descending order (alpha_d, ..., alpha_0).
inline double polynomial_frac(std::span<const double> coeffs_desc, std::uint64_t k) noexcept {
    DoubleDouble acc{};
    std::size_t degree = coeffs_desc.empty() ? 0 : coeffs_desc.size() - 1;
    for (std::size_t i = 0; i < coeffs_desc.size(); ++i) {
        double alpha = coeffs_desc[i];
        if (alpha == 0.0) continue;
        std::size_t power = degree - i;
        DoubleDouble term = frac_dd(alpha);
        for (std::size_t j = 0; j < power; ++j) term = mul_mod1(term, k);
        acc = add_mod1(acc, term);
    }
    return to_unit_interval(acc);
}

/// e(t) = exp(2 pi i t), exact at multiples of 1/4.
inline cplx unit_phase(double t) noexcept {
    double u = t - std::floor(t);
    double q = std::nearbyint(4.0 * u);
    double r = u - q / 4.0;
    double angle = 2.0 * std::numbers::pi * r;
    double c = r == 0.0 ? 1.0 : std::cos(angle);
    double s = r == 0.0 ? 0.0 : std::sin(angle);
    switch (static_cast<int>(q) & 3) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

} // namespace edlab::phase
