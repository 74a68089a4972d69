#pragma once

/**
 * @file correlation.hpp
 * @brief Self-correlations, window variances, non-null scores, decoupling
 *        defects and product correlations of polynomial orbits on the torus.
 *
 * All averages run over n in [N] with sequences materialized to N + max shift:
 * no wraparound and no zero padding.
 */

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "edlab/averaging.hpp"
#include "edlab/error.hpp"
#include "edlab/phase.hpp"
#include "edlab/sequence.hpp"
#include "edlab/weights.hpp"

namespace edlab {

struct CorrelationReport {
    std::vector<std::uint64_t> h_values;
    std::vector<cplx> estimates;
    std::uint64_t N = 0;
    AverageMode mode = AverageMode::logarithmic;
    std::string sequence_label;
};

namespace detail {
inline void require_range(const UnitDiscSequence& a, std::uint64_t last, const char* what) {
    if (last > a.size())
        throw DomainError(std::string(what) + " needs '" + a.label() + "' up to index " + std::to_string(last) +
                          " but it has length " + std::to_string(a.size()));
}
} // namespace detail

/// gamma(h) = mode-average over n <= N of a(n+h) conj(a(n)).
inline cplx self_correlation(const UnitDiscSequence& a, std::uint64_t h, std::uint64_t N, AverageMode mode,
                             unsigned workers = 1) {
    require(h >= 1, "self-correlation lag must be >= 1");
    require(N >= 1, "self-correlation needs N >= 1");
    detail::require_range(a, N + h, "self_correlation");
    return average_of([&](std::size_t n) { return a[n + h] * std::conj(a[n]); }, N, mode, workers);
}

inline CorrelationReport correlation_report(const UnitDiscSequence& a, const std::vector<std::uint64_t>& hs,
                                            std::uint64_t N, AverageMode mode, unsigned workers = 1) {
    CorrelationReport r{hs, {}, N, mode, a.label()};
    for (auto h : hs) r.estimates.push_back(self_correlation(a, h, N, mode, workers));
    return r;
}

/// Mode-average over n <= N of |sum_{h=1}^H b(n+h)|^2.
inline double window_variance(const UnitDiscSequence& b, std::uint64_t H, std::uint64_t N, AverageMode mode,
                              unsigned workers = 1) {
    require(H >= 1, "window length H must be >= 1");
    require(N >= 1, "window variance needs N >= 1");
    detail::require_range(b, N + H, "window_variance");
    // prefix sums make each window O(1); the prefix is built sequentially
    std::vector<cplx> prefix(N + H + 1);
    for (std::uint64_t k = 1; k <= N + H; ++k) prefix[k] = prefix[k - 1] + b[k];
    return average_of([&](std::size_t n) { return cplx(std::norm(prefix[n + H] - prefix[n]), 0.0); }, N, mode,
                      workers)
        .real();
}

/// Mode-average over n <= N of |a(n)|^2.
inline double nonnull_score(const UnitDiscSequence& a, std::uint64_t N, AverageMode mode, unsigned workers = 1) {
    require(N >= 1, "non-null score needs N >= 1");
    detail::require_range(a, N, "nonnull_score");
    return average_of([&](std::size_t n) { return cplx(std::norm(a[n]), 0.0); }, N, mode, workers).real();
}

/// One factor of a shift-product A_n = prod seq(n + shift) (conjugated if asked).
struct ShiftFactor {
    const UnitDiscSequence* seq;
    std::uint64_t shift = 0;
    bool conjugate = false;
};

inline cplx shift_product(const std::vector<ShiftFactor>& factors, std::uint64_t n) {
    cplx r{1.0, 0.0};
    for (const auto& f : factors) {
        cplx z = (*f.seq)[n + f.shift];
        r *= f.conjugate ? std::conj(z) : z;
    }
    return r;
}

/// |E(A A') - E(A) E(A')| at finite N.
inline double decoupling_defect(const std::vector<ShiftFactor>& A, const std::vector<ShiftFactor>& A2,
                                std::uint64_t N, AverageMode mode, unsigned workers = 1) {
    require(N >= 1, "decoupling defect needs N >= 1");
    for (const auto* fs : {&A, &A2})
        for (const auto& f : *fs) {
            require(f.seq != nullptr, "null factor sequence");
            detail::require_range(*f.seq, N + f.shift, "decoupling_defect");
        }
    cplx eA = average_of([&](std::size_t n) { return shift_product(A, n); }, N, mode, workers);
    cplx eB = average_of([&](std::size_t n) { return shift_product(A2, n); }, N, mode, workers);
    cplx eAB =
        average_of([&](std::size_t n) { return shift_product(A, n) * shift_product(A2, n); }, N, mode, workers);
    return std::abs(eAB - eA * eB);
}

// ---------------------------------------------------------------------------
// functions on the torus

/// Step function (cells partitioning [0,1)) or trigonometric polynomial
/// sum_k c_k e(k t).
class TorusFunction {
  public:
    static TorusFunction step(std::vector<StepCell> cells) {
        validate_cells(cells);
        TorusFunction f;
        f.repr_ = std::move(cells);
        return f;
    }
    static TorusFunction trig(std::map<long, cplx> coefficients) {
        TorusFunction f;
        f.repr_ = std::move(coefficients);
        return f;
    }
    static TorusFunction constant(cplx c) { return trig({{0, c}}); }

    cplx operator()(double t) const {
        if (auto* cells = std::get_if<std::vector<StepCell>>(&repr_)) return step_value(*cells, t);
        cplx s{0.0, 0.0};
        for (const auto& [k, c] : std::get<std::map<long, cplx>>(repr_)) {
            // reduce k t mod 1 before exponentiating
            double kt = static_cast<double>(k) * t;
            s += c * phase::unit_phase(kt - std::floor(kt));
        }
        return s;
    }

    /// Integral over the torus against Haar measure.
    cplx integral() const {
        if (auto* cells = std::get_if<std::vector<StepCell>>(&repr_)) {
            cplx s{0.0, 0.0};
            for (const auto& c : *cells) s += c.value * (c.hi - c.lo);
            return s;
        }
        const auto& coeffs = std::get<std::map<long, cplx>>(repr_);
        auto it = coeffs.find(0);
        return it == coeffs.end() ? cplx(0.0, 0.0) : it->second;
    }

  private:
    std::variant<std::vector<StepCell>, std::map<long, cplx>> repr_;
};

struct WeylCorrelation {
    cplx estimate;
    cplx target;
};

/// (1/N) sum_{n<=N} phi({P(n+h)}) psi({P(n)}) against the product of integrals.
inline WeylCorrelation weyl_product_correlation(const TorusFunction& phi, const TorusFunction& psi,
                                                const std::vector<double>& coeffs, std::uint64_t h,
                                                std::uint64_t N, unsigned workers = 1) {
    require(coeffs.size() >= 3, "polynomial must have degree >= 2");
    require(h >= 1, "shift h must be >= 1");
    require(N >= 1, "N must be >= 1");
    cplx est = deterministic_sum<cplx>(1, N + 1,
                                       [&](std::size_t n) {
                                           return phi(phase::polynomial_frac(coeffs, n + h)) *
                                                  psi(phase::polynomial_frac(coeffs, n));
                                       },
                                       workers) /
               static_cast<double>(N);
    return {est, phi.integral() * psi.integral()};
}

} // namespace edlab
