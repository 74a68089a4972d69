#pragma once

/**
 * @file averaging.hpp
 * @brief Cesaro and logarithmic averages over [N]; multiplicative Folner
 *        boxes {p_1^k_1 ... p_P^k_P : 0 <= k_i <= E}.
 *
 * Sums use edlab::deterministic_sum (fixed leaves plus a pairwise tree), so
 * results do not depend on the worker count.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edlab/error.hpp"
#include "edlab/parallel.hpp"
#include "edlab/rational.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

enum class AverageMode { cesaro, logarithmic };

inline const char* to_string(AverageMode m) { return m == AverageMode::cesaro ? "cesaro" : "logarithmic"; }

inline AverageMode parse_average_mode(const std::string& s) {
    if (s == "cesaro" || s == "uniform") return AverageMode::cesaro;
    if (s == "log" || s == "logarithmic") return AverageMode::logarithmic;
    throw DomainError("unknown averaging mode '" + s + "' (expected cesaro or log)");
}

inline double harmonic_number(std::uint64_t N, unsigned workers = 1) {
    return deterministic_sum<double>(1, N + 1, [](std::size_t n) { return 1.0 / static_cast<double>(n); },
                                     workers);
}

/// Mode-average of term(n) over n in [1, N].
template <typename Term>
cplx average_of(Term&& term, std::uint64_t N, AverageMode mode, unsigned workers = 1) {
    require(N >= 1, "average over an empty range");
    if (mode == AverageMode::cesaro)
        return deterministic_sum<cplx>(1, N + 1, term, workers) / static_cast<double>(N);
    cplx s = deterministic_sum<cplx>(
        1, N + 1, [&](std::size_t n) { return cplx(term(n)) / static_cast<double>(n); }, workers);
    return s / harmonic_number(N, workers);
}

inline cplx average(const UnitDiscSequence& a, std::uint64_t N, AverageMode mode, unsigned workers = 1) {
    require(N >= 1, "average with N = 0");
    require(N <= a.size(), "average over N = " + std::to_string(N) + " exceeds sequence length " +
                               std::to_string(a.size()));
    return average_of([&](std::size_t n) { return a[n]; }, N, mode, workers);
}

// ---------------------------------------------------------------------------
// Folner boxes

inline constexpr std::uint64_t kMaxBoxElements = 10'000'000;

class FolnerBox {
  public:
    FolnerBox(unsigned prime_count, unsigned max_exponent) : P_(prime_count), E_(max_exponent) {
        require(prime_count >= 1, "Folner box needs at least one prime");
        unsigned __int128 count = 1;
        for (unsigned i = 0; i < prime_count; ++i) {
            count *= (max_exponent + 1);
            if (count > kMaxBoxElements)
                throw ResourceError("Folner box (P=" + std::to_string(prime_count) + ", E=" +
                                    std::to_string(max_exponent) + ") exceeds the element cap of " +
                                    std::to_string(kMaxBoxElements));
        }
        primes_ = first_primes(prime_count);
        elements_ = {1};
        for (std::uint64_t p : primes_) {
            std::vector<std::uint64_t> next;
            next.reserve(elements_.size() * (E_ + 1));
            for (std::uint64_t x : elements_) {
                unsigned __int128 v = x;
                for (unsigned k = 0; k <= E_; ++k) {
                    if (v > static_cast<unsigned __int128>(UINT64_MAX))
                        throw ResourceError("Folner box element overflows 64 bits");
                    next.push_back(static_cast<std::uint64_t>(v));
                    v *= p;
                }
            }
            elements_ = std::move(next);
        }
        std::sort(elements_.begin(), elements_.end());
    }

    unsigned prime_count() const noexcept { return P_; }
    unsigned max_exponent() const noexcept { return E_; }
    const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
    const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    std::uint64_t max_element() const noexcept { return elements_.back(); }

    bool contains(unsigned __int128 n) const {
        if (n > elements_.back()) return false;
        return std::binary_search(elements_.begin(), elements_.end(), static_cast<std::uint64_t>(n));
    }

  private:
    static std::vector<std::uint64_t> first_primes(unsigned count) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t n = 2; out.size() < count; ++n) {
            bool prime = true;
            for (std::uint64_t p : out) {
                if (p * p > n) break;
                if (n % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) out.push_back(n);
        }
        return out;
    }

    unsigned P_;
    unsigned E_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> elements_;
};

inline FolnerBox build_folner_box(unsigned P, unsigned E) { return FolnerBox(P, E); }

/// |(r^-1 Phi) symmetric-difference Phi| / |Phi| where r^-1 Phi = {n in N : r n in Phi}.
/// For r = p/q in lowest terms, r^-1 Phi = {q m / p : m in Phi, p | m}.
inline double dilation_defect(const FolnerBox& box, const Rational& r) {
    const auto p = static_cast<std::uint64_t>(r.num());
    const auto q = static_cast<std::uint64_t>(r.den());
    std::size_t preimage = 0, common = 0;
    for (std::uint64_t m : box.elements()) {
        if (m % p) continue;
        ++preimage;
        unsigned __int128 n = static_cast<unsigned __int128>(m / p) * q;
        if (box.contains(n)) ++common;
    }
    std::size_t sym = preimage + box.size() - 2 * common;
    return static_cast<double>(sym) / static_cast<double>(box.size());
}

/// Arithmetic mean of a over the box elements.
template <typename Fn>
cplx folner_average(Fn&& a, const FolnerBox& box, unsigned workers = 1) {
    const auto& el = box.elements();
    return deterministic_sum<cplx>(0, el.size(), [&](std::size_t i) { return cplx(a(el[i])); }, workers) /
           static_cast<double>(el.size());
}

} // namespace edlab
