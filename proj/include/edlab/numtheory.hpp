#pragma once

/**
 * @file numtheory.hpp
 * @brief Smallest-prime-factor sieve and multiplicative functions on [N].
 *
 * A multiplicative function is stored by its values on prime powers (or on
 * primes, when completely multiplicative) up to a declared n_max.  Evaluation
 * multiplies the stored values over the prime-power factorization of n and
 * refuses to go past n_max.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edlab/error.hpp"
#include "edlab/phase.hpp"
#include "edlab/rng.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

/// Largest sieve the table will build (400 MB of uint32).
inline constexpr std::uint64_t kMaxTableLimit = 100'000'000;

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    std::uint64_t value;  // prime^exponent
};

class FactorizationTable {
  public:
    explicit FactorizationTable(std::uint64_t limit) : limit_(limit) {
        require(limit >= 1, "factorization table limit must be >= 1");
        if (limit > kMaxTableLimit)
            throw ResourceError("factorization table limit " + std::to_string(limit) +
                                " exceeds the cap of " + std::to_string(kMaxTableLimit));
        spf_.assign(limit + 1, 0);
        if (limit >= 1) spf_[1] = 1;
        // linear sieve
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<std::uint32_t>(i);
                primes_.push_back(i);
            }
            for (std::uint64_t p : primes_) {
                if (p > spf_[i] || i * p > limit) break;
                spf_[i * p] = static_cast<std::uint32_t>(p);
            }
        }
    }

    std::uint64_t limit() const noexcept { return limit_; }
    const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }

    std::uint64_t smallest_prime_factor(std::uint64_t n) const {
        check(n);
        return spf_[n];
    }
    bool is_prime(std::uint64_t n) const { return n >= 2 && smallest_prime_factor(n) == n; }

    /// True for p^e with e >= 1.
    bool is_prime_power(std::uint64_t n) const {
        if (n < 2) return false;
        std::uint64_t p = smallest_prime_factor(n);
        while (n % p == 0) n /= p;
        return n == 1;
    }

    std::vector<PrimePower> factorize(std::uint64_t n) const {
        check(n);
        std::vector<PrimePower> out;
        while (n > 1) {
            std::uint64_t p = spf_[n];
            PrimePower pp{p, 0, 1};
            while (n % p == 0) {
                n /= p;
                ++pp.exponent;
                pp.value *= p;
            }
            out.push_back(pp);
        }
        return out;
    }

    /// Prime powers p^e <= bound (bound <= limit), ascending.
    std::vector<std::uint64_t> prime_powers_up_to(std::uint64_t bound) const {
        check(bound == 0 ? 1 : bound);
        std::vector<std::uint64_t> out;
        for (std::uint64_t p : primes_) {
            if (p > bound) break;
            for (std::uint64_t q = p; q <= bound; q *= p) {
                out.push_back(q);
                if (q > bound / p) break;
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    void check(std::uint64_t n) const {
        if (n == 0 || n > limit_)
            throw DomainError("integer " + std::to_string(n) + " outside factorization table [1, " +
                              std::to_string(limit_) + "]");
    }

    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint64_t> primes_;
};

/// Omega(n), prime factors counted with multiplicity, by trial division.
inline unsigned big_omega(std::uint64_t n) {
    require(n >= 1, "big_omega needs n >= 1");
    unsigned count = 0;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        while (n % p == 0) n /= p, ++count;
    return count + (n > 1 ? 1 : 0);
}

inline int liouville(std::uint64_t n) { return (big_omega(n) % 2) ? -1 : 1; }

class MultiplicativeFunctionSpec {
  public:
    static constexpr double kModulusSlack = 1e-12;

    MultiplicativeFunctionSpec() = default;

    /// `values` maps primes (completely multiplicative) or prime powers to
    /// unit-disc values; keys above n_max are rejected.
    MultiplicativeFunctionSpec(std::string label, bool completely_multiplicative, std::uint64_t n_max,
                               std::map<std::uint64_t, cplx> values,
                               std::optional<std::uint64_t> seed = std::nullopt)
        : label_(std::move(label)),
          completely_multiplicative_(completely_multiplicative),
          n_max_(n_max),
          values_(std::move(values)),
          seed_(seed) {
        require(n_max_ >= 1, "multiplicative function needs n_max >= 1");
        for (const auto& [k, z] : values_) {
            require(k >= 2 && k <= n_max_,
                    "prime-power key " + std::to_string(k) + " outside [2, n_max] in '" + label_ + "'");
            require(std::abs(z) <= 1.0 + kModulusSlack,
                    "value at " + std::to_string(k) + " of '" + label_ + "' lies outside the unit disc");
        }
        if (completely_multiplicative_) check_power_consistency();
    }

    const std::string& label() const noexcept { return label_; }
    bool completely_multiplicative() const noexcept { return completely_multiplicative_; }
    std::uint64_t n_max() const noexcept { return n_max_; }
    const std::map<std::uint64_t, cplx>& values() const noexcept { return values_; }
    const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }

    /// Value at p^e.
    cplx prime_power_value(std::uint64_t p, unsigned e, std::uint64_t pe) const {
        if (auto it = values_.find(pe); it != values_.end()) return it->second;
        if (completely_multiplicative_) {
            auto it = values_.find(p);
            if (it == values_.end())
                throw SpecIncompleteError("'" + label_ + "' has no value at prime " + std::to_string(p), p);
            return power(it->second, e);
        }
        throw SpecIncompleteError("'" + label_ + "' has no value at prime power " + std::to_string(pe), pe);
    }

    friend bool operator==(const MultiplicativeFunctionSpec&, const MultiplicativeFunctionSpec&) = default;

  private:
    static cplx power(cplx z, unsigned e) {
        cplx r{1.0, 0.0};
        for (unsigned i = 0; i < e; ++i) r *= z;
        return r;
    }

    void check_power_consistency() const {
        for (const auto& [k, z] : values_) {
            // find base prime by trial division; keys are prime powers
            std::uint64_t p = 2;
            while (p * p <= k && k % p) ++p;
            if (k % p) p = k;
            if (p == k) continue;
            unsigned e = 0;
            std::uint64_t m = k;
            while (m % p == 0) m /= p, ++e;
            require(m == 1, "key " + std::to_string(k) + " of '" + label_ + "' is not a prime power");
            auto it = values_.find(p);
            require(it != values_.end(), "completely multiplicative '" + label_ + "' stores " +
                                             std::to_string(k) + " without its prime");
            require(std::abs(power(it->second, e) - z) <= 1e-12,
                    "completely multiplicative '" + label_ + "' is inconsistent at " + std::to_string(k));
        }
    }

    std::string label_;
    bool completely_multiplicative_ = true;
    std::uint64_t n_max_ = 1;
    std::map<std::uint64_t, cplx> values_;
    std::optional<std::uint64_t> seed_;
};

inline void check_evaluable(const MultiplicativeFunctionSpec& f, const FactorizationTable& table,
                            std::uint64_t n) {
    require(n >= 1, "multiplicative functions are evaluated on positive integers");
    if (n > f.n_max())
        throw DomainError("'" + f.label() + "' is materialized up to " + std::to_string(f.n_max()) +
                          "; cannot evaluate at " + std::to_string(n));
    if (n > table.limit())
        throw DomainError("integer " + std::to_string(n) + " beyond factorization table limit " +
                          std::to_string(table.limit()));
}

inline cplx eval_multiplicative(const MultiplicativeFunctionSpec& f, const FactorizationTable& table,
                                std::uint64_t n) {
    check_evaluable(f, table, n);
    cplx r{1.0, 0.0};
    for (const PrimePower& pp : table.factorize(n)) r *= f.prime_power_value(pp.prime, pp.exponent, pp.value);
    return r;
}

/// f(1), ..., f(N) via the smallest-prime-factor recurrence f(n) = f(p^e) f(n / p^e).
inline UnitDiscSequence materialize(const MultiplicativeFunctionSpec& f, const FactorizationTable& table,
                                    std::uint64_t N) {
    check_evaluable(f, table, N);
    std::vector<cplx> v(N + 1);
    std::vector<std::uint64_t> ppart(N + 1, 1);
    v[1] = {1.0, 0.0};
    for (std::uint64_t n = 2; n <= N; ++n) {
        std::uint64_t p = table.smallest_prime_factor(n);
        std::uint64_t rest = n / p;
        ppart[n] = (rest % p == 0) ? ppart[rest] * p : p;
        std::uint64_t pe = ppart[n];
        if (pe == n) {
            unsigned e = 0;
            for (std::uint64_t m = n; m > 1; m /= p) ++e;
            v[n] = f.prime_power_value(p, e, n);
        } else {
            v[n] = v[pe] * v[n / pe];
        }
    }
    v.erase(v.begin());
    for (auto& z : v) {
        double m = std::abs(z);
        if (m > 1.0) z /= m;  // rounding of long products
    }
    return UnitDiscSequence(std::move(v), f.label());
}

enum class RandomValues { unit_circle, signs };

/// Completely multiplicative function with independent values at each prime
/// <= n_max: uniform on the unit circle, or uniform on {-1, +1}.
/// The value at prime p is drawn from index p of the seeded stream.
inline MultiplicativeFunctionSpec random_completely_multiplicative(const FactorizationTable& table,
                                                                   std::uint64_t n_max, std::uint64_t seed,
                                                                   RandomValues kind) {
    require(n_max <= table.limit(), "random multiplicative function beyond table limit");
    rng::CounterStream stream(seed, kind == RandomValues::signs ? "cm-signs" : "cm-circle");
    std::map<std::uint64_t, cplx> values;
    for (std::uint64_t p : table.primes()) {
        if (p > n_max) break;
        values.emplace_hint(values.end(), p,
                            kind == RandomValues::signs ? cplx(stream.sign(p), 0.0)
                                                        : phase::unit_phase(stream.uniform(p)));
    }
    std::string label = std::string(kind == RandomValues::signs ? "random-cm-sign" : "random-cm-circle") +
                        "(seed=" + std::to_string(seed) + ")";
    return MultiplicativeFunctionSpec(std::move(label), true, n_max, std::move(values), seed);
}

/// Completely multiplicative function with the same value at every prime.
inline MultiplicativeFunctionSpec constant_at_primes(const FactorizationTable& table, std::uint64_t n_max,
                                                     cplx value, std::string label) {
    require(n_max <= table.limit(), "multiplicative function beyond table limit");
    std::map<std::uint64_t, cplx> values;
    for (std::uint64_t p : table.primes()) {
        if (p > n_max) break;
        values.emplace_hint(values.end(), p, value);
    }
    return MultiplicativeFunctionSpec(std::move(label), true, n_max, std::move(values));
}

inline MultiplicativeFunctionSpec liouville_spec(const FactorizationTable& table, std::uint64_t n_max) {
    return constant_at_primes(table, n_max, {-1.0, 0.0}, "liouville");
}

inline MultiplicativeFunctionSpec one_spec(const FactorizationTable& table, std::uint64_t n_max) {
    return constant_at_primes(table, n_max, {1.0, 0.0}, "one");
}

} // namespace edlab
