#pragma once

/**
 * @file weights.hpp
 * @brief Weight families: polynomial phases, step functions of polynomial
 *        phases, random signs, sparse random weights, and the counterexample
 *        weights (linear phase, parity twist, interval indicator).
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "edlab/error.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/phase.hpp"
#include "edlab/rng.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

enum class WeightKind {
    polynomial_phase,
    step_weight,
    random_sign,
    sparse_random,
    linear_phase_counterexample,
    parity_twist,
    interval_indicator,
    constant,
};

inline const char* to_string(WeightKind k) {
    switch (k) {
        case WeightKind::polynomial_phase: return "polynomial_phase";
        case WeightKind::step_weight: return "step_weight";
        case WeightKind::random_sign: return "random_sign";
        case WeightKind::sparse_random: return "sparse_random";
        case WeightKind::linear_phase_counterexample: return "linear_phase_counterexample";
        case WeightKind::parity_twist: return "parity_twist";
        case WeightKind::interval_indicator: return "interval_indicator";
        case WeightKind::constant: return "constant";
    }
    return "?";
}

/// Half-open cell [lo, hi) of the torus with a unit-disc value.
struct StepCell {
    double lo;
    double hi;
    cplx value;
    friend bool operator==(const StepCell&, const StepCell&) = default;
};

/// Probability rule for sparse random weights.
struct RhoRule {
    enum class Kind { constant, inverse_log, prime_indicator };
    Kind kind = Kind::inverse_log;
    double value = 1.0;  // for Kind::constant

    /// rho_1 = 1 for every rule except prime_indicator; inverse_log is min(1, 1/log k).
    double operator()(std::uint64_t k) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::inverse_log:
                return k < 2 ? 1.0 : std::min(1.0, 1.0 / std::log(static_cast<double>(k)));
            case Kind::prime_indicator: {
                if (k < 2) return 0.0;
                for (std::uint64_t p = 2; p * p <= k; ++p)
                    if (k % p == 0) return 0.0;
                return 1.0;
            }
        }
        return 0.0;
    }
    friend bool operator==(const RhoRule&, const RhoRule&) = default;
};

inline const char* to_string(RhoRule::Kind k) {
    switch (k) {
        case RhoRule::Kind::constant: return "constant";
        case RhoRule::Kind::inverse_log: return "inverse_log";
        case RhoRule::Kind::prime_indicator: return "prime_indicator";
    }
    return "?";
}

/// Closed integer interval [first, last].
struct Interval {
    std::uint64_t first;
    std::uint64_t last;
    std::uint64_t length() const noexcept { return last - first + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

namespace weight_params {
struct PolynomialPhase {
    std::vector<double> coeffs;  // alpha_d, ..., alpha_0
    friend bool operator==(const PolynomialPhase&, const PolynomialPhase&) = default;
};
struct Step {
    std::vector<StepCell> cells;
    std::vector<double> coeffs;
    friend bool operator==(const Step&, const Step&) = default;
};
struct RandomSign {
    friend bool operator==(const RandomSign&, const RandomSign&) = default;
};
struct SparseRandom {
    RhoRule rho;
    cplx c{1.0, 0.0};
    friend bool operator==(const SparseRandom&, const SparseRandom&) = default;
};
struct LinearPhase {
    double alpha;
    friend bool operator==(const LinearPhase&, const LinearPhase&) = default;
};
struct ParityTwist {
    std::optional<MultiplicativeFunctionSpec> f;
    friend bool operator==(const ParityTwist&, const ParityTwist&) = default;
};
struct IntervalIndicator {
    std::vector<Interval> intervals;
    friend bool operator==(const IntervalIndicator&, const IntervalIndicator&) = default;
};
struct Constant {
    cplx value{1.0, 0.0};
    friend bool operator==(const Constant&, const Constant&) = default;
};
} // namespace weight_params

/// Tagged weight description; the variant index is the WeightKind.
struct WeightSpec {
    using Params = std::variant<weight_params::PolynomialPhase, weight_params::Step, weight_params::RandomSign,
                                weight_params::SparseRandom, weight_params::LinearPhase,
                                weight_params::ParityTwist, weight_params::IntervalIndicator,
                                weight_params::Constant>;
    Params params;
    std::optional<std::uint64_t> seed;

    WeightKind kind() const noexcept { return static_cast<WeightKind>(params.index()); }
    friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

// ---------------------------------------------------------------------------
// generators

inline UnitDiscSequence polynomial_phase_weight(const std::vector<double>& coeffs, std::uint64_t N) {
    require(N >= 1, "weight length must be >= 1");
    require(coeffs.size() >= 2, "polynomial phase needs degree >= 1 (at least two coefficients)");
    std::vector<cplx> v(N);
    for (std::uint64_t k = 1; k <= N; ++k) v[k - 1] = phase::unit_phase(phase::polynomial_frac(coeffs, k));
    return UnitDiscSequence(std::move(v), "poly-phase");
}

inline void validate_cells(std::vector<StepCell>& cells) {
    require(!cells.empty(), "step weight needs at least one cell");
    std::sort(cells.begin(), cells.end(), [](const StepCell& a, const StepCell& b) { return a.lo < b.lo; });
    require(cells.front().lo == 0.0, "step cells must start at 0");
    require(cells.back().hi == 1.0, "step cells must end at 1");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        require(cells[i].lo < cells[i].hi, "empty or reversed step cell");
        require(std::abs(cells[i].value) <= 1.0 + kDiscSlack, "step cell value outside the unit disc");
        if (i + 1 < cells.size())
            require(cells[i].hi == cells[i + 1].lo, cells[i].hi < cells[i + 1].lo
                                                        ? "step cells do not cover [0,1)"
                                                        : "step cells overlap");
    }
}

/// Value of the step function at t in [0, 1); cells must be validated.
inline cplx step_value(const std::vector<StepCell>& cells, double t) {
    auto it = std::upper_bound(cells.begin(), cells.end(), t,
                               [](double x, const StepCell& c) { return x < c.lo; });
    return std::prev(it)->value;
}

inline std::vector<StepCell> three_cell_step() {
    return {{0.0, 1.0 / 3.0, {-1.0, 0.0}}, {1.0 / 3.0, 2.0 / 3.0, {0.0, 0.0}}, {2.0 / 3.0, 1.0, {1.0, 0.0}}};
}

inline UnitDiscSequence step_weight(std::vector<StepCell> cells, const std::vector<double>& coeffs,
                                    std::uint64_t N) {
    require(N >= 1, "weight length must be >= 1");
    require(coeffs.size() >= 2, "step weight needs a polynomial of degree >= 1");
    validate_cells(cells);
    std::vector<cplx> v(N);
    for (std::uint64_t k = 1; k <= N; ++k) v[k - 1] = step_value(cells, phase::polynomial_frac(coeffs, k));
    return UnitDiscSequence(std::move(v), "step");
}

inline UnitDiscSequence random_sign_weight(std::uint64_t N, std::optional<std::uint64_t> seed) {
    require(seed.has_value(), "random_sign weight requires an explicit seed");
    rng::CounterStream stream(*seed, "random-sign");
    std::vector<cplx> v(N);
    for (std::uint64_t k = 1; k <= N; ++k) v[k - 1] = {static_cast<double>(stream.sign(k)), 0.0};
    return UnitDiscSequence(std::move(v), "random-sign(seed=" + std::to_string(*seed) + ")");
}

/// First k in [3, N] with rho_k > rho_{k-1}, if any.
inline std::optional<std::uint64_t> first_increase(const RhoRule& rho, std::uint64_t N) {
    double prev = rho(2);
    for (std::uint64_t k = 3; k <= N; ++k) {
        double cur = rho(k);
        if (cur > prev) return k;
        prev = cur;
    }
    return std::nullopt;
}

inline UnitDiscSequence sparse_random_weight(const RhoRule& rho, cplx c, std::uint64_t N,
                                             std::optional<std::uint64_t> seed) {
    require(seed.has_value(), "sparse_random weight requires an explicit seed");
    require(c != cplx(0.0, 0.0) && std::abs(c) <= 1.0 + kDiscSlack, "sparse target c must satisfy 0 < |c| <= 1");
    if (auto k = first_increase(rho, N))
        throw DomainError("rho rule is not decreasing on [2, N]: rho_" + std::to_string(*k) + " > rho_" +
                          std::to_string(*k - 1));
    rng::CounterStream stream(*seed, "sparse-random");
    std::vector<cplx> v(N);
    for (std::uint64_t k = 1; k <= N; ++k) {
        double r = rho(k);
        require(r >= 0.0 && r <= 1.0, "rho_k must lie in [0, 1]");
        v[k - 1] = stream.uniform(k) < r ? c : cplx(0.0, 0.0);
    }
    return UnitDiscSequence(std::move(v), "sparse-random(seed=" + std::to_string(*seed) + ")");
}

inline UnitDiscSequence linear_phase_weight(double alpha, std::uint64_t N) {
    auto w = polynomial_phase_weight({alpha, 0.0}, N);
    w.set_label("linear-phase");
    return w;
}

/// w(k) = (-1)^k conj(f(k)).
inline UnitDiscSequence parity_twist_weight(const MultiplicativeFunctionSpec& f, const FactorizationTable& table,
                                            std::uint64_t N) {
    auto fv = materialize(f, table, N);
    std::vector<cplx> v(N);
    for (std::uint64_t k = 1; k <= N; ++k) v[k - 1] = (k % 2 ? -1.0 : 1.0) * std::conj(fv[k]);
    return UnitDiscSequence(std::move(v), "parity-twist(" + f.label() + ")");
}

inline UnitDiscSequence interval_indicator_weight(const std::vector<Interval>& intervals, std::uint64_t N) {
    std::vector<cplx> v(N, cplx(0.0, 0.0));
    for (const Interval& I : intervals) {
        require(I.first >= 1 && I.first <= I.last, "malformed interval");
        for (std::uint64_t k = I.first; k <= std::min(I.last, N); ++k) v[k - 1] = 1.0;
    }
    return UnitDiscSequence(std::move(v), "interval-indicator");
}

inline UnitDiscSequence constant_weight(cplx value, std::uint64_t N) {
    return UnitDiscSequence(std::vector<cplx>(N, value), "constant");
}

/// Dispatch on the spec; the factorization table is needed only for parity twists.
inline UnitDiscSequence materialize_weight(const WeightSpec& spec, std::uint64_t N,
                                           const FactorizationTable* table = nullptr) {
    namespace wp = weight_params;
    return std::visit(
        [&](const auto& p) -> UnitDiscSequence {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, wp::PolynomialPhase>) return polynomial_phase_weight(p.coeffs, N);
            else if constexpr (std::is_same_v<T, wp::Step>) return step_weight(p.cells, p.coeffs, N);
            else if constexpr (std::is_same_v<T, wp::RandomSign>) return random_sign_weight(N, spec.seed);
            else if constexpr (std::is_same_v<T, wp::SparseRandom>)
                return sparse_random_weight(p.rho, p.c, N, spec.seed);
            else if constexpr (std::is_same_v<T, wp::LinearPhase>) return linear_phase_weight(p.alpha, N);
            else if constexpr (std::is_same_v<T, wp::ParityTwist>) {
                require(p.f.has_value(), "parity_twist weight requires a multiplicative function");
                if (table) return parity_twist_weight(*p.f, *table, N);
                FactorizationTable local(N);
                return parity_twist_weight(*p.f, local, N);
            } else if constexpr (std::is_same_v<T, wp::IntervalIndicator>)
                return interval_indicator_weight(p.intervals, N);
            else return constant_weight(p.value, N);
        },
        spec.params);
}

// ---------------------------------------------------------------------------
// interval-indicator counterexample

struct IntervalCounterexample {
    MultiplicativeFunctionSpec a;     // completely multiplicative, +-1
    std::vector<Interval> intervals;  // even lengths 2, 4, 6, ... on which a(n) = (-1)^n
};

namespace detail {

/// Incremental GF(2) elimination; each stored row has its lowest set bit as pivot.
class Gf2System {
  public:
    explicit Gf2System(std::size_t vars) : words_((vars + 63) / 64) {}

    /// Adds row.x = rhs; returns false (and leaves the system unchanged) if inconsistent.
    bool add(std::vector<std::uint64_t> row, bool rhs, std::vector<std::size_t>& added) {
        for (;;) {
            std::size_t pivot = lowest(row);
            if (pivot == npos) return !rhs;
            auto it = rows_.find(pivot);
            if (it == rows_.end()) {
                rows_.emplace(pivot, Row{std::move(row), rhs});
                added.push_back(pivot);
                return true;
            }
            for (std::size_t w = 0; w < words_; ++w) row[w] ^= it->second.bits[w];
            rhs ^= it->second.rhs;
        }
    }

    void remove(const std::vector<std::size_t>& pivots) {
        for (std::size_t p : pivots) rows_.erase(p);
    }

    /// One solution, free variables set to 0.
    std::vector<bool> solve(std::size_t vars) const {
        std::vector<bool> x(vars, false);
        // rows with larger pivots only involve larger variables; back-substitute from the top
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            bool v = it->second.rhs;
            const auto& bits = it->second.bits;
            for (std::size_t w = 0; w < words_; ++w) {
                std::uint64_t m = bits[w];
                while (m) {
                    std::size_t b = w * 64 + static_cast<std::size_t>(std::countr_zero(m));
                    m &= m - 1;
                    if (b != it->first && x[b]) v = !v;
                }
            }
            x[it->first] = v;
        }
        return x;
    }

    std::size_t words() const noexcept { return words_; }

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    struct Row {
        std::vector<std::uint64_t> bits;
        bool rhs;
    };
    std::size_t lowest(const std::vector<std::uint64_t>& row) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (row[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
        return npos;
    }
    std::size_t words_;
    std::map<std::size_t, Row> rows_;
};

} // namespace detail

/// Builds a completely multiplicative a: N -> {-1, +1} together with disjoint
/// intervals of lengths 2, 4, 6, ... inside [1, N] on which a(n) = (-1)^n.
///
/// Writing a(p) = (-1)^{x_p}, the condition a(n) = (-1)^n reads
/// sum_p v_p(n) x_p = n (mod 2), a linear system over GF(2).  Intervals are
/// placed greedily: for each target length the earliest start (after the
/// previous interval plus a gap of one) whose equations stay consistent with
/// all earlier ones is accepted.  Unconstrained primes get a(p) = +1.
inline IntervalCounterexample build_interval_counterexample(const FactorizationTable& table, std::uint64_t N,
                                                            std::size_t max_intervals = 64) {
    require(N >= 2 && N <= table.limit(), "interval counterexample needs 2 <= N <= table limit");
    const auto& all_primes = table.primes();
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p : all_primes) {
        if (p > N) break;
        primes.push_back(p);
    }
    std::unordered_map<std::uint64_t, std::size_t> var_of;
    for (std::size_t i = 0; i < primes.size(); ++i) var_of.emplace(primes[i], i);

    detail::Gf2System system(primes.size());
    auto equation = [&](std::uint64_t n) {
        std::vector<std::uint64_t> row(system.words(), 0);
        for (const auto& pp : table.factorize(n))
            if (pp.exponent % 2) {
                std::size_t v = var_of.at(pp.prime);
                row[v / 64] ^= std::uint64_t{1} << (v % 64);
            }
        return row;
    };

    std::vector<Interval> intervals;
    std::uint64_t cursor = 1;
    for (std::uint64_t length = 2; intervals.size() < max_intervals; length += 2) {
        bool placed = false;
        for (std::uint64_t s = cursor; s + length - 1 <= N; ++s) {
            std::vector<std::size_t> added;
            bool ok = true;
            for (std::uint64_t n = s; n < s + length && ok; ++n) ok = system.add(equation(n), n % 2 == 1, added);
            if (ok) {
                intervals.push_back({s, s + length - 1});
                cursor = s + length + 1;
                placed = true;
                break;
            }
            system.remove(added);
        }
        if (!placed) break;
    }

    std::vector<bool> x = system.solve(primes.size());
    std::map<std::uint64_t, cplx> values;
    for (std::size_t i = 0; i < primes.size(); ++i)
        values.emplace_hint(values.end(), primes[i], cplx(x[i] ? -1.0 : 1.0, 0.0));
    return {MultiplicativeFunctionSpec("interval-adversary", true, N, std::move(values)), std::move(intervals)};
}

} // namespace edlab
