#pragma once

/**
 * @file tokens.hpp
 * @brief Text forms of experiment parameters: reals with symbolic constants,
 *        integer lists and ranges, checkpoint sets, and sequence specs.
 *
 * Symbolic reals expand to fixed doubles:
 *   sqrt2  = 1.4142135623730951
 *   golden = 1.618033988749895
 *   pi     = 3.141592653589793
 * A leading '-' and a rational "p/q" are also accepted.  Integers take
 * plain digits, "1e6" or "10^6".
 */

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edlab/discrepancy.hpp"
#include "edlab/error.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/sequence.hpp"
#include "edlab/weights.hpp"

namespace edlab::tokens {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kGolden = 1.618033988749895;
inline constexpr double kPi = 3.141592653589793;

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

namespace detail {
inline double plain_double(std::string_view s, std::string_view whole) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError("cannot parse real '" + std::string(whole) + "'");
    return v;
}
} // namespace detail

inline double parse_real(std::string_view s) {
    std::string_view body = s;
    double sign = 1.0;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        if (body.front() == '-') sign = -1.0;
        body.remove_prefix(1);
    }
    if (body == "sqrt2") return sign * kSqrt2;
    if (body == "golden") return sign * kGolden;
    if (body == "pi") return sign * kPi;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        double num = detail::plain_double(body.substr(0, slash), s);
        double den = detail::plain_double(body.substr(slash + 1), s);
        if (den == 0.0) throw DomainError("zero denominator in '" + std::string(s) + "'");
        return sign * num / den;
    }
    return sign * detail::plain_double(body, s);
}

/// "x" or "x,y" as x + iy.
inline cplx parse_complex(std::string_view s) {
    auto parts = split(s, ',');
    if (parts.size() == 1) return {parse_real(parts[0]), 0.0};
    if (parts.size() == 2) return {parse_real(parts[0]), parse_real(parts[1])};
    throw DomainError("cannot parse complex '" + std::string(s) + "' (use re or re,im)");
}

inline std::uint64_t parse_uint(std::string_view s) {
    auto digits = [&](std::string_view t) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
            throw DomainError("cannot parse non-negative integer '" + std::string(s) + "'");
        return v;
    };
    auto power = [&](std::uint64_t base, std::uint64_t mant, std::uint64_t e) {
        unsigned __int128 v = mant;
        for (std::uint64_t i = 0; i < e; ++i) {
            v *= base;
            if (v > UINT64_MAX) throw DomainError("integer '" + std::string(s) + "' overflows 64 bits");
        }
        return static_cast<std::uint64_t>(v);
    };
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos)
        return power(10, digits(s.substr(0, e)), digits(s.substr(e + 1)));
    if (auto c = s.find('^'); c != std::string_view::npos)
        return power(digits(s.substr(0, c)), 1, digits(s.substr(c + 1)));
    return digits(s);
}

inline bool parse_bool(std::string_view s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw DomainError("cannot parse boolean '" + std::string(s) + "'");
}

/// "a,b,c" or "a..b" (inclusive), or a mix such as "1..3,10".
inline std::vector<std::uint64_t> parse_uint_list(std::string_view s) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split(s, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_uint(item));
            continue;
        }
        std::uint64_t lo = parse_uint(std::string_view(item).substr(0, dots));
        std::uint64_t hi = parse_uint(std::string_view(item).substr(dots + 2));
        require(lo <= hi, "empty range '" + item + "'");
        require(hi - lo < 10'000'000, "range '" + item + "' is too long");
        for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    return out;
}

inline std::vector<double> parse_real_list(std::string_view s) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_real(item));
    return out;
}

inline std::vector<Rational> parse_rational_list(std::string_view s) {
    std::vector<Rational> out;
    for (const auto& item : split(s, ',')) out.push_back(Rational::parse(item));
    return out;
}

/// "decades" (10, 100, ... and N), "final" (just N), or an explicit list.
inline std::vector<std::uint64_t> parse_checkpoints(std::string_view s, std::uint64_t N) {
    if (s == "decades") return decade_checkpoints(N);
    if (s == "final") return {N};
    return parse_uint_list(s);
}

// ---------------------------------------------------------------------------
// sequences

/// True when the spec is built from a factorization table.
inline bool needs_table(std::string_view spec) {
    auto head = split(spec, ':').front();
    return head == "liouville" || head == "cm-sign" || head == "cm-circle" || head == "parity";
}

/// Polynomial coefficients, highest degree first: "D:alpha" is alpha k^D,
/// "a_D,...,a_0" is the full list.
inline std::vector<double> parse_polynomial(const std::vector<std::string>& fields, std::size_t from,
                                            std::string_view spec) {
    if (fields.size() == from + 2) {
        std::uint64_t D = parse_uint(fields[from]);
        require(D >= 1 && D <= 16, "polynomial degree must lie in [1, 16]");
        std::vector<double> c(D + 1, 0.0);
        c[0] = parse_real(fields[from + 1]);
        return c;
    }
    if (fields.size() == from + 1) return parse_real_list(fields[from]);
    throw DomainError("bad polynomial in '" + std::string(spec) + "' (use D:alpha or a_D,...,a_0)");
}

inline RhoRule parse_rho(std::string_view s) {
    if (s == "inverse_log" || s == "inverse-log") return {RhoRule::Kind::inverse_log, 1.0};
    if (s == "primes" || s == "prime_indicator") return {RhoRule::Kind::prime_indicator, 1.0};
    if (s.starts_with("const=")) return {RhoRule::Kind::constant, parse_real(s.substr(6))};
    throw DomainError("unknown rho rule '" + std::string(s) + "' (inverse_log, primes, const=V)");
}

/// Sequence grammar (fields separated by ':'):
///   ones | constant[:c] | even | liouville | cm-sign:SEED | cm-circle:SEED
///   poly:D:alpha | poly:a_D,...,a_0 | linear:alpha | step3:<poly>
///   random-sign:SEED | sparse:RULE:SEED[:c] | parity:liouville|ones
///   intervals:A-B,C-D,...
/// `table` must reach N when needs_table(spec).
inline UnitDiscSequence make_sequence(std::string_view spec, std::uint64_t N, const FactorizationTable* table) {
    require(N >= 1, "sequence length must be >= 1");
    const auto f = split(spec, ':');
    const std::string& head = f[0];
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (f.size() < lo + 1 || f.size() > hi + 1)
            throw DomainError("wrong number of fields in sequence spec '" + std::string(spec) + "'");
    };
    auto need_table = [&]() -> const FactorizationTable& {
        if (!table || table->limit() < N) throw DomainError("sequence '" + std::string(spec) + "' needs a factorization table to N");
        return *table;
    };
    UnitDiscSequence out;
    if (head == "ones" || head == "one") {
        arity(0, 0);
        out = constant_weight(1.0, N);
    } else if (head == "constant") {
        arity(0, 1);
        out = constant_weight(f.size() == 2 ? parse_complex(f[1]) : cplx(1.0, 0.0), N);
    } else if (head == "even") {
        arity(0, 0);
        std::vector<cplx> v(N);
        for (std::uint64_t k = 1; k <= N; ++k) v[k - 1] = k % 2 ? 0.0 : 1.0;
        out = UnitDiscSequence(std::move(v), "even");
    } else if (head == "liouville") {
        arity(0, 0);
        out = materialize(liouville_spec(need_table(), N), need_table(), N);
    } else if (head == "cm-sign" || head == "cm-circle") {
        arity(1, 1);
        auto kind = head == "cm-sign" ? RandomValues::signs : RandomValues::unit_circle;
        out = materialize(random_completely_multiplicative(need_table(), N, parse_uint(f[1]), kind), need_table(), N);
    } else if (head == "poly") {
        out = polynomial_phase_weight(parse_polynomial(f, 1, spec), N);
    } else if (head == "linear") {
        arity(1, 1);
        out = linear_phase_weight(parse_real(f[1]), N);
    } else if (head == "step3") {
        out = step_weight(three_cell_step(), parse_polynomial(f, 1, spec), N);
    } else if (head == "random-sign") {
        arity(1, 1);
        out = random_sign_weight(N, parse_uint(f[1]));
    } else if (head == "sparse") {
        arity(2, 3);
        out = sparse_random_weight(parse_rho(f[1]), f.size() == 4 ? parse_complex(f[3]) : cplx(1.0, 0.0), N,
                                   parse_uint(f[2]));
    } else if (head == "parity") {
        arity(1, 1);
        const auto& t = need_table();
        if (f[1] == "liouville") out = parity_twist_weight(liouville_spec(t, N), t, N);
        else if (f[1] == "ones" || f[1] == "one") out = parity_twist_weight(one_spec(t, N), t, N);
        else throw DomainError("parity twist takes liouville or ones, not '" + f[1] + "'");
    } else if (head == "intervals") {
        arity(1, 1);
        std::vector<Interval> iv;
        for (const auto& item : split(f[1], ',')) {
            auto ends = split(item, '-');
            require(ends.size() == 2, "interval '" + item + "' must read A-B");
            iv.push_back({parse_uint(ends[0]), parse_uint(ends[1])});
            require(iv.back().first >= 1 && iv.back().first <= iv.back().last, "bad interval '" + item + "'");
        }
        out = interval_indicator_weight(iv, N);
    } else {
        throw DomainError("unknown sequence '" + std::string(spec) + "'");
    }
    out.set_label(std::string(spec));
    return out;
}

} // namespace edlab::tokens
