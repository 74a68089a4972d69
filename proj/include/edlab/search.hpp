#pragma once

/**
 * @file search.hpp
 * @brief Longest +-1 sequence whose weighted discrepancy stays <= C, and the
 *        pattern certificate w(r m!/i + j) = c for all i, j in [m].
 *
 * The search is a depth-first branch and bound over a(1), a(2), ...: placing
 * a(m) updates S_d(m/d) for every divisor d of m, and the node is refuted as
 * soon as one |S_d| exceeds C.  +1 is tried before -1, and the incumbent is
 * only replaced by a strictly longer prefix, so the witness is the first
 * longest sequence in that order.  With the constant weight all sums are
 * integers and the bound is checked exactly; otherwise complex sums are
 * compared against C + 1e-9.
 */

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "edlab/error.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

enum class SignMode { arbitrary, completely_multiplicative };

inline const char* to_string(SignMode m) {
    return m == SignMode::arbitrary ? "arbitrary" : "completely_multiplicative";
}

inline SignMode parse_sign_mode(const std::string& s) {
    if (s == "arbitrary" || s == "arbitrary_signs") return SignMode::arbitrary;
    if (s == "cm" || s == "multiplicative" || s == "completely_multiplicative" ||
        s == "completely_multiplicative_signs")
        return SignMode::completely_multiplicative;
    throw DomainError("unknown search mode '" + s + "'");
}

enum class SearchStatus { exhausted, budget_reached, horizon_reached };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::exhausted: return "exhausted";
        case SearchStatus::budget_reached: return "budget_reached";
        case SearchStatus::horizon_reached: return "horizon_reached";
    }
    return "?";
}

struct SearchResult {
    SearchStatus status = SearchStatus::exhausted;
    std::uint64_t max_length_found = 0;
    std::vector<int> witness;
    std::optional<std::uint64_t> infeasible_length;
    std::uint64_t nodes_expanded = 0;
    std::chrono::duration<double> wall_time{0};
};

struct SearchOptions {
    double C = 1.0;
    SignMode mode = SignMode::arbitrary;
    std::uint64_t budget = 100'000'000;  // expanded nodes
    std::uint64_t horizon = 4096;        // used when no weight sequence is given
    bool fix_first_sign = true;          // a(1) = +1; the global flip preserves every constraint
};

namespace detail {

struct IntegerSum {
    using type = std::int64_t;
    std::int64_t bound;
    type term(int sign, std::uint64_t) const { return sign; }
    bool ok(type s) const { return s <= bound && -s <= bound; }
};

struct ComplexSum {
    using type = cplx;
    const UnitDiscSequence* w;
    double bound;
    type term(int sign, std::uint64_t n) const { return static_cast<double>(sign) * (*w)[n]; }
    bool ok(type s) const { return std::abs(s) <= bound; }
};

template <typename Arith>
class SignSearch {
    using Sum = typename Arith::type;

  public:
    SignSearch(Arith arith, std::uint64_t horizon, const SearchOptions& opt)
        : arith_(arith), H_(horizon), opt_(opt), a_(horizon + 1, 0), S_(horizon + 1, Sum{}),
          spf_(horizon + 1, 0), divisors_(horizon + 1) {
        for (std::uint64_t d = 1; d <= H_; ++d)
            for (std::uint64_t m = d; m <= H_; m += d) divisors_[m].push_back(static_cast<std::uint32_t>(d));
        for (std::uint64_t i = 2; i <= H_; ++i)
            if (!spf_[i])
                for (std::uint64_t j = i; j <= H_; j += i)
                    if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
    }

    SearchResult run() {
        auto t0 = std::chrono::steady_clock::now();
        stopped_ = false;
        descend(1);
        SearchResult r;
        r.max_length_found = best_len_;
        r.witness = best_;
        r.nodes_expanded = nodes_;
        if (best_len_ == H_) r.status = SearchStatus::horizon_reached;
        else if (stopped_) r.status = SearchStatus::budget_reached;
        else {
            r.status = SearchStatus::exhausted;
            r.infeasible_length = best_len_ + 1;
        }
        r.wall_time = std::chrono::steady_clock::now() - t0;
        return r;
    }

  private:
    // Places a(m) = sign; returns false (with sums restored) if a constraint breaks.
    bool place(std::uint64_t m, int sign) {
        ++nodes_;
        const auto& divs = divisors_[m];
        std::size_t i = 0;
        bool ok = true;
        for (; i < divs.size(); ++i) {
            std::uint64_t d = divs[i];
            S_[d] += arith_.term(sign, m / d);
            if (!arith_.ok(S_[d])) {
                ok = false;
                ++i;
                break;
            }
        }
        if (!ok) {
            for (std::size_t j = 0; j < i; ++j) S_[divs[j]] -= arith_.term(sign, m / divs[j]);
            return false;
        }
        a_[m] = sign;
        return true;
    }

    void unplace(std::uint64_t m) {
        int sign = a_[m];
        for (std::uint64_t d : divisors_[m]) S_[d] -= arith_.term(sign, m / d);
        a_[m] = 0;
    }

    void record(std::uint64_t length) {
        if (length > best_len_) {
            best_len_ = length;
            best_.assign(a_.begin() + 1, a_.begin() + 1 + static_cast<std::ptrdiff_t>(length));
        }
    }

    void descend(std::uint64_t m) {
        record(m - 1);
        if (m > H_ || best_len_ == H_) return;
        int options[2] = {1, -1};
        int count = 2;
        if (m == 1 && (opt_.fix_first_sign || opt_.mode == SignMode::completely_multiplicative)) count = 1;
        if (opt_.mode == SignMode::completely_multiplicative && m > 1 && spf_[m] != m) {
            options[0] = a_[spf_[m]] * a_[m / spf_[m]];
            count = 1;
        }
        for (int i = 0; i < count; ++i) {
            if (nodes_ >= opt_.budget) {
                stopped_ = true;
                return;
            }
            if (!place(m, options[i])) continue;
            descend(m + 1);
            unplace(m);
            if (stopped_ || best_len_ == H_) return;
        }
    }

    Arith arith_;
    std::uint64_t H_;
    SearchOptions opt_;
    std::vector<int> a_;
    std::vector<Sum> S_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::vector<std::uint32_t>> divisors_;
    std::vector<int> best_;
    std::uint64_t best_len_ = 0;
    std::uint64_t nodes_ = 0;
    bool stopped_ = false;
};

} // namespace detail

/// Constant weight 1, horizon opt.horizon, exact integer sums.
inline SearchResult max_length_search(const SearchOptions& opt) {
    require(opt.C >= 0.0, "C must be >= 0");
    require(opt.horizon >= 1, "search horizon must be >= 1");
    auto bound = static_cast<std::int64_t>(std::floor(opt.C + 1e-9));
    detail::SignSearch<detail::IntegerSum> s(detail::IntegerSum{bound}, opt.horizon, opt);
    return s.run();
}

/// General weight; the horizon is the materialized length of w.
inline SearchResult max_length_search(const UnitDiscSequence& w, const SearchOptions& opt) {
    require(opt.C >= 0.0, "C must be >= 0");
    require(!w.empty(), "search weight must be materialized");
    detail::SignSearch<detail::ComplexSum> s(detail::ComplexSum{&w, opt.C + 1e-9}, w.size(), opt);
    return s.run();
}

// ---------------------------------------------------------------------------
// pattern certificates

struct PatternCertificate {
    unsigned m = 0;
    std::uint64_t r = 0;
    cplx c;
    std::vector<std::uint64_t> positions_checked;  // r m!/i + j, i-major
};

inline std::uint64_t factorial_checked(unsigned m) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= m; ++i) {
        if (f > UINT64_MAX / i) throw ResourceError("m! overflows 64 bits for m = " + std::to_string(m));
        f *= i;
    }
    return f;
}

inline std::vector<std::uint64_t> pattern_positions(unsigned m, std::uint64_t r) {
    std::uint64_t f = factorial_checked(m);
    std::vector<std::uint64_t> pos;
    pos.reserve(static_cast<std::size_t>(m) * m);
    for (unsigned i = 1; i <= m; ++i)
        for (unsigned j = 1; j <= m; ++j) pos.push_back(r * (f / i) + j);
    return pos;
}

/// Smallest r <= r_max with w(r m!/i + j) = c for all i, j in [m] (within 1e-12).
inline std::optional<PatternCertificate> find_pattern_certificate(const std::function<cplx(std::uint64_t)>& w,
                                                                  std::uint64_t domain, cplx c, unsigned m,
                                                                  std::uint64_t r_max) {
    require(m >= 1, "pattern size m must be >= 1");
    require(r_max >= 1, "r_max must be >= 1");
    std::uint64_t f = factorial_checked(m);
    if (r_max > (UINT64_MAX - m) / f) throw ResourceError("r_max * m! overflows 64 bits");
    const std::uint64_t horizon = r_max * f + m;
    if (horizon > domain)
        throw ResourceError("pattern search needs the weight materialized to " + std::to_string(horizon) +
                            " but it is defined only up to " + std::to_string(domain));
    for (std::uint64_t r = 1; r <= r_max; ++r) {
        bool all = true;
        for (unsigned i = 1; i <= m && all; ++i)
            for (unsigned j = 1; j <= m && all; ++j) all = std::abs(w(r * (f / i) + j) - c) <= 1e-12;
        if (all) return PatternCertificate{m, r, c, pattern_positions(m, r)};
    }
    return std::nullopt;
}

inline std::optional<PatternCertificate> find_pattern_certificate(const UnitDiscSequence& w, cplx c, unsigned m,
                                                                  std::uint64_t r_max) {
    return find_pattern_certificate([&](std::uint64_t k) { return w[k]; }, w.size(), c, m, r_max);
}

} // namespace edlab
