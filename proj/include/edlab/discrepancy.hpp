#pragma once

/**
 * @file discrepancy.hpp
 * @brief Weighted discrepancy along homogeneous progressions,
 *        S_d(n) = sum_{k<=n} a(dk) w(k), and its maximum over d n <= N'.
 *
 * A full evaluation walks d = 1..N and n = 1..N/d, O(N log N) terms.  Each
 * pair (d, n) is credited to the smallest checkpoint >= d n, and the
 * per-checkpoint maxima are prefix-maximized at the end.  Ties are broken by
 * smallest d, then smallest n; that order is total, so the result does not
 * depend on how d is partitioned across workers.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "edlab/error.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/parallel.hpp"
#include "edlab/rng.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

struct Witness {
    std::uint64_t d = 0;
    std::uint64_t n = 0;
    friend bool operator==(const Witness&, const Witness&) = default;
};

struct DiscrepancyProfile {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> values;
    std::vector<Witness> witnesses;
};

/// S_d(0), ..., S_d(n_max).
inline std::vector<cplx> partial_sums(const UnitDiscSequence& a, const UnitDiscSequence& w, std::uint64_t d,
                                      std::uint64_t n_max) {
    require(d >= 1, "progression difference d must be >= 1");
    if (n_max > w.size() || (n_max > 0 && d * n_max > a.size()))
        throw DomainError("partial sums S_" + std::to_string(d) + "(n) up to n = " + std::to_string(n_max) +
                          " need a up to " + std::to_string(d * n_max) + " and w up to " + std::to_string(n_max));
    std::vector<cplx> S(n_max + 1);
    for (std::uint64_t k = 1; k <= n_max; ++k) S[k] = S[k - 1] + a[d * k] * w[k];
    return S;
}

inline std::vector<cplx> partial_sums(const UnitDiscSequence& a, const UnitDiscSequence& w, std::uint64_t d) {
    require(d >= 1, "progression difference d must be >= 1");
    return partial_sums(a, w, d, std::min<std::uint64_t>(a.size() / d, w.size()));
}

/// Checkpoints 10, 100, ... up to N, plus N itself.
inline std::vector<std::uint64_t> decade_checkpoints(std::uint64_t N) {
    std::vector<std::uint64_t> cps;
    for (std::uint64_t c = 10; c < N; c *= 10) cps.push_back(c);
    cps.push_back(N);
    return cps;
}

struct ProfileOptions {
    bool real_part = false;             // |Re S| instead of |S|
    std::uint64_t max_d = UINT64_MAX;   // restrict to d <= max_d
    unsigned workers = 1;
};

namespace detail {
struct Best {
    double value = -1.0;
    Witness at;
};
inline bool better(const Best& a, const Best& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.at.d != b.at.d) return a.at.d < b.at.d;
    return a.at.n < b.at.n;
}
} // namespace detail

inline DiscrepancyProfile discrepancy_profile(const UnitDiscSequence& a, const UnitDiscSequence& w,
                                              std::uint64_t N, std::vector<std::uint64_t> checkpoints,
                                              const ProfileOptions& opt = {}) {
    require(N >= 1, "discrepancy profile needs N >= 1");
    require(a.size() >= N && w.size() >= N, "a and w must be materialized to N = " + std::to_string(N));
    if (checkpoints.empty()) checkpoints = {N};
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        require(checkpoints[i] >= 1 && checkpoints[i] <= N, "checkpoints must lie in [1, N]");
        require(i == 0 || checkpoints[i] > checkpoints[i - 1], "checkpoints must be strictly increasing");
    }
    const std::uint64_t top = checkpoints.back();
    const std::uint64_t D = std::min(top, opt.max_d);
    const std::size_t B = checkpoints.size();

    constexpr std::uint64_t kChunk = 64;
    const std::size_t chunks = static_cast<std::size_t>((D + kChunk - 1) / kChunk);
    std::vector<std::vector<detail::Best>> local(chunks, std::vector<detail::Best>(B));
    parallel_chunks(chunks, opt.workers, [&](std::size_t c) {
        auto& best = local[c];
        std::uint64_t d_lo = 1 + c * kChunk, d_hi = std::min(D, d_lo + kChunk - 1);
        for (std::uint64_t d = d_lo; d <= d_hi; ++d) {
            cplx S{0.0, 0.0};
            std::size_t bucket = 0;
            const std::uint64_t n_max = top / d;
            for (std::uint64_t n = 1; n <= n_max; ++n) {
                S += a[d * n] * w[n];
                while (checkpoints[bucket] < d * n) ++bucket;
                detail::Best cand{opt.real_part ? std::abs(S.real()) : std::abs(S), {d, n}};
                if (detail::better(cand, best[bucket])) best[bucket] = cand;
            }
        }
    });

    std::vector<detail::Best> merged(B);
    for (const auto& l : local)
        for (std::size_t b = 0; b < B; ++b)
            if (detail::better(l[b], merged[b])) merged[b] = l[b];

    DiscrepancyProfile out;
    out.checkpoints = checkpoints;
    detail::Best run;
    for (std::size_t b = 0; b < B; ++b) {
        if (detail::better(merged[b], run)) run = merged[b];
        out.values.push_back(run.value);
        out.witnesses.push_back(run.at);
    }
    return out;
}

/// max over d n <= N of |S_d(n)|, each sum recomputed from scratch.
/// Independent of discrepancy_profile; meant for checking small instances.
inline double brute_force_discrepancy(const UnitDiscSequence& a, const UnitDiscSequence& w, std::uint64_t N) {
    require(a.size() >= N && w.size() >= N, "brute-force discrepancy needs a and w up to N");
    double best = 0.0;
    for (std::uint64_t d = 1; d <= N; ++d)
        for (std::uint64_t n = 1; d * n <= N; ++n) {
            cplx s{0.0, 0.0};
            for (std::uint64_t k = 1; k <= n; ++k) s += a[d * k] * w[k];
            best = std::max(best, std::abs(s));
        }
    return best;
}

// ---------------------------------------------------------------------------
// growth experiments over sampled multiplicative sequences

enum class SampleFamily { random_cm_sign, random_cm_circle, one, liouville };

inline const char* to_string(SampleFamily f) {
    switch (f) {
        case SampleFamily::random_cm_sign: return "random_cm_sign";
        case SampleFamily::random_cm_circle: return "random_cm_circle";
        case SampleFamily::one: return "one";
        case SampleFamily::liouville: return "liouville";
    }
    return "?";
}

inline SampleFamily parse_sample_family(const std::string& s) {
    if (s == "random_cm_sign" || s == "cm-sign") return SampleFamily::random_cm_sign;
    if (s == "random_cm_circle" || s == "cm-circle") return SampleFamily::random_cm_circle;
    if (s == "one" || s == "ones") return SampleFamily::one;
    if (s == "liouville") return SampleFamily::liouville;
    throw DomainError("unknown sample family '" + s + "'");
}

/// Seed of sample i in a growth experiment.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t i) {
    return rng::CounterStream(seed, "growth-sample").bits(i);
}

inline MultiplicativeFunctionSpec draw_sample(SampleFamily family, const FactorizationTable& table,
                                              std::uint64_t N, std::uint64_t seed) {
    switch (family) {
        case SampleFamily::random_cm_sign:
            return random_completely_multiplicative(table, N, seed, RandomValues::signs);
        case SampleFamily::random_cm_circle:
            return random_completely_multiplicative(table, N, seed, RandomValues::unit_circle);
        case SampleFamily::one: return one_spec(table, N);
        case SampleFamily::liouville: return liouville_spec(table, N);
    }
    throw DomainError("bad sample family");
}

struct GrowthExperiment {
    std::vector<std::uint64_t> checkpoints;
    std::vector<std::uint64_t> sample_seeds;
    std::vector<DiscrepancyProfile> profiles;
    std::vector<double> min, median, max;
};

struct GrowthOptions {
    /// Use w(k) conj(a(k)) as the weight for sample a, so that for unit-modulus
    /// completely multiplicative a the sums collapse to a(d) sum_{k<=n} w(k).
    bool conjugate_match = false;
    unsigned workers = 1;
};

inline GrowthExperiment growth_experiment(SampleFamily family, const UnitDiscSequence& w, std::uint64_t N,
                                          std::vector<std::uint64_t> checkpoints, std::size_t samples,
                                          std::uint64_t seed, const FactorizationTable& table,
                                          const GrowthOptions& opt = {}) {
    require(samples >= 1, "growth experiment needs samples >= 1");
    require(N <= table.limit(), "growth experiment N exceeds factorization table");
    if (checkpoints.empty()) checkpoints = {N};
    GrowthExperiment out;
    out.checkpoints = checkpoints;
    out.profiles.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) out.sample_seeds.push_back(sample_seed(seed, i));
    parallel_chunks(samples, opt.workers, [&](std::size_t i) {
        auto a = materialize(draw_sample(family, table, N, out.sample_seeds[i]), table, N);
        ProfileOptions po;
        if (opt.conjugate_match) {
            auto matched = pointwise_product(w, conjugate(a));
            out.profiles[i] = discrepancy_profile(a, matched, N, checkpoints, po);
        } else {
            out.profiles[i] = discrepancy_profile(a, w, N, checkpoints, po);
        }
    });
    for (std::size_t b = 0; b < checkpoints.size(); ++b) {
        std::vector<double> v;
        for (const auto& p : out.profiles) v.push_back(p.values[b]);
        std::sort(v.begin(), v.end());
        out.min.push_back(v.front());
        out.max.push_back(v.back());
        std::size_t m = v.size() / 2;
        out.median.push_back(v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]));
    }
    return out;
}

} // namespace edlab
