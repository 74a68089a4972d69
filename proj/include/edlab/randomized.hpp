#pragma once

/**
 * @file randomized.hpp
 * @brief Monte-Carlo checks of the concentration bound
 *        P(|E_{n<=N} X_n b(n)| >= delta) <= exp(-delta^2 N / 4)
 *        for independent fair signs X_n, and of the orthogonality
 *        E_{n<=N} a(n) X_n prod_j g_j(n + h_j) -> 0 over net-valued
 *        multiplicative g_j supported on [N].
 *
 * Randomness comes from rng::CounterStream; every draw is addressed by
 * (trial, index), so results are reproducible at any worker count.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "edlab/error.hpp"
#include "edlab/net.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/parallel.hpp"
#include "edlab/rng.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

struct BinomialInterval {
    double lower;
    double upper;
};

/// Exact (Clopper-Pearson) two-sided interval for k successes in n trials.
inline BinomialInterval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95) {
    require(n >= 1 && k <= n, "binomial interval needs 0 <= k <= n, n >= 1");
    const double alpha = 1.0 - confidence;
    const double kd = static_cast<double>(k), nd = static_cast<double>(n);
    double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, alpha / 2.0);
    double hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - alpha / 2.0);
    return {lo, hi};
}

inline double bernstein_bound(std::uint64_t N, double delta) {
    return std::exp(-0.25 * delta * delta * static_cast<double>(N));
}

struct TailReport {
    std::uint64_t N = 0;
    double delta = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t exceedances = 0;
    double empirical_tail = 0.0;
    double theoretical_bound = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double mc_halfwidth = 0.0;  // max distance from the estimate to the 95% interval ends
};

/// Fraction of `trials` sign vectors X with |(1/N) sum X_n b(n)| >= delta.
/// Trial t takes its signs from the bits of stream words t * ceil(N/64) + block.
inline TailReport bernstein_tail_mc(const UnitDiscSequence& b, std::uint64_t N, double delta, std::uint64_t trials,
                                    std::uint64_t seed, unsigned workers = 1) {
    require(trials >= 1, "trials must be >= 1");
    require(N >= 1 && N <= b.size(), "bernstein_tail_mc needs 1 <= N <= length of b");
    require(delta > 0.0, "delta must be > 0");
    rng::CounterStream stream(seed, "bernstein");
    const std::uint64_t blocks = (N + 63) / 64;
    constexpr std::uint64_t kTrialsPerChunk = 1024;
    const std::size_t chunks = static_cast<std::size_t>((trials + kTrialsPerChunk - 1) / kTrialsPerChunk);
    std::vector<std::uint64_t> counts(chunks, 0);
    parallel_chunks(chunks, workers, [&](std::size_t c) {
        std::uint64_t lo = c * kTrialsPerChunk, hi = std::min(trials, lo + kTrialsPerChunk);
        for (std::uint64_t t = lo; t < hi; ++t) {
            cplx s{0.0, 0.0};
            for (std::uint64_t blk = 0; blk < blocks; ++blk) {
                std::uint64_t bits = stream.bits(t * blocks + blk);
                std::uint64_t first = blk * 64 + 1, last = std::min(N, first + 63);
                for (std::uint64_t n = first; n <= last; ++n, bits >>= 1) s += (bits & 1) ? -b[n] : b[n];
            }
            if (std::abs(s / static_cast<double>(N)) >= delta) ++counts[c];
        }
    });
    TailReport r;
    r.N = N;
    r.delta = delta;
    r.trials = trials;
    r.seed = seed;
    for (auto k : counts) r.exceedances += k;
    r.empirical_tail = static_cast<double>(r.exceedances) / static_cast<double>(trials);
    r.theoretical_bound = bernstein_bound(N, delta);
    auto ci = clopper_pearson(r.exceedances, trials);
    r.ci_lower = ci.lower;
    r.ci_upper = ci.upper;
    r.mc_halfwidth = std::max(ci.upper - r.empirical_tail, r.empirical_tail - ci.lower);
    return r;
}

// ---------------------------------------------------------------------------
// orthogonality against net-valued multiplicative functions

/// g(1..N) for the multiplicative function with prime-power values value(q).
template <typename ValueAt>
std::vector<cplx> materialize_prime_power_values(const FactorizationTable& table, std::uint64_t N, ValueAt&& value) {
    require(N <= table.limit(), "materialization beyond the factorization table");
    std::vector<cplx> g(N + 1);
    std::vector<std::uint64_t> ppart(N + 1, 1);
    if (N >= 1) g[1] = {1.0, 0.0};
    for (std::uint64_t n = 2; n <= N; ++n) {
        std::uint64_t p = table.smallest_prime_factor(n);
        std::uint64_t rest = n / p;
        ppart[n] = (rest % p == 0) ? ppart[rest] * p : p;
        g[n] = ppart[n] == n ? value(n) : g[ppart[n]] * g[n / ppart[n]];
    }
    return g;
}

struct OrthogonalityRow {
    std::uint64_t N = 0;
    double epsilon = 0.0;
    std::size_t net_size = 0;
    double delta = 0.0;  // (log N)^(-1/3)
    std::uint64_t samples = 0;
    double max_abs_average = 0.0;
};

struct OrthogonalityReport {
    unsigned ell = 0;
    std::vector<std::uint64_t> shifts;
    std::uint64_t seed = 0;
    std::vector<OrthogonalityRow> rows;
};

namespace detail {
/// (1/N) sum_{n<=N} a(n) X_n prod_j g_j(n + h_j), with g_j = 0 beyond N.
inline cplx orthogonality_average(const UnitDiscSequence& a, const std::vector<int>& X,
                                  const std::vector<std::vector<cplx>>& g, const std::vector<std::uint64_t>& shifts,
                                  std::uint64_t N) {
    return deterministic_sum<cplx>(1, N + 1,
                                   [&](std::size_t n) {
                                       cplx v = a[n] * static_cast<double>(X[n]);
                                       for (std::size_t j = 0; j < g.size(); ++j) {
                                           std::uint64_t k = n + shifts[j];
                                           v *= k <= N ? g[j][k] : cplx(0.0, 0.0);
                                       }
                                       return v;
                                   }) /
           static_cast<double>(N);
}

inline std::vector<int> sign_realization(std::uint64_t seed, std::uint64_t N) {
    rng::CounterStream xs(seed, "orthogonality-X");
    std::vector<int> X(N + 1, 0);
    for (std::uint64_t n = 1; n <= N; ++n) X[n] = xs.sign(n);
    return X;
}
} // namespace detail

/// For each N in the grid: one fixed sign realization X (shared across N),
/// `samples` random ell-tuples of multiplicative functions with prime-power
/// values drawn uniformly from the epsilon_N-net, epsilon_N = (log N)^-2 unless
/// overridden; reports the largest |average| seen.
inline OrthogonalityReport net_orthogonality_experiment(const UnitDiscSequence& a, unsigned ell,
                                                        const std::vector<std::uint64_t>& shifts,
                                                        const std::vector<std::uint64_t>& N_grid,
                                                        std::uint64_t samples, std::uint64_t seed,
                                                        const FactorizationTable& table, unsigned workers = 1,
                                                        std::optional<double> epsilon_override = std::nullopt) {
    require(ell >= 1, "ell must be >= 1");
    require(shifts.size() == ell, "need exactly ell shifts");
    require(samples >= 1, "samples_per_N must be >= 1");
    require(!N_grid.empty(), "N grid is empty");
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        require(N_grid[i] >= 3, "N grid values must be >= 3");
        require(i == 0 || N_grid[i] > N_grid[i - 1], "N grid must be increasing");
    }
    require(N_grid.back() <= a.size(), "a must be materialized to the largest N");
    require(N_grid.back() <= table.limit(), "largest N exceeds the factorization table");

    OrthogonalityReport rep{ell, shifts, seed, {}};
    const auto X = detail::sign_realization(seed, N_grid.back());
    rng::CounterStream root(seed, "orthogonality-g");
    for (std::uint64_t N : N_grid) {
        double logN = std::log(static_cast<double>(N));
        double eps = epsilon_override.value_or(1.0 / (logN * logN));
        EpsilonNet net = build_epsilon_net(eps);
        const auto& pts = net.points();
        std::vector<double> best(samples, 0.0);
        parallel_chunks(samples, workers, [&](std::size_t s) {
            std::vector<std::vector<cplx>> g(ell);
            for (unsigned j = 0; j < ell; ++j) {
                auto stream = root.child(N).child(s).child(j);
                g[j] = materialize_prime_power_values(
                    table, N, [&](std::uint64_t q) { return pts[stream.below(q, pts.size())]; });
            }
            best[s] = std::abs(detail::orthogonality_average(a, X, g, shifts, N));
        });
        rep.rows.push_back({N, eps, net.size(), std::pow(logN, -1.0 / 3.0), samples,
                            *std::max_element(best.begin(), best.end())});
    }
    return rep;
}

/// Exhaustive maximum over every ell-tuple of epsilon-net-valued
/// multiplicative functions on [N] (class size |net|^(ell * #prime powers)).
inline double net_orthogonality_exhaustive(const UnitDiscSequence& a, unsigned ell,
                                           const std::vector<std::uint64_t>& shifts, std::uint64_t N,
                                           double epsilon, std::uint64_t seed, const FactorizationTable& table,
                                           std::uint64_t max_class = 1'000'000) {
    require(shifts.size() == ell && ell >= 1, "need exactly ell >= 1 shifts");
    require(N <= a.size() && N <= table.limit(), "N beyond a or the factorization table");
    EpsilonNet net = build_epsilon_net(epsilon);
    const auto pps = table.prime_powers_up_to(N);
    const std::size_t slots = ell * pps.size();
    double class_size = std::pow(static_cast<double>(net.size()), static_cast<double>(slots));
    if (class_size > static_cast<double>(max_class))
        throw ResourceError("exhaustive net class has " + std::to_string(class_size) + " members, cap is " +
                            std::to_string(max_class));
    const auto X = detail::sign_realization(seed, N);
    std::vector<std::size_t> digit(slots, 0);
    double best = 0.0;
    for (;;) {
        std::vector<std::vector<cplx>> g(ell);
        for (unsigned j = 0; j < ell; ++j) {
            std::map<std::uint64_t, std::size_t> idx;
            for (std::size_t t = 0; t < pps.size(); ++t) idx[pps[t]] = digit[j * pps.size() + t];
            g[j] = materialize_prime_power_values(table, N, [&](std::uint64_t q) { return net.points()[idx.at(q)]; });
        }
        best = std::max(best, std::abs(detail::orthogonality_average(a, X, g, shifts, N)));
        std::size_t pos = 0;
        while (pos < slots && ++digit[pos] == net.size()) digit[pos++] = 0;
        if (pos == slots) break;
    }
    return best;
}

struct DedupSampleResult {
    double max_abs_average = 0.0;
    std::uint64_t draws = 0;
    std::uint64_t distinct = 0;
};

/// Random sampling of the same class, deduplicated, until `target_distinct`
/// distinct tuples have been evaluated (or `max_draws` is hit).
inline DedupSampleResult net_orthogonality_sampled_dedup(const UnitDiscSequence& a, unsigned ell,
                                                         const std::vector<std::uint64_t>& shifts, std::uint64_t N,
                                                         double epsilon, std::uint64_t seed,
                                                         const FactorizationTable& table,
                                                         std::uint64_t target_distinct, std::uint64_t max_draws) {
    require(shifts.size() == ell && ell >= 1, "need exactly ell >= 1 shifts");
    EpsilonNet net = build_epsilon_net(epsilon);
    const auto pps = table.prime_powers_up_to(N);
    const std::size_t slots = ell * pps.size();
    const auto X = detail::sign_realization(seed, N);
    rng::CounterStream stream(seed, "orthogonality-dedup");
    std::set<std::vector<std::size_t>> seen;
    DedupSampleResult out;
    while (seen.size() < target_distinct && out.draws < max_draws) {
        std::vector<std::size_t> digit(slots);
        for (std::size_t t = 0; t < slots; ++t) digit[t] = stream.below(out.draws * slots + t, net.size());
        ++out.draws;
        if (!seen.insert(digit).second) continue;
        std::vector<std::vector<cplx>> g(ell);
        for (unsigned j = 0; j < ell; ++j) {
            std::map<std::uint64_t, std::size_t> idx;
            for (std::size_t t = 0; t < pps.size(); ++t) idx[pps[t]] = digit[j * pps.size() + t];
            g[j] = materialize_prime_power_values(table, N, [&](std::uint64_t q) { return net.points()[idx.at(q)]; });
        }
        out.max_abs_average = std::max(out.max_abs_average, std::abs(detail::orthogonality_average(a, X, g, shifts, N)));
    }
    out.distinct = seen.size();
    return out;
}

} // namespace edlab
