// Acceptance run: one PASS/FAIL line per criterion, thresholds fixed below.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "edlab/edlab.hpp"
#include "edlab/runner.hpp"
#include "fixtures.hpp"

using namespace edlab;

namespace {

constexpr double kSearchSeconds = 10.0;
constexpr double kNetSeconds = 30.0;
constexpr double kNetBound = 1.8420680743952367;  // 2 * 0.1 * ln(10^4)
constexpr double kVarianceTol = 0.05;
constexpr double kGammaTol = 0.05;
constexpr double kLinearBound = 1.21;
constexpr double kPsdFloor = -1e-9;
constexpr double kDecouplingTol = 0.05;
constexpr int kSparseMinSuccesses = 19;
constexpr int kSparsePinnedSuccesses = 20;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("%s %2d  %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string num(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void criterion_1() {
    SearchOptions o;
    o.C = 1;
    auto t0 = std::chrono::steady_clock::now();
    auto r = max_length_search(o);
    double secs = seconds_since(t0);
    // independent oracle: every length-L sign vector, every progression
    auto feasible = [](std::uint32_t bits, int L) {
        for (int d = 1; d <= L; ++d) {
            int s = 0;
            for (int k = d; k <= L; k += d) {
                s += (bits >> (k - 1)) & 1 ? -1 : 1;
                if (s > 1 || s < -1) return false;
            }
        }
        return true;
    };
    int ok12 = 0, ok11 = 0;
    for (std::uint32_t b = 0; b < (1u << 12); ++b) ok12 += feasible(b, 12);
    for (std::uint32_t b = 0; b < (1u << 11); ++b) ok11 += feasible(b, 11);
    bool ok = r.max_length_found == 11 && r.status == SearchStatus::exhausted && r.infeasible_length == 12u &&
              secs < kSearchSeconds && ok12 == 0 && ok11 > 0;
    report(1, ok,
           "extremal search C=1: max_length=" + std::to_string(r.max_length_found) + ", status " +
               to_string(r.status) + ", infeasible at " +
               (r.infeasible_length ? std::to_string(*r.infeasible_length) : "-") + ", " + num(secs, 3) +
               " s; oracle: " + std::to_string(ok12) + "/4096 length-12 and " + std::to_string(ok11) +
               "/2048 length-11 vectors feasible");
}

void criterion_2() {
    const std::uint64_t N = 10000;
    const double eps = 0.1;
    FactorizationTable table(N);
    auto net = build_epsilon_net(eps);
    const auto pps = table.prime_powers_up_to(N);
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        // multiplicative, independent uniform unit-circle values at every prime power
        rng::CounterStream s(seed, "acceptance-net-f");
        std::map<std::uint64_t, cplx> values;
        for (auto q : pps) values.emplace_hint(values.end(), q, phase::unit_phase(s.uniform(q)));
        MultiplicativeFunctionSpec f("random-multiplicative", false, N, values, seed);
        auto fv = materialize(f, table, N), gv = materialize(project_to_net(f, net, N, table), table, N);
        for (std::uint64_t n = 1; n <= N; ++n) worst = std::max(worst, std::abs(fv[n] - gv[n]));
    }
    double secs = seconds_since(t0);
    bool ok = worst <= kNetBound && secs < kNetSeconds && std::abs(projection_error_bound(eps, N) - kNetBound) < 1e-15;
    report(2, ok,
           "eps-net approximation, 100 multiplicative f, N=1e4, eps=0.1: max |f-g| = " + num(worst) + " <= " +
               num(kNetBound, 5) + ", " + num(secs, 3) + " s");
}

void criterion_3() {
    bool ok = true;
    std::string detail;
    rng::CounterStream s(3, "acceptance-disc");
    std::vector<cplx> sample(100000);
    for (std::size_t i = 0; i < sample.size(); ++i)
        sample[i] = std::polar(std::sqrt(s.uniform(2 * i)), 6.283185307179586 * s.uniform(2 * i + 1));
    // the boundary is where projected constructions are tightest
    for (std::size_t i = 0; i < 1000; ++i) sample[i] = std::polar(1.0, 6.283185307179586 * i / 1000.0);
    for (double eps : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        auto net = build_epsilon_net(eps);
        double cover = 0;
        for (auto z : sample) {
            double best = 1e9;
            for (auto p : net.points()) best = std::min(best, std::abs(z - p));
            cover = std::max(cover, best);
        }
        bool here = net.size() <= 4.0 / (eps * eps) && cover <= eps;
        ok = ok && here;
        detail += " eps=" + num(eps, 2) + ":|B|=" + std::to_string(net.size()) + "/" + num(4 / (eps * eps), 5) +
                  ",cover=" + num(cover, 4);
    }
    report(3, ok, "net cardinality and covering (10^5 disc points):" + detail);
}

void criterion_4() {
    const std::uint64_t N = 1000000;
    auto b = random_sign_weight(N + 20, 2024);
    bool ok = true;
    std::string detail, logdetail;
    for (std::uint64_t H : {5, 10, 20}) {
        double v = window_variance(b, H, N, AverageMode::cesaro) / static_cast<double>(H);
        double vl = window_variance(b, H, N, AverageMode::logarithmic) / static_cast<double>(H);
        ok = ok && std::abs(v - 1) <= kVarianceTol;
        detail += " H=" + std::to_string(H) + ":" + num(v, 5);
        logdetail += " " + num(vl, 4);
    }
    report(4, ok, "window variance, iid signs, N=1e6, cesaro V(H)/H:" + detail + " (log mode, informational:" +
                      logdetail + ")");
}

void criterion_5() {
    const std::uint64_t N = 1000000;
    auto w = polynomial_phase_weight({tokens::kSqrt2, 0.0, 0.0}, N + 4);
    bool ok = true, pinned = true;
    std::string detail;
    for (std::uint64_t h = 1; h <= 4; ++h) {
        cplx g = self_correlation(w, h, N, AverageMode::logarithmic);
        ok = ok && std::abs(g) <= kGammaTol;
        pinned = pinned && std::abs(g - cplx(fixtures::kQuadGamma[h - 1][0], fixtures::kQuadGamma[h - 1][1])) < 1e-12;
        detail += " h=" + std::to_string(h) + ":" + num(std::abs(g), 4);
    }
    report(5, ok && pinned,
           "quadratic-phase self-correlations, log mode, N=1e6, |gamma(h)| <= 0.05:" + detail +
               (pinned ? " (match fixtures)" : " (fixture mismatch)"));
}

void criterion_6() {
    const std::uint64_t N = 1000000;
    auto a = constant_weight(1.0, N);
    auto w = linear_phase_weight(tokens::kSqrt2, N);
    auto p = discrepancy_profile(a, w, N, {N});
    double analytic = 1.0 / (2.0 * (tokens::kSqrt2 - 1.0));
    report(6, p.values.back() <= kLinearBound,
           "a=1, w=e(k sqrt2): profile at N=1e6 = " + num(p.values.back()) + " <= 1.21 (1/(2||sqrt2||) = " +
               num(analytic, 5) + ')');
}

void criterion_7() {
    int psd_ok = 0, dev_ok = 0, column_ok = 0, single_fail = 0;
    double worst_eig = 1e9, worst_ratio = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        rng::CounterStream s(seed, "acceptance-gram");
        FolnerBox box(1 + static_cast<unsigned>(s.below(0, 3)), 1 + static_cast<unsigned>(s.below(1, 4)));
        std::size_t m = 1 + s.below(2, 8);
        std::set<Rational> rs;
        for (std::uint64_t i = 0; rs.size() < m; ++i)
            rs.insert(Rational(static_cast<std::int64_t>(1 + s.below(10 + 2 * i, 8)),
                               static_cast<std::int64_t>(1 + s.below(11 + 2 * i, 8))));
        std::vector<Rational> R(rs.begin(), rs.end());
        std::vector<cplx> vals(box.max_element() * 8 + 1);
        for (std::size_t k = 1; k < vals.size(); ++k)
            vals[k] = std::polar(std::sqrt(s.uniform(1000 + 2 * k)), 6.283185307179586 * s.uniform(1001 + 2 * k));
        IntegerFunction a = [&](std::uint64_t n) { return n < vals.size() ? vals[n] : cplx(0, 0); };
        auto rep = gram_psd_check(a, R, box, GramForm::paper_form);
        psd_ok += rep.exact_min_eigenvalue >= kPsdFloor;
        dev_ok += rep.deviation_within_defect_bound;
        single_fail += !rep.deviation_within_defect_bound && R.size() == 1;
        column_ok += rep.deviation_within_column_bound;
        worst_eig = std::min(worst_eig, rep.exact_min_eigenvalue);
        if (rep.folner_defect_max > 0) worst_ratio = std::max(worst_ratio, rep.max_entry_deviation / (2 * rep.folner_defect_max));
    }
    report(7, psd_ok == 50 && dev_ok == 50,
           "Gram: exact form PSD in " + std::to_string(psd_ok) + "/50 (min eigenvalue " + num(worst_eig, 3) +
               "); paper deviation <= 2 max defect(r_i/r_j) in " + std::to_string(dev_ok) +
               "/50 (" + std::to_string(single_fail) + " of the misses have one rational r != 1, where the bound is 0; worst ratio elsewhere " + num(worst_ratio, 4) + "); <= defect(1/r_j) in " + std::to_string(column_ok) +
               "/50");
}

void criterion_8() {
    bool ok = true;
    std::string detail;
    for (unsigned E : {1u, 4u, 9u}) {
        FolnerBox box(2, E);
        double d = dilation_defect(box, Rational(2));
        ok = ok && d == 1.0 / (E + 1);
        detail += " E=" + std::to_string(E) + ":" + num(d, 17);
    }
    report(8, ok, "dilation defect of box P=2 at r=2 equals 1/(E+1) exactly:" + detail);
}

void criterion_9() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t N : {100u, 1000u}) {
        auto b = constant_weight(1.0, N);
        for (double delta : {0.1, 0.2, 0.3}) {
            auto r = bernstein_tail_mc(b, N, delta, 100000, 7);
            ok = ok && r.empirical_tail <= r.theoretical_bound + r.mc_halfwidth;
            detail += " (" + std::to_string(N) + "," + num(delta, 2) + "):" + num(r.empirical_tail, 3) + "/" +
                      num(r.theoretical_bound, 3);
        }
    }
    report(9, ok, "Bernstein tail, b=1, 1e5 trials, empirical/bound:" + detail);
}

void criterion_10() {
    const std::uint64_t r_max = 1000000, horizon = 2 * r_max + 2;
    auto even = tokens::make_sequence("even", horizon, nullptr);
    auto one = constant_weight(1.0, horizon);
    auto none = find_pattern_certificate(even, 1.0, 2, r_max);
    auto c1 = find_pattern_certificate(one, 1.0, 2, r_max);
    int found = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto w = sparse_random_weight({RhoRule::Kind::inverse_log, 1.0}, 1.0, horizon, seed);
        found += find_pattern_certificate(w, 1.0, 2, r_max).has_value();
    }
    bool ok = !none && c1 && c1->r == 1 && found >= kSparseMinSuccesses && found == kSparsePinnedSuccesses;
    report(10, ok,
           std::string("pattern certificates m=2: even indicator ") + (none ? "found one" : "none") +
               ", constant r=" + (c1 ? std::to_string(c1->r) : "-") + ", sparse 1/log k " + std::to_string(found) +
               "/20 seeds (pinned " + std::to_string(kSparsePinnedSuccesses) + ")");
}

void criterion_11() {
    const std::uint64_t N = 1000000;
    FactorizationTable table(N);
    auto lam = materialize(liouville_spec(table, N), table, N);
    auto w = polynomial_phase_weight({tokens::kSqrt2, 0.0, 0.0}, N);
    cplx m = average_of([&](std::size_t n) { return lam[n] * w[n]; }, N, AverageMode::logarithmic);
    bool pinned = std::abs(m - cplx(fixtures::kLiouvilleQuad[0], fixtures::kLiouvilleQuad[1])) < 1e-12;
    report(11, std::abs(m) <= kDecouplingTol && pinned,
           "|E^log lambda(n) e(n^2 sqrt2)| at N=1e6 = " + num(std::abs(m), 5) + " <= 0.05" +
               (pinned ? " (matches fixture)" : " (fixture mismatch)"));
}

void criterion_12() {
    // profile against brute force
    bool prof = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        for (std::uint64_t N : {50u, 200u}) {
            auto a = random_sign_weight(N, seed);
            auto w = polynomial_phase_weight({tokens::kSqrt2, 0.0, 0.0}, N);
            prof = prof && discrepancy_profile(a, w, N, {N}).values.back() == brute_force_discrepancy(a, w, N);
        }
    // window variance against the double sum, integer-valued so both are exact
    bool var = true;
    const std::uint64_t N = 1000;
    auto b = random_sign_weight(N + 20, 11);
    for (std::uint64_t H : {1u, 5u, 20u}) {
        double direct = 0;
        for (std::uint64_t n = 1; n <= N; ++n)
            for (std::uint64_t h1 = 1; h1 <= H; ++h1)
                for (std::uint64_t h2 = 1; h2 <= H; ++h2) direct += (b[n + h1] * std::conj(b[n + h2])).real();
        var = var && window_variance(b, H, N, AverageMode::cesaro) == direct / N;
    }
    // tiny net class at N = 8, eps = 1, against deduplicated sampling
    FactorizationTable table(8);
    auto one = constant_weight(1.0, 8);
    bool net = true;
    for (double eps : {1.0, 0.9}) {
        auto cls = static_cast<std::uint64_t>(std::pow(build_epsilon_net(eps).size(), table.prime_powers_up_to(8).size()));
        double ex = net_orthogonality_exhaustive(one, 1, {0}, 8, eps, 3, table);
        auto sm = net_orthogonality_sampled_dedup(one, 1, {0}, 8, eps, 3, table, cls, 10'000'000);
        net = net && sm.distinct == cls && sm.max_abs_average == ex;
    }
    report(12, prof && var && net,
           std::string("brute-force equivalences: profile ") + (prof ? "=" : "!=") + " brute force (N<=200), window variance " +
               (var ? "=" : "!=") + " double sum (N=1e3), net class N=8 " + (net ? "=" : "!=") + " dedup sampling");
}

void criterion_13() {
    using namespace edlab::runner;
    auto cfg = [](std::string cmd, std::map<std::string, std::string> p, std::optional<std::uint64_t> seed) {
        ExperimentConfig c;
        c.command = std::move(cmd);
        c.params = std::move(p);
        c.seed = seed;
        return complete(c);
    };
    const std::vector<ExperimentConfig> runs{
        cfg("randomized bernstein", {{"w", "ones"}, {"N", "1000"}, {"delta", "0.1"}, {"trials", "100000"}}, 7),
        cfg("randomized orthogonality",
            {{"a", "ones"}, {"ell", "1"}, {"shifts", "0"}, {"N-grid", "1000,10000,100000"}, {"samples", "50"}}, 2024),
        cfg("discrepancy growth", {{"family", "random_cm_sign"}, {"w", "poly:2:sqrt2"}, {"N", "100000"}, {"samples", "8"}},
            2024),
        cfg("randomized bernstein", {{"w", "ones"}, {"N", "100"}, {"delta", "0.3"}, {"trials", "100000"}}, 7),
        cfg("certificate net", {{"epsilon", "0.1"}, {"N", "10000"}, {"samples", "100"}}, 5),
        cfg("correlate variance", {{"w", "random-sign:2024"}, {"H", "5,10,20"}, {"N", "1000000"}, {"mode", "cesaro"}},
            std::nullopt),
        cfg("certificate pattern", {{"w", "sparse:inverse_log:3"}, {"m", "2"}, {"r-max", "1000000"}}, std::nullopt),
        cfg("gram check", {{"a", "random-sign:9"}, {"r", "1/2,2/3,3,5/4"}, {"P", "3"}, {"E", "4"}, {"form", "paper"}},
            std::nullopt),
    };
    auto strip = [](const std::string& payload) {
        auto j = json::parse(payload);
        j.erase("metadata");
        return j.dump();
    };
    int same = 0;
    for (auto c : runs) {
        c.workers = 1;
        auto a = strip(execute(c).payload), a2 = strip(execute(c).payload);
        c.workers = 8;
        auto b = strip(execute(c).payload);
        same += a == a2 && a == b;
    }
    report(13, same == static_cast<int>(runs.size()),
           "determinism: " + std::to_string(same) + "/" + std::to_string(runs.size()) +
               " randomized runs byte-identical across repeats and at 1 vs 8 workers");
}

} // namespace

int main() {
    const std::vector<std::function<void()>> all{criterion_1, criterion_2,  criterion_3,  criterion_4, criterion_5,
                                                 criterion_6, criterion_7,  criterion_8,  criterion_9, criterion_10,
                                                 criterion_11, criterion_12, criterion_13};
    for (const auto& c : all) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("FAIL     exception: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, all.size());
    return failures ? 1 : 0;
}
