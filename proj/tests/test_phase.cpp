#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "edlab/phase.hpp"
#include "edlab/rng.hpp"

using namespace edlab;

namespace {

// Exact oracle for frac(alpha k^j): alpha = m 2^-s with s <= 64, so the
// fractional part is (m k^j mod 2^s) / 2^s, computed with wrapping integers.
struct Dyadic {
    std::uint64_t m;
    int s;
};

Dyadic to_dyadic(double alpha) {
    alpha -= std::floor(alpha);  // exact for doubles
    if (alpha == 0.0) return {0, 0};
    int e;
    double f = std::frexp(alpha, &e);  // alpha = f 2^e, f in [0.5, 1)
    auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
    int s = 53 - e;
    while (s > 0 && !(m & 1)) m >>= 1, --s;
    return {m, s};
}

unsigned __int128 residue(Dyadic d, std::uint64_t k, unsigned j, int S) {
    // m k^j mod 2^S, shifted to the common denominator 2^S (S <= 64)
    unsigned __int128 r = d.m;
    for (unsigned i = 0; i < j; ++i) r = (r * k) & ((static_cast<unsigned __int128>(1) << S) - 1);
    return (r << (S - d.s)) & ((static_cast<unsigned __int128>(1) << S) - 1);
}

double exact_frac(const std::vector<double>& coeffs, std::uint64_t k) {
    std::vector<Dyadic> ds;
    int S = 0;
    for (double a : coeffs) {
        ds.push_back(to_dyadic(a));
        if (a != 0.0) S = std::max(S, ds.back().s);
    }
    EXPECT_LE(S, 64);
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << S) - 1;
    unsigned __int128 acc = 0;
    unsigned degree = static_cast<unsigned>(coeffs.size() - 1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        acc = (acc + residue(ds[i], k, degree - static_cast<unsigned>(i), S)) & mask;
    }
    return std::ldexp(static_cast<double>(acc), -S);
}

double circ_dist(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
}

} // namespace

TEST(Phase, OracleSelfCheck) {
    EXPECT_EQ(exact_frac({0.5, 0.0}, 3), 0.5);
    EXPECT_EQ(exact_frac({0.25, 0.0, 0.0}, 3), 0.25);
    EXPECT_EQ(exact_frac({0.75, 0.125}, 1), 0.875);
}

TEST(Phase, QuadraticSqrt2MatchesExactOracle) {
    const std::vector<double> P{std::numbers::sqrt2, 0.0, 0.0};
    double worst = 0.0;
    for (std::uint64_t k : {1ull, 2ull, 3ull, 1000ull, 123457ull, 999999ull, 1000000ull, 10000000ull})
        worst = std::max(worst, circ_dist(phase::polynomial_frac(P, k), exact_frac(P, k)));
    rng::CounterStream s(3, "phase-test");
    for (std::uint64_t i = 0; i < 2000; ++i) {
        std::uint64_t k = 1 + s.below(i, 10'000'000);
        worst = std::max(worst, circ_dist(phase::polynomial_frac(P, k), exact_frac(P, k)));
    }
    EXPECT_EQ(worst, 0.0);
}

TEST(Phase, DegreeFourMatchesExactOracle) {
    const std::vector<double> P{std::numbers::sqrt2, -0.7, std::numbers::pi, 0.3, 0.1};
    double worst = 0.0;
    rng::CounterStream s(4, "phase-test");
    for (std::uint64_t i = 0; i < 2000; ++i) {
        std::uint64_t k = 1 + s.below(i, 10'000'000);
        worst = std::max(worst, circ_dist(phase::polynomial_frac(P, k), exact_frac(P, k)));
    }
    // every intermediate is a multiple of 2^-64, so the double-double path is exact
    EXPECT_EQ(worst, 0.0);
}

TEST(Phase, FirstValueOfSqrt2) {
    double f = phase::polynomial_frac(std::vector<double>{std::numbers::sqrt2, 0.0, 0.0}, 1);
    EXPECT_NEAR(f, 0.41421356237309515, 1e-16);
}

TEST(Phase, FracStaysInUnitInterval) {
    const std::vector<double> P{0.999999999999, 0.5, -0.25};
    for (std::uint64_t k = 1; k < 5000; ++k) {
        double f = phase::polynomial_frac(P, k);
        ASSERT_GE(f, 0.0);
        ASSERT_LT(f, 1.0);
    }
}

TEST(Phase, UnitPhaseExactAtQuarterPoints) {
    EXPECT_EQ(phase::unit_phase(0.0), cplx(1, 0));
    EXPECT_EQ(phase::unit_phase(0.25), cplx(0, 1));
    EXPECT_EQ(phase::unit_phase(0.5), cplx(-1, 0));
    EXPECT_EQ(phase::unit_phase(0.75), cplx(0, -1));
    EXPECT_EQ(phase::unit_phase(3.5), cplx(-1, 0));
    EXPECT_EQ(phase::unit_phase(-0.25), cplx(0, -1));
}

TEST(Phase, UnitPhaseMatchesPolar) {
    for (int i = 0; i < 1000; ++i) {
        double t = i * 0.001237;
        cplx z = phase::unit_phase(t), ref = std::polar(1.0, 2.0 * std::numbers::pi * t);
        ASSERT_LT(std::abs(z - ref), 1e-14);
        ASSERT_NEAR(std::abs(z), 1.0, 1e-15);
    }
}
