#pragma once

// Values frozen from oracle runs (an exact-integer phase evaluation and an
// Omega sieve, independent of the library). Tests recompute the oracle where
// it is cheap and compare both against these.

#include <complex>
#include <cstdint>

namespace fixtures {

// gamma(h) = E^log_{n<=1e6} e((n+h)^2 sqrt2) conj(e(n^2 sqrt2)), h = 1..4
inline constexpr double kQuadGamma[4][2] = {
    {0.038360584359626436, 0.060588211437693835},
    {-0.0067974128357019331, 0.051721430236705751},
    {0.0098308969176056603, 0.047179104553718848},
    {0.053912958249669934, -0.0028240088430850421},
};

// E^log_{n<=1e6} lambda(n) e(n^2 sqrt2)
inline constexpr double kLiouvilleQuad[2] = {-0.032407221801575743, 0.0536817262312436};

// discrepancy profile of lambda against w = 1: max |L(n)| and its first argmax
inline constexpr std::uint64_t kLiouvilleCheckpoints[3] = {100, 10000, 1000000};
inline constexpr double kLiouvilleProfile[3] = {10, 128, 1253};
inline constexpr std::uint64_t kLiouvilleArgmax[3] = {80, 9840, 925985};

// growth experiment: 20 random completely multiplicative +-1 samples (seed 2024)
// against w = e(k^2 sqrt2), medians of the profile at 1e3, 1e4, 1e5
inline constexpr double kGrowthQuadMedians[3] = {32.289110828978842, 95.794383506441605, 362.74823149740052};

} // namespace fixtures
