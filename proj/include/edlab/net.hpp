#pragma once

/**
 * @file net.hpp
 * @brief Finite epsilon-nets of the closed unit disc and projection of
 *        multiplicative functions onto net-valued ones.
 *
 * Several constructions, each covering by construction; the smallest wins
 * (ties keep the earlier one in this list):
 *
 *  - origin:  {0}, valid for epsilon >= 1.
 *  - grid:    square lattice of pitch epsilon*sqrt(2), through the origin or
 *             shifted by half a cell; every lattice point within 1 + epsilon
 *             of the origin, projected radially onto the disc.  The lattice
 *             point nearest to z is within epsilon of z, and radial
 *             projection onto the disc does not increase distance to points
 *             of the disc.
 *  - hex:     the same with a triangular lattice of side epsilon*sqrt(3),
 *             through the origin or with a deep hole there.
 *  - ring:    {0} plus k equally spaced points on the unit circle, valid for
 *             epsilon > 1/2 when cos(pi/k) >= max(1 - eps^2/2, 1/(2 eps)).
 *  - square:  (+-1/2, +-1/2), covering radius 1/sqrt(2).
 *
 * Together these stay below 4 / epsilon^2 points for every epsilon in (0, 1].
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "edlab/error.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/phase.hpp"

namespace edlab {

class EpsilonNet {
  public:
    enum class Construction { origin, grid, hex, ring, square };

    EpsilonNet(double epsilon, std::vector<cplx> points, Construction how)
        : epsilon_(epsilon), points_(std::move(points)), construction_(how) {
        build_index();
    }

    double epsilon() const noexcept { return epsilon_; }
    const std::vector<cplx>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    Construction construction() const noexcept { return construction_; }

    /// Index of the net point nearest to z (ties: smallest index).
    std::size_t nearest_index(cplx z) const {
        auto [cx, cy] = cell_of(z);
        std::size_t best = npos;
        double best_d = std::numeric_limits<double>::infinity();
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                long x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= cells_ || y >= cells_) continue;
                std::size_t cell = static_cast<std::size_t>(y * cells_ + x);
                for (std::size_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k) {
                    std::size_t i = members_[k];
                    double d = std::norm(points_[i] - z);
                    if (d < best_d || (d == best_d && i < best)) best_d = d, best = i;
                }
            }
        if (best == npos || best_d > epsilon_ * epsilon_ * (1.0 + 1e-9)) {
            // z outside the disc or numerically on the edge of a cell block
            for (std::size_t i = 0; i < points_.size(); ++i) {
                double d = std::norm(points_[i] - z);
                if (d < best_d || (d == best_d && i < best)) best_d = d, best = i;
            }
        }
        return best;
    }

    cplx nearest(cplx z) const { return points_[nearest_index(z)]; }

    bool contains(cplx z) const { return points_[nearest_index(z)] == z; }

  private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::pair<long, long> cell_of(cplx z) const {
        auto coord = [&](double t) {
            long c = static_cast<long>(std::floor((t + 1.0) / cell_size_));
            return std::clamp(c, 0L, cells_ - 1);
        };
        return {coord(z.real()), coord(z.imag())};
    }

    void build_index() {
        cell_size_ = std::min(2.0, epsilon_);
        cells_ = static_cast<long>(std::ceil(2.0 / cell_size_)) + 1;
        std::size_t ncell = static_cast<std::size_t>(cells_ * cells_);
        offsets_.assign(ncell + 1, 0);
        std::vector<std::size_t> cell_id(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            auto [x, y] = cell_of(points_[i]);
            cell_id[i] = static_cast<std::size_t>(y * cells_ + x);
            ++offsets_[cell_id[i] + 1];
        }
        for (std::size_t c = 0; c < ncell; ++c) offsets_[c + 1] += offsets_[c];
        members_.resize(points_.size());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t i = 0; i < points_.size(); ++i) members_[fill[cell_id[i]]++] = i;
    }

    double epsilon_;
    std::vector<cplx> points_;
    Construction construction_;
    double cell_size_ = 1.0;
    long cells_ = 1;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> members_;
};

inline const char* to_string(EpsilonNet::Construction c) {
    switch (c) {
        case EpsilonNet::Construction::origin: return "origin";
        case EpsilonNet::Construction::grid: return "grid";
        case EpsilonNet::Construction::hex: return "hex";
        case EpsilonNet::Construction::ring: return "ring";
        case EpsilonNet::Construction::square: return "square";
    }
    return "?";
}

namespace detail {

/// Lattice {o + i b1 + j b2} with covering radius `cover`, restricted to points
/// within 1 + cover of the origin and projected radially onto the disc.
inline std::vector<cplx> projected_lattice(cplx b1, cplx b2, cplx offset, double cover) {
    const double reach = 1.0 + cover;
    const double h = std::abs(b2.imag());  // row spacing; b1 is horizontal
    const long J = static_cast<long>(std::ceil((reach + std::abs(offset)) / h)) + 1;
    const long I = static_cast<long>(std::ceil((reach + std::abs(offset)) / std::abs(b1))) + J + 1;
    std::vector<cplx> pts;
    for (long j = -J; j <= J; ++j)
        for (long i = -I; i <= I; ++i) {
            cplx g = offset + static_cast<double>(i) * b1 + static_cast<double>(j) * b2;
            double r = std::abs(g);
            if (r > reach * (1.0 + 1e-12)) continue;
            if (r > 1.0) g /= r;
            pts.push_back(g);
        }
    // origin first, then by radius and angle; drop exact duplicates
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        double ra = std::abs(a), rb = std::abs(b);
        if ((ra == 0.0) != (rb == 0.0)) return ra == 0.0;
        if (ra != rb) return ra < rb;
        return std::arg(a) < std::arg(b);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Lattice spacings are shrunk by 1e-12 so that deep holes sit strictly inside epsilon.
inline constexpr double kShrink = 1.0 - 1e-12;

inline std::vector<cplx> projected_grid(double epsilon, bool shifted = false) {
    const double pitch = epsilon * std::numbers::sqrt2 * kShrink;
    cplx o = shifted ? cplx(pitch / 2.0, pitch / 2.0) : cplx(0.0, 0.0);
    return projected_lattice({pitch, 0.0}, {0.0, pitch}, o, epsilon);
}

/// Triangular lattice of side epsilon*sqrt(3) (covering radius epsilon).
inline std::vector<cplx> projected_hex(double epsilon, bool shifted = false) {
    const double side = epsilon * std::sqrt(3.0) * kShrink;
    const double h = side * std::sqrt(3.0) / 2.0;
    cplx o = shifted ? cplx(side / 2.0, h / 3.0) : cplx(0.0, 0.0);  // deep hole at the origin
    return projected_lattice({side, 0.0}, {side / 2.0, h}, o, epsilon);
}

inline std::vector<cplx> ring(double epsilon) {
    if (epsilon <= 0.5) return {};
    const double need = std::max(1.0 - epsilon * epsilon / 2.0, 1.0 / (2.0 * epsilon)) + 1e-12;
    if (need >= 1.0) return {};
    unsigned k = 3;
    while (std::cos(std::numbers::pi / k) < need) ++k;
    std::vector<cplx> pts{cplx(0.0, 0.0)};
    for (unsigned j = 0; j < k; ++j) pts.push_back(phase::unit_phase(static_cast<double>(j) / k));
    return pts;
}

} // namespace detail

/// Deterministic epsilon-net of the unit disc, epsilon in (0, 2].
inline EpsilonNet build_epsilon_net(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 2.0))
        throw DomainError("epsilon must lie in (0, 2], got " + std::to_string(epsilon));
    using C = EpsilonNet::Construction;
    if (epsilon >= 1.0) return EpsilonNet(epsilon, {cplx(0.0, 0.0)}, C::origin);

    std::vector<cplx> best = detail::projected_grid(epsilon);
    C how = C::grid;
    auto consider = [&](std::vector<cplx> pts, C c) {
        if (!pts.empty() && pts.size() < best.size()) best = std::move(pts), how = c;
    };
    consider(detail::projected_grid(epsilon, true), C::grid);
    consider(detail::projected_hex(epsilon), C::hex);
    consider(detail::projected_hex(epsilon, true), C::hex);
    consider(detail::ring(epsilon), C::ring);
    if (epsilon >= std::numbers::sqrt2 / 2.0 + 1e-12 && best.size() > 4) {
        best = {cplx(0.5, 0.5), cplx(-0.5, 0.5), cplx(-0.5, -0.5), cplx(0.5, -0.5)};
        how = C::square;
    }
    return EpsilonNet(epsilon, std::move(best), how);
}

/// g with every prime-power value in the net, g(q) = nearest net point to f(q)
/// for each prime power q <= N.  g is multiplicative (not completely).
inline MultiplicativeFunctionSpec project_to_net(const MultiplicativeFunctionSpec& f, const EpsilonNet& net,
                                                 std::uint64_t N, const FactorizationTable& table) {
    check_evaluable(f, table, N);
    std::map<std::uint64_t, cplx> values;
    for (std::uint64_t q : table.prime_powers_up_to(N)) {
        auto pp = table.factorize(q).front();
        values.emplace_hint(values.end(), q, net.nearest(f.prime_power_value(pp.prime, pp.exponent, q)));
    }
    // all net points lie in the disc, so the result is never completely multiplicative by accident
    return MultiplicativeFunctionSpec(f.label() + "@net(" + std::to_string(net.epsilon()) + ")", false, N,
                                      std::move(values), f.seed());
}

inline MultiplicativeFunctionSpec project_to_net(const MultiplicativeFunctionSpec& f, double epsilon,
                                                 std::uint64_t N, const FactorizationTable& table) {
    return project_to_net(f, build_epsilon_net(epsilon), N, table);
}

/// Bound on |f(n) - g(n)| over n <= N for the projection above (natural log).
inline double projection_error_bound(double epsilon, std::uint64_t N) {
    return 2.0 * epsilon * std::log(static_cast<double>(N));
}

struct NetClassCounts {
    std::uint64_t prime_power_count = 0;
    std::size_t net_size = 0;
    double log_exact_class_size = 0.0;  // ell * prime_power_count * log |net|
    double log_paper_bound = 0.0;       // 4 ell log(2/eps) N / log N
    bool prime_powers_within_2N_over_logN = false;
    bool exact_within_bound = false;
};

/// Size of the class of ell-tuples of net-valued multiplicative functions on [N].
inline NetClassCounts net_class_counts(unsigned ell, double epsilon, std::uint64_t N,
                                       const FactorizationTable& table) {
    require(ell >= 1, "ell must be >= 1");
    require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
    require(N >= 2, "N must be >= 2");
    NetClassCounts out;
    out.prime_power_count = table.prime_powers_up_to(N).size();
    out.net_size = build_epsilon_net(epsilon).size();
    double logN = std::log(static_cast<double>(N));
    out.log_exact_class_size =
        static_cast<double>(ell) * static_cast<double>(out.prime_power_count) * std::log(out.net_size);
    out.log_paper_bound = 4.0 * ell * std::log(2.0 / epsilon) * static_cast<double>(N) / logN;
    out.prime_powers_within_2N_over_logN = static_cast<double>(out.prime_power_count) <= 2.0 * N / logN;
    out.exact_within_bound = out.log_exact_class_size <= out.log_paper_bound;
    return out;
}

} // namespace edlab
