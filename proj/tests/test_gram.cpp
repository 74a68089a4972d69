#include <gtest/gtest.h>

#include <cmath>

#include "edlab/gram.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/rng.hpp"

using namespace edlab;

namespace {
const IntegerFunction kOne = [](std::uint64_t) { return cplx(1.0, 0.0); };
const IntegerFunction kLambda = [](std::uint64_t n) { return cplx(liouville(n), 0.0); };

// a(r d) with the integrality test done by cross-multiplication
cplx at_rational(const IntegerFunction& a, std::int64_t p, std::int64_t q, std::uint64_t d) {
    std::uint64_t top = static_cast<std::uint64_t>(p) * d;
    return top % static_cast<std::uint64_t>(q) ? cplx(0, 0) : a(top / static_cast<std::uint64_t>(q));
}

cplx oracle_B(const IntegerFunction& a, std::int64_t p, std::int64_t q, const FolnerBox& box) {
    cplx s = 0;
    for (auto d : box.elements()) s += at_rational(a, p, q, d) * std::conj(a(d));
    return s / static_cast<double>(box.size());
}

// |{n : r n in box} sym-diff box| / |box|, by scanning n up to max * q
double oracle_defect(const FolnerBox& box, std::int64_t p, std::int64_t q) {
    std::set<std::uint64_t> in(box.elements().begin(), box.elements().end());
    std::size_t sym = 0;
    const std::uint64_t top = box.max_element() * static_cast<std::uint64_t>(q) + 1;
    for (std::uint64_t n = 1; n <= top; ++n) {
        bool pre = (n * p) % q == 0 && in.count(n * p / q);
        if (pre != static_cast<bool>(in.count(n))) ++sym;
    }
    return static_cast<double>(sym) / static_cast<double>(box.size());
}

struct Instance {
    std::vector<cplx> values;  // a(1..limit), 0 beyond
    std::vector<Rational> rationals;
    FolnerBox box{1, 1};
};

Instance random_instance(std::uint64_t seed) {
    rng::CounterStream s(seed, "gram-instance");
    Instance in;
    in.box = FolnerBox(1 + static_cast<unsigned>(s.below(0, 3)), 1 + static_cast<unsigned>(s.below(1, 4)));
    std::size_t m = 1 + s.below(2, 8);
    std::set<Rational> rs;
    for (std::uint64_t i = 0; rs.size() < m; ++i)
        rs.insert(Rational(static_cast<std::int64_t>(1 + s.below(10 + 2 * i, 8)),
                           static_cast<std::int64_t>(1 + s.below(11 + 2 * i, 8))));
    in.rationals.assign(rs.begin(), rs.end());
    in.values.resize(in.box.max_element() * 8 + 1);
    for (std::size_t k = 1; k < in.values.size(); ++k)
        in.values[k] = std::polar(std::sqrt(s.uniform(1000 + 2 * k)), 6.283185307179586 * s.uniform(1001 + 2 * k));
    return in;
}
} // namespace

TEST(Dilated, Examples) {
    FolnerBox box(2, 1);
    EXPECT_EQ(box.elements(), (std::vector<std::uint64_t>{1, 2, 3, 6}));
    EXPECT_NEAR(dilated_correlation(kOne, Rational(1), box).real(), 1.0, 1e-15);
    EXPECT_NEAR(dilated_correlation(kOne, Rational(1, 2), box).real(), 0.5, 1e-15);
    EXPECT_NEAR(dilated_correlation(kOne, Rational(1, 6), box).real(), 0.25, 1e-15);
    EXPECT_NEAR(dilated_correlation(kOne, Rational(2, 3), box).real(), 0.5, 1e-15);
}

TEST(Dilated, MatchesEnumeration) {
    FolnerBox box(3, 3);
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {3, 2}, {5, 7}, {6, 5}, {1, 30}})
        for (const auto& a : {kOne, kLambda}) {
            cplx got = dilated_correlation(a, Rational(p, q), box), want = oracle_B(a, p, q, box);
            EXPECT_NEAR(std::abs(got - want), 0.0, 1e-14) << p << "/" << q;
        }
    // B(1) is the total mass
    EXPECT_NEAR(dilated_correlation(kLambda, Rational(1), box).real(), 1.0, 1e-15);
}

TEST(Gram, SingleRational) {
    FolnerBox box(2, 2);
    for (auto form : {GramForm::exact_form, GramForm::paper_form}) {
        auto rep = gram_psd_check(kLambda, {Rational(1)}, box, form);
        ASSERT_EQ(rep.matrix.rows(), 1);
        EXPECT_NEAR(rep.matrix(0, 0).real(), 1.0, 1e-15);
        EXPECT_NEAR(rep.min_eigenvalue, 1.0, 1e-15);
    }
}

TEST(Gram, ExactFormIsPsdOnRandomInstances) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto in = random_instance(seed);
        IntegerFunction a = [&](std::uint64_t n) { return n < in.values.size() ? in.values[n] : cplx(0, 0); };
        auto rep = gram_psd_check(a, in.rationals, in.box, GramForm::exact_form);
        EXPECT_GE(rep.min_eigenvalue, -1e-9) << seed;
        EXPECT_LE(rep.hermitian_error, 1e-12) << seed;
        EXPECT_TRUE(rep.deviation_within_column_bound) << seed;
        // quadratic form identity: c* G c = E_d |sum_i c_i a(r_i d)|^2
        rng::CounterStream s(seed, "gram-c");
        const std::size_t m = in.rationals.size();
        Eigen::VectorXcd c(m);
        for (std::size_t i = 0; i < m; ++i) c[i] = cplx(s.uniform(2 * i) - 0.5, s.uniform(2 * i + 1) - 0.5);
        cplx lhs = (c.adjoint() * rep.matrix * c)(0, 0);
        double rhs = 0;
        for (auto d : in.box.elements()) {
            cplx v = 0;
            for (std::size_t i = 0; i < m; ++i)
                v += std::conj(c[i]) * at_rational(a, in.rationals[i].num(), in.rationals[i].den(), d);
            rhs += std::norm(v);
        }
        rhs /= static_cast<double>(in.box.size());
        EXPECT_NEAR(lhs.real(), rhs, 1e-12) << seed;
        EXPECT_NEAR(lhs.imag(), 0.0, 1e-12) << seed;
        // diagonal: E |a(r_i d)|^2, which is B(1) when r_i = 1
        for (std::size_t i = 0; i < m; ++i) {
            double mass = 0;
            for (auto d : in.box.elements())
                mass += std::norm(at_rational(a, in.rationals[i].num(), in.rationals[i].den(), d));
            EXPECT_NEAR(rep.matrix(i, i).real(), mass / static_cast<double>(in.box.size()), 1e-12);
        }
    }
}

TEST(Gram, PaperFormDiagonalIsTotalMass) {
    auto in = random_instance(7);
    IntegerFunction a = [&](std::uint64_t n) { return n < in.values.size() ? in.values[n] : cplx(0, 0); };
    auto rep = gram_psd_check(a, in.rationals, in.box, GramForm::paper_form);
    cplx B1 = oracle_B(a, 1, 1, in.box);
    for (Eigen::Index i = 0; i < rep.matrix.rows(); ++i) EXPECT_NEAR(std::abs(rep.matrix(i, i) - B1), 0.0, 1e-12);
}

TEST(Gram, LiouvilleOnBox34) {
    FolnerBox box(3, 4);
    // hand values: r = p gives 1/(E+1), r = 1/p gives 2/(E+1), r = p/q gives 13/25
    const std::vector<std::tuple<int, int, double>> pins{{2, 1, 0.2}, {3, 1, 0.2}, {1, 2, 0.4},
                                                         {1, 3, 0.4}, {2, 3, 0.52}, {3, 2, 0.52}};
    for (auto [p, q, want] : pins) {
        EXPECT_NEAR(dilation_defect(box, Rational(p, q)), want, 1e-15) << p << "/" << q;
        EXPECT_NEAR(oracle_defect(box, p, q), want, 1e-15) << p << "/" << q;
    }
    auto rep = gram_psd_check(kLambda, {Rational(1), Rational(2), Rational(3)}, box, GramForm::paper_form);
    EXPECT_NEAR(rep.folner_defect_max, 0.52, 1e-15);
    EXPECT_GE(rep.min_eigenvalue, -(2 * rep.folner_defect_max + 1e-9));
    EXPECT_TRUE(rep.deviation_within_defect_bound);
    EXPECT_TRUE(rep.deviation_within_column_bound);
    // the exact form: a(r_i d) a(r_j d) = lambda(r_i r_j) for integer r's, so G = v v^T
    auto ex = gram_psd_check(kLambda, {Rational(1), Rational(2), Rational(3)}, box, GramForm::exact_form);
    EXPECT_NEAR(ex.min_eigenvalue, 0.0, 1e-12);
    EXPECT_NEAR(ex.matrix(0, 1).real(), -1.0, 1e-15);
    EXPECT_NEAR(ex.matrix(1, 2).real(), 1.0, 1e-15);
    // paper entries B(2) = lambda(2) = -1, B(2/3) = P(3 | d) = 4/5
    EXPECT_NEAR(rep.matrix(1, 0).real(), -1.0, 1e-15);
    EXPECT_NEAR(rep.matrix(1, 2).real(), 0.8, 1e-15);
}

TEST(Gram, RatioDefectBoundCanFail) {
    // no d in {1, 2, 4, 8, 16} is divisible by 3, so the exact form vanishes while B(1) = 1
    FolnerBox box(1, 4);
    auto rep = gram_psd_check(kOne, {Rational(1, 3), Rational(2, 3)}, box, GramForm::paper_form);
    EXPECT_NEAR(rep.max_entry_deviation, 1.0, 1e-15);
    EXPECT_NEAR(rep.folner_defect_max, 0.4, 1e-15);
    EXPECT_FALSE(rep.deviation_within_defect_bound);
    EXPECT_NEAR(rep.column_defect_max, 1.0, 1e-15);
    EXPECT_TRUE(rep.deviation_within_column_bound);
}

TEST(Gram, WorkerInvariance) {
    FolnerBox box(4, 5);
    std::vector<Rational> rs{Rational(1), Rational(2), Rational(3, 2), Rational(5, 7), Rational(7)};
    auto a = gram_psd_check(kLambda, rs, box, GramForm::exact_form, 1);
    auto b = gram_psd_check(kLambda, rs, box, GramForm::exact_form, 8);
    EXPECT_TRUE(a.matrix == b.matrix);
    EXPECT_EQ(a.min_eigenvalue, b.min_eigenvalue);
}

TEST(Gram, Errors) {
    FolnerBox box(2, 2);
    EXPECT_THROW(gram_psd_check(kOne, {Rational(1), Rational(2, 2)}, box, GramForm::exact_form), DomainError);
    EXPECT_THROW(gram_psd_check(kOne, {}, box, GramForm::exact_form), DomainError);
    std::vector<Rational> many;
    for (int i = 1; i <= 65; ++i) many.emplace_back(i);
    EXPECT_THROW(gram_psd_check(kOne, many, box, GramForm::exact_form), ResourceError);
    EXPECT_THROW(Rational(-1, 2), DomainError);
    EXPECT_THROW(Rational::parse("1/0"), DomainError);
    EXPECT_EQ(parse_gram_form("paper"), GramForm::paper_form);
    EXPECT_THROW(parse_gram_form("bochner"), DomainError);
}
