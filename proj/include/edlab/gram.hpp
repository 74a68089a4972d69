#pragma once

/**
 * @file gram.hpp
 * @brief Dilated correlations B(r) = E_{d in box} a(r d) conj(a(d)) over a
 *        Folner box, with a(x) = 0 off the integers, and the Gram matrices
 *        built from them.
 *
 *  exact form:  G_ij = E_d a(r_i d) conj(a(r_j d)), a true Gram matrix.
 *  paper form:  G_ij = B(r_i / r_j), which agrees with the exact form only up
 *               to the dilation defect of the box.
 *
 * Substituting n = r_j d in the exact entry gives the paper entry summed over
 * r_j Phi instead of Phi, so |paper - exact|_ij <= defect(box, 1 / r_j).  That
 * is the bound that always holds.  The cruder 2 max_ij defect(box, r_i / r_j)
 * is also reported; it covers the first one only when 1 is among the r_i.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edlab/averaging.hpp"
#include "edlab/error.hpp"
#include "edlab/parallel.hpp"
#include "edlab/rational.hpp"
#include "edlab/sequence.hpp"

namespace edlab {

using IntegerFunction = std::function<cplx(std::uint64_t)>;

enum class GramForm { paper_form, exact_form };

inline const char* to_string(GramForm f) { return f == GramForm::paper_form ? "paper_form" : "exact_form"; }

inline GramForm parse_gram_form(const std::string& s) {
    if (s == "paper" || s == "paper_form") return GramForm::paper_form;
    if (s == "exact" || s == "exact_form") return GramForm::exact_form;
    throw DomainError("unknown Gram form '" + s + "'");
}

inline constexpr std::size_t kMaxGramSize = 64;

namespace detail {
/// a(r d), zero when r d is not an integer.
inline cplx dilated_value(const IntegerFunction& a, const Rational& r, std::uint64_t d) {
    const auto q = static_cast<std::uint64_t>(r.den());
    if (d % q) return {0.0, 0.0};
    unsigned __int128 x = static_cast<unsigned __int128>(d / q) * static_cast<std::uint64_t>(r.num());
    if (x > UINT64_MAX) throw ResourceError("dilated index r*d overflows 64 bits");
    return a(static_cast<std::uint64_t>(x));
}
} // namespace detail

inline cplx dilated_correlation(const IntegerFunction& a, const Rational& r, const FolnerBox& box,
                                unsigned workers = 1) {
    const auto& el = box.elements();
    return deterministic_sum<cplx>(
               0, el.size(),
               [&](std::size_t i) { return detail::dilated_value(a, r, el[i]) * std::conj(a(el[i])); }, workers) /
           static_cast<double>(el.size());
}

struct GramReport {
    std::vector<Rational> rationals;
    GramForm form = GramForm::exact_form;
    Eigen::MatrixXcd matrix;  // the requested form
    double min_eigenvalue = 0.0;
    double exact_min_eigenvalue = 0.0;
    double paper_min_eigenvalue = 0.0;
    double folner_defect_max = 0.0;          // max over i, j of defect(box, r_i / r_j)
    double max_entry_deviation = 0.0;        // max |paper - exact| entrywise
    bool deviation_within_defect_bound = true;  // max deviation <= 2 folner_defect_max + 1e-12
    double column_defect_max = 0.0;          // max over j of defect(box, 1 / r_j)
    bool deviation_within_column_bound = true;  // |paper - exact|_ij <= defect(1 / r_j) + 1e-12, every entry
    double hermitian_error = 0.0;            // max |G - G^*| of the exact form
};

inline double min_hermitian_eigenvalue(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

inline GramReport gram_psd_check(const IntegerFunction& a, const std::vector<Rational>& rationals,
                                 const FolnerBox& box, GramForm form, unsigned workers = 1) {
    const std::size_t m = rationals.size();
    require(m >= 1, "Gram check needs at least one rational");
    if (m > kMaxGramSize) throw ResourceError("Gram check is capped at " + std::to_string(kMaxGramSize) + " rationals");
    std::set<Rational> seen(rationals.begin(), rationals.end());
    require(seen.size() == m, "Gram check rationals must be distinct");

    const auto& el = box.elements();
    const std::size_t n = el.size();
    // dilated[i][k] = a(r_i d_k)
    std::vector<std::vector<cplx>> dilated(m, std::vector<cplx>(n));
    parallel_chunks(m, workers, [&](std::size_t i) {
        for (std::size_t k = 0; k < n; ++k) dilated[i][k] = detail::dilated_value(a, rationals[i], el[k]);
    });

    Eigen::MatrixXcd exact(m, m), paper(m, m);
    GramReport rep;
    rep.rationals = rationals;
    rep.form = form;
    std::vector<double> column_defect(m);
    for (std::size_t j = 0; j < m; ++j) {
        column_defect[j] = dilation_defect(box, rationals[j].inverse());
        rep.column_defect_max = std::max(rep.column_defect_max, column_defect[j]);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            exact(i, j) = deterministic_sum<cplx>(
                              0, n, [&](std::size_t k) { return dilated[i][k] * std::conj(dilated[j][k]); }) /
                          static_cast<double>(n);
            Rational ratio = rationals[i] / rationals[j];
            paper(i, j) = dilated_correlation(a, ratio, box);
            rep.folner_defect_max = std::max(rep.folner_defect_max, dilation_defect(box, ratio));
            double dev = std::abs(paper(i, j) - exact(i, j));
            rep.max_entry_deviation = std::max(rep.max_entry_deviation, dev);
            if (dev > column_defect[j] + 1e-12) rep.deviation_within_column_bound = false;
        }
    rep.deviation_within_defect_bound = rep.max_entry_deviation <= 2.0 * rep.folner_defect_max + 1e-12;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            rep.hermitian_error = std::max(rep.hermitian_error, std::abs(exact(i, j) - std::conj(exact(j, i))));
    rep.exact_min_eigenvalue = min_hermitian_eigenvalue(exact);
    // the paper form need not be Hermitian at finite scale; its Hermitian part is used
    rep.paper_min_eigenvalue = min_hermitian_eigenvalue(paper);
    rep.matrix = form == GramForm::exact_form ? exact : paper;
    rep.min_eigenvalue = form == GramForm::exact_form ? rep.exact_min_eigenvalue : rep.paper_min_eigenvalue;
    return rep;
}

} // namespace edlab
