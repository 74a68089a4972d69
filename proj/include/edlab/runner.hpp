#pragma once

/**
 * @file runner.hpp
 * @brief Experiment runner behind the edlab command line: a table of
 *        commands with their parameters, validation, and result emission.
 *
 * A run is fully described by an ExperimentConfig.  Parameters are kept as
 * the strings the user typed, with documented defaults filled in before the
 * run, so the config written into every result replays it exactly.  Wall
 * times, timestamps, worker counts and the output path go into a separate
 * "metadata" object and are the only parts of a result allowed to differ
 * between replays.
 */

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "edlab/edlab.hpp"
#include "edlab/io.hpp"
#include "edlab/tokens.hpp"

namespace edlab::runner {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum class Format { json, csv };

inline Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw DomainError("unknown format '" + s + "' (json or csv)");
}

struct ExperimentConfig {
    std::string command;                       // "group sub", e.g. "search maxlen"
    std::map<std::string, std::string> params;
    std::optional<std::uint64_t> seed;
    std::string output_path;                   // empty: standard output
    Format format = Format::json;
    unsigned workers = 1;
};

struct ParamDef {
    std::string name;
    std::string help;
    std::optional<std::string> default_value;  // nullopt: required
    bool is_flag = false;                      // boolean switch, default "false"
};

class Context;

struct CommandResult {
    json result;
    CsvTable csv;
    std::string summary;
    int exit_code = 0;
    json metadata = json::object();
};

struct CommandDef {
    std::string group;
    std::string name;
    std::string help;
    std::vector<ParamDef> params;
    bool seeded = false;
    std::function<CommandResult(const Context&)> handler;

    std::string full_name() const { return group + " " + name; }
};

class Context {
  public:
    Context(const ExperimentConfig& cfg) : cfg_(cfg) {}

    const std::string& str(const std::string& key) const {
        auto it = cfg_.params.find(key);
        if (it == cfg_.params.end()) throw DomainError("missing parameter --" + key);
        return it->second;
    }
    std::uint64_t uint(const std::string& key) const { return tokens::parse_uint(str(key)); }
    double real(const std::string& key) const { return tokens::parse_real(str(key)); }
    bool flag(const std::string& key) const { return tokens::parse_bool(str(key)); }
    std::uint64_t seed() const { return *cfg_.seed; }
    unsigned workers() const { return cfg_.workers; }

    /// Sequence from a spec, with a factorization table built when the spec needs one.
    UnitDiscSequence sequence(const std::string& key, std::uint64_t N) const {
        const std::string& spec = str(key);
        if (tokens::needs_table(spec)) {
            FactorizationTable table(N);
            return tokens::make_sequence(spec, N, &table);
        }
        return tokens::make_sequence(spec, N, nullptr);
    }

  private:
    const ExperimentConfig& cfg_;
};

// ---------------------------------------------------------------------------
// json helpers

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (auto z : v) a.push_back(to_json(z));
    return a;
}

inline json to_json(const DiscrepancyProfile& p) {
    json w = json::array();
    for (const auto& x : p.witnesses) w.push_back({{"d", x.d}, {"n", x.n}});
    return {{"checkpoints", p.checkpoints}, {"values", p.values}, {"witnesses", w}};
}

inline json to_json(const TailReport& r) {
    return {{"N", r.N},
            {"delta", r.delta},
            {"trials", r.trials},
            {"seed", r.seed},
            {"exceedances", r.exceedances},
            {"empirical_tail", r.empirical_tail},
            {"theoretical_bound", r.theoretical_bound},
            {"ci_lower", r.ci_lower},
            {"ci_upper", r.ci_upper},
            {"mc_halfwidth", r.mc_halfwidth}};
}

inline json to_json(const GramReport& r) {
    json rs = json::array(), m = json::array();
    for (const auto& q : r.rationals) rs.push_back(q.str());
    for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < r.matrix.cols(); ++j) row.push_back(to_json(r.matrix(i, j)));
        m.push_back(row);
    }
    return {{"rationals", rs},
            {"form", to_string(r.form)},
            {"matrix", m},
            {"min_eigenvalue", r.min_eigenvalue},
            {"exact_min_eigenvalue", r.exact_min_eigenvalue},
            {"paper_min_eigenvalue", r.paper_min_eigenvalue},
            {"folner_defect_max", r.folner_defect_max},
            {"column_defect_max", r.column_defect_max},
            {"max_entry_deviation", r.max_entry_deviation},
            {"deviation_within_defect_bound", r.deviation_within_defect_bound},
            {"deviation_within_column_bound", r.deviation_within_column_bound},
            {"hermitian_error", r.hermitian_error}};
}

inline json to_json(const SearchResult& r) {
    return {{"status", to_string(r.status)},
            {"max_length", r.max_length_found},
            {"witness", r.witness},
            {"infeasible_length", r.infeasible_length ? json(*r.infeasible_length) : json(nullptr)},
            {"nodes_expanded", r.nodes_expanded}};
}

inline json config_to_json(const ExperimentConfig& c) {
    return {{"command", c.command},
            {"params", c.params},
            {"seed", c.seed ? json(*c.seed) : json(nullptr)},
            {"format", c.format == Format::json ? "json" : "csv"}};
}

/// Reads "command", "params", "seed", "format"; other keys are ignored, so a
/// whole result file works as a config.
inline ExperimentConfig config_from_json(const json& j) {
    const json& c = j.contains("config") ? j.at("config") : j;
    ExperimentConfig cfg;
    try {
        cfg.command = c.at("command").get<std::string>();
        if (c.contains("params"))
            for (const auto& [k, v] : c.at("params").items()) cfg.params[k] = v.get<std::string>();
        if (c.contains("seed") && !c.at("seed").is_null()) cfg.seed = c.at("seed").get<std::uint64_t>();
        if (c.contains("format")) cfg.format = parse_format(c.at("format").get<std::string>());
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

/// A config file is either JSON or a CSV result whose second line is "# config {...}".
inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (text.starts_with("#")) {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line))
            if (line.starts_with("# config ")) return config_from_json(json::parse(line.substr(9)));
        throw DomainError("CSV file '" + path + "' carries no '# config' line");
    }
    try {
        return config_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw DomainError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// commands

namespace detail {

inline std::string fmt_real(double v) { return csv_field(v); }

inline std::vector<std::uint64_t> checkpoints_within(const Context& c, std::uint64_t N) {
    return tokens::parse_checkpoints(c.str("checkpoints"), N);
}

inline CommandResult weight_generate(const Context& c) {
    const auto N = c.uint("N");
    auto w = c.sequence("w", N);
    CommandResult out;
    out.result = {{"label", w.label()}, {"N", N},
                  {"values", to_json(std::vector<cplx>(w.values().begin(), w.values().end()))}};
    out.csv = CsvTable("weight", {"k", "re", "im"});
    for (std::uint64_t k = 1; k <= N; ++k) out.csv.add({csv_field(k), csv_field(w[k].real()), csv_field(w[k].imag())});
    out.summary = "weight " + w.label() + ": " + std::to_string(N) + " values";
    return out;
}

inline CommandResult discrepancy_profile_cmd(const Context& c) {
    const auto N = c.uint("N");
    auto a = c.sequence("a", N), w = c.sequence("w", N);
    ProfileOptions po;
    po.real_part = c.flag("real-part");
    po.workers = c.workers();
    if (c.str("max-d") != "all") po.max_d = c.uint("max-d");
    auto p = discrepancy_profile(a, w, N, checkpoints_within(c, N), po);
    CommandResult out;
    out.result = to_json(p);
    out.result["N"] = N;
    out.csv = CsvTable("discrepancy-profile", {"checkpoint", "value", "d", "n"});
    for (std::size_t i = 0; i < p.values.size(); ++i)
        out.csv.add({csv_field(p.checkpoints[i]), csv_field(p.values[i]), csv_field(p.witnesses[i].d),
                     csv_field(p.witnesses[i].n)});
    out.summary = "discrepancy up to " + std::to_string(p.checkpoints.back()) + ": " + fmt_real(p.values.back()) +
                  " at d=" + std::to_string(p.witnesses.back().d) + ", n=" + std::to_string(p.witnesses.back().n);
    return out;
}

inline CommandResult discrepancy_growth_cmd(const Context& c) {
    const auto N = c.uint("N");
    FactorizationTable table(N);
    auto w = c.sequence("w", N);
    GrowthOptions go;
    go.conjugate_match = c.flag("conjugate-match");
    go.workers = c.workers();
    auto g = growth_experiment(parse_sample_family(c.str("family")), w, N, checkpoints_within(c, N),
                               c.uint("samples"), c.seed(), table, go);
    json profiles = json::array();
    for (const auto& p : g.profiles) profiles.push_back(p.values);
    CommandResult out;
    out.result = {{"N", N},           {"checkpoints", g.checkpoints}, {"sample_seeds", g.sample_seeds},
                  {"min", g.min},     {"median", g.median},           {"max", g.max},
                  {"profiles", profiles}};
    out.csv = CsvTable("discrepancy-growth", {"checkpoint", "min", "median", "max"});
    for (std::size_t i = 0; i < g.checkpoints.size(); ++i)
        out.csv.add({csv_field(g.checkpoints[i]), csv_field(g.min[i]), csv_field(g.median[i]), csv_field(g.max[i])});
    out.summary = "growth over " + std::to_string(g.profiles.size()) + " samples: median " +
                  fmt_real(g.median.back()) + " at N=" + std::to_string(g.checkpoints.back());
    return out;
}

inline CommandResult search_maxlen(const Context& c) {
    SearchOptions o;
    o.C = c.real("C");
    o.mode = parse_sign_mode(c.str("mode"));
    o.budget = c.uint("budget");
    o.horizon = c.uint("horizon");
    o.fix_first_sign = c.flag("fix-first-sign");
    const std::string& weight = c.str("weight");
    SearchResult r = (weight == "constant" || weight == "ones") ? max_length_search(o)
                                                                : max_length_search(c.sequence("weight", o.horizon), o);
    CommandResult out;
    out.result = to_json(r);
    out.metadata["wall_time_s"] = r.wall_time.count();
    out.csv = CsvTable("search-witness", {"n", "a"});
    for (std::size_t i = 0; i < r.witness.size(); ++i) out.csv.add({csv_field(i + 1), std::to_string(r.witness[i])});
    out.summary = "max length " + std::to_string(r.max_length_found) + " (" + to_string(r.status) + ", " +
                  std::to_string(r.nodes_expanded) + " nodes)";
    if (r.status == SearchStatus::budget_reached) out.exit_code = 2;
    return out;
}

inline CommandResult correlate_self(const Context& c) {
    const auto N = c.uint("N");
    auto hs = tokens::parse_uint_list(c.str("h"));
    require(!hs.empty(), "no lags given");
    auto w = c.sequence("w", N + *std::max_element(hs.begin(), hs.end()));
    auto mode = parse_average_mode(c.str("mode"));
    auto rep = correlation_report(w, hs, N, mode, c.workers());
    CommandResult out;
    json rows = json::array();
    out.csv = CsvTable("self-correlation", {"h", "re", "im", "abs"});
    for (std::size_t i = 0; i < hs.size(); ++i) {
        cplx g = rep.estimates[i];
        rows.push_back({{"h", hs[i]}, {"estimate", to_json(g)}, {"abs", std::abs(g)}});
        out.csv.add({csv_field(hs[i]), csv_field(g.real()), csv_field(g.imag()), csv_field(std::abs(g))});
    }
    out.result = {{"N", N}, {"mode", to_string(mode)}, {"label", w.label()}, {"rows", rows}};
    double worst = 0;
    for (auto g : rep.estimates) worst = std::max(worst, std::abs(g));
    out.summary = "max |gamma(h)| over " + std::to_string(hs.size()) + " lags: " + fmt_real(worst);
    return out;
}

inline CommandResult correlate_variance(const Context& c) {
    const auto N = c.uint("N");
    auto Hs = tokens::parse_uint_list(c.str("H"));
    require(!Hs.empty(), "no window lengths given");
    auto w = c.sequence("w", N + *std::max_element(Hs.begin(), Hs.end()));
    auto mode = parse_average_mode(c.str("mode"));
    CommandResult out;
    json rows = json::array();
    out.csv = CsvTable("window-variance", {"H", "V", "V_over_H"});
    for (auto H : Hs) {
        double V = window_variance(w, H, N, mode, c.workers());
        rows.push_back({{"H", H}, {"V", V}, {"V_over_H", V / static_cast<double>(H)}});
        out.csv.add({csv_field(H), csv_field(V), csv_field(V / static_cast<double>(H))});
    }
    out.result = {{"N", N}, {"mode", to_string(mode)}, {"label", w.label()}, {"rows", rows}};
    out.summary = "window variance for " + std::to_string(Hs.size()) + " window lengths";
    return out;
}

inline CommandResult correlate_nonnull(const Context& c) {
    const auto N = c.uint("N");
    auto w = c.sequence("w", N);
    auto mode = parse_average_mode(c.str("mode"));
    double s = nonnull_score(w, N, mode, c.workers());
    CommandResult out;
    out.result = {{"N", N}, {"mode", to_string(mode)}, {"label", w.label()}, {"score", s}};
    out.csv = CsvTable("nonnull", {"N", "score"});
    out.csv.add({csv_field(N), csv_field(s)});
    out.summary = "non-null score " + fmt_real(s);
    return out;
}

inline CommandResult correlate_decoupling(const Context& c) {
    const auto N = c.uint("N");
    auto a = c.sequence("a", N), w = c.sequence("w", N);
    auto mode = parse_average_mode(c.str("mode"));
    const bool conj_w = c.flag("conjugate-w");
    std::vector<ShiftFactor> A{{&a, 0, false}}, B{{&w, 0, conj_w}};
    auto mean = [&](const std::vector<ShiftFactor>& f) {
        return average_of([&](std::size_t n) { return shift_product(f, n); }, N, mode, c.workers());
    };
    cplx ea = mean(A), ew = mean(B);
    cplx eaw = average_of([&](std::size_t n) { return shift_product(A, n) * shift_product(B, n); }, N, mode,
                          c.workers());
    double defect = decoupling_defect(A, B, N, mode, c.workers());
    CommandResult out;
    out.result = {{"N", N},
                  {"mode", to_string(mode)},
                  {"mean_a", to_json(ea)},
                  {"mean_w", to_json(ew)},
                  {"mean_product", to_json(eaw)},
                  {"abs_mean_product", std::abs(eaw)},
                  {"defect", defect}};
    out.csv = CsvTable("decoupling", {"N", "abs_mean_product", "defect"});
    out.csv.add({csv_field(N), csv_field(std::abs(eaw)), csv_field(defect)});
    out.summary = "|E a w| = " + fmt_real(std::abs(eaw)) + ", defect " + fmt_real(defect);
    return out;
}

inline CommandResult folner_defect(const Context& c) {
    FolnerBox box(static_cast<unsigned>(c.uint("P")), static_cast<unsigned>(c.uint("E")));
    auto rs = tokens::parse_rational_list(c.str("r"));
    CommandResult out;
    json rows = json::array();
    out.csv = CsvTable("dilation-defect", {"r", "defect"});
    for (const auto& r : rs) {
        double d = dilation_defect(box, r);
        rows.push_back({{"r", r.str()}, {"defect", d}});
        out.csv.add({r.str(), csv_field(d)});
    }
    out.result = {{"P", box.prime_count()}, {"E", box.max_exponent()}, {"box_size", box.size()}, {"rows", rows}};
    out.summary = "defects for " + std::to_string(rs.size()) + " rationals on a box of " +
                  std::to_string(box.size()) + " elements";
    return out;
}

inline CommandResult folner_average_cmd(const Context& c) {
    FolnerBox box(static_cast<unsigned>(c.uint("P")), static_cast<unsigned>(c.uint("E")));
    auto a = c.sequence("a", box.max_element());
    cplx m = folner_average([&](std::uint64_t n) { return a[n]; }, box, c.workers());
    CommandResult out;
    out.result = {{"P", box.prime_count()}, {"E", box.max_exponent()}, {"box_size", box.size()}, {"mean", to_json(m)}};
    out.csv = CsvTable("folner-average", {"box_size", "re", "im"});
    out.csv.add({csv_field(std::uint64_t(box.size())), csv_field(m.real()), csv_field(m.imag())});
    out.summary = "Folner mean over " + std::to_string(box.size()) + " elements: " + fmt_real(std::abs(m));
    return out;
}

inline CommandResult gram_check(const Context& c) {
    FolnerBox box(static_cast<unsigned>(c.uint("P")), static_cast<unsigned>(c.uint("E")));
    auto rs = tokens::parse_rational_list(c.str("r"));
    // the paper form reads a at (r_i / r_j) d, the exact form at r_i d
    unsigned __int128 horizon = box.max_element();
    auto reach = [&](std::int64_t num, std::int64_t den) {
        horizon = std::max(horizon, static_cast<unsigned __int128>(box.max_element()) * num / den);
    };
    for (const auto& ri : rs) {
        reach(ri.num(), ri.den());
        for (const auto& rj : rs)
            reach(static_cast<std::int64_t>(ri.num()) * rj.den(), static_cast<std::int64_t>(ri.den()) * rj.num());
    }
    if (horizon > kMaxTableLimit)
        throw ResourceError("Gram check needs a up to " + std::to_string(static_cast<std::uint64_t>(horizon)) +
                            ", above the cap of " + std::to_string(kMaxTableLimit));
    auto a = c.sequence("a", static_cast<std::uint64_t>(horizon));
    IntegerFunction f = [&](std::uint64_t n) { return a.at(n); };
    auto rep = gram_psd_check(f, rs, box, parse_gram_form(c.str("form")), c.workers());
    CommandResult out;
    out.result = to_json(rep);
    out.csv = CsvTable("gram-matrix", {"i", "j", "re", "im"});
    for (Eigen::Index i = 0; i < rep.matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < rep.matrix.cols(); ++j)
            out.csv.add({csv_field(std::uint64_t(i)), csv_field(std::uint64_t(j)), csv_field(rep.matrix(i, j).real()),
                         csv_field(rep.matrix(i, j).imag())});
    out.summary = std::string(to_string(rep.form)) + " min eigenvalue " + fmt_real(rep.min_eigenvalue) +
                  ", max defect " + fmt_real(rep.folner_defect_max);
    return out;
}

inline CommandResult randomized_bernstein(const Context& c) {
    const auto N = c.uint("N");
    auto b = c.sequence("w", N);
    auto r = bernstein_tail_mc(b, N, c.real("delta"), c.uint("trials"), c.seed(), c.workers());
    CommandResult out;
    out.result = to_json(r);
    out.csv = CsvTable("bernstein-tail", {"N", "delta", "trials", "seed", "exceedances", "empirical_tail",
                                          "theoretical_bound", "ci_lower", "ci_upper", "mc_halfwidth"});
    out.csv.add({csv_field(r.N), csv_field(r.delta), csv_field(r.trials), csv_field(r.seed), csv_field(r.exceedances),
                 csv_field(r.empirical_tail), csv_field(r.theoretical_bound), csv_field(r.ci_lower),
                 csv_field(r.ci_upper), csv_field(r.mc_halfwidth)});
    out.summary = "empirical tail " + fmt_real(r.empirical_tail) + " vs bound " + fmt_real(r.theoretical_bound);
    return out;
}

inline CommandResult randomized_orthogonality(const Context& c) {
    auto grid = tokens::parse_uint_list(c.str("N-grid"));
    require(!grid.empty(), "empty N grid");
    const auto Nmax = *std::max_element(grid.begin(), grid.end());
    FactorizationTable table(Nmax);
    auto a = c.sequence("a", Nmax);
    std::optional<double> eps;
    if (c.str("epsilon") != "auto") eps = c.real("epsilon");
    auto shifts = tokens::parse_uint_list(c.str("shifts"));
    auto rep = net_orthogonality_experiment(a, static_cast<unsigned>(c.uint("ell")), shifts, grid, c.uint("samples"),
                                            c.seed(), table, c.workers(), eps);
    CommandResult out;
    json rows = json::array();
    out.csv = CsvTable("net-orthogonality", {"N", "epsilon", "net_size", "delta", "samples", "max_abs_average"});
    for (const auto& r : rep.rows) {
        rows.push_back({{"N", r.N},
                        {"epsilon", r.epsilon},
                        {"net_size", r.net_size},
                        {"delta", r.delta},
                        {"samples", r.samples},
                        {"max_abs_average", r.max_abs_average}});
        out.csv.add({csv_field(r.N), csv_field(r.epsilon), csv_field(std::uint64_t(r.net_size)), csv_field(r.delta),
                     csv_field(r.samples), csv_field(r.max_abs_average)});
    }
    out.result = {{"ell", rep.ell}, {"shifts", rep.shifts}, {"seed", rep.seed}, {"rows", rows},
                  {"note", "maximum over sampled net functions, not the supremum over the class"}};
    out.summary = "max |average| at N=" + std::to_string(rep.rows.back().N) + ": " +
                  fmt_real(rep.rows.back().max_abs_average) + " over " + std::to_string(rep.rows.back().samples) +
                  " samples";
    return out;
}

inline CommandResult certificate_pattern(const Context& c) {
    const auto m = static_cast<unsigned>(c.uint("m"));
    const auto r_max = c.uint("r-max");
    require(m >= 1 && r_max >= 1, "m and r-max must be >= 1");
    const std::uint64_t f = factorial_checked(m);
    if (r_max > (kMaxTableLimit - m) / f)
        throw ResourceError("pattern search needs the weight to r-max * m! + m, above the cap of " +
                            std::to_string(kMaxTableLimit));
    auto w = c.sequence("w", r_max * f + m);
    auto cert = find_pattern_certificate(w, tokens::parse_complex(c.str("c")), m, r_max);
    CommandResult out;
    out.csv = CsvTable("pattern-certificate", {"found", "r", "positions"});
    if (cert) {
        out.result = {{"found", true}, {"m", m}, {"r", cert->r}, {"c", to_json(cert->c)},
                      {"positions", cert->positions_checked}};
        std::string pos;
        for (auto p : cert->positions_checked) pos += (pos.empty() ? "" : " ") + std::to_string(p);
        out.csv.add({"true", csv_field(cert->r), pos});
        out.summary = "certificate at r=" + std::to_string(cert->r);
    } else {
        out.result = {{"found", false}, {"m", m}, {"r", nullptr}, {"r_max", r_max}};
        out.csv.add({"false", "", ""});
        out.summary = "no certificate with r <= " + std::to_string(r_max);
    }
    return out;
}

inline CommandResult certificate_interval(const Context& c) {
    const auto N = c.uint("N");
    FactorizationTable table(N);
    auto ce = build_interval_counterexample(table, N, c.uint("max-intervals"));
    auto a = materialize(ce.a, table, N);
    auto w = interval_indicator_weight(ce.intervals, N);
    double disc = discrepancy_profile(a, w, N, {N}, ProfileOptions{false, UINT64_MAX, c.workers()}).values.back();
    json iv = json::array(), neg = json::array();
    for (const auto& I : ce.intervals) iv.push_back({I.first, I.last});
    for (const auto& [p, z] : ce.a.values())
        if (z.real() < 0) neg.push_back(p);
    CommandResult out;
    out.result = {{"N", N}, {"intervals", iv}, {"negative_primes", neg}, {"discrepancy", disc}};
    out.csv = CsvTable("interval-counterexample", {"first", "last"});
    for (const auto& I : ce.intervals) out.csv.add({csv_field(I.first), csv_field(I.last)});
    out.summary = std::to_string(ce.intervals.size()) + " intervals, weighted discrepancy " + fmt_real(disc);
    return out;
}

inline CommandResult certificate_net(const Context& c) {
    const double eps = c.real("epsilon");
    const auto N = c.uint("N");
    const auto samples = c.uint("samples");
    require(samples >= 1, "samples must be >= 1");
    auto net = build_epsilon_net(eps);
    FactorizationTable table(N);
    std::vector<double> errs(samples);
    parallel_chunks(samples, c.workers(), [&](std::size_t s) {
        auto f = random_completely_multiplicative(table, N, sample_seed(c.seed(), s), RandomValues::unit_circle);
        auto fv = materialize(f, table, N), gv = materialize(project_to_net(f, net, N, table), table, N);
        double e = 0;
        for (std::uint64_t n = 1; n <= N; ++n) e = std::max(e, std::abs(fv[n] - gv[n]));
        errs[s] = e;
    });
    const double bound = projection_error_bound(eps, N);
    const double worst = *std::max_element(errs.begin(), errs.end());
    CommandResult out;
    out.result = {{"epsilon", eps},
                  {"net_size", net.size()},
                  {"cardinality_bound", 4.0 / (eps * eps)},
                  {"construction", to_string(net.construction())},
                  {"N", N},
                  {"projection_errors", errs},
                  {"max_projection_error", worst},
                  {"error_bound", bound}};
    out.csv = CsvTable("net-projection", {"sample", "max_error", "bound"});
    for (std::size_t s = 0; s < errs.size(); ++s) out.csv.add({csv_field(std::uint64_t(s)), csv_field(errs[s]), csv_field(bound)});
    out.summary = "net of " + std::to_string(net.size()) + " points; worst projection error " + fmt_real(worst) +
                  " vs bound " + fmt_real(bound);
    return out;
}

} // namespace detail

inline const std::vector<CommandDef>& commands() {
    static const std::vector<CommandDef> table = [] {
        const ParamDef mode{"mode", "averaging mode: log or cesaro", std::nullopt};
        const ParamDef N{"N", "length (integers accept 1e6 or 10^6)", std::nullopt};
        std::vector<CommandDef> t;
        t.push_back({"weight", "generate", "materialize a weight sequence",
                     {{"w", "sequence spec", std::nullopt}, N}, false, detail::weight_generate});
        t.push_back({"discrepancy", "profile", "max |S_d(n)| over d n <= checkpoint",
                     {{"a", "sequence spec for a", std::nullopt},
                      {"w", "sequence spec for the weight", std::nullopt},
                      N,
                      {"checkpoints", "comma list, 'decades' or 'final'", "final"},
                      {"max-d", "largest progression difference, or 'all'", "all"},
                      {"real-part", "use |Re S| instead of |S|", "false", true}},
                     false, detail::discrepancy_profile_cmd});
        t.push_back({"discrepancy", "growth", "profiles of sampled multiplicative sequences",
                     {{"family", "random_cm_sign, random_cm_circle, one or liouville", std::nullopt},
                      {"w", "sequence spec for the weight", std::nullopt},
                      N,
                      {"checkpoints", "comma list, 'decades' or 'final'", "decades"},
                      {"samples", "number of sampled sequences", std::nullopt},
                      {"conjugate-match", "use w conj(a) as the weight", "false", true}},
                     true, detail::discrepancy_growth_cmd});
        t.push_back({"search", "maxlen", "longest +-1 sequence with weighted discrepancy <= C",
                     {{"C", "discrepancy bound", std::nullopt},
                      {"mode", "arbitrary or completely_multiplicative", "arbitrary"},
                      {"weight", "'constant' (exact integer sums) or a sequence spec", "constant"},
                      {"horizon", "largest length considered", "4096"},
                      {"budget", "node budget", "100000000"},
                      {"fix-first-sign", "fix a(1) = +1 (true/false)", "true"}},
                     false, detail::search_maxlen});
        t.push_back({"correlate", "self", "self-correlations gamma(h)",
                     {{"w", "sequence spec", std::nullopt}, {"h", "lags, list or range a..b", std::nullopt}, N, mode},
                     false, detail::correlate_self});
        t.push_back({"correlate", "variance", "window variance V(H)",
                     {{"w", "sequence spec", std::nullopt}, {"H", "window lengths, list or range", std::nullopt}, N, mode},
                     false, detail::correlate_variance});
        t.push_back({"correlate", "nonnull", "average of |w(n)|^2",
                     {{"w", "sequence spec", std::nullopt}, N, mode}, false, detail::correlate_nonnull});
        t.push_back({"correlate", "decoupling", "E a w against E a E w",
                     {{"a", "sequence spec", std::nullopt},
                      {"w", "sequence spec", std::nullopt},
                      N,
                      mode,
                      {"conjugate-w", "use conj(w)", "false", true}},
                     false, detail::correlate_decoupling});
        t.push_back({"folner", "defect", "dilation defects of a prime-power box",
                     {{"P", "number of primes", std::nullopt},
                      {"E", "largest exponent", std::nullopt},
                      {"r", "rationals, comma list of p/q", std::nullopt}},
                     false, detail::folner_defect});
        t.push_back({"folner", "average", "mean of a sequence over a prime-power box",
                     {{"a", "sequence spec", std::nullopt},
                      {"P", "number of primes", std::nullopt},
                      {"E", "largest exponent", std::nullopt}},
                     false, detail::folner_average_cmd});
        t.push_back({"gram", "check", "Gram matrix of dilated correlations and its least eigenvalue",
                     {{"a", "sequence spec", std::nullopt},
                      {"r", "distinct rationals, comma list of p/q", std::nullopt},
                      {"P", "number of primes", std::nullopt},
                      {"E", "largest exponent", std::nullopt},
                      {"form", "exact or paper", std::nullopt}},
                     false, detail::gram_check});
        t.push_back({"randomized", "bernstein", "Monte-Carlo tail of random-sign averages",
                     {{"w", "sequence spec for b", std::nullopt},
                      N,
                      {"delta", "threshold", std::nullopt},
                      {"trials", "number of sign vectors", std::nullopt}},
                     true, detail::randomized_bernstein});
        t.push_back({"randomized", "orthogonality", "random signs against sampled net-valued functions",
                     {{"a", "sequence spec", std::nullopt},
                      {"ell", "number of factors", std::nullopt},
                      {"shifts", "ell shifts, comma list", std::nullopt},
                      {"N-grid", "increasing list of N", std::nullopt},
                      {"samples", "sampled tuples per N", std::nullopt},
                      {"epsilon", "net radius, or 'auto' for (log N)^-2", "auto"}},
                     true, detail::randomized_orthogonality});
        t.push_back({"certificate", "pattern", "smallest r with w(r m!/i + j) = c for all i, j <= m",
                     {{"w", "sequence spec", std::nullopt},
                      {"m", "pattern size", std::nullopt},
                      {"c", "target value, re or re,im", "1"},
                      {"r-max", "largest r tried", std::nullopt}},
                     false, detail::certificate_pattern});
        t.push_back({"certificate", "interval", "+-1 completely multiplicative a alternating on even-length intervals",
                     {N, {"max-intervals", "number of intervals placed", "64"}}, false, detail::certificate_interval});
        t.push_back({"certificate", "net", "epsilon-net size and projection errors of random functions",
                     {{"epsilon", "net radius", std::nullopt}, N, {"samples", "random functions", std::nullopt}}, true,
                     detail::certificate_net});
        return t;
    }();
    return table;
}

inline const CommandDef& find_command(const std::string& full) {
    for (const auto& c : commands())
        if (c.full_name() == full) return c;
    throw DomainError("unknown command '" + full + "'");
}

/// Checks names, fills defaults, enforces seeds.  Returns the completed config.
inline ExperimentConfig complete(ExperimentConfig cfg) {
    const CommandDef& def = find_command(cfg.command);
    for (const auto& [k, v] : cfg.params) {
        bool known = false;
        for (const auto& p : def.params) known = known || p.name == k;
        if (!known) throw DomainError("'" + cfg.command + "' has no parameter --" + k);
    }
    for (const auto& p : def.params) {
        if (cfg.params.count(p.name)) continue;
        if (!p.default_value) throw DomainError("'" + cfg.command + "' requires --" + p.name);
        cfg.params[p.name] = *p.default_value;
    }
    if (def.seeded && !cfg.seed) throw DomainError("'" + cfg.command + "' requires an explicit --seed");
    if (!def.seeded && cfg.seed) throw DomainError("'" + cfg.command + "' takes no --seed");
    require(cfg.workers >= 1, "workers must be >= 1");
    return cfg;
}

inline std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunOutput {
    int exit_code = 0;
    std::string payload;  // the result file contents
    std::string summary;
};

/// Runs a completed config and renders the result; does not touch the filesystem.
inline RunOutput execute(const ExperimentConfig& cfg) {
    const CommandDef& def = find_command(cfg.command);
    auto t0 = std::chrono::steady_clock::now();
    CommandResult r = def.handler(Context(cfg));
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta = r.metadata;
    meta["timestamp"] = utc_timestamp();
    meta["elapsed_s"] = elapsed;
    meta["workers"] = cfg.workers;
    meta["output"] = cfg.output_path;
    meta["version"] = kVersion;

    RunOutput out;
    out.exit_code = r.exit_code;
    out.summary = cfg.command + ": " + r.summary;
    const json config = config_to_json(cfg);
    if (cfg.format == Format::json) {
        json doc = {{"schema", "edlab/" + def.group + "-" + def.name + "/1"},
                    {"config", config},
                    {"result", r.result},
                    {"metadata", meta}};
        out.payload = doc.dump(2) + "\n";
    } else {
        out.payload = r.csv.render(config.dump(), meta.dump());
    }
    return out;
}

/// Full run: completes the config, executes, writes the file, prints the
/// summary.  Exceptions map to exit codes 1 (domain) and 2 (resource).
inline int run(ExperimentConfig cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        cfg = complete(std::move(cfg));
        RunOutput o = execute(cfg);
        if (cfg.output_path.empty()) {
            out << o.payload;
            err << o.summary << "\n";
        } else {
            std::ofstream f(cfg.output_path, std::ios::binary);
            if (!f) throw DomainError("cannot write '" + cfg.output_path + "'");
            f << o.payload;
            out << o.summary << "\n";
        }
        return o.exit_code;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const std::bad_alloc&) {
        err << "resource error: out of memory\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace edlab::runner
