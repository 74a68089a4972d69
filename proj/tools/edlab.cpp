// edlab: command-line front end for the experiment runner.

#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "edlab/runner.hpp"

namespace {

const char* kFooter = R"(Sequence specs (fields separated by ':'):
  ones | constant[:c] | even | liouville | cm-sign:SEED | cm-circle:SEED
  poly:D:alpha (alpha k^D) | poly:a_D,...,a_0 | linear:alpha | step3:<poly>
  random-sign:SEED | sparse:RULE:SEED[:c] (RULE = inverse_log, primes, const=V)
  parity:liouville|ones | intervals:A-B,C-D,...
Reals accept sqrt2, golden, pi (as 1.4142135623730951, 1.618033988749895,
3.141592653589793) and p/q; integers accept 1e6 and 10^6; complex values are
re or re,im.  Exit codes: 0 success, 1 domain error or bad usage, 2 resource
or budget limit.)";

struct Leaf {
    const edlab::runner::CommandDef* def;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string seed;
};

} // namespace

int main(int argc, char** argv) {
    using namespace edlab::runner;
    CLI::App app{"edlab: weighted discrepancy laboratory", "edlab"};
    app.footer(kFooter);
    app.require_subcommand(0, 1);

    std::string config_path, out_path, format;
    unsigned workers = 1;
    app.add_option("--config", config_path, "replay the config stored in a result file");
    app.add_option("--out", out_path, "output file (default: standard output)");
    app.add_option("--format", format, "json or csv (default: json)");
    app.add_option("--workers", workers, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);

    std::map<std::string, CLI::App*> groups;
    std::vector<std::unique_ptr<Leaf>> leaves;
    for (const auto& def : commands()) {
        if (!groups.count(def.group)) {
            auto* g = app.add_subcommand(def.group, def.group + " experiments");
            g->require_subcommand(1);
            g->fallthrough();
            groups[def.group] = g;
        }
        auto leaf = std::make_unique<Leaf>();
        leaf->def = &def;
        leaf->app = groups[def.group]->add_subcommand(def.name, def.help);
        leaf->app->fallthrough();
        leaf->app->set_help_flag("--help", "Print this help message and exit");  // --h is a lag list
        leaf->app->footer(kFooter);
        for (const auto& p : def.params) {
            std::string help = p.help + (p.default_value ? " (default: " + *p.default_value + ")" : " (required)");
            if (p.is_flag) leaf->app->add_flag("--" + p.name, leaf->flags[p.name], p.help);
            else leaf->app->add_option("--" + p.name, leaf->values[p.name], help);
        }
        if (def.seeded) leaf->app->add_option("--seed", leaf->seed, "64-bit seed (required)");
        leaves.push_back(std::move(leaf));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    ExperimentConfig cfg;
    Leaf* chosen = nullptr;
    for (auto& l : leaves)
        if (l->app->parsed()) chosen = l.get();
    try {
        if (!config_path.empty()) {
            if (chosen) throw edlab::DomainError("--config replays a stored run; do not give a command as well");
            cfg = load_config(config_path);
        } else {
            if (!chosen) {
                std::cerr << app.help();
                return 1;
            }
            cfg.command = chosen->def->full_name();
            for (const auto& p : chosen->def->params) {
                auto* opt = chosen->app->get_option("--" + p.name);
                if (opt->count() == 0) continue;
                cfg.params[p.name] = p.is_flag ? "true" : chosen->values[p.name];
            }
            if (!chosen->seed.empty()) cfg.seed = edlab::tokens::parse_uint(chosen->seed);
        }
        if (!format.empty()) cfg.format = parse_format(format);
    } catch (const edlab::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    cfg.output_path = out_path;
    cfg.workers = workers;
    return run(cfg);
}
