// mvnlab: batch experiment runner for the block-algebra laboratory.
//
// Exit codes: 0 all checks passed; 1 a property check failed (including
// generator preconditions); 2 input error (bad flags, config, files).
// Diagnostics go to stderr as `LEVEL: module: message`.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mvnlab/errors.hpp"
#include "mvnlab/experiments.hpp"

namespace {

struct FlagValues {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    double tol = 0.0;
    std::string n_schedule;
    std::string t_values;
    std::string family;
    std::string kind;
    int count = 0;
    std::vector<std::string> inputs;
};

// Registers the shared option set on one subcommand.
void add_common_options(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--config", v.config, "key=value experiment config file");
    cmd->add_option("--out", v.out, "CSV output path (written atomically)");
    cmd->add_option("--seed", v.seed, "deterministic seed");
    cmd->add_option("--tol", v.tol, "pass/fail tolerance override");
    cmd->add_option("--n-schedule", v.n_schedule, "comma-separated n values, e.g. 8,16,32");
    cmd->add_option("--t-values", v.t_values, "comma-separated t values, e.g. 0.5,1.0");
    cmd->add_option("--family", v.family, "bundled family name (topology-compare)");
    cmd->add_option("--kind", v.kind, "subgroup kind (lie-closure): full-unitary, "
                                      "commutant, block-determinant-one, diagonal");
    cmd->add_option("--count", v.count, "sample count override");
    cmd->add_option("--input", v.inputs, "operator/algebra file(s)");
    cmd->add_option("inputs", v.inputs, "operator/algebra file(s)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for weighted block von Neumann algebras"};
    app.require_subcommand(0, 1);

    FlagValues v;
    const std::vector<std::pair<std::string, std::string>> blurbs = {
        {"ops-check", "star-algebra laws on seeded random operator triples"},
        {"topology-compare", "four operator metrics along a bundled sequence family"},
        {"trotter", "unitary product formula against its exponential target"},
        {"nelson", "commutator product formula against the bracket exponential"},
        {"lie-closure", "Lie-algebra closure of a unitary subgroup under sum/scale/bracket"},
        {"tensor-laws", "tensor star-algebra laws plus exact coherence identities"},
        {"exp-injectivity", "injectivity radius probe for the operator exponential"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& name : mvnlab::experiment_commands()) {
        std::string blurb;
        for (const auto& [cmd, text] : blurbs)
            if (cmd == name) blurb = text;
        subs.push_back(app.add_subcommand(name, blurb));
    }
    for (auto* sub : subs) add_common_options(sub, v);
    // Also accept --config at the top level (command supplied by the file).
    app.add_option("--config", v.config, "key=value experiment config file");

    try {
        app.parse(argc, argv);

        CLI::App* active = nullptr;
        for (auto* sub : subs)
            if (sub->parsed()) active = sub;

        mvnlab::ExperimentConfig cfg;
        if (!v.config.empty()) cfg = mvnlab::load_config(v.config);
        if (active) cfg.command = active->get_name();
        if (cfg.command.empty())
            throw mvnlab::ConfigError("no command: pass a subcommand or a config with command=");

        const auto given = [&](const char* flag) {
            return active && active->count(flag) > 0;
        };
        if (given("--out")) cfg.out_path = v.out;
        if (given("--seed")) cfg.seed = v.seed;
        if (given("--tol")) cfg.tol = v.tol;
        if (given("--n-schedule")) mvnlab::apply_config_entry(cfg, "n-schedule", v.n_schedule);
        if (given("--t-values")) mvnlab::apply_config_entry(cfg, "t-values", v.t_values);
        if (given("--family")) cfg.family = v.family;
        if (given("--kind")) cfg.kind = v.kind;
        if (given("--count")) cfg.count = v.count;
        if (!v.inputs.empty()) cfg.inputs = v.inputs;

        return mvnlab::run_experiment(cfg, std::cout);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits cleanly; bad usage is an input error
    } catch (const mvnlab::PreconditionFailed& e) {
        std::cerr << "ERROR: " << e.module() << ": " << e.what() << "\n";
        return 1;
    } catch (const mvnlab::Error& e) {
        std::cerr << "ERROR: " << e.module() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR: cli: " << e.what() << "\n";
        return 2;
    }
}
