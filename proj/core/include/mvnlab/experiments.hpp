#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvnlab/block_operator.hpp"
#include "mvnlab/csv.hpp"

// Batch experiment runner behind the command-line tool.  Each command maps a
// small declarative config onto the library, collects a CSV table plus a
// pass/fail verdict, and writes artifacts deterministically (fixed seed ->
// byte-identical CSV).

namespace mvnlab {

struct ExperimentConfig {
    std::string command;
    std::vector<std::string> inputs;  // operator/algebra files, command-specific
    std::string out_path;             // CSV artifact; empty = don't write a file
    std::uint64_t seed = 1;
    double tol = 0.0;                 // 0 -> per-command default
    std::vector<int> n_schedule;      // empty -> per-command default
    std::vector<double> t_values;     // empty -> per-command default
    std::string family = "spike";     // topology-compare
    std::string kind = "full-unitary";// lie-closure subgroup kind
    int count = 0;                    // sample count; 0 -> per-command default
};

const std::vector<std::string>& experiment_commands();

// key=value lines, '#' comments; unknown keys raise ConfigError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
// One config assignment (also used for flag overrides); ConfigError on
// unknown keys or unparsable values.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ExperimentResult {
    CsvTable table;
    bool all_pass = true;
    std::vector<std::string> notes;  // human-readable summary lines
};

// Dispatches on cfg.command; throws ConfigError for unknown commands.
ExperimentResult run_experiment_command(const ExperimentConfig& cfg);

// Full runner: dispatch, optional CSV artifact, human summary on `out`.
// Returns the process exit code (0 all-pass, 1 any property failure).
int run_experiment(const ExperimentConfig& cfg, std::ostream& out);

// ---------------------------------------------------------------------------
// Star-law suite shared by the ops-check command and the acceptance gate:
// seeded random operator triples (mixed bounded/unbounded scalar tails,
// blocks up to 6x6, up to 8 prefix blocks) pushed through the *-algebra laws.

struct LawRow {
    int index = 0;
    std::string law;
    double residual = 0.0;
};

std::vector<LawRow> star_law_suite(std::uint64_t seed, int count);

// Relative deviation between two operators expected to agree: blockwise
// Frobenius on the prefix, sampled values on the tail, both normalized.
double law_residual(const BlockOperator& lhs, const BlockOperator& rhs);

inline constexpr double kStarLawTol = 1e-11;

} // namespace mvnlab
