#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evopipe/optimizer.hpp"

namespace evopipe {

struct ExperimentSpec {
    std::string experiment;  // exp1 | exp2 | exp3 | baseline
    std::string data;        // csv path or "synth:<kind>:<n>:<noise>"
    std::optional<std::string> target;  // csv target column (name or 0-based index); default: last
    std::optional<std::string> task;    // "classification" | "regression"; default: inferred
    int reps = 10;
    std::uint64_t seed_base = 42;
    std::string out_dir = "results";
    int generations = 30;
    std::optional<double> time_limit_s;
    int threads = 1;
    double train_fraction = 0.7;
};

// JSON config round-trip; unset optionals serialize as null.
ExperimentSpec spec_from_json_text(const std::string& text);
std::string spec_to_json_text(const ExperimentSpec& spec);

// Variant list per experiment id (baseline list depends on the task).
std::vector<std::string> experiment_variants(const std::string& experiment, TaskType task);

struct FinalRecord {
    std::string variant;
    int rep = 0;
    std::uint64_t seed = 0;
    double quality = 0.0;  // display convention: ROC AUC positive, or RMSE
    double q = 0.0;        // minimized objective on the test split
    int gs = 1;
    int gd = 1;
    std::optional<double> hv;  // absent for baseline variants
    std::optional<int> nf;
    std::string best_genotype;
};

struct SummaryRow {
    std::string variant;
    double quality_median = 0.0;
    double quality_spread = 0.0;  // (max - min) / median
    bool spread_exceeds_5pct = false;
    int gs_best = 1;
    int gd_best = 1;
    std::optional<double> hv_median;
    std::optional<double> nf_median;
};

struct SummaryReport {
    std::vector<SummaryRow> rows;
    std::vector<FinalRecord> finals;
};

// Runs every variant x repetition, writes traces/pareto/best/finals/summary
// CSVs under spec.out_dir and returns the aggregated report.
SummaryReport run_experiment(const ExperimentSpec& spec);

// Aggregation used by run_experiment; exposed for tests.
std::vector<SummaryRow> summarize(const std::vector<FinalRecord>& finals);

// Loads "synth:kind:n:noise" or a CSV path into a dataset.
Dataset load_dataset(const std::string& data_spec, const std::optional<std::string>& target,
                     const std::optional<std::string>& task);

// Seed used for the final test-set refit of a repetition's champion; derived
// from the repetition seed so stored results can be recomputed exactly.
std::uint64_t final_eval_seed(std::uint64_t rep_seed);

// Frontier export: objective_0,objective_1[,objective_2],genotype_json.
std::string pareto_to_csv(const ParetoArchive& archive);

}  // namespace evopipe
