#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evopipe/clock.hpp"
#include "evopipe/objectives.hpp"
#include "evopipe/selection.hpp"
#include "evopipe/variation.hpp"

namespace evopipe {

// Population-size walk 1, 2, 3, 5, ..., capped (55 by default). The
// duplicate leading 1 of the textbook sequence is dropped so prev/next are
// well-defined.
class FibonacciIterator {
public:
    explicit FibonacciIterator(int cap = 55);

    int state_by_index(int index) const;  // 1-based
    int next_state(int value) const;      // saturates at the cap
    int previous_state(int value) const;  // saturates at the first item

private:
    std::vector<int> items_;
};

struct AdaptiveState {
    int pop_size = 2;
    int offspring_size = 1;
    double cross_rate = 0.5;
    double mut_rate = 0.5;
    int max_depth = 2;
    int stagnation_cnt = 0;
    double current_std = 0.0;
    double max_std = 0.0;
};

struct GenerationRecord {
    int generation = 0;
    double best_q = 0.0;
    double hv = 0.0;
    int mu = 0;
    int lambda = 0;
    double cross_rate = 0.0;
    double mut_rate = 0.0;
    int max_depth = 0;
    double elapsed_s = 0.0;
};

struct RunTrace {
    std::vector<GenerationRecord> records;

    std::string to_csv() const;  // gen,best_q,hv,mu,lambda,cross_rate,mut_rate,max_depth,elapsed_s
};

enum class SelectionKind { Spea2, Nsga2 };

SelectionKind selection_from_string(const std::string& s);
std::string to_string(SelectionKind kind);

struct Budget {
    std::optional<int> generation_limit;
    std::optional<double> time_limit_s;
};

struct OptimizerConfig {
    std::vector<ModelKind> catalog = full_catalog();
    SelectionKind selection = SelectionKind::Spea2;
    double cross_rate = 0.5;
    double mut_rate = 0.5;
    int mu = 20;                        // fixed-parameter loops only
    std::optional<int> fixed_depth;     // disables depth adaptation when set
    int initial_depth = 2;
    int depth_hard_cap = 6;
    int stagnation_threshold = 5;
    int fib_cap = 55;
    int mu_floor = 2;
    bool use_time_objective = false;    // adds p as a third objective
    std::optional<PenaltyWeights> penalty;  // single-objective runs only
    std::size_t tournament_size = 3;
    double inner_validation_fraction = 0.25;
    ClockMode clock = ClockMode::Deterministic;
    int threads = 1;
};

struct RunResult {
    ParetoArchive archive;
    RunTrace trace;
    Individual best;          // best validation quality, refit at the end
    ObjectiveBounds bounds;   // observed over all evaluations (HV normalization)
};

// Population standard deviation of the quality component.
double quality_std(const Population& pop);

// The two self-configuration procedures; exposed for direct unit scenarios.
AdaptiveState depth_adaptation(AdaptiveState state, bool archive_changed, int stagnation_threshold,
                               int depth_hard_cap);
AdaptiveState adapted_evo_params(const std::vector<ObjectiveVector>& offspring_objs,
                                 const ParetoArchive& archive, AdaptiveState state,
                                 const FibonacciIterator& seq, int mu_floor);

// Parameter-free composer: Fibonacci population-size walk, diversity-driven
// rates, stagnation-driven depth growth. `data` is the training portion; an
// internal 75/25 validation split drives the quality objective.
RunResult run_parameter_free(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                             std::uint64_t seed);

// Classic steady-state (mu+lambda) loop with static parameters.
RunResult run_steady_state_mo(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                              std::uint64_t seed);

// Single-objective (mu+lambda) with tournament selection on q or on the
// penalty-based scalar fitness.
RunResult run_single_objective(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                               std::uint64_t seed);

// Fits a genotype on `train` and scores it on `eval` features/target.
// Exposed for final test-set reporting.
Individual evaluate_on(const PipelineGraph& graph, const Dataset& train, const Dataset& eval,
                       bool use_time_objective, std::uint64_t seed, RunClock* clock = nullptr);

}  // namespace evopipe
