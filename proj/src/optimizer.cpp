#include "evopipe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "evopipe/csv.hpp"
#include "evopipe/errors.hpp"
#include "evopipe/metrics.hpp"

namespace evopipe {

FibonacciIterator::FibonacciIterator(int cap) {
    int a = 1, b = 2;
    items_.push_back(a);
    while (b <= cap) {
        items_.push_back(b);
        const int next = a + b;
        a = b;
        b = next;
    }
}

int FibonacciIterator::state_by_index(int index) const {
    if (index < 1 || index > static_cast<int>(items_.size())) throw Error("fibonacci index out of range");
    return items_[static_cast<std::size_t>(index - 1)];
}

int FibonacciIterator::next_state(int value) const {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i] == value) return i + 1 < items_.size() ? items_[i + 1] : items_[i];
    }
    throw Error("value " + std::to_string(value) + " is not in the population-size sequence");
}

int FibonacciIterator::previous_state(int value) const {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i] == value) return i > 0 ? items_[i - 1] : items_[i];
    }
    throw Error("value " + std::to_string(value) + " is not in the population-size sequence");
}

std::string RunTrace::to_csv() const {
    std::ostringstream out;
    out << "gen,best_q,hv,mu,lambda,cross_rate,mut_rate,max_depth,elapsed_s\n";
    for (const GenerationRecord& r : records) {
        out << r.generation << ',' << format_double(r.best_q) << ',' << format_double(r.hv) << ','
            << r.mu << ',' << r.lambda << ',' << format_double(r.cross_rate) << ','
            << format_double(r.mut_rate) << ',' << r.max_depth << ',' << format_double(r.elapsed_s)
            << '\n';
    }
    return out.str();
}

SelectionKind selection_from_string(const std::string& s) {
    if (s == "spea2") return SelectionKind::Spea2;
    if (s == "nsga2") return SelectionKind::Nsga2;
    throw ConfigError("unknown selection kind \"" + s + "\"");
}

std::string to_string(SelectionKind kind) {
    return kind == SelectionKind::Spea2 ? "spea2" : "nsga2";
}

double quality_std(const Population& pop) {
    if (pop.members.empty()) return 0.0;
    double mean = 0.0;
    for (const Individual& ind : pop.members) mean += ind.objectives.q;
    mean /= static_cast<double>(pop.members.size());
    double acc = 0.0;
    for (const Individual& ind : pop.members) {
        const double dev = ind.objectives.q - mean;
        acc += dev * dev;
    }
    return std::sqrt(acc / static_cast<double>(pop.members.size()));
}

AdaptiveState depth_adaptation(AdaptiveState state, bool archive_changed, int stagnation_threshold,
                               int depth_hard_cap) {
    if (archive_changed) {
        state.stagnation_cnt = 0;
        return state;
    }
    ++state.stagnation_cnt;
    if (state.stagnation_cnt >= stagnation_threshold) {
        state.max_depth = std::min(state.max_depth + 1, depth_hard_cap);
        state.stagnation_cnt = 0;
    }
    return state;
}

namespace {

constexpr double kImprovementTolerance = 1e-12;

bool improved(double archive_best, double offspring_best) {
    return archive_best - offspring_best > kImprovementTolerance;
}

}  // namespace

AdaptiveState adapted_evo_params(const std::vector<ObjectiveVector>& offspring_objs,
                                 const ParetoArchive& archive, AdaptiveState state,
                                 const FibonacciIterator& seq, int mu_floor) {
    double off_q = std::numeric_limits<double>::infinity();
    double off_s = std::numeric_limits<double>::infinity();
    for (const ObjectiveVector& v : offspring_objs) {
        off_q = std::min(off_q, v.q);
        off_s = std::min(off_s, v.s);
    }
    const bool q_improved = improved(archive.best_component(0), off_q);
    const bool s_improved = improved(archive.best_component(1), off_s);

    if (!q_improved && !s_improved) {
        state.pop_size = seq.next_state(state.pop_size);
        if (state.max_std > 0.0) {
            const double ratio = state.current_std / state.max_std;
            state.mut_rate = 1.0 - ratio;
            state.cross_rate = ratio;
        }
    } else if (q_improved && s_improved) {
        state.pop_size = std::max(seq.previous_state(state.pop_size), mu_floor);
    }
    return state;
}

// ---- shared run loop ---------------------------------------------------------

Individual evaluate_on(const PipelineGraph& graph, const Dataset& train, const Dataset& eval,
                       bool use_time_objective, std::uint64_t seed, RunClock* clock) {
    Rng rng(seed);
    FittedPipeline fitted = fit(graph, train, rng);
    if (clock) clock->charge(fitted.fit_cost_units);
    const double fit_secs = clock ? clock->fit_seconds(fitted.fit_seconds, fitted.fit_cost_units)
                                  : fitted.fit_seconds;
    const Eigen::VectorXd yhat = predict(fitted, eval.features);

    Individual ind;
    ind.graph = graph;
    ind.fit_seconds = fit_secs;
    ind.objectives.q = eval.task == TaskType::Regression ? rmse(eval.target, yhat)
                                                         : -roc_auc(eval.target, yhat);
    ind.objectives.s = static_cast<double>(size(graph));
    if (use_time_objective) ind.objectives.p = fit_secs;
    return ind;
}

namespace {

constexpr std::uint64_t kSaltSplit = 0x5B1A5E55ULL;
constexpr std::uint64_t kSaltEvolve = 0xE701FE11ULL;
constexpr std::uint64_t kSaltEval = 0x0E7A15EEDULL;
constexpr std::uint64_t kSaltRefit = 0x0F17A6A1ULL;

std::uint64_t eval_seed(std::uint64_t run_seed, int generation, std::size_t index) {
    const std::uint64_t mixed = splitmix64(static_cast<std::uint64_t>(generation) * 0x100000001B3ULL +
                                           static_cast<std::uint64_t>(index));
    return splitmix64((run_seed ^ kSaltEval) + mixed);
}

enum class LoopMode { ParameterFree, SteadyState, SingleObjective };

struct Evaluator {
    Dataset fit_split;
    Dataset val_split;
    bool use_time_objective = false;
    RunClock* clock = nullptr;
    int threads = 1;
    std::uint64_t run_seed = 0;

    std::vector<Individual> evaluate_all(const std::vector<PipelineGraph>& genotypes, int generation) const {
        std::vector<Individual> out(genotypes.size());
        const auto work = [&](std::size_t i) {
            out[i] = evaluate_on(genotypes[i], fit_split, val_split, use_time_objective,
                                 eval_seed(run_seed, generation, i), clock);
        };
        if (threads <= 1 || genotypes.size() <= 1) {
            for (std::size_t i = 0; i < genotypes.size(); ++i) work(i);
        } else {
            std::atomic<std::size_t> cursor{0};
            std::vector<std::thread> pool;
            const int n_threads = std::min<int>(threads, static_cast<int>(genotypes.size()));
            pool.reserve(static_cast<std::size_t>(n_threads));
            for (int t = 0; t < n_threads; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t i = cursor.fetch_add(1); i < genotypes.size(); i = cursor.fetch_add(1)) {
                        work(i);
                    }
                });
            }
            for (auto& th : pool) th.join();
        }
        return out;
    }
};

double scalar_fitness(const Individual& ind, const std::optional<PenaltyWeights>& penalty) {
    if (!penalty.has_value()) return ind.objectives.q;
    ObjectiveVector v = ind.objectives;
    if (!v.p.has_value()) v.p = ind.fit_seconds;
    return penalty_fitness(v, *penalty);
}

std::vector<Individual> mo_select(const Population& pop, std::size_t k, SelectionKind kind) {
    return kind == SelectionKind::Spea2 ? spea2_select(pop, k) : nsga2_select(pop, k);
}

std::vector<Individual> scalar_truncate(std::vector<Individual> pool, std::size_t k,
                                        const std::optional<PenaltyWeights>& penalty) {
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> fitness(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) fitness[i] = scalar_fitness(pool[i], penalty);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
        const auto ka = pool[a].objectives.components();
        const auto kb = pool[b].objectives.components();
        if (ka != kb) return ka < kb;
        return a < b;
    });
    std::vector<Individual> out;
    for (std::size_t i = 0; i < std::min(k, pool.size()); ++i) out.push_back(pool[order[i]]);
    return out;
}

std::vector<PipelineGraph> reproduce(const std::vector<Individual>& parents, std::size_t lambda,
                                     double cross_rate, double mut_rate, int max_depth,
                                     const std::vector<ModelKind>& catalog, TaskType task, Rng& rng) {
    std::vector<PipelineGraph> offspring;
    offspring.reserve(lambda);
    for (std::size_t i = 0; i < lambda; ++i) {
        const PipelineGraph& p1 = parents[rng.index(parents.size())].graph;
        const PipelineGraph& p2 = parents[rng.index(parents.size())].graph;
        PipelineGraph child = p1;
        if (rng.bernoulli(cross_rate)) {
            // Both crossover flavors are in play; pick one per event.
            if (rng.bernoulli(0.5)) {
                child = subtree_crossover(p1, p2, task, max_depth, rng).first;
            } else {
                child = one_point_crossover(p1, p2, task, max_depth, rng).first;
            }
        }
        if (rng.bernoulli(mut_rate)) {
            const auto kind = static_cast<MutationKind>(rng.range(0, 2));
            child = mutate(child, kind, catalog, task, max_depth, rng);
        }
        offspring.push_back(std::move(child));
    }
    return offspring;
}

RunResult run_loop(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                   std::uint64_t seed, LoopMode mode) {
    RunClock clock(config.clock);
    const FibonacciIterator seq(config.fib_cap);

    const SplitResult inner =
        train_test_split(data, 1.0 - config.inner_validation_fraction, splitmix64(seed ^ kSaltSplit));
    Evaluator evaluator{inner.train, inner.test, config.use_time_objective, &clock, config.threads, seed};

    AdaptiveState state;
    state.cross_rate = config.cross_rate;
    state.mut_rate = config.mut_rate;
    state.max_depth = config.fixed_depth.value_or(config.initial_depth);
    state.pop_size = mode == LoopMode::ParameterFree ? seq.state_by_index(2) : config.mu;

    Rng evolve_rng(splitmix64(seed ^ kSaltEvolve));
    std::vector<PipelineGraph> initial;
    initial.reserve(static_cast<std::size_t>(state.pop_size));
    for (int i = 0; i < state.pop_size; ++i) {
        initial.push_back(random_pipeline(config.catalog, data.task, state.max_depth, evolve_rng));
    }

    Population pop;
    pop.members = evaluator.evaluate_all(initial, 0);

    ObjectiveBounds bounds;
    double best_q = std::numeric_limits<double>::infinity();
    Individual best;
    double best_scalar = std::numeric_limits<double>::infinity();
    const auto absorb = [&](const Individual& ind) {
        bounds.expand(ind.objectives);
        best_q = std::min(best_q, ind.objectives.q);
        const double scalar = mode == LoopMode::SingleObjective ? scalar_fitness(ind, config.penalty)
                                                                : ind.objectives.q;
        if (scalar < best_scalar) {
            best_scalar = scalar;
            best = ind;
        }
    };
    for (const Individual& ind : pop.members) absorb(ind);

    state.current_std = quality_std(pop);
    state.max_std = state.current_std;

    ParetoArchive archive;
    RunTrace trace;
    std::vector<std::vector<ObjectiveVector>> archive_snapshots;

    int gen = 0;
    while (true) {
        if (budget.generation_limit.has_value() && gen >= *budget.generation_limit) break;
        if (budget.time_limit_s.has_value() && clock.elapsed() >= *budget.time_limit_s) break;
        ++gen;

        const int mu_used = mode == LoopMode::ParameterFree ? state.pop_size : config.mu;
        const int lambda = mode == LoopMode::ParameterFree ? seq.previous_state(mu_used) : mu_used;
        state.offspring_size = lambda;
        const double cross_used = state.cross_rate;
        const double mut_used = state.mut_rate;
        const int depth_used = state.max_depth;

        const bool archive_changed = pareto_update(archive, pop.members);

        std::vector<Individual> parents;
        if (mode == LoopMode::SingleObjective) {
            std::vector<double> fitness(pop.members.size());
            for (std::size_t i = 0; i < fitness.size(); ++i) {
                fitness[i] = scalar_fitness(pop.members[i], config.penalty);
            }
            parents.reserve(static_cast<std::size_t>(lambda));
            for (std::size_t idx : tournament_select_indices(fitness, static_cast<std::size_t>(lambda),
                                                             config.tournament_size, evolve_rng)) {
                parents.push_back(pop.members[idx]);
            }
        } else {
            parents = mo_select(pop, static_cast<std::size_t>(lambda), config.selection);
        }

        std::vector<PipelineGraph> offspring_genotypes =
            reproduce(parents, static_cast<std::size_t>(lambda), cross_used, mut_used, depth_used,
                      config.catalog, data.task, evolve_rng);
        std::vector<Individual> offspring = evaluator.evaluate_all(offspring_genotypes, gen);
        for (const Individual& ind : offspring) absorb(ind);

        if (!config.fixed_depth.has_value()) {
            state = depth_adaptation(state, archive_changed, config.stagnation_threshold,
                                     config.depth_hard_cap);
        }
        if (mode == LoopMode::ParameterFree) {
            std::vector<ObjectiveVector> offspring_objs;
            offspring_objs.reserve(offspring.size());
            for (const Individual& ind : offspring) offspring_objs.push_back(ind.objectives);
            state = adapted_evo_params(offspring_objs, archive, state, seq, config.mu_floor);
        }

        std::vector<Individual> pool = pop.members;
        pool.insert(pool.end(), offspring.begin(), offspring.end());
        const int mu_next = mode == LoopMode::ParameterFree ? state.pop_size : config.mu;
        if (mode == LoopMode::SingleObjective) {
            pop.members = scalar_truncate(std::move(pool), static_cast<std::size_t>(mu_next), config.penalty);
        } else {
            Population merged;
            merged.members = std::move(pool);
            pop.members = mo_select(merged, static_cast<std::size_t>(mu_next), config.selection);
        }
        pop.generation = gen;

        state.current_std = quality_std(pop);
        state.max_std = std::max(state.max_std, state.current_std);

        std::vector<ObjectiveVector> snapshot;
        snapshot.reserve(archive.entries.size());
        for (const Individual& e : archive.entries) snapshot.push_back(e.objectives);
        archive_snapshots.push_back(std::move(snapshot));

        GenerationRecord record;
        record.generation = gen;
        record.best_q = best_q;
        record.mu = mu_used;
        record.lambda = lambda;
        record.cross_rate = cross_used;
        record.mut_rate = mut_used;
        record.max_depth = depth_used;
        record.elapsed_s = clock.elapsed();
        trace.records.push_back(record);
    }

    if (gen == 0 && !(budget.generation_limit.has_value() && *budget.generation_limit == 0)) {
        throw BudgetTooSmallError("time budget exhausted before the first generation completed");
    }

    pareto_update(archive, pop.members);

    for (std::size_t g = 0; g < trace.records.size(); ++g) {
        trace.records[g].hv = normalized_hypervolume(archive_snapshots[g], bounds);
    }

    // Final refit evaluation of the champion genotype.
    Individual refit = evaluate_on(best.graph, inner.train, inner.test, config.use_time_objective,
                                   splitmix64(seed ^ kSaltRefit), &clock);

    RunResult result;
    result.archive = std::move(archive);
    result.trace = std::move(trace);
    result.best = std::move(refit);
    result.bounds = std::move(bounds);
    return result;
}

}  // namespace

RunResult run_parameter_free(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                             std::uint64_t seed) {
    return run_loop(data, config, budget, seed, LoopMode::ParameterFree);
}

RunResult run_steady_state_mo(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                              std::uint64_t seed) {
    return run_loop(data, config, budget, seed, LoopMode::SteadyState);
}

RunResult run_single_objective(const Dataset& data, const OptimizerConfig& config, const Budget& budget,
                               std::uint64_t seed) {
    return run_loop(data, config, budget, seed, LoopMode::SingleObjective);
}

}  // namespace evopipe
