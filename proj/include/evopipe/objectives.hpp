#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evopipe/pipeline.hpp"

namespace evopipe {

// All components are minimized: q is RMSE or -ROC AUC, s is graph size, p is
// optional fit time in seconds.
struct ObjectiveVector {
    double q = 0.0;
    double s = 0.0;
    std::optional<double> p;

    int arity() const { return p.has_value() ? 3 : 2; }
    double component(int i) const;
    std::vector<double> components() const;

    bool operator==(const ObjectiveVector& other) const = default;
};

struct PenaltyWeights {
    double w1 = 0.01;   // per-node complexity weight
    double w2 = 0.001;  // per-second time weight
};

// Scalar F = q + w1*s + w2*p, minimized. Requires p when w2 > 0.
double penalty_fitness(const ObjectiveVector& v, const PenaltyWeights& w);

// Strict Pareto dominance (componentwise <=, strictly < somewhere).
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

struct Individual {
    PipelineGraph graph;
    ObjectiveVector objectives;
    double fit_seconds = 0.0;
};

struct Population {
    std::vector<Individual> members;
    int generation = 0;
};

// Unbounded non-dominated archive. Entries with identical objective vectors
// are deduplicated; the representative is the lexicographically smallest
// genotype serialization so updates are order-insensitive.
struct ParetoArchive {
    std::vector<Individual> entries;

    std::size_t size() const { return entries.size(); }
    double best_component(int i) const;  // minimum over entries
};

// Merges candidates into the archive; returns true iff membership changed.
bool pareto_update(ParetoArchive& archive, const std::vector<Individual>& candidates);

// Exact hypervolume for 2-D (sort-and-sweep) or 3-D (per-slice sweep) fronts.
// Every point must be strictly below `ref` in all components.
double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref);

// Per-run normalization bounds for hypervolume reporting.
struct ObjectiveBounds {
    std::vector<double> mins;
    std::vector<double> maxs;

    void expand(const ObjectiveVector& v);
    bool valid() const { return !mins.empty(); }
};

// Normalizes the front into [0,1] per component using `bounds` and measures
// hypervolume against the (1.01, ...) reference point.
double normalized_hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveBounds& bounds);

}  // namespace evopipe
