#pragma once

#include <utility>

#include "evopipe/pipeline.hpp"

namespace evopipe {

enum class MutationKind { Simple, Growth, Reduce };

// Replaces a uniformly random subtree in each offspring with a uniformly
// random subtree from the other parent. Offspring violating the depth cap
// (or the predictor-root rule) are re-drawn up to 10 times, then the parent
// is returned unchanged.
std::pair<PipelineGraph, PipelineGraph> subtree_crossover(const PipelineGraph& a, const PipelineGraph& b,
                                                          TaskType task, int max_depth, Rng& rng);

// Swaps the subtrees rooted at one position of the common region (positions
// reachable in both trees through matching child indices).
std::pair<PipelineGraph, PipelineGraph> one_point_crossover(const PipelineGraph& a, const PipelineGraph& b,
                                                            TaskType task, int max_depth, Rng& rng);

// simple: re-draw one node's kind; growth: regrow one subtree within the
// residual depth budget; reduce: delete one non-root subtree.
PipelineGraph mutate(const PipelineGraph& g, MutationKind kind, const std::vector<ModelKind>& catalog,
                     TaskType task, int max_depth, Rng& rng);

// Positions present in both trees (walked from the roots with matching
// child indices). Exposed for tests.
std::vector<NodePath> common_region(const PipelineGraph& a, const PipelineGraph& b);

}  // namespace evopipe
