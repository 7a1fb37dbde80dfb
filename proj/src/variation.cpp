#include "evopipe/variation.hpp"

#include <algorithm>

#include "evopipe/errors.hpp"

namespace evopipe {

namespace {

constexpr int kCrossoverRetries = 10;

bool acceptable(const PipelineGraph& g, TaskType task, int max_depth) {
    return validate(g, task, max_depth).ok();
}

PipelineGraph splice(const PipelineGraph& target, const NodePath& at, const NodeSpec& subtree) {
    PipelineGraph out = target;
    replace_at(out, at, subtree);
    return out;
}

PipelineGraph crossover_child(const PipelineGraph& target, const PipelineGraph& donor, TaskType task,
                              int max_depth, Rng& rng) {
    const std::vector<NodePath> target_paths = all_paths(target);
    const std::vector<NodePath> donor_paths = all_paths(donor);
    for (int attempt = 0; attempt < kCrossoverRetries; ++attempt) {
        const NodePath& at = target_paths[rng.index(target_paths.size())];
        const NodePath& from = donor_paths[rng.index(donor_paths.size())];
        PipelineGraph child = splice(target, at, node_at(donor, from));
        if (acceptable(child, task, max_depth)) return child;
    }
    return target;
}

}  // namespace

std::pair<PipelineGraph, PipelineGraph> subtree_crossover(const PipelineGraph& a, const PipelineGraph& b,
                                                          TaskType task, int max_depth, Rng& rng) {
    PipelineGraph first = crossover_child(a, b, task, max_depth, rng);
    PipelineGraph second = crossover_child(b, a, task, max_depth, rng);
    return {std::move(first), std::move(second)};
}

namespace {

void collect_common(const NodeSpec& a, const NodeSpec& b, NodePath& current, std::vector<NodePath>& out) {
    out.push_back(current);
    const std::size_t shared = std::min(a.children.size(), b.children.size());
    for (std::size_t i = 0; i < shared; ++i) {
        current.push_back(static_cast<int>(i));
        collect_common(a.children[i], b.children[i], current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<NodePath> common_region(const PipelineGraph& a, const PipelineGraph& b) {
    std::vector<NodePath> out;
    NodePath current;
    collect_common(a.root, b.root, current, out);
    return out;
}

std::pair<PipelineGraph, PipelineGraph> one_point_crossover(const PipelineGraph& a, const PipelineGraph& b,
                                                            TaskType task, int max_depth, Rng& rng) {
    const std::vector<NodePath> region = common_region(a, b);
    for (int attempt = 0; attempt < kCrossoverRetries; ++attempt) {
        const NodePath& at = region[rng.index(region.size())];
        PipelineGraph first = splice(a, at, node_at(b, at));
        PipelineGraph second = splice(b, at, node_at(a, at));
        if (acceptable(first, task, max_depth) && acceptable(second, task, max_depth)) {
            return {std::move(first), std::move(second)};
        }
    }
    return {a, b};
}

PipelineGraph mutate(const PipelineGraph& g, MutationKind kind, const std::vector<ModelKind>& catalog,
                     TaskType task, int max_depth, Rng& rng) {
    const std::vector<NodePath> paths = all_paths(g);
    PipelineGraph out = g;

    switch (kind) {
        case MutationKind::Simple: {
            const NodePath& at = paths[rng.index(paths.size())];
            const NodeSpec& node = node_at(g, at);
            // Position constraints: the root stays a predictor, and only
            // nodes with <= 1 child may become transformers.
            const bool predictors_only = at.empty() || node.children.size() > 1;
            const std::vector<ModelKind> pool = compatible_kinds(catalog, task, predictors_only);
            if (pool.empty()) return out;
            NodeSpec replacement = node;
            replacement.kind = pool[rng.index(pool.size())];
            replacement.hyperparams = default_hyperparams(replacement.kind);
            replace_at(out, at, std::move(replacement));
            return out;
        }
        case MutationKind::Growth: {
            const NodePath& at = paths[rng.index(paths.size())];
            const int budget = max_depth - static_cast<int>(at.size());
            if (budget < 1) return out;
            replace_at(out, at, random_pipeline(catalog, task, budget, rng).root);
            return out;
        }
        case MutationKind::Reduce: {
            if (paths.size() <= 1) return out;  // root only
            // Non-root positions start at index 1 of the pre-order listing.
            const NodePath& at = paths[1 + rng.index(paths.size() - 1)];
            erase_at(out, at);
            return out;
        }
    }
    return out;
}

}  // namespace evopipe
