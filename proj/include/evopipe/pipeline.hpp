#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "evopipe/atomic_models.hpp"
#include "evopipe/model_kind.hpp"

namespace evopipe {

inline constexpr int kMaxArity = 3;

// One node of the genotype: an atomic model kind, its (fixed) hyperparameters
// and an ordered list of data inputs.
struct NodeSpec {
    ModelKind kind;
    Hyperparams hyperparams;
    std::vector<NodeSpec> children;

    bool operator==(const NodeSpec& other) const = default;
};

NodeSpec make_node(ModelKind kind, std::vector<NodeSpec> children = {});

// Rooted tree of model nodes; the root is the output node.
struct PipelineGraph {
    NodeSpec root;

    bool operator==(const PipelineGraph& other) const = default;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const PipelineGraph& graph, TaskType task, int depth_cap);

int size(const PipelineGraph& graph);
int depth(const PipelineGraph& graph);

// Random valid pipeline with a predictor root. Throws EmptyCatalogError when
// the catalog has no predictor for the task.
PipelineGraph random_pipeline(const std::vector<ModelKind>& catalog, TaskType task, int max_depth, Rng& rng);

// ---- tree addressing (used by the evolutionary operators) -------------------

// A node position as the child-index path from the root; {} is the root.
using NodePath = std::vector<int>;

std::vector<NodePath> all_paths(const PipelineGraph& graph);
const NodeSpec& node_at(const PipelineGraph& graph, const NodePath& path);
void replace_at(PipelineGraph& graph, const NodePath& path, NodeSpec subtree);
void erase_at(PipelineGraph& graph, const NodePath& path);

// ---- fitting ----------------------------------------------------------------

struct FittedNode {
    TrainedAtomic model;
    std::vector<FittedNode> children;
};

struct FittedPipeline {
    PipelineGraph graph;
    FittedNode root;
    TaskType task = TaskType::Regression;
    Eigen::Index n_features = 0;
    double fit_seconds = 0.0;      // wall time
    long long fit_cost_units = 0;  // deterministic cost, see clock.hpp
};

// Bottom-up fit with stacking semantics: leaves train on the raw features,
// internal predictors train on the column-concatenation of their children's
// train-set outputs, transformers forward transformed features.
FittedPipeline fit(const PipelineGraph& graph, const Dataset& train, Rng& rng);

Eigen::VectorXd predict(const FittedPipeline& fitted, const Eigen::MatrixXd& features);

// ---- serialization ----------------------------------------------------------

// JSON: {"kind": ..., "params": {...}, "children": [...]}, root at top.
std::string serialize(const PipelineGraph& graph);
PipelineGraph deserialize(const std::string& text);

}  // namespace evopipe
