#include "evopipe/pipeline.hpp"

#include <chrono>

#include <nlohmann/json.hpp>

#include "evopipe/errors.hpp"

namespace evopipe {

using json = nlohmann::json;

NodeSpec make_node(ModelKind kind, std::vector<NodeSpec> children) {
    return NodeSpec{kind, default_hyperparams(kind), std::move(children)};
}

namespace {

void validate_node(const NodeSpec& node, TaskType task, int depth_cap, int depth, bool is_root,
                   std::vector<std::string>& out) {
    const std::string label = to_string(node.kind);
    if (!supports_task(node.kind, task)) {
        out.push_back(label + ": kind incompatible with task " + to_string(task));
    }
    if (is_root && is_transformer(node.kind)) {
        out.push_back(label + ": root must be a predictor");
    }
    if (static_cast<int>(node.children.size()) > kMaxArity) {
        out.push_back(label + ": arity " + std::to_string(node.children.size()) + " exceeds max " +
                      std::to_string(kMaxArity));
    }
    if (is_transformer(node.kind) && node.children.size() > 1) {
        out.push_back(label + ": transformer must have at most one child");
    }
    if (depth > depth_cap) {
        out.push_back(label + ": depth exceeds cap " + std::to_string(depth_cap));
    }
    for (const NodeSpec& child : node.children) {
        validate_node(child, task, depth_cap, depth + 1, false, out);
    }
}

int node_size(const NodeSpec& node) {
    int total = 1;
    for (const NodeSpec& child : node.children) total += node_size(child);
    return total;
}

int node_depth(const NodeSpec& node) {
    int deepest = 0;
    for (const NodeSpec& child : node.children) deepest = std::max(deepest, node_depth(child));
    return deepest + 1;
}

}  // namespace

ValidationReport validate(const PipelineGraph& graph, TaskType task, int depth_cap) {
    ValidationReport report;
    validate_node(graph.root, task, depth_cap, 1, true, report.violations);
    return report;
}

int size(const PipelineGraph& graph) { return node_size(graph.root); }

int depth(const PipelineGraph& graph) { return node_depth(graph.root); }

namespace {

NodeSpec random_node(const std::vector<ModelKind>& predictors, const std::vector<ModelKind>& any_kinds,
                     int remaining_depth, bool must_be_predictor, Rng& rng) {
    const std::vector<ModelKind>& pool = must_be_predictor ? predictors : any_kinds;
    NodeSpec node = make_node(pool[rng.index(pool.size())]);
    if (remaining_depth <= 1) return node;

    const int arity_cap = is_transformer(node.kind) ? 1 : kMaxArity;
    const int n_children = static_cast<int>(rng.range(0, arity_cap));
    for (int i = 0; i < n_children; ++i) {
        node.children.push_back(random_node(predictors, any_kinds, remaining_depth - 1, false, rng));
    }
    return node;
}

}  // namespace

PipelineGraph random_pipeline(const std::vector<ModelKind>& catalog, TaskType task, int max_depth, Rng& rng) {
    const std::vector<ModelKind> predictors = compatible_kinds(catalog, task, true);
    if (predictors.empty()) {
        throw EmptyCatalogError("no predictor in the catalog is compatible with task " + to_string(task));
    }
    const std::vector<ModelKind> any_kinds = compatible_kinds(catalog, task, false);
    return PipelineGraph{random_node(predictors, any_kinds, max_depth, true, rng)};
}

// ---- tree addressing ---------------------------------------------------------

namespace {

void collect_paths(const NodeSpec& node, NodePath& current, std::vector<NodePath>& out) {
    out.push_back(current);
    for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
        current.push_back(i);
        collect_paths(node.children[static_cast<std::size_t>(i)], current, out);
        current.pop_back();
    }
}

NodeSpec* walk(PipelineGraph& graph, const NodePath& path) {
    NodeSpec* node = &graph.root;
    for (int step : path) {
        if (step < 0 || step >= static_cast<int>(node->children.size())) {
            throw Error("invalid node path");
        }
        node = &node->children[static_cast<std::size_t>(step)];
    }
    return node;
}

}  // namespace

std::vector<NodePath> all_paths(const PipelineGraph& graph) {
    std::vector<NodePath> out;
    NodePath current;
    collect_paths(graph.root, current, out);
    return out;
}

const NodeSpec& node_at(const PipelineGraph& graph, const NodePath& path) {
    return *walk(const_cast<PipelineGraph&>(graph), path);
}

void replace_at(PipelineGraph& graph, const NodePath& path, NodeSpec subtree) {
    *walk(graph, path) = std::move(subtree);
}

void erase_at(PipelineGraph& graph, const NodePath& path) {
    if (path.empty()) throw Error("cannot erase the root");
    NodePath parent_path(path.begin(), path.end() - 1);
    NodeSpec* parent = walk(graph, parent_path);
    parent->children.erase(parent->children.begin() + path.back());
}

// ---- fitting ------------------------------------------------------------------

namespace {

struct FitOutcome {
    FittedNode node;
    Eigen::MatrixXd output;  // train-set predictions (n x 1) or transformed features
};

Eigen::MatrixXd hcat(const std::vector<Eigen::MatrixXd>& blocks) {
    Eigen::Index cols = 0;
    for (const auto& b : blocks) cols += b.cols();
    Eigen::MatrixXd out(blocks.front().rows(), cols);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    return out;
}

FitOutcome fit_node(const NodeSpec& spec, const Eigen::MatrixXd& raw, const Eigen::VectorXd& y, Rng& rng,
                    long long& cost_units) {
    FitOutcome outcome;
    Eigen::MatrixXd input;
    if (spec.children.empty()) {
        input = raw;
    } else {
        std::vector<Eigen::MatrixXd> blocks;
        blocks.reserve(spec.children.size());
        for (const NodeSpec& child : spec.children) {
            FitOutcome sub = fit_node(child, raw, y, rng, cost_units);
            blocks.push_back(std::move(sub.output));
            outcome.node.children.push_back(std::move(sub.node));
        }
        input = hcat(blocks);
    }
    outcome.node.model = fit_atomic(spec.kind, input, y, rng, spec.hyperparams);
    cost_units += outcome.node.model.cost_units;
    if (is_transformer(spec.kind)) {
        outcome.output = transform_atomic(outcome.node.model, input);
    } else {
        outcome.output = predict_atomic(outcome.node.model, input);
    }
    return outcome;
}

Eigen::MatrixXd predict_node(const FittedNode& node, const Eigen::MatrixXd& raw) {
    Eigen::MatrixXd input;
    if (node.children.empty()) {
        input = raw;
    } else {
        std::vector<Eigen::MatrixXd> blocks;
        blocks.reserve(node.children.size());
        for (const FittedNode& child : node.children) blocks.push_back(predict_node(child, raw));
        input = hcat(blocks);
    }
    if (is_transformer(node.model.kind)) return transform_atomic(node.model, input);
    return predict_atomic(node.model, input);
}

}  // namespace

FittedPipeline fit(const PipelineGraph& graph, const Dataset& train, Rng& rng) {
    if (train.n_samples() < 2) throw DegenerateDataError("fit: need at least 2 samples");
    if (train.task == TaskType::BinaryClassification) {
        const double first = train.target[0];
        bool two_classes = false;
        for (Eigen::Index i = 1; i < train.target.size(); ++i) {
            if (train.target[i] != first) {
                two_classes = true;
                break;
            }
        }
        if (!two_classes) throw DegenerateDataError("fit: classification target has a single class");
    }

    const auto start = std::chrono::steady_clock::now();
    FittedPipeline fitted;
    fitted.graph = graph;
    fitted.task = train.task;
    fitted.n_features = train.n_features();
    long long cost_units = 0;
    fitted.root = fit_node(graph.root, train.features, train.target, rng, cost_units).node;
    fitted.fit_cost_units = cost_units;
    fitted.fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return fitted;
}

Eigen::VectorXd predict(const FittedPipeline& fitted, const Eigen::MatrixXd& features) {
    if (features.cols() != fitted.n_features) {
        throw ShapeMismatchError("predict: " + std::to_string(features.cols()) + " columns, trained on " +
                                 std::to_string(fitted.n_features));
    }
    Eigen::MatrixXd out = predict_node(fitted.root, features);
    return out.col(0);
}

// ---- serialization --------------------------------------------------------------

namespace {

json node_to_json(const NodeSpec& node) {
    json j;
    j["kind"] = to_string(node.kind);
    j["params"] = json::object();
    for (const auto& [key, value] : node.hyperparams) j["params"][key] = value;
    j["children"] = json::array();
    for (const NodeSpec& child : node.children) j["children"].push_back(node_to_json(child));
    return j;
}

NodeSpec node_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ParseError("pipeline node must be an object with a \"kind\" field", 0);
    }
    NodeSpec node;
    try {
        node.kind = model_kind_from_string(j.at("kind").get<std::string>());
    } catch (const Error& e) {
        throw ParseError(e.what(), 0);
    }
    if (j.contains("params")) {
        for (const auto& [key, value] : j.at("params").items()) {
            node.hyperparams[key] = value.get<double>();
        }
    } else {
        node.hyperparams = default_hyperparams(node.kind);
    }
    if (j.contains("children")) {
        for (const json& child : j.at("children")) node.children.push_back(node_from_json(child));
    }
    return node;
}

}  // namespace

std::string serialize(const PipelineGraph& graph) { return node_to_json(graph.root).dump(); }

PipelineGraph deserialize(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    return PipelineGraph{node_from_json(j)};
}

}  // namespace evopipe
