#include "evopipe/model_kind.hpp"

#include <array>

#include "evopipe/errors.hpp"

namespace evopipe {

namespace {

struct KindInfo {
    ModelKind kind;
    const char* name;
    bool transformer;
    bool regression;
    bool classification;
};

constexpr std::array<KindInfo, 10> kKinds{{
    {ModelKind::MeanBaseline, "MeanBaseline", false, true, false},
    {ModelKind::MajorityBaseline, "MajorityBaseline", false, false, true},
    {ModelKind::LinearRegression, "LinearRegression", false, true, false},
    {ModelKind::RidgeRegression, "RidgeRegression", false, true, false},
    {ModelKind::LogisticRegression, "LogisticRegression", false, false, true},
    {ModelKind::KNearestNeighbors, "KNearestNeighbors", false, true, true},
    {ModelKind::DecisionTree, "DecisionTree", false, true, true},
    {ModelKind::BaggedTrees, "BaggedTrees", false, true, true},
    {ModelKind::GaussianNaiveBayes, "GaussianNaiveBayes", false, false, true},
    {ModelKind::StandardScaler, "StandardScaler", true, true, true},
}};

const KindInfo& info(ModelKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k;
    }
    throw Error("unknown model kind");
}

}  // namespace

bool is_transformer(ModelKind kind) { return info(kind).transformer; }

bool supports_task(ModelKind kind, TaskType task) {
    const KindInfo& k = info(kind);
    return task == TaskType::Regression ? k.regression : k.classification;
}

const std::string& to_string(ModelKind kind) {
    static const std::array<std::string, 10> names = [] {
        std::array<std::string, 10> out;
        for (std::size_t i = 0; i < kKinds.size(); ++i) out[i] = kKinds[i].name;
        return out;
    }();
    for (std::size_t i = 0; i < kKinds.size(); ++i) {
        if (kKinds[i].kind == kind) return names[i];
    }
    throw Error("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
    for (const auto& k : kKinds) {
        if (name == k.name) return k.kind;
    }
    throw Error("unknown model kind \"" + name + "\"");
}

Hyperparams default_hyperparams(ModelKind kind) {
    switch (kind) {
        case ModelKind::RidgeRegression: return {{"lambda", 1.0}};
        case ModelKind::LogisticRegression: return {{"epochs", 200.0}, {"step", 0.1}};
        case ModelKind::KNearestNeighbors: return {{"k", 5.0}};
        case ModelKind::DecisionTree: return {{"max_depth", 5.0}, {"min_leaf", 2.0}};
        case ModelKind::BaggedTrees:
            return {{"trees", 20.0}, {"bootstrap", 1.0}, {"max_depth", 5.0}, {"min_leaf", 2.0}};
        default: return {};
    }
}

const std::vector<ModelKind>& full_catalog() {
    static const std::vector<ModelKind> all = [] {
        std::vector<ModelKind> out;
        for (const auto& k : kKinds) out.push_back(k.kind);
        return out;
    }();
    return all;
}

std::vector<ModelKind> compatible_kinds(const std::vector<ModelKind>& catalog, TaskType task,
                                        bool predictors_only) {
    std::vector<ModelKind> out;
    for (ModelKind kind : catalog) {
        if (!supports_task(kind, task)) continue;
        if (predictors_only && is_transformer(kind)) continue;
        out.push_back(kind);
    }
    return out;
}

}  // namespace evopipe
