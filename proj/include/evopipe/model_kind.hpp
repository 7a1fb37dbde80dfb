#pragma once

#include <map>
#include <string>
#include <vector>

#include "evopipe/dataset.hpp"

namespace evopipe {

enum class ModelKind {
    MeanBaseline,
    MajorityBaseline,
    LinearRegression,
    RidgeRegression,
    LogisticRegression,
    KNearestNeighbors,
    DecisionTree,
    BaggedTrees,
    GaussianNaiveBayes,
    StandardScaler,
};

using Hyperparams = std::map<std::string, double>;

bool is_transformer(ModelKind kind);
bool supports_task(ModelKind kind, TaskType task);
const std::string& to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Fixed defaults; structure search leaves these untouched.
Hyperparams default_hyperparams(ModelKind kind);

// All ten kinds.
const std::vector<ModelKind>& full_catalog();

// Kinds from `catalog` usable for `task`; `predictors_only` drops transformers.
std::vector<ModelKind> compatible_kinds(const std::vector<ModelKind>& catalog, TaskType task,
                                        bool predictors_only);

}  // namespace evopipe
