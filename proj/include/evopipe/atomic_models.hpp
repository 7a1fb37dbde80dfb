#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "evopipe/model_kind.hpp"
#include "evopipe/rng.hpp"

namespace evopipe {

struct MeanState {
    double mean = 0.0;
};

struct MajorityState {
    double positive_rate = 0.0;  // constant class-1 score
};

struct LinearState {
    Eigen::VectorXd coef;
    double intercept = 0.0;
};

struct LogisticState {
    Eigen::VectorXd coef;
    double intercept = 0.0;
    Eigen::VectorXd feat_mean;  // internal standardization
    Eigen::VectorXd feat_std;
};

struct KnnState {
    Eigen::MatrixXd train_x;
    Eigen::VectorXd train_y;
    int k = 5;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
};

struct TreeState {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct BaggedState {
    std::vector<TreeState> trees;
};

struct GnbState {
    Eigen::VectorXd mean[2];
    Eigen::VectorXd var[2];
    double prior1 = 0.5;
};

struct ScalerState {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
};

using AtomicState = std::variant<MeanState, MajorityState, LinearState, LogisticState, KnnState,
                                 TreeState, BaggedState, GnbState, ScalerState>;

struct TrainedAtomic {
    ModelKind kind;
    Eigen::Index n_features = 0;
    bool ridge_fallback = false;    // set when singular OLS fell back to lambda=1e-6
    long long cost_units = 0;       // logical training cost, see clock.hpp
    AtomicState state;
};

// Trains one atomic learner. Deterministic given the rng state (only bagging
// draws from it). Hyperparameters default per default_hyperparams(kind).
TrainedAtomic fit_atomic(ModelKind kind, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Rng& rng,
                         const Hyperparams& hyperparams = {});

// Predictor output: regression reals, classification class-1 scores in [0,1].
Eigen::VectorXd predict_atomic(const TrainedAtomic& model, const Eigen::MatrixXd& x);

// Transformer output (StandardScaler only): transformed feature matrix.
Eigen::MatrixXd transform_atomic(const TrainedAtomic& model, const Eigen::MatrixXd& x);

}  // namespace evopipe
