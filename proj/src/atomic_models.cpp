#include "evopipe/atomic_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "evopipe/errors.hpp"

namespace evopipe {

namespace {

double hp(const Hyperparams& params, const Hyperparams& defaults, const std::string& key) {
    if (auto it = params.find(key); it != params.end()) return it->second;
    return defaults.at(key);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// ---- ordinary least squares / ridge ----------------------------------------

LinearState solve_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                                bool* fell_back) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const Eigen::VectorXd x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - x_mean.transpose();
    const Eigen::VectorXd yc = y.array() - y_mean;

    Eigen::MatrixXd gram = xc.transpose() * xc;
    if (lambda > 0.0) gram.diagonal().array() += lambda;

    Eigen::VectorXd coef;
    if (lambda > 0.0) {
        coef = gram.ldlt().solve(xc.transpose() * yc);
    } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible()) {
            // Exactly collinear columns: ridge fallback, reported via flag.
            if (fell_back) *fell_back = true;
            gram.diagonal().array() += 1e-6;
            coef = gram.ldlt().solve(xc.transpose() * yc);
        } else {
            coef = lu.solve(xc.transpose() * yc);
        }
    }
    (void)n;
    LinearState state;
    state.coef = coef;
    state.intercept = y_mean - x_mean.dot(coef);
    (void)d;
    return state;
}

// ---- decision tree ----------------------------------------------------------

struct TreeBuilder {
    const Eigen::MatrixXd& x;
    const Eigen::VectorXd& y;
    int max_depth;
    int min_leaf;
    std::vector<TreeNode> nodes;

    int build(std::vector<int>& idx, int depth) {
        const int me = static_cast<int>(nodes.size());
        nodes.emplace_back();
        double sum = 0.0, sumsq = 0.0;
        for (int i : idx) {
            sum += y[i];
            sumsq += y[i] * y[i];
        }
        const double n = static_cast<double>(idx.size());
        nodes[me].value = sum / n;
        const double parent_sse = sumsq - sum * sum / n;
        if (depth >= max_depth || static_cast<int>(idx.size()) < 2 * min_leaf || parent_sse <= 1e-12) {
            return me;
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_sse = parent_sse;
        for (int f = 0; f < static_cast<int>(x.cols()); ++f) {
            std::sort(idx.begin(), idx.end(), [&](int a, int b) {
                if (x(a, f) != x(b, f)) return x(a, f) < x(b, f);
                return a < b;
            });
            double lsum = 0.0, lsumsq = 0.0;
            for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
                const double v = y[idx[k]];
                lsum += v;
                lsumsq += v * v;
                const std::size_t nl = k + 1;
                const std::size_t nr = idx.size() - nl;
                if (nl < static_cast<std::size_t>(min_leaf) || nr < static_cast<std::size_t>(min_leaf)) continue;
                if (x(idx[k], f) == x(idx[k + 1], f)) continue;  // no boundary between equal values
                const double rsum = sum - lsum;
                const double rsumsq = sumsq - lsumsq;
                const double sse = (lsumsq - lsum * lsum / static_cast<double>(nl)) +
                                   (rsumsq - rsum * rsum / static_cast<double>(nr));
                if (sse < best_sse - 1e-12) {
                    best_sse = sse;
                    best_feature = f;
                    best_threshold = 0.5 * (x(idx[k], f) + x(idx[k + 1], f));
                }
            }
        }
        if (best_feature < 0) return me;

        std::vector<int> left, right;
        for (int i : idx) (x(i, best_feature) <= best_threshold ? left : right).push_back(i);
        nodes[me].feature = best_feature;
        nodes[me].threshold = best_threshold;
        nodes[me].left = build(left, depth + 1);
        nodes[me].right = build(right, depth + 1);
        return me;
    }
};

TreeState fit_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int max_depth, int min_leaf) {
    TreeBuilder builder{x, y, max_depth, min_leaf, {}};
    std::vector<int> idx(static_cast<std::size_t>(x.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    builder.build(idx, 0);
    return {std::move(builder.nodes)};
}

double tree_predict_row(const TreeState& tree, const Eigen::MatrixXd& x, Eigen::Index row) {
    int node = 0;
    while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = x(row, nd.feature) <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].value;
}

Eigen::VectorXd tree_predict(const TreeState& tree, const Eigen::MatrixXd& x) {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = tree_predict_row(tree, x, r);
    return out;
}

// ---- gaussian naive bayes ----------------------------------------------------

GnbState fit_gnb(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    GnbState state;
    const Eigen::Index d = x.cols();
    // Smoothing scale: largest overall feature variance.
    Eigen::VectorXd overall_mean = x.colwise().mean();
    double max_var = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
        const double v = (x.col(c).array() - overall_mean[c]).square().mean();
        max_var = std::max(max_var, v);
    }
    const double smoothing = std::max(1e-9 * max_var, 1e-9);

    for (int cls = 0; cls < 2; ++cls) {
        std::vector<Eigen::Index> rows;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            if ((y[i] == 1.0) == (cls == 1)) rows.push_back(i);
        }
        state.mean[cls] = Eigen::VectorXd::Zero(d);
        state.var[cls] = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i : rows) state.mean[cls] += x.row(i).transpose();
        state.mean[cls] /= static_cast<double>(rows.size());
        for (Eigen::Index i : rows) {
            const Eigen::VectorXd dev = x.row(i).transpose() - state.mean[cls];
            state.var[cls] += dev.cwiseProduct(dev);
        }
        state.var[cls] /= static_cast<double>(rows.size());
        state.var[cls].array() += smoothing;
        state.var[cls] = state.var[cls].cwiseMax(1e-9);
        if (cls == 1) state.prior1 = static_cast<double>(rows.size()) / static_cast<double>(y.size());
    }
    return state;
}

Eigen::VectorXd gnb_predict(const GnbState& state, const Eigen::MatrixXd& x) {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double ll[2];
        for (int cls = 0; cls < 2; ++cls) {
            const double prior = cls == 1 ? state.prior1 : 1.0 - state.prior1;
            double acc = std::log(std::max(prior, 1e-300));
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                const double var = state.var[cls][c];
                const double dev = x(r, c) - state.mean[cls][c];
                acc += -0.5 * std::log(2.0 * std::numbers::pi * var) - dev * dev / (2.0 * var);
            }
            ll[cls] = acc;
        }
        out[r] = sigmoid(ll[1] - ll[0]);
    }
    return out;
}

}  // namespace

TrainedAtomic fit_atomic(ModelKind kind, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Rng& rng,
                         const Hyperparams& hyperparams) {
    if (x.rows() != y.size()) {
        throw ShapeMismatchError("fit_atomic: " + std::to_string(x.rows()) + " rows vs " +
                                 std::to_string(y.size()) + " targets");
    }
    if (x.rows() < 2) throw DegenerateDataError("fit_atomic: need at least 2 samples");
    const Hyperparams defaults = default_hyperparams(kind);

    TrainedAtomic model;
    model.kind = kind;
    model.n_features = x.cols();

    switch (kind) {
        case ModelKind::MeanBaseline:
            model.state = MeanState{y.mean()};
            model.cost_units = 1;
            break;
        case ModelKind::MajorityBaseline:
            model.state = MajorityState{y.mean()};
            model.cost_units = 1;
            break;
        case ModelKind::LinearRegression: {
            bool fell_back = false;
            model.state = solve_least_squares(x, y, 0.0, &fell_back);
            model.ridge_fallback = fell_back;
            model.cost_units = 3;
            break;
        }
        case ModelKind::RidgeRegression:
            model.state = solve_least_squares(x, y, hp(hyperparams, defaults, "lambda"), nullptr);
            model.cost_units = 3;
            break;
        case ModelKind::LogisticRegression: {
            const int epochs = static_cast<int>(hp(hyperparams, defaults, "epochs"));
            const double step = hp(hyperparams, defaults, "step");
            LogisticState state;
            state.feat_mean = x.colwise().mean();
            state.feat_std.resize(x.cols());
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                const double var = (x.col(c).array() - state.feat_mean[c]).square().mean();
                const double sd = std::sqrt(var);
                state.feat_std[c] = sd == 0.0 ? 1.0 : sd;
            }
            const Eigen::MatrixXd xs =
                (x.rowwise() - state.feat_mean.transpose()).array().rowwise() / state.feat_std.transpose().array();
            const double n = static_cast<double>(x.rows());
            state.coef = Eigen::VectorXd::Zero(x.cols());
            state.intercept = 0.0;
            for (int e = 0; e < epochs; ++e) {
                Eigen::VectorXd p = (xs * state.coef).array() + state.intercept;
                p = p.unaryExpr([](double z) { return sigmoid(z); });
                const Eigen::VectorXd residual = p - y;
                state.coef -= step * (xs.transpose() * residual) / n;
                state.intercept -= step * residual.mean();
            }
            model.state = std::move(state);
            model.cost_units = 40;
            break;
        }
        case ModelKind::KNearestNeighbors: {
            const int k = std::max(1, static_cast<int>(hp(hyperparams, defaults, "k")));
            model.state = KnnState{x, y, std::min<int>(k, static_cast<int>(x.rows()))};
            model.cost_units = 2;
            break;
        }
        case ModelKind::DecisionTree:
            model.state = fit_tree(x, y, static_cast<int>(hp(hyperparams, defaults, "max_depth")),
                                   static_cast<int>(hp(hyperparams, defaults, "min_leaf")));
            model.cost_units = 25;
            break;
        case ModelKind::BaggedTrees: {
            const int n_trees = std::max(1, static_cast<int>(hp(hyperparams, defaults, "trees")));
            const bool bootstrap = hp(hyperparams, defaults, "bootstrap") != 0.0;
            const int max_depth = static_cast<int>(hp(hyperparams, defaults, "max_depth"));
            const int min_leaf = static_cast<int>(hp(hyperparams, defaults, "min_leaf"));
            BaggedState state;
            state.trees.reserve(static_cast<std::size_t>(n_trees));
            for (int t = 0; t < n_trees; ++t) {
                if (bootstrap) {
                    Eigen::MatrixXd bx(x.rows(), x.cols());
                    Eigen::VectorXd by(y.size());
                    for (Eigen::Index i = 0; i < x.rows(); ++i) {
                        const auto pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(x.rows())));
                        bx.row(i) = x.row(pick);
                        by[i] = y[pick];
                    }
                    state.trees.push_back(fit_tree(bx, by, max_depth, min_leaf));
                } else {
                    state.trees.push_back(fit_tree(x, y, max_depth, min_leaf));
                }
            }
            model.state = std::move(state);
            model.cost_units = 25LL * n_trees;
            break;
        }
        case ModelKind::GaussianNaiveBayes:
            model.state = fit_gnb(x, y);
            model.cost_units = 2;
            break;
        case ModelKind::StandardScaler: {
            ScalerState state;
            state.mean = x.colwise().mean();
            state.std.resize(x.cols());
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                const double var = (x.col(c).array() - state.mean[c]).square().mean();
                const double sd = std::sqrt(var);
                state.std[c] = sd == 0.0 ? 1.0 : sd;  // constant-column guard
            }
            model.state = std::move(state);
            model.cost_units = 1;
            break;
        }
    }
    return model;
}

Eigen::VectorXd predict_atomic(const TrainedAtomic& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.n_features) {
        throw ShapeMismatchError("predict_atomic: " + std::to_string(x.cols()) + " columns, trained on " +
                                 std::to_string(model.n_features));
    }
    switch (model.kind) {
        case ModelKind::MeanBaseline:
            return Eigen::VectorXd::Constant(x.rows(), std::get<MeanState>(model.state).mean);
        case ModelKind::MajorityBaseline:
            return Eigen::VectorXd::Constant(x.rows(), std::get<MajorityState>(model.state).positive_rate);
        case ModelKind::LinearRegression:
        case ModelKind::RidgeRegression: {
            const auto& s = std::get<LinearState>(model.state);
            return (x * s.coef).array() + s.intercept;
        }
        case ModelKind::LogisticRegression: {
            const auto& s = std::get<LogisticState>(model.state);
            const Eigen::MatrixXd xs =
                (x.rowwise() - s.feat_mean.transpose()).array().rowwise() / s.feat_std.transpose().array();
            Eigen::VectorXd z = (xs * s.coef).array() + s.intercept;
            return z.unaryExpr([](double v) { return sigmoid(v); });
        }
        case ModelKind::KNearestNeighbors: {
            const auto& s = std::get<KnnState>(model.state);
            Eigen::VectorXd out(x.rows());
            const auto n_train = static_cast<std::size_t>(s.train_x.rows());
            std::vector<std::pair<double, std::size_t>> dist(n_train);
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                for (std::size_t i = 0; i < n_train; ++i) {
                    dist[i] = {(s.train_x.row(static_cast<Eigen::Index>(i)) - x.row(r)).squaredNorm(), i};
                }
                const auto k = static_cast<std::size_t>(s.k);
                std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
                double acc = 0.0;
                for (std::size_t i = 0; i < k; ++i) acc += s.train_y[static_cast<Eigen::Index>(dist[i].second)];
                out[r] = acc / static_cast<double>(k);
            }
            return out;
        }
        case ModelKind::DecisionTree:
            return tree_predict(std::get<TreeState>(model.state), x);
        case ModelKind::BaggedTrees: {
            const auto& s = std::get<BaggedState>(model.state);
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.rows());
            for (const TreeState& tree : s.trees) acc += tree_predict(tree, x);
            return acc / static_cast<double>(s.trees.size());
        }
        case ModelKind::GaussianNaiveBayes:
            return gnb_predict(std::get<GnbState>(model.state), x);
        case ModelKind::StandardScaler:
            throw Error("predict_atomic called on a transformer; use transform_atomic");
    }
    throw Error("unreachable");
}

Eigen::MatrixXd transform_atomic(const TrainedAtomic& model, const Eigen::MatrixXd& x) {
    if (model.kind != ModelKind::StandardScaler) {
        throw Error("transform_atomic called on a predictor; use predict_atomic");
    }
    if (x.cols() != model.n_features) {
        throw ShapeMismatchError("transform_atomic: " + std::to_string(x.cols()) + " columns, trained on " +
                                 std::to_string(model.n_features));
    }
    const auto& s = std::get<ScalerState>(model.state);
    return (x.rowwise() - s.mean.transpose()).array().rowwise() / s.std.transpose().array();
}

}  // namespace evopipe
