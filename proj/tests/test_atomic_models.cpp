#include <doctest.h>

#include <cmath>

#include "evopipe/atomic_models.hpp"
#include "evopipe/errors.hpp"
#include "evopipe/metrics.hpp"

using namespace evopipe;

namespace {

Eigen::MatrixXd column(std::initializer_list<double> values) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index i = 0;
    for (double v : values) x(i++, 0) = v;
    return x;
}

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) y[i++] = v;
    return y;
}

}  // namespace

TEST_CASE("least squares recovers y = 2x + 1 exactly") {
    Rng rng(1);
    const TrainedAtomic model =
        fit_atomic(ModelKind::LinearRegression, column({0, 1, 2}), vec({1, 3, 5}), rng);
    const auto& state = std::get<LinearState>(model.state);
    CHECK(state.coef[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(state.intercept == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(model.ridge_fallback);
}

TEST_CASE("exactly collinear inputs trigger the ridge fallback flag") {
    Eigen::MatrixXd x(4, 2);
    x << 1, 2, 2, 4, 3, 6, 4, 8;  // second column is twice the first
    Rng rng(1);
    const TrainedAtomic model = fit_atomic(ModelKind::LinearRegression, x, vec({1, 2, 3, 4}), rng);
    CHECK(model.ridge_fallback);
    const Eigen::VectorXd yhat = predict_atomic(model, x);
    CHECK(rmse(vec({1, 2, 3, 4}), yhat) <= 1e-3);
}

TEST_CASE("ridge with vanishing lambda approaches least squares") {
    Rng rng(3);
    Eigen::MatrixXd x(30, 2);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = 1.5 * x(i, 0) - 0.5 * x(i, 1) + 2.0 + 0.01 * rng.normal();
    }
    const TrainedAtomic ols = fit_atomic(ModelKind::LinearRegression, x, y, rng);
    const TrainedAtomic ridge = fit_atomic(ModelKind::RidgeRegression, x, y, rng, {{"lambda", 1e-10}});
    const Eigen::VectorXd delta = predict_atomic(ols, x) - predict_atomic(ridge, x);
    CHECK(delta.cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("majority baseline scores the empirical positive rate") {
    Rng rng(1);
    const TrainedAtomic model =
        fit_atomic(ModelKind::MajorityBaseline, column({7, 8, 9}), vec({1, 1, 0}), rng);
    const Eigen::VectorXd scores = predict_atomic(model, column({0, 100}));
    CHECK(scores[0] == doctest::Approx(2.0 / 3.0));
    CHECK(scores[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("decision tree solves 4-point xor at depth 2") {
    Eigen::MatrixXd x(4, 2);
    x << 0, 0, 0, 1, 1, 0, 1, 1;
    const Eigen::VectorXd y = vec({0, 1, 1, 0});

    // Exhaustive oracle: some depth-2 tree must reach training accuracy 1
    // (split on x0 at 0.5, then on x1 at 0.5 in each branch).
    int correct = 0;
    for (int i = 0; i < 4; ++i) {
        const double left = x(i, 0) <= 0.5;
        const double predicted = left ? (x(i, 1) <= 0.5 ? 0 : 1) : (x(i, 1) <= 0.5 ? 1 : 0);
        correct += predicted == y[i];
    }
    REQUIRE(correct == 4);

    Rng rng(1);
    const TrainedAtomic tree =
        fit_atomic(ModelKind::DecisionTree, x, y, rng, {{"max_depth", 2.0}, {"min_leaf", 1.0}});
    const Eigen::VectorXd scores = predict_atomic(tree, x);
    for (int i = 0; i < 4; ++i) CHECK(std::round(scores[i]) == y[i]);
}

TEST_CASE("gaussian naive bayes separates distant 1-D clusters") {
    Eigen::MatrixXd x(8, 1);
    x << -5.1, -4.9, -5.2, -4.8, 4.9, 5.1, 5.2, 4.8;
    const Eigen::VectorXd y = vec({0, 0, 0, 0, 1, 1, 1, 1});
    Rng rng(1);
    const TrainedAtomic gnb = fit_atomic(ModelKind::GaussianNaiveBayes, x, y, rng);
    const Eigen::VectorXd scores = predict_atomic(gnb, x);
    for (int i = 0; i < 8; ++i) {
        if (y[i] == 1.0) CHECK(scores[i] > 0.5);
        else CHECK(scores[i] < 0.5);
    }
}

TEST_CASE("single unbootstrapped bagged tree equals the plain tree") {
    Rng rng(9);
    Eigen::MatrixXd x(40, 2);
    Eigen::VectorXd y(40);
    for (int i = 0; i < 40; ++i) {
        x(i, 0) = rng.uniform01();
        x(i, 1) = rng.uniform01();
        y[i] = x(i, 0) > 0.5 ? 1.0 : 0.0;
    }
    Rng fit_rng(4);
    const TrainedAtomic bag =
        fit_atomic(ModelKind::BaggedTrees, x, y, fit_rng, {{"trees", 1.0}, {"bootstrap", 0.0}});
    Rng fit_rng2(4);
    const TrainedAtomic tree = fit_atomic(ModelKind::DecisionTree, x, y, fit_rng2);
    CHECK(predict_atomic(bag, x) == predict_atomic(tree, x));
}

TEST_CASE("bagging is deterministic under a fixed seed") {
    Rng data_rng(2);
    Eigen::MatrixXd x(30, 2);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) {
        x(i, 0) = data_rng.normal();
        x(i, 1) = data_rng.normal();
        y[i] = x(i, 0) + x(i, 1) > 0 ? 1.0 : 0.0;
    }
    Rng a(77), b(77), c(78);
    const Eigen::VectorXd pa = predict_atomic(fit_atomic(ModelKind::BaggedTrees, x, y, a), x);
    const Eigen::VectorXd pb = predict_atomic(fit_atomic(ModelKind::BaggedTrees, x, y, b), x);
    const Eigen::VectorXd pc = predict_atomic(fit_atomic(ModelKind::BaggedTrees, x, y, c), x);
    CHECK(pa == pb);
    CHECK(pa != pc);
}

TEST_CASE("classification scores stay in [0,1]") {
    Rng rng(11);
    Eigen::MatrixXd x(25, 3);
    Eigen::VectorXd y(25);
    for (int i = 0; i < 25; ++i) {
        for (int c = 0; c < 3; ++c) x(i, c) = rng.normal() * 10.0;
        y[i] = i % 3 == 0 ? 1.0 : 0.0;
    }
    for (ModelKind kind : {ModelKind::MajorityBaseline, ModelKind::LogisticRegression,
                           ModelKind::KNearestNeighbors, ModelKind::DecisionTree, ModelKind::BaggedTrees,
                           ModelKind::GaussianNaiveBayes}) {
        Rng fit_rng(5);
        const Eigen::VectorXd scores = predict_atomic(fit_atomic(kind, x, y, fit_rng), x);
        CHECK(scores.minCoeff() >= 0.0);
        CHECK(scores.maxCoeff() <= 1.0);
    }
}

TEST_CASE("logistic regression training loss is non-increasing") {
    Eigen::MatrixXd x(10, 1);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) {
        x(i, 0) = i - 4.5;
        y[i] = i >= 5 ? 1.0 : 0.0;
    }
    const auto loss_after = [&](int epochs) {
        Rng rng(1);
        const TrainedAtomic model =
            fit_atomic(ModelKind::LogisticRegression, x, y, rng, {{"epochs", static_cast<double>(epochs)}});
        const Eigen::VectorXd p = predict_atomic(model, x);
        double loss = 0.0;
        for (int i = 0; i < 10; ++i) {
            loss += y[i] == 1.0 ? -std::log(p[i]) : -std::log(1.0 - p[i]);
        }
        return loss / 10.0;
    };
    double prev = loss_after(0);
    for (int epochs : {1, 2, 5, 10, 30, 80, 200}) {
        const double cur = loss_after(epochs);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("scaler guards constant columns") {
    Eigen::MatrixXd x(3, 2);
    x << 1, 5, 2, 5, 3, 5;
    Rng rng(1);
    const TrainedAtomic scaler = fit_atomic(ModelKind::StandardScaler, x, vec({0, 1, 0}), rng);
    const Eigen::MatrixXd xt = transform_atomic(scaler, x);
    CHECK(xt.col(1).cwiseAbs().maxCoeff() == 0.0);  // centered, std guard 1
    CHECK(std::abs(xt.col(0).mean()) <= 1e-12);
}

TEST_CASE("knn with k=1 memorizes the training set") {
    Rng rng(6);
    Eigen::MatrixXd x(15, 2);
    Eigen::VectorXd y(15);
    for (int i = 0; i < 15; ++i) {
        x(i, 0) = i;
        x(i, 1) = -i;
        y[i] = i % 2;
    }
    const TrainedAtomic knn = fit_atomic(ModelKind::KNearestNeighbors, x, y, rng, {{"k", 1.0}});
    CHECK(predict_atomic(knn, x) == y);
}

TEST_CASE("fit_atomic input checks") {
    Rng rng(1);
    CHECK_THROWS_AS(fit_atomic(ModelKind::MeanBaseline, column({1}), vec({1}), rng), DegenerateDataError);
    const TrainedAtomic model = fit_atomic(ModelKind::MeanBaseline, column({1, 2}), vec({1, 2}), rng);
    Eigen::MatrixXd wide(2, 3);
    wide.setZero();
    CHECK_THROWS_AS(predict_atomic(model, wide), ShapeMismatchError);
}
