#include <doctest.h>

#include <set>
#include <sstream>

#include "evopipe/atomic_models.hpp"
#include "evopipe/dataset.hpp"
#include "evopipe/errors.hpp"
#include "evopipe/metrics.hpp"

using namespace evopipe;

TEST_CASE("parse_csv reads a toy file") {
    const std::string text = "a,b,y\n1,2,0\n3,4,1\n5,6,0\n7,8,1\n";
    const Dataset d = parse_csv(text, std::string("y"), TaskType::BinaryClassification);
    CHECK(d.n_samples() == 4);
    CHECK(d.n_features() == 2);
    CHECK(d.features(2, 1) == 6.0);
    CHECK(d.target[3] == 1.0);
    CHECK(d.feature_names == std::vector<std::string>{"a", "b"});

    const Dataset by_index = parse_csv(text, 2, TaskType::BinaryClassification);
    CHECK(by_index.target == d.target);
}

TEST_CASE("parse_csv rejects bad cells") {
    CHECK_THROWS_AS(parse_csv("a,y\n1,0\nNA,1\n", std::string("y"), TaskType::Regression),
                    MissingValueError);
    CHECK_THROWS_AS(parse_csv("a,y\n1,0\n,1\n", std::string("y"), TaskType::Regression), MissingValueError);
    CHECK_THROWS_AS(parse_csv("a,y\nfoo,0\n1,1\n", std::string("y"), TaskType::Regression),
                    NonNumericCellError);
    CHECK_THROWS_AS(parse_csv("a,y\n1,0\n", std::string("z"), TaskType::Regression), UnknownColumnError);
    CHECK_THROWS_AS(parse_csv("a,y\n1,0.5\n2,1\n", std::string("y"), TaskType::BinaryClassification),
                    DataError);
}

TEST_CASE("a Hill_Valley-shaped file parses to 1212 x 100") {
    std::ostringstream text;
    for (int c = 0; c < 100; ++c) text << "X" << c << ",";
    text << "class\n";
    for (int r = 0; r < 1212; ++r) {
        for (int c = 0; c < 100; ++c) text << (r * 100 + c) % 977 << ",";
        text << r % 2 << "\n";
    }
    const Dataset d = parse_csv(text.str(), std::string("class"), TaskType::BinaryClassification);
    CHECK(d.n_samples() == 1212);
    CHECK(d.n_features() == 100);
}

TEST_CASE("store_csv round-trips bit-exactly") {
    const Dataset d = synth_dataset(SynthKind::FriedmanLike, 25, 0.3, 99);
    store_csv(d, "/tmp/evopipe_roundtrip.csv");
    const Dataset back = load_csv("/tmp/evopipe_roundtrip.csv", std::string("target"), TaskType::Regression);
    CHECK(back.features == d.features);
    CHECK(back.target == d.target);
}

TEST_CASE("train_test_split honors the 70/30 ratio") {
    const Dataset d = synth_dataset(SynthKind::FriedmanLike, 100, 0.1, 3);
    const SplitResult split = train_test_split(d, 0.7, 11);
    CHECK(split.train.n_samples() == 70);
    CHECK(split.test.n_samples() == 30);
}

TEST_CASE("train_test_split is seeded and partitions the rows") {
    const Dataset d = synth_dataset(SynthKind::NoisyXor, 50, 0.1, 5);
    const SplitResult a = train_test_split(d, 0.7, 1);
    const SplitResult b = train_test_split(d, 0.7, 1);
    const SplitResult c = train_test_split(d, 0.7, 2);
    CHECK(a.train.features == b.train.features);
    CHECK(a.test.target == b.test.target);
    CHECK(a.train.features != c.train.features);

    // Partition: every original row appears exactly once across both parts.
    std::multiset<double> original, recombined;
    for (Eigen::Index i = 0; i < d.n_samples(); ++i) original.insert(d.features(i, 0));
    for (Eigen::Index i = 0; i < a.train.n_samples(); ++i) recombined.insert(a.train.features(i, 0));
    for (Eigen::Index i = 0; i < a.test.n_samples(); ++i) recombined.insert(a.test.features(i, 0));
    CHECK(original == recombined);
}

TEST_CASE("stratified split takes ceil per stratum") {
    // 40 majority / 10 minority: train must hold 28 and 7.
    Dataset d;
    d.task = TaskType::BinaryClassification;
    d.features.resize(50, 1);
    d.target.resize(50);
    for (int i = 0; i < 50; ++i) {
        d.features(i, 0) = i;
        d.target[i] = i < 40 ? 0.0 : 1.0;
    }
    const SplitResult split = train_test_split(d, 0.7, 17);
    int train_majority = 0, train_minority = 0;
    for (Eigen::Index i = 0; i < split.train.n_samples(); ++i) {
        (split.train.target[i] == 0.0 ? train_majority : train_minority) += 1;
    }
    CHECK(train_majority == 28);
    CHECK(train_minority == 7);
    // Both classes present in both parts.
    CHECK(imbalance_metric(split.test.target, 2) >= 0.0);
}

TEST_CASE("stratification fails when a class has one sample") {
    Dataset d;
    d.task = TaskType::BinaryClassification;
    d.features.resize(10, 1);
    d.target.resize(10);
    for (int i = 0; i < 10; ++i) {
        d.features(i, 0) = i;
        d.target[i] = i == 0 ? 1.0 : 0.0;
    }
    CHECK_THROWS_AS(train_test_split(d, 0.7, 1), StratificationImpossibleError);
}

TEST_CASE("imbalance metric") {
    Eigen::VectorXd balanced(4);
    balanced << 0, 1, 0, 1;
    CHECK(imbalance_metric(balanced, 2) == doctest::Approx(0.0));

    Eigen::VectorXd skewed(8);
    skewed << 0, 0, 0, 0, 0, 0, 1, 1;  // 75/25
    CHECK(imbalance_metric(skewed, 2) == doctest::Approx(0.25));

    // Label swap invariance for K=2.
    Eigen::VectorXd swapped = Eigen::VectorXd::Ones(8) - skewed;
    CHECK(imbalance_metric(swapped, 2) == doctest::Approx(imbalance_metric(skewed, 2)));

    Eigen::VectorXd degenerate = Eigen::VectorXd::Zero(6);
    CHECK_THROWS_AS(imbalance_metric(degenerate, 2), EmptyClassError);
}

TEST_CASE("synthetic generators are reproducible") {
    for (SynthKind kind : {SynthKind::LinearRegression, SynthKind::NoisyXor, SynthKind::TwoGaussians,
                           SynthKind::FriedmanLike}) {
        const Dataset a = synth_dataset(kind, 40, 0.2, 123);
        const Dataset b = synth_dataset(kind, 40, 0.2, 123);
        CHECK(a.features == b.features);
        CHECK(a.target == b.target);
    }
    CHECK_THROWS_AS(synth_dataset(SynthKind::NoisyXor, 10, 0.1, 1), ConfigError);
}

TEST_CASE("noise-free linear data is solved exactly by least squares") {
    const Dataset d = synth_dataset(SynthKind::LinearRegression, 60, 0.0, 7);
    Rng rng(1);
    const TrainedAtomic model = fit_atomic(ModelKind::LinearRegression, d.features, d.target, rng);
    CHECK(rmse(d.target, predict_atomic(model, d.features)) <= 1e-6);
}

TEST_CASE("two gaussians at 4 sigma separation are nearly separable") {
    const Dataset d = synth_dataset(SynthKind::TwoGaussians, 300, 0.0, 21);
    const SplitResult split = train_test_split(d, 0.7, 4);
    Rng rng(1);
    const TrainedAtomic gnb =
        fit_atomic(ModelKind::GaussianNaiveBayes, split.train.features, split.train.target, rng);
    CHECK(roc_auc(split.test.target, predict_atomic(gnb, split.test.features)) >= 0.99);
}

TEST_CASE("noisy_xor defeats linear models but not trees") {
    const Dataset d = synth_dataset(SynthKind::NoisyXor, 400, 0.05, 13);
    const SplitResult split = train_test_split(d, 0.7, 4);
    Rng rng(1);
    const TrainedAtomic logistic =
        fit_atomic(ModelKind::LogisticRegression, split.train.features, split.train.target, rng);
    const TrainedAtomic tree =
        fit_atomic(ModelKind::DecisionTree, split.train.features, split.train.target, rng);
    CHECK(roc_auc(split.test.target, predict_atomic(logistic, split.test.features)) <= 0.6);
    CHECK(roc_auc(split.test.target, predict_atomic(tree, split.test.features)) >= 0.9);
}
