#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evopipe/rng.hpp"

namespace evopipe {

enum class TaskType { BinaryClassification, Regression };

std::string to_string(TaskType task);
TaskType task_from_string(const std::string& s);

// A fully numeric in-memory dataset. Rows are samples. Binary classification
// targets are 0/1; loaders reject anything else.
struct Dataset {
    Eigen::MatrixXd features;
    Eigen::VectorXd target;
    TaskType task = TaskType::Regression;
    std::vector<std::string> feature_names;

    Eigen::Index n_samples() const { return features.rows(); }
    Eigen::Index n_features() const { return features.cols(); }
};

// Target column selected by header name or 0-based index.
using ColumnRef = std::variant<std::string, int>;

// Parses a comma-separated file with a header row. Every cell must be
// numeric; empty/NA cells raise MissingValueError, other non-numeric content
// raises NonNumericCellError.
Dataset load_csv(const std::string& path, const ColumnRef& target_column, TaskType task);

// Parses CSV text (same rules as load_csv); `origin` is used in messages.
Dataset parse_csv(const std::string& text, const ColumnRef& target_column, TaskType task,
                  const std::string& origin = "<string>");

// Writes the dataset back out as CSV (header row, shortest round-trip
// number formatting, so load(store(d)) is bit-exact).
void store_csv(const Dataset& d, const std::string& path, const std::string& target_name = "target");

struct SplitResult {
    Dataset train;
    Dataset test;
};

// Seeded shuffle split; classification splits are stratified per class with
// train taking ceil(fraction * n_c) rows of each class (capped at n_c - 1 so
// both parts keep every class). Row order inside each part follows the
// original dataset.
SplitResult train_test_split(const Dataset& d, double train_fraction, std::uint64_t seed);

// I = K * sum_c (n_c/N - 1/K)^2 over class frequencies; 0 when balanced.
double imbalance_metric(const Eigen::VectorXd& target, int class_count);

enum class SynthKind { LinearRegression, NoisyXor, TwoGaussians, FriedmanLike };

SynthKind synth_kind_from_string(const std::string& s);
std::string to_string(SynthKind kind);

// Deterministic synthetic generators:
//   linear_regression: x ~ N(0,1)^3, y = 2 x0 - x1 + 0.5 x2 + 1 + noise * e
//   noisy_xor:         x ~ U(-1,1)^2, y = [x0 * x1 > 0], labels flipped w.p. noise
//   two_gaussians:     classes at (0,0) and (4,0), per-axis std 1 + noise
//   friedman_like:     x ~ U(0,1)^5, y = 10 sin(pi x0 x1) + 20 (x2 - .5)^2 + 10 x3 + 5 x4 + noise * e
Dataset synth_dataset(SynthKind kind, int n, double noise, std::uint64_t seed);

}  // namespace evopipe
