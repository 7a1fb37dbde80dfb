#include "evopipe/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "evopipe/csv.hpp"
#include "evopipe/errors.hpp"

namespace evopipe {

std::string to_string(TaskType task) {
    return task == TaskType::BinaryClassification ? "classification" : "regression";
}

TaskType task_from_string(const std::string& s) {
    if (s == "classification" || s == "binary_classification") return TaskType::BinaryClassification;
    if (s == "regression") return TaskType::Regression;
    throw ConfigError("unknown task type \"" + s + "\"");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_missing_token(const std::string& cell) {
    if (cell.empty()) return true;
    static const char* tokens[] = {"NA", "N/A", "NaN", "nan", "null", "NULL", "?"};
    return std::find(std::begin(tokens), std::end(tokens), cell) != std::end(tokens);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (is_missing_token(cell)) throw MissingValueError(row, col);
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) throw NonNumericCellError(row, col, cell);
    return value;
}

void check_binary_target(const Eigen::VectorXd& y, const std::string& origin) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            throw DataError(origin + ": classification target must be 0/1, found " +
                            std::to_string(y[i]) + " at row " + std::to_string(i));
        }
    }
}

}  // namespace

Dataset parse_csv(const std::string& text, const ColumnRef& target_column, TaskType task,
                  const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    const std::size_t n_cols = header.size();

    std::size_t target_idx = 0;
    if (std::holds_alternative<int>(target_column)) {
        const int idx = std::get<int>(target_column);
        if (idx < 0 || static_cast<std::size_t>(idx) >= n_cols) {
            throw UnknownColumnError(origin + ": target column index " + std::to_string(idx) +
                                     " out of range (file has " + std::to_string(n_cols) + " columns)");
        }
        target_idx = static_cast<std::size_t>(idx);
    } else {
        const std::string& name = std::get<std::string>(target_column);
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw UnknownColumnError(origin + ": no column named \"" + name + "\"");
        target_idx = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != n_cols) {
            throw DataError(origin + ": row " + std::to_string(row_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " + std::to_string(n_cols));
        }
        std::vector<double> parsed(n_cols);
        for (std::size_t c = 0; c < n_cols; ++c) parsed[c] = parse_cell(cells[c], row_no, c);
        rows.push_back(std::move(parsed));
        ++row_no;
    }
    if (rows.empty()) throw DataError(origin + ": no data rows");

    Dataset d;
    d.task = task;
    d.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_cols - 1));
    d.target.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c != target_idx) d.feature_names.push_back(header[c]);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Eigen::Index fc = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (c == target_idx) {
                d.target[static_cast<Eigen::Index>(r)] = rows[r][c];
            } else {
                d.features(static_cast<Eigen::Index>(r), fc++) = rows[r][c];
            }
        }
    }
    if (task == TaskType::BinaryClassification) check_binary_target(d.target, origin);
    return d;
}

Dataset load_csv(const std::string& path, const ColumnRef& target_column, TaskType task) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), target_column, task, path);
}

void store_csv(const Dataset& d, const std::string& path, const std::string& target_name) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write \"" + path + "\"");
    for (Eigen::Index c = 0; c < d.n_features(); ++c) {
        const std::string name = c < static_cast<Eigen::Index>(d.feature_names.size())
                                     ? d.feature_names[static_cast<std::size_t>(c)]
                                     : "f" + std::to_string(c);
        out << name << ',';
    }
    out << target_name << '\n';
    for (Eigen::Index r = 0; r < d.n_samples(); ++r) {
        for (Eigen::Index c = 0; c < d.n_features(); ++c) out << format_double(d.features(r, c)) << ',';
        out << format_double(d.target[r]) << '\n';
    }
}

namespace {

Dataset take_rows(const Dataset& d, const std::vector<Eigen::Index>& idx) {
    Dataset out;
    out.task = d.task;
    out.feature_names = d.feature_names;
    out.features.resize(static_cast<Eigen::Index>(idx.size()), d.n_features());
    out.target.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = d.features.row(idx[i]);
        out.target[static_cast<Eigen::Index>(i)] = d.target[idx[i]];
    }
    return out;
}

}  // namespace

SplitResult train_test_split(const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (d.n_samples() < 4) throw DataError("train_test_split needs at least 4 samples");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie strictly between 0 and 1");
    }
    Rng rng(seed);
    std::vector<Eigen::Index> train_idx, test_idx;

    if (d.task == TaskType::BinaryClassification) {
        std::vector<Eigen::Index> strata[2];
        for (Eigen::Index i = 0; i < d.n_samples(); ++i) {
            strata[d.target[i] == 1.0 ? 1 : 0].push_back(i);
        }
        for (auto& stratum : strata) {
            if (stratum.size() < 2) {
                throw StratificationImpossibleError(
                    "a class has fewer than 2 samples; stratified split impossible");
            }
            rng.shuffle(stratum);
            const auto n = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(stratum.size())));
            const std::size_t n_train = std::min(n, stratum.size() - 1);
            for (std::size_t i = 0; i < stratum.size(); ++i) {
                (i < n_train ? train_idx : test_idx).push_back(stratum[i]);
            }
        }
    } else {
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(d.n_samples()));
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
        rng.shuffle(idx);
        const auto n = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(idx.size())));
        const std::size_t n_train = std::min(n, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_train ? train_idx : test_idx).push_back(idx[i]);
        }
    }

    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {take_rows(d, train_idx), take_rows(d, test_idx)};
}

double imbalance_metric(const Eigen::VectorXd& target, int class_count) {
    if (class_count < 2) throw ConfigError("imbalance_metric needs at least 2 classes");
    std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
    for (Eigen::Index i = 0; i < target.size(); ++i) {
        const auto c = static_cast<long long>(target[i]);
        if (c < 0 || c >= class_count || static_cast<double>(c) != target[i]) {
            throw DataError("target value " + std::to_string(target[i]) + " is not a class label in [0, " +
                            std::to_string(class_count) + ")");
        }
        ++counts[static_cast<std::size_t>(c)];
    }
    const double n = static_cast<double>(target.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) throw EmptyClassError("class " + std::to_string(c) + " has no samples");
        const double dev = static_cast<double>(counts[c]) / n - 1.0 / static_cast<double>(class_count);
        sum += dev * dev;
    }
    return static_cast<double>(class_count) * sum;
}

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "linear_regression") return SynthKind::LinearRegression;
    if (s == "noisy_xor") return SynthKind::NoisyXor;
    if (s == "two_gaussians") return SynthKind::TwoGaussians;
    if (s == "friedman_like") return SynthKind::FriedmanLike;
    throw ConfigError("unknown synthetic dataset kind \"" + s + "\"");
}

std::string to_string(SynthKind kind) {
    switch (kind) {
        case SynthKind::LinearRegression: return "linear_regression";
        case SynthKind::NoisyXor: return "noisy_xor";
        case SynthKind::TwoGaussians: return "two_gaussians";
        case SynthKind::FriedmanLike: return "friedman_like";
    }
    return "?";
}

Dataset synth_dataset(SynthKind kind, int n, double noise, std::uint64_t seed) {
    if (n < 20) throw ConfigError("synthetic datasets need n >= 20");
    Rng rng(splitmix64(seed ^ 0x5A17D47AULL));
    Dataset d;

    switch (kind) {
        case SynthKind::LinearRegression: {
            d.task = TaskType::Regression;
            d.features.resize(n, 3);
            d.target.resize(n);
            d.feature_names = {"x0", "x1", "x2"};
            for (int i = 0; i < n; ++i) {
                for (int c = 0; c < 3; ++c) d.features(i, c) = rng.normal();
                d.target[i] = 2.0 * d.features(i, 0) - d.features(i, 1) + 0.5 * d.features(i, 2) + 1.0 +
                              noise * rng.normal();
            }
            break;
        }
        case SynthKind::NoisyXor: {
            d.task = TaskType::BinaryClassification;
            d.features.resize(n, 2);
            d.target.resize(n);
            d.feature_names = {"x0", "x1"};
            for (int i = 0; i < n; ++i) {
                // Half the samples per quadrant sign pattern keeps classes balanced.
                double x0 = 2.0 * rng.uniform01() - 1.0;
                double x1 = 2.0 * rng.uniform01() - 1.0;
                if (x0 == 0.0) x0 = 0.5;
                if (x1 == 0.0) x1 = 0.5;
                int label = (x0 * x1 > 0.0) ? 1 : 0;
                if (rng.bernoulli(noise)) label = 1 - label;
                d.features(i, 0) = x0;
                d.features(i, 1) = x1;
                d.target[i] = label;
            }
            break;
        }
        case SynthKind::TwoGaussians: {
            d.task = TaskType::BinaryClassification;
            d.features.resize(n, 2);
            d.target.resize(n);
            d.feature_names = {"x0", "x1"};
            const double sd = 1.0 + noise;
            for (int i = 0; i < n; ++i) {
                const int label = i % 2;  // exactly balanced
                d.features(i, 0) = (label == 1 ? 4.0 : 0.0) + sd * rng.normal();
                d.features(i, 1) = sd * rng.normal();
                d.target[i] = label;
            }
            break;
        }
        case SynthKind::FriedmanLike: {
            d.task = TaskType::Regression;
            d.features.resize(n, 5);
            d.target.resize(n);
            d.feature_names = {"x0", "x1", "x2", "x3", "x4"};
            for (int i = 0; i < n; ++i) {
                for (int c = 0; c < 5; ++c) d.features(i, c) = rng.uniform01();
                d.target[i] = 10.0 * std::sin(std::numbers::pi * d.features(i, 0) * d.features(i, 1)) +
                              20.0 * (d.features(i, 2) - 0.5) * (d.features(i, 2) - 0.5) +
                              10.0 * d.features(i, 3) + 5.0 * d.features(i, 4) + noise * rng.normal();
            }
            break;
        }
    }
    return d;
}

}  // namespace evopipe
