#include "evopipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "evopipe/errors.hpp"

namespace evopipe {

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() != yhat.size()) {
        throw LengthMismatchError("rmse: length " + std::to_string(y.size()) + " vs " +
                                  std::to_string(yhat.size()));
    }
    if (y.size() == 0) throw LengthMismatchError("rmse: empty vectors");
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

double roc_auc(const Eigen::VectorXd& y, const Eigen::VectorXd& scores) {
    if (y.size() != scores.size()) {
        throw LengthMismatchError("roc_auc: length " + std::to_string(y.size()) + " vs " +
                                  std::to_string(scores.size()));
    }
    const auto n = static_cast<std::size_t>(y.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
    });

    // Average ranks over tied score groups, then the rank-sum U statistic.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[static_cast<Eigen::Index>(order[j + 1])] ==
                                scores[static_cast<Eigen::Index>(order[i])]) {
            ++j;
        }
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (y[static_cast<Eigen::Index>(k)] == 1.0) {
            pos_rank_sum += rank[k];
            ++n_pos;
        }
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClassError("roc_auc: both classes must be present");
    const double u = pos_rank_sum - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace evopipe
