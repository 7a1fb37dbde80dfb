#include <doctest.h>

#include <cmath>

#include "evopipe/errors.hpp"
#include "evopipe/metrics.hpp"
#include "evopipe/rng.hpp"

using namespace evopipe;

namespace {

// Pairwise concordance oracle, ties counted 1/2.
double auc_oracle(const Eigen::VectorXd& y, const Eigen::VectorXd& s) {
    double num = 0.0, pairs = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        for (Eigen::Index j = 0; j < y.size(); ++j) {
            if (y[i] == 1.0 && y[j] == 0.0) {
                pairs += 1.0;
                if (s[i] > s[j]) num += 1.0;
                else if (s[i] == s[j]) num += 0.5;
            }
        }
    }
    return num / pairs;
}

}  // namespace

TEST_CASE("rmse basics") {
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    CHECK(rmse(y, y) == 0.0);

    Eigen::VectorXd a(2), b(2);
    a << 0, 0;
    b << 3, 4;
    CHECK(rmse(a, b) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));

    Eigen::VectorXd short_vec(1);
    CHECK_THROWS_AS(rmse(y, short_vec), LengthMismatchError);
}

TEST_CASE("rmse of a constant offset is the offset") {
    Rng rng(5);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) y[i] = rng.normal() * 3.0;
    for (double c : {0.5, -2.25, 10.0}) {
        const Eigen::VectorXd shifted = y.array() + c;
        CHECK(rmse(y, shifted) == doctest::Approx(std::abs(c)).epsilon(1e-12));
    }
}

TEST_CASE("roc_auc basics") {
    Eigen::VectorXd y(4), s(4);
    y << 1, 0, 1, 0;

    s << 0.9, 0.2, 0.8, 0.1;  // perfectly separated
    CHECK(roc_auc(y, s) == 1.0);

    s << 0.5, 0.5, 0.5, 0.5;  // all ties
    CHECK(roc_auc(y, s) == 0.5);

    s << 0.9, 0.8, 0.4, 0.1;  // 3 concordant of 4 pairs
    CHECK(roc_auc(y, s) == doctest::Approx(0.75).epsilon(1e-12));

    Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(roc_auc(ones, s), SingleClassError);
}

TEST_CASE("roc_auc equals the pairwise oracle and is rank-invariant") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 5 + static_cast<int>(rng.index(20));
        Eigen::VectorXd y(n), s(n);
        int positives = 0;
        for (int i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
            positives += y[i] == 1.0;
            // Coarse grid forces score ties.
            s[i] = std::round(rng.uniform01() * 8.0) / 8.0;
        }
        if (positives == 0 || positives == n) continue;
        const double auc = roc_auc(y, s);
        CHECK(auc == doctest::Approx(auc_oracle(y, s)).epsilon(1e-12));

        // Invariance under a strictly increasing transform.
        const Eigen::VectorXd warped = s.unaryExpr([](double v) { return std::exp(3.0 * v) - 2.0; });
        CHECK(roc_auc(y, warped) == doctest::Approx(auc).epsilon(1e-12));
    }
}
