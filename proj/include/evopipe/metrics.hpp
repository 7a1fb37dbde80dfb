#pragma once

#include <Eigen/Dense>

namespace evopipe {

// sqrt(mean((y - yhat)^2)); throws LengthMismatchError.
double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

// Mann-Whitney form: probability that a random positive outranks a random
// negative, ties counted 1/2. Throws SingleClassError when only one class is
// present and LengthMismatchError on unequal lengths.
double roc_auc(const Eigen::VectorXd& y, const Eigen::VectorXd& scores);

}  // namespace evopipe
