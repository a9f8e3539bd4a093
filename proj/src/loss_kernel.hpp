#pragma once

#include <Eigen/Dense>

#include "adfnn/solvers.hpp"

namespace adfnn::detail {

// Weighted loss of one group from its functional values F (ops x points).
// When dF is non-null it receives d(loss)/dF.
double group_value(const PointGroup& g, const Eigen::MatrixXd& F, Eigen::MatrixXd* dF);

}  // namespace adfnn::detail
