#pragma once

#include <Eigen/Dense>

namespace ddx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

}  // namespace ddx
