#pragma once

#include <Eigen/Dense>

namespace nirom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace nirom
