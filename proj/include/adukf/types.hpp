#pragma once

#include <Eigen/Dense>

namespace adukf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace adukf
