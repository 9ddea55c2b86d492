#pragma once

#include <Eigen/Dense>

namespace rpqp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace rpqp
