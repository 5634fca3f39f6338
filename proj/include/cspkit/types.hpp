#pragma once

#include <Eigen/Dense>

namespace cspkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace cspkit
