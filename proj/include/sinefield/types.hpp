#pragma once

#include <Eigen/Dense>

namespace sf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace sf
