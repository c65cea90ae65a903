#pragma once

#include <Eigen/Dense>

namespace npde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

} // namespace npde
