#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cran {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Points2 = Eigen::Matrix2Xd;

/// Invalid parameters or malformed input files.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A constrained subproblem with an empty feasible set.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inconsistent array shapes between inputs.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace cran
