#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace uos {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Sorted, duplicate-free, 0-based row indices of one observation mask.
using IndexList = std::vector<Index>;

// Thrown when an iterative routine cannot reach its certified stopping
// criterion (as opposed to invalid_argument for bad parameters).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace uos
