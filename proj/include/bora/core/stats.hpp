#pragma once

#include <Eigen/Dense>

#include "bora/core/dataset.hpp"

namespace bora::core {

// Pearson correlation of the input coordinates across all samples.
// Symmetric, unit diagonal, d x d; columns with zero variance contribute
// 0 off-diagonal. Requires at least two samples.
Eigen::MatrixXd correlation_matrix(const Dataset& dataset);

}  // namespace bora::core
