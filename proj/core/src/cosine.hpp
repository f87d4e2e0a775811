#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pgeo/error.hpp"

namespace pgeo::detail {

// 1 - cosine similarity between rows, clamped to [0, 2], exact zero diagonal,
// symmetric by construction. Zero-norm or non-finite rows throw Error(stage).
Eigen::MatrixXd cosine_distances(const Eigen::MatrixXd& rows, const std::vector<std::string>& labels,
                                 Stage stage);

}  // namespace pgeo::detail
