#pragma once

#include <Eigen/Core>

#include "pgeo/stimuli.hpp"

namespace pgeo::detail {

void center_columns(Eigen::MatrixXd& y);

// Throws Error(Stage::geometry) unless p is 2 or 3 and N >= p + 1.
void check_dimension(const DissimilarityMatrix& d, int p);

// Classical MDS coordinates for any finite symmetric matrix (used directly on
// geodesic matrices).
Eigen::MatrixXd classical_coordinates(const Eigen::MatrixXd& d, int p);

}  // namespace pgeo::detail
