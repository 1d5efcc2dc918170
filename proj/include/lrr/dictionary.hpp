#pragma once

#include <Eigen/Core>

#include "lrr/shrinkage.hpp"

namespace lrr {

// Orthogonal rank-one dictionary fitted to one patch group: the atoms are
// u_j v_j^T from the group's SVD, so any coefficient vector alpha decodes to
// sum_j alpha_j u_j v_j^T and the group itself decodes from alpha = mu.
struct AdaptiveDictionary {
  SvdTriple basis;
  Eigen::VectorXd mu;  // singular values of the source group, non-increasing
};

AdaptiveDictionary build_dictionary(const Eigen::MatrixXd& group);

Eigen::MatrixXd decode(const AdaptiveDictionary& dict,
                       const Eigen::VectorXd& alpha);

// | ||Y - X||_F^2 - ||mu - alpha||_2^2 | where Y is the source group and
// X = decode(alpha).  Zero (up to rounding) because the atoms are mutually
// orthonormal in the Frobenius inner product.
double isometry_gap(const AdaptiveDictionary& dict,
                    const Eigen::VectorXd& alpha);

}  // namespace lrr
