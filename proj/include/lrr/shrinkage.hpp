#pragma once

#include <Eigen/Core>

namespace lrr {

// Thin SVD Y = left * diag(singular_values) * right^T with the singular
// values sorted non-increasing.  Sign convention: in each column of `left`
// the entry of largest magnitude (first such index on ties) is non-negative,
// and `right` is flipped together with `left`, so repeated factorizations of
// the same data agree exactly.
struct SvdTriple {
  Eigen::MatrixXd left;             // m x r, orthonormal columns
  Eigen::VectorXd singular_values;  // r, non-increasing, >= 0
  Eigen::MatrixXd right;            // n x r, orthonormal columns
};

SvdTriple compute_svd(const Eigen::MatrixXd& y);

// sgn(a) * max(|a| - tau, 0)
double soft_threshold(double a, double tau);

// Element-wise max(a_i - w_i, 0).  Requires a non-increasing and
// non-negative, w non-decreasing and non-negative; under that ordering the
// element-wise rule is the exact minimizer of
// sum_i (1/2 (x_i - a_i)^2 + w_i x_i) over x_1 >= ... >= x_n >= 0,
// and the result is again non-increasing.
Eigen::VectorXd weighted_soft_threshold(const Eigen::VectorXd& a,
                                        const Eigen::VectorXd& w);

// Closed-form minimizer of 1/2 ||Y - X||_F^2 + lambda ||X||_*:
// soft-threshold every singular value of Y by lambda.
Eigen::MatrixXd svd_shrink_nnm(const Eigen::MatrixXd& y, double lambda);

// Closed-form minimizer of 1/2 ||Y - X||_F^2 + sum_i w_i sigma_i(X) for
// non-decreasing, non-negative weights: shrink sigma_i(Y) by w_i.
Eigen::MatrixXd svd_shrink_wnnm(const Eigen::MatrixXd& y,
                                const Eigen::VectorXd& weights);

// 1/2 ||Y - X||_F^2 + lambda * sum_i sigma_i(X)
double shrink_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                        double lambda);

// 1/2 ||Y - X||_F^2 + sum_i weights_i * sigma_i(X)
double shrink_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                        const Eigen::VectorXd& weights);

}  // namespace lrr
