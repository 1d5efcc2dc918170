#include "lrr/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#ifdef LRR_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace lrr {

namespace {

// Make the SVD reproducible regardless of backend: force the
// largest-magnitude entry of each left vector non-negative (first index on
// ties) and flip the matching right vector with it.
void fix_signs(SvdTriple& svd)
{
  for (Eigen::Index j = 0; j < svd.left.cols(); ++j) {
    Eigen::Index which = 0;
    svd.left.col(j).cwiseAbs().maxCoeff(&which);
    if (svd.left(which, j) < 0.0) {
      svd.left.col(j) = -svd.left.col(j);
      svd.right.col(j) = -svd.right.col(j);
    }
  }
}

#ifdef LRR_HAVE_LAPACKE
// Divide-and-conquer SVD; noticeably faster than Eigen's own kernels for the
// tall-thin group matrices this library spends its time on.  Returns false
// if the routine fails to converge so the caller can fall back.
bool lapack_svd(const Eigen::MatrixXd& y, SvdTriple& out)
{
  const lapack_int m = static_cast<lapack_int>(y.rows());
  const lapack_int n = static_cast<lapack_int>(y.cols());
  const lapack_int r = std::min(m, n);
  Eigen::MatrixXd a = y;  // dgesdd destroys its input
  out.left.resize(m, r);
  out.singular_values.resize(r);
  Eigen::MatrixXd vt(r, n);
  const lapack_int info = LAPACKE_dgesdd(
      LAPACK_COL_MAJOR, 'S', m, n, a.data(), m, out.singular_values.data(),
      out.left.data(), m, vt.data(), r);
  if (info != 0) return false;
  out.right = vt.transpose();
  return true;
}
#endif

void check_finite(const Eigen::MatrixXd& y, const char* who)
{
  if (!y.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite input");
}

}  // namespace

SvdTriple compute_svd(const Eigen::MatrixXd& y)
{
  if (y.size() == 0) throw std::invalid_argument("compute_svd: empty matrix");
  check_finite(y, "compute_svd");
  SvdTriple out;
#ifdef LRR_HAVE_LAPACKE
  if (lapack_svd(y, out)) {
    fix_signs(out);
    return out;
  }
#endif
  Eigen::BDCSVD<Eigen::MatrixXd> svd(y,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.left = svd.matrixU();
  out.singular_values = svd.singularValues();
  out.right = svd.matrixV();
  fix_signs(out);
  return out;
}

double soft_threshold(double a, double tau)
{
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: negative tau");
  const double shrunk = std::abs(a) - tau;
  return shrunk > 0.0 ? std::copysign(shrunk, a) : 0.0;
}

Eigen::VectorXd weighted_soft_threshold(const Eigen::VectorXd& a,
                                        const Eigen::VectorXd& w)
{
  if (a.size() != w.size())
    throw std::invalid_argument("weighted_soft_threshold: length mismatch");
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || w[i] < 0.0)
      throw std::invalid_argument("weighted_soft_threshold: negative entry");
    if (i > 0 && (a[i] > a[i - 1] || w[i] < w[i - 1]))
      throw std::invalid_argument(
          "weighted_soft_threshold: need a non-increasing, w non-decreasing");
  }
  return (a - w).cwiseMax(0.0);
}

Eigen::MatrixXd svd_shrink_nnm(const Eigen::MatrixXd& y, double lambda)
{
  if (lambda < 0.0)
    throw std::invalid_argument("svd_shrink_nnm: negative lambda");
  SvdTriple svd = compute_svd(y);
  const Eigen::VectorXd shrunk =
      (svd.singular_values.array() - lambda).max(0.0).matrix();
  return svd.left * shrunk.asDiagonal() * svd.right.transpose();
}

Eigen::MatrixXd svd_shrink_wnnm(const Eigen::MatrixXd& y,
                                const Eigen::VectorXd& weights)
{
  SvdTriple svd = compute_svd(y);
  if (weights.size() != svd.singular_values.size())
    throw std::invalid_argument("svd_shrink_wnnm: weight length mismatch");
  const Eigen::VectorXd shrunk =
      weighted_soft_threshold(svd.singular_values, weights);
  return svd.left * shrunk.asDiagonal() * svd.right.transpose();
}

namespace {

double objective_impl(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& weights)
{
  if (y.rows() != x.rows() || y.cols() != x.cols())
    throw std::invalid_argument("shrink_objective: shape mismatch");
  const Eigen::VectorXd sigma = compute_svd(x).singular_values;
  if (weights.size() != sigma.size())
    throw std::invalid_argument("shrink_objective: weight length mismatch");
  return 0.5 * (y - x).squaredNorm() + weights.dot(sigma);
}

}  // namespace

double shrink_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                        double lambda)
{
  if (lambda < 0.0)
    throw std::invalid_argument("shrink_objective: negative lambda");
  const Eigen::Index r = std::min(x.rows(), x.cols());
  return objective_impl(y, x, Eigen::VectorXd::Constant(r, lambda));
}

double shrink_objective(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x,
                        const Eigen::VectorXd& weights)
{
  return objective_impl(y, x, weights);
}

}  // namespace lrr
