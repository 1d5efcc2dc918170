#include "lrr/dictionary.hpp"

#include <stdexcept>

namespace lrr {

AdaptiveDictionary build_dictionary(const Eigen::MatrixXd& group)
{
  AdaptiveDictionary dict;
  dict.basis = compute_svd(group);
  dict.mu = dict.basis.singular_values;
  return dict;
}

Eigen::MatrixXd decode(const AdaptiveDictionary& dict,
                       const Eigen::VectorXd& alpha)
{
  if (alpha.size() != dict.mu.size())
    throw std::invalid_argument("decode: coefficient length mismatch");
  return dict.basis.left * alpha.asDiagonal() * dict.basis.right.transpose();
}

double isometry_gap(const AdaptiveDictionary& dict,
                    const Eigen::VectorXd& alpha)
{
  const Eigen::MatrixXd y = decode(dict, dict.mu);
  const Eigen::MatrixXd x = decode(dict, alpha);
  const double frob = (y - x).squaredNorm();
  const double coef = (dict.mu - alpha).squaredNorm();
  return std::abs(frob - coef);
}

}  // namespace lrr
