#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jetsym/operations.hpp"

namespace jetsym {

/// Numeric rank of the Jacobian d(exprs)/d(coords) at a point (SVD, relative
/// threshold `tol`).
inline int jacobian_rank(const std::vector<Expression>& exprs, const std::vector<Atom>& coords, const PointMap& point,
                         const FunctionTable& fns = {}, double tol = 1e-9) {
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(exprs.size()), static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < exprs.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j)
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval_numeric(diff(exprs[i], coords[j]), point, fns);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

}  // namespace jetsym
