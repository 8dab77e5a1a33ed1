#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ctrlsparse {

struct ToleranceConfig {
  // Relative singular value cutoff. Zero selects
  // max(rows, cols) * eps * 64 for each matrix.
  double rank_rel_tol = 0.0;
  // |det| must exceed det_rel_tol times the product of row norms.
  double det_rel_tol = 1e-10;
  // Eigenvalue estimates closer than cluster_tol * (1 + |lambda|) merge.
  double cluster_tol = 1e-8;
  // Two clusters whose null spaces have a principal cosine above
  // 1 - overlap_tol are the same eigenvalue split by round-off.
  double overlap_tol = 1e-6;

  double rank_tol_for(Eigen::Index rows, Eigen::Index cols) const {
    if (rank_rel_tol > 0.0) return rank_rel_tol;
    const double dim = static_cast<double>(std::max<Eigen::Index>(
        std::max(rows, cols), 1));
    return dim * std::numeric_limits<double>::epsilon() * 64.0;
  }
};

template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() == 0 || m.cols() == 0) return Eigen::VectorXd();
  Mat copy = m;
  if (std::min(copy.rows(), copy.cols()) <= 16) {
    Eigen::JacobiSVD<Mat> svd(copy);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Mat> svd(copy);
  return svd.singularValues();
}

// Number of singular values strictly above `threshold`.
template <typename Derived>
int rank_above(const Eigen::MatrixBase<Derived>& m, double threshold) {
  const Eigen::VectorXd s = singular_values(m);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  return r;
}

// Singular values at or above rank_rel_tol times the largest one. A zero
// matrix has rank 0.
template <typename Derived>
int numeric_rank(const Eigen::MatrixBase<Derived>& m,
                 const ToleranceConfig& tol = {}) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double cut = tol.rank_tol_for(m.rows(), m.cols()) * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= cut) ++r;
  return r;
}

}  // namespace ctrlsparse
