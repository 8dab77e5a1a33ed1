#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/matroid.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

// States that inputs may act on directly (sorted, 0-based).
using AccessibleSet = StateSet;

inline AccessibleSet accessible_from_forbidden(int n,
                                               const std::vector<int>& forbidden) {
  std::vector<char> banned(static_cast<std::size_t>(n), 0);
  for (int s : forbidden) {
    if (s < 0 || s >= n)
      throw DimensionError("forbidden state " + std::to_string(s + 1) +
                           " outside 1.." + std::to_string(n));
    banned[static_cast<std::size_t>(s)] = 1;
  }
  AccessibleSet xa;
  for (int s = 0; s < n; ++s)
    if (!banned[static_cast<std::size_t>(s)]) xa.push_back(s);
  return xa;
}

// Eigenbasis test: X_i^T B has full row rank for every representative
// mode. Singular values are compared against the scale of ||B||.
inline bool is_controllable(const EigenStructure& es, const Eigen::MatrixXd& b,
                            const ToleranceConfig& tol = {}) {
  if (b.rows() != es.n)
    throw DimensionError("input matrix has " + std::to_string(b.rows()) +
                         " rows, expected " + std::to_string(es.n));
  if (!b.allFinite()) throw InputError("input matrix has non-finite entries");
  if (es.n == 0) return true;
  const Eigen::VectorXd sb = singular_values(b);
  const double bnorm = sb.size() ? sb(0) : 0.0;
  if (!(bnorm > 0.0)) return false;
  const Eigen::MatrixXcd bc = b.cast<cdouble>();
  const double rel = tol.rank_tol_for(b.rows(), b.cols());
  for (int i : mode_representatives(es)) {
    const auto& m = es.modes[static_cast<std::size_t>(i)];
    const Eigen::MatrixXcd xb = m.eigenbasis.transpose() * bc;
    if (rank_above(xb, rel * m.scale * bnorm) != m.multiplicity) return false;
  }
  return true;
}

inline bool is_controllable(const StateMatrix& a, const Eigen::MatrixXd& b,
                            const ToleranceConfig& tol = {}) {
  if (b.rows() != a.rows())
    throw DimensionError("A and B row counts differ");
  return is_controllable(compute_eigenstructure(a, tol), b, tol);
}

// Rank of [B, AB, ..., A^{n-1}B] with singular values counted above
// rel_tol times the largest. Columns of each block are rescaled to unit
// norm before stacking so that powers of A do not swamp the cutoff.
inline int kalman_rank(const StateMatrix& a, const Eigen::MatrixXd& b,
                       double rel_tol = 1e-8) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw DimensionError("kalman_rank dimension mismatch");
  if (n == 0 || b.cols() == 0) return 0;
  Eigen::MatrixXd k(n, n * b.cols());
  Eigen::MatrixXd block = b;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd scaled = block;
    for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
      const double nrm = scaled.col(c).norm();
      if (nrm > 0.0) scaled.col(c) /= nrm;
    }
    k.middleCols(j * b.cols(), b.cols()) = scaled;
    block = a * scaled;
  }
  const Eigen::VectorXd s = singular_values(k);
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

struct FeasibilityReport {
  bool feasible = false;
  // One witness per representative mode checked so far; complete when
  // feasible.
  std::vector<IndependentMatchWitness> witnesses;
  std::optional<int> failing_mode;
};

// Every representative mode is independently matched by the pattern.
inline FeasibilityReport pattern_feasible(const EigenStructure& es,
                                          const SparsityPattern& pattern) {
  if (pattern.n() != es.n)
    throw DimensionError("pattern has " + std::to_string(pattern.n()) +
                         " rows, expected " + std::to_string(es.n));
  FeasibilityReport rep;
  const TransversalMatroid m2(pattern);
  for (int i : mode_representatives(es)) {
    auto w = matroid_intersection(LinearMatroid::of_mode(es, i), m2);
    w.mode_index = i;
    const bool ok = w.size == es.modes[static_cast<std::size_t>(i)].multiplicity;
    rep.witnesses.push_back(std::move(w));
    if (!ok) {
      rep.failing_mode = i;
      return rep;
    }
  }
  rep.feasible = true;
  return rep;
}

// Some h_i inside the accessible states exists for every representative.
inline bool micp_feasible(const EigenStructure& es, const AccessibleSet& xa) {
  for (int s : xa)
    if (s < 0 || s >= es.n) throw DimensionError("accessible state out of range");
  for (int i : mode_representatives(es))
    if (restricted_rank(es, i, xa) !=
        es.modes[static_cast<std::size_t>(i)].multiplicity)
      return false;
  return true;
}

// First representative mode that cannot be reached from `xa`, or -1.
inline int micp_violating_mode(const EigenStructure& es,
                               const AccessibleSet& xa) {
  for (int i : mode_representatives(es))
    if (restricted_rank(es, i, xa) !=
        es.modes[static_cast<std::size_t>(i)].multiplicity)
      return i;
  return -1;
}

}  // namespace ctrlsparse
