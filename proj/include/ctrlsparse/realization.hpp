#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/feasibility.hpp"
#include "ctrlsparse/matroid.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

struct RealizationStep {
  int mode = -1;                 // representative whose test failed
  std::vector<double> tried;     // candidate values in order
  std::vector<int> z_counts;     // |Z_m| for each tried value
  double chosen = 0.0;           // m*
  int z_size = 0;                // |Z_{m*}|
};

struct RealizationTrace {
  std::vector<IndependentMatchWitness> witnesses;
  std::vector<RealizationStep> steps;
  Eigen::MatrixXd b;
};

// det(X_q^T B_phi) != 0, tested two ways: |det| against det_rel_tol times
// the product of its row norms, and its smallest singular value against
// det_rel_tol * ||X_q|| * ||B_phi||. The row norm test alone depends on the
// basis chosen inside a multi-dimensional eigenspace; a basis row that is a
// tiny multiple of another passes it while the product is singular.
inline bool determinant_nonzero(const EigenStructure& es, int mode,
                                const Eigen::MatrixXd& b,
                                const std::vector<int>& phi,
                                const ToleranceConfig& tol) {
  const auto& m = es.modes[static_cast<std::size_t>(mode)];
  const auto& x = m.eigenbasis;
  Eigen::MatrixXd bphi(b.rows(), static_cast<Eigen::Index>(phi.size()));
  for (std::size_t j = 0; j < phi.size(); ++j)
    bphi.col(static_cast<Eigen::Index>(j)) = b.col(phi[j]);
  const Eigen::MatrixXcd sub = x.transpose() * bphi.cast<cdouble>();
  if (sub.rows() != sub.cols() || sub.rows() == 0) return false;
  double bound = 1.0;
  for (Eigen::Index r = 0; r < sub.rows(); ++r) bound *= sub.row(r).norm();
  if (!(bound > 0.0)) return false;
  const double det = std::abs(Eigen::FullPivLU<Eigen::MatrixXcd>(sub).determinant());
  if (!(det > tol.det_rel_tol * bound)) return false;
  const Eigen::VectorXd sb = singular_values(bphi);
  const Eigen::VectorXd s = singular_values(sub);
  return s(s.size() - 1) > tol.det_rel_tol * m.scale * sb(0);
}

// Deterministic real input matrix with support inside `pattern` that makes
// the pair controllable.
//
// Each representative mode gets a witness (h_i, phi_i) from the matroid
// engine. Sweeping the representatives in order, a mode whose determinant
// test fails has its witness entries raised by the candidate value that
// maximises the number of passing modes (lowest value on ties). The
// default candidates are 1, ..., 1 + sum_rep k_i.
inline RealizationTrace construct_input_matrix(
    const EigenStructure& es, const SparsityPattern& pattern,
    const ToleranceConfig& tol = {}, std::vector<double> candidates = {}) {
  const FeasibilityReport feas = pattern_feasible(es, pattern);
  if (!feas.feasible)
    throw InfeasibleError("pattern is infeasible: mode " +
                              std::to_string(*feas.failing_mode + 1) +
                              " is not independently matched",
                          *feas.failing_mode);
  const std::vector<int> reps = mode_representatives(es);
  if (candidates.empty()) {
    const int total = representative_total(es);
    for (int m = 1; m <= 1 + total; ++m) candidates.push_back(m);
  }
  for (double c : candidates)
    if (!std::isfinite(c) || c == 0.0)
      throw InputError("candidate values must be finite and nonzero");

  RealizationTrace trace;
  trace.witnesses = feas.witnesses;
  trace.b = Eigen::MatrixXd::Zero(pattern.n(), pattern.l());
  const auto witness_of = [&](std::size_t r) -> const IndependentMatchWitness& {
    return trace.witnesses[r];
  };

  const auto passing = [&](const Eigen::MatrixXd& b) {
    int count = 0;
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (determinant_nonzero(es, reps[r], b, witness_of(r).phi, tol)) ++count;
    return count;
  };

  int z = passing(trace.b);
  for (std::size_t r = 0; r < reps.size() && z < static_cast<int>(reps.size());
       ++r) {
    if (determinant_nonzero(es, reps[r], trace.b, witness_of(r).phi, tol))
      continue;
    RealizationStep step;
    step.mode = reps[r];
    Eigen::MatrixXd best;
    int best_count = -1;
    double best_value = 0.0;
    for (double m : candidates) {
      Eigen::MatrixXd trial = trace.b;
      for (const auto& [state, input] : witness_of(r).matching)
        trial(state, input) += m;
      const int count = passing(trial);
      step.tried.push_back(m);
      step.z_counts.push_back(count);
      if (count > best_count || (count == best_count && m < best_value)) {
        best_count = count;
        best_value = m;
        best = std::move(trial);
      }
    }
    step.chosen = best_value;
    step.z_size = best_count;
    trace.b = std::move(best);
    z = best_count;
    trace.steps.push_back(std::move(step));
  }
  if (z < static_cast<int>(reps.size()))
    throw NumericError(
        "no candidate value cleared the determinant test for every mode; "
        "loosen det_rel_tol or supply other candidate values");
  return trace;
}

// States of `order` (scanned in that order) whose columns of X_i^T raise
// the rank, stopping at k_i.
inline std::vector<int> extract_h_set(const EigenStructure& es, int mode,
                                      const std::vector<int>& order) {
  const int k = es.modes[static_cast<std::size_t>(mode)].multiplicity;
  std::vector<int> h;
  for (int s : order) {
    if (static_cast<int>(h.size()) == k) break;
    std::vector<int> t = h;
    t.push_back(s);
    if (restricted_rank(es, mode, t) > static_cast<int>(h.size()))
      h = std::move(t);
  }
  return h;
}

namespace detail {

// Star at (j-th smallest element of h_i, column j) for every representative,
// unioned.
inline SparsityPattern stacked_h_pattern(const EigenStructure& es,
                                         const std::vector<int>& rows, int l) {
  SparsityPattern p(es.n, l);
  for (int i : mode_representatives(es)) {
    std::vector<int> h = extract_h_set(es, i, rows);
    if (static_cast<int>(h.size()) !=
        es.modes[static_cast<std::size_t>(i)].multiplicity)
      throw InfeasibleError("mode " + std::to_string(i + 1) +
                                " cannot be reached from the given states",
                            i);
    std::sort(h.begin(), h.end());
    for (std::size_t j = 0; j < h.size(); ++j)
      p.insert(h[j], static_cast<int>(j));
  }
  return p;
}

inline std::vector<int> sorted_unique(std::vector<int> v, int n) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (int s : v)
    if (s < 0 || s >= n) throw DimensionError("state index out of range");
  return v;
}

}  // namespace detail

// Pattern with k_max inputs acting only on accessible states.
inline SparsityPattern micp_min_input_pattern(const EigenStructure& es,
                                              const AccessibleSet& xa) {
  const auto rows = detail::sorted_unique(xa, es.n);
  return detail::stacked_h_pattern(es, rows, es.k_max);
}

// l-input pattern whose actuated states lie in `rows`.
inline SparsityPattern rows_to_l_pattern(const EigenStructure& es,
                                         const std::vector<int>& rows, int l) {
  if (l < es.k_max)
    throw InfeasibleError("l = " + std::to_string(l) +
                          " is below the largest geometric multiplicity " +
                          std::to_string(es.k_max));
  return detail::stacked_h_pattern(es, detail::sorted_unique(rows, es.n), l);
}

}  // namespace ctrlsparse
