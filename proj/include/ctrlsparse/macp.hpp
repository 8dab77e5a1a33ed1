#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/feasibility.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

struct SelectionTrace {
  std::vector<int> chosen;  // in selection order
  std::vector<int> gains;   // marginal gain of each choice
  int value = 0;            // objective after the last choice
};

// f(S) = sum over representatives of rank(X_i^T restricted to S).
inline int f_value(const EigenStructure& es, const std::vector<int>& s) {
  int total = 0;
  for (int i : mode_representatives(es)) total += restricted_rank(es, i, s);
  return total;
}

namespace detail {

// Per-mode bookkeeping for greedy rank growth: an independent subset
// spanning the columns chosen so far.
struct ModeSpan {
  int mode = -1;
  int k = 0;
  Eigen::MatrixXcd cols;  // k x r, independent chosen columns
  double threshold = 0.0;

  int rank() const { return static_cast<int>(cols.cols()); }

  bool grows_with(const Eigen::VectorXcd& v) const {
    if (rank() >= k) return false;
    if (v.norm() <= threshold) return false;
    if (rank() == 0) return true;
    Eigen::MatrixXcd t(cols.rows(), cols.cols() + 1);
    t << cols, v;
    return rank_above(t, threshold) > rank();
  }
  void add(const Eigen::VectorXcd& v) {
    Eigen::MatrixXcd t(cols.rows(), cols.cols() + 1);
    t << cols, v;
    cols = std::move(t);
  }
};

inline std::vector<int> validated_states(const std::vector<int>& s, int n) {
  std::vector<int> out = s;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (int x : out)
    if (x < 0 || x >= n) throw DimensionError("state index out of range");
  return out;
}

}  // namespace detail

// Greedy minimal actuated state selection: repeatedly add the state with the
// largest marginal gain of f (lowest index on ties) until every
// representative mode has full rank. With `xa`, only accessible states are
// candidates.
inline SelectionTrace greedy_macp(const EigenStructure& es,
                                  const std::optional<AccessibleSet>& xa = {}) {
  std::vector<int> pool;
  if (xa) {
    pool = detail::validated_states(*xa, es.n);
    const int bad = micp_violating_mode(es, pool);
    if (bad >= 0)
      throw InfeasibleError("mode " + std::to_string(bad + 1) +
                                " cannot be reached from the accessible states",
                            bad);
  } else {
    for (int s = 0; s < es.n; ++s) pool.push_back(s);
  }

  const std::vector<int> reps = mode_representatives(es);
  const int target = representative_total(es);
  std::vector<detail::ModeSpan> spans;
  for (int i : reps) {
    detail::ModeSpan m;
    m.mode = i;
    m.k = es.modes[static_cast<std::size_t>(i)].multiplicity;
    m.cols = Eigen::MatrixXcd(m.k, 0);
    m.threshold = es.threshold(i);
    spans.push_back(std::move(m));
  }

  SelectionTrace trace;
  std::vector<char> taken(static_cast<std::size_t>(es.n), 0);
  while (trace.value < target) {
    int best = -1;
    int best_gain = 0;
    for (int s : pool) {
      if (taken[static_cast<std::size_t>(s)]) continue;
      int gain = 0;
      for (const auto& m : spans)
        if (m.grows_with(es.modes[static_cast<std::size_t>(m.mode)]
                             .eigenbasis.row(s)
                             .transpose()))
          ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    if (best < 0)
      throw NumericError("greedy selection stalled at f = " +
                         std::to_string(trace.value) + " < " +
                         std::to_string(target));
    for (auto& m : spans) {
      const Eigen::VectorXcd v =
          es.modes[static_cast<std::size_t>(m.mode)].eigenbasis.row(best).transpose();
      if (m.grows_with(v)) m.add(v);
    }
    taken[static_cast<std::size_t>(best)] = 1;
    trace.chosen.push_back(best);
    trace.gains.push_back(best_gain);
    trace.value += best_gain;
  }
  return trace;
}

// f'(S) = sum over representatives of rank(X_i^T B_S).
inline int column_f_value(const EigenStructure& es, const Eigen::MatrixXd& b,
                          const std::vector<int>& cols,
                          const ToleranceConfig& tol = {}) {
  if (cols.empty()) return 0;
  const Eigen::VectorXd sb = singular_values(b);
  const double bnorm = sb.size() ? sb(0) : 0.0;
  const double rel = tol.rank_tol_for(b.rows(), b.cols());
  Eigen::MatrixXcd bs(b.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    bs.col(static_cast<Eigen::Index>(j)) = b.col(cols[j]).cast<cdouble>();
  int total = 0;
  for (int i : mode_representatives(es)) {
    const auto& m = es.modes[static_cast<std::size_t>(i)];
    total += rank_above(m.eigenbasis.transpose() * bs, rel * m.scale * bnorm);
  }
  return total;
}

// Greedy choice of input columns of a controllable B that keep the pair
// controllable.
inline SelectionTrace greedy_column_select(const EigenStructure& es,
                                           const Eigen::MatrixXd& b,
                                           const ToleranceConfig& tol = {}) {
  if (!is_controllable(es, b, tol))
    throw InfeasibleError("(A, B) is not controllable");
  const std::vector<int> reps = mode_representatives(es);
  const int target = representative_total(es);
  const Eigen::VectorXd sb = singular_values(b);
  const double bnorm = sb.size() ? sb(0) : 0.0;
  const double rel = tol.rank_tol_for(b.rows(), b.cols());

  std::vector<detail::ModeSpan> spans;
  std::vector<Eigen::MatrixXcd> xb;
  for (int i : reps) {
    const auto& mode = es.modes[static_cast<std::size_t>(i)];
    detail::ModeSpan m;
    m.mode = i;
    m.k = mode.multiplicity;
    m.cols = Eigen::MatrixXcd(m.k, 0);
    m.threshold = rel * mode.scale * bnorm;
    spans.push_back(std::move(m));
    xb.push_back(mode.eigenbasis.transpose() * b.cast<cdouble>());
  }

  SelectionTrace trace;
  std::vector<char> taken(static_cast<std::size_t>(b.cols()), 0);
  while (trace.value < target) {
    int best = -1;
    int best_gain = 0;
    for (int c = 0; c < b.cols(); ++c) {
      if (taken[static_cast<std::size_t>(c)]) continue;
      int gain = 0;
      for (std::size_t r = 0; r < spans.size(); ++r)
        if (spans[r].grows_with(xb[r].col(c))) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best < 0)
      throw NumericError("column selection stalled below full rank");
    for (std::size_t r = 0; r < spans.size(); ++r)
      if (spans[r].grows_with(xb[r].col(best))) spans[r].add(xb[r].col(best));
    taken[static_cast<std::size_t>(best)] = 1;
    trace.chosen.push_back(best);
    trace.gains.push_back(best_gain);
    trace.value += best_gain;
  }
  return trace;
}

}  // namespace ctrlsparse
