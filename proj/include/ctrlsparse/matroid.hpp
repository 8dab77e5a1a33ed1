#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/matching.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

// Ground element j is the j-th column of a k x n complex matrix;
// independence is numerical linear independence against an absolute
// singular value threshold.
class LinearMatroid {
 public:
  LinearMatroid(Eigen::MatrixXcd vectors, double threshold)
      : vectors_(std::move(vectors)), threshold_(threshold) {}

  // Columns of X_i^T for one mode of `es`.
  static LinearMatroid of_mode(const EigenStructure& es, int mode) {
    return LinearMatroid(es.xt(mode), es.threshold(mode));
  }

  int ground_size() const { return static_cast<int>(vectors_.cols()); }
  int vector_dim() const { return static_cast<int>(vectors_.rows()); }
  double threshold() const { return threshold_; }

  int rank(const std::vector<int>& subset) const {
    if (subset.empty()) return 0;
    Eigen::MatrixXcd m(vectors_.rows(),
                       static_cast<Eigen::Index>(subset.size()));
    for (std::size_t j = 0; j < subset.size(); ++j)
      m.col(static_cast<Eigen::Index>(j)) = vectors_.col(subset[j]);
    return rank_above(m, threshold_);
  }
  bool independent(const std::vector<int>& subset) const {
    return rank(subset) == static_cast<int>(subset.size());
  }
  bool is_loop(int e) const { return vectors_.col(e).norm() <= threshold_; }

 private:
  Eigen::MatrixXcd vectors_;
  double threshold_;
};

// Ground element j is state j; a set is independent when the pattern has a
// matching saturating it.
class TransversalMatroid {
 public:
  explicit TransversalMatroid(const SparsityPattern& p)
      : inputs_(p.l()), adj_(p.row_adjacency()) {}

  int ground_size() const { return static_cast<int>(adj_.size()); }
  int inputs() const { return inputs_; }
  const std::vector<int>& neighbors(int e) const {
    return adj_[static_cast<std::size_t>(e)];
  }
  bool is_loop(int e) const { return neighbors(e).empty(); }

  // Input assigned to each element of `subset`, or nullopt.
  std::optional<std::vector<int>> match(const std::vector<int>& subset) const {
    std::vector<std::vector<int>> adj;
    adj.reserve(subset.size());
    for (int e : subset) adj.push_back(neighbors(e));
    const auto m = hopcroft_karp(adj, inputs_);
    if (m.size != static_cast<int>(subset.size())) return std::nullopt;
    return m.mate_left;
  }
  bool independent(const std::vector<int>& subset) const {
    return match(subset).has_value();
  }

 private:
  int inputs_;
  std::vector<std::vector<int>> adj_;
};

struct IndependentMatchWitness {
  int mode_index = -1;
  std::vector<int> h;                         // sorted states
  std::vector<int> phi;                       // sorted matched inputs
  std::vector<std::pair<int, int>> matching;  // (state, input), by state
  int size = 0;
};

namespace detail {

// Columns c from which an alternating path reaches a free column, for the
// matching `mate` (element -> input) of the elements in `members`.
inline std::vector<char> good_columns(const TransversalMatroid& m2,
                                      const std::vector<int>& members,
                                      const std::vector<int>& mate,
                                      int skip) {
  const int l = m2.inputs();
  std::vector<int> owner(static_cast<std::size_t>(l), -1);
  for (std::size_t j = 0; j < members.size(); ++j)
    if (static_cast<int>(j) != skip)
      owner[static_cast<std::size_t>(mate[j])] = static_cast<int>(j);
  // Column c' reached from member j means j could move to c', which frees
  // mate[j].
  std::vector<std::vector<int>> movers(static_cast<std::size_t>(l));
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (static_cast<int>(j) == skip) continue;
    for (int c : m2.neighbors(members[j]))
      if (c != mate[j]) movers[static_cast<std::size_t>(c)].push_back(
          static_cast<int>(j));
  }
  std::vector<char> good(static_cast<std::size_t>(l), 0);
  std::deque<int> q;
  for (int c = 0; c < l; ++c)
    if (owner[static_cast<std::size_t>(c)] < 0) {
      good[static_cast<std::size_t>(c)] = 1;
      q.push_back(c);
    }
  while (!q.empty()) {
    const int c = q.front();
    q.pop_front();
    for (int j : movers[static_cast<std::size_t>(c)]) {
      const int freed = mate[static_cast<std::size_t>(j)];
      if (!good[static_cast<std::size_t>(freed)]) {
        good[static_cast<std::size_t>(freed)] = 1;
        q.push_back(freed);
      }
    }
  }
  return good;
}

inline bool touches(const std::vector<int>& nbrs, const std::vector<char>& g) {
  for (int c : nbrs)
    if (g[static_cast<std::size_t>(c)]) return true;
  return false;
}

}  // namespace detail

// Maximum cardinality common independent set by shortest augmenting paths
// in the exchange graph. `warm_start` must be common independent; the
// search continues from it. Ties go to the lowest state index: sources are
// queued in ascending order, neighbours are scanned ascending, and among
// the nearest sinks the lowest index is used.
inline IndependentMatchWitness matroid_intersection(
    const LinearMatroid& m1, const TransversalMatroid& m2,
    const std::vector<int>& warm_start = {}) {
  const int n = m1.ground_size();
  if (m2.ground_size() != n)
    throw DimensionError("matroids have different ground sets");

  // Loops of either matroid never enter a common independent set.
  std::vector<int> cand;
  for (int e = 0; e < n; ++e)
    if (!m1.is_loop(e) && !m2.is_loop(e)) cand.push_back(e);

  std::vector<char> in_i(static_cast<std::size_t>(n), 0);
  std::vector<int> current = warm_start;
  std::sort(current.begin(), current.end());
  for (int e : current) in_i[static_cast<std::size_t>(e)] = 1;

  while (true) {
    const int r = static_cast<int>(current.size());
    std::vector<int> outside;
    for (int e : cand)
      if (!in_i[static_cast<std::size_t>(e)]) outside.push_back(e);
    if (outside.empty()) break;

    // Linear side: which outside elements lie in span(I).
    std::vector<char> in_span(static_cast<std::size_t>(n), 0);
    for (int x : outside) {
      if (r >= m1.vector_dim()) {
        in_span[static_cast<std::size_t>(x)] = 1;
        continue;
      }
      std::vector<int> t = current;
      t.push_back(x);
      in_span[static_cast<std::size_t>(x)] = m1.rank(t) <= r;
    }

    // Transversal side.
    const auto mate_opt = m2.match(current);
    if (!mate_opt)
      throw NumericError("warm start is not independent in the pattern");
    const std::vector<int>& mate = *mate_opt;
    const auto good_all = detail::good_columns(m2, current, mate, -1);
    std::vector<std::vector<char>> good_without(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j)
      good_without[static_cast<std::size_t>(j)] =
          detail::good_columns(m2, current, mate, j);

    std::vector<int> pos_in_i(static_cast<std::size_t>(n), -1);
    for (int j = 0; j < r; ++j)
      pos_in_i[static_cast<std::size_t>(current[static_cast<std::size_t>(j)])] =
          j;

    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::deque<int> q;
    for (int x : outside)
      if (!in_span[static_cast<std::size_t>(x)]) {
        dist[static_cast<std::size_t>(x)] = 0;
        q.push_back(x);
      }

    int sink = -1;
    int sink_dist = -1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      const int dv = dist[static_cast<std::size_t>(v)];
      if (sink >= 0 && dv > sink_dist) break;
      if (!in_i[static_cast<std::size_t>(v)]) {
        if (detail::touches(m2.neighbors(v), good_all)) {
          if (sink < 0 || v < sink) {
            sink = v;
            sink_dist = dv;
          }
          continue;
        }
        if (sink >= 0) continue;
        // v -> y when I - y + v is matchable.
        for (int y : current) {
          if (dist[static_cast<std::size_t>(y)] >= 0) continue;
          const int j = pos_in_i[static_cast<std::size_t>(y)];
          if (detail::touches(m2.neighbors(v),
                              good_without[static_cast<std::size_t>(j)])) {
            dist[static_cast<std::size_t>(y)] = dv + 1;
            parent[static_cast<std::size_t>(y)] = v;
            q.push_back(y);
          }
        }
      } else {
        if (sink >= 0) continue;
        // v -> x when I - v + x is linearly independent.
        std::vector<int> base;
        for (int e : current)
          if (e != v) base.push_back(e);
        for (int x : outside) {
          if (dist[static_cast<std::size_t>(x)] >= 0) continue;
          std::vector<int> t = base;
          t.push_back(x);
          if (m1.rank(t) == r) {
            dist[static_cast<std::size_t>(x)] = dv + 1;
            parent[static_cast<std::size_t>(x)] = v;
            q.push_back(x);
          }
        }
      }
    }
    if (sink < 0) break;

    for (int v = sink; v >= 0; v = parent[static_cast<std::size_t>(v)])
      in_i[static_cast<std::size_t>(v)] ^= 1;
    current.clear();
    for (int e = 0; e < n; ++e)
      if (in_i[static_cast<std::size_t>(e)]) current.push_back(e);
    if (!m1.independent(current))
      throw NumericError(
          "augmentation produced a numerically dependent set; the rank "
          "tolerance is too close to the data");
  }

  IndependentMatchWitness w;
  w.h = current;
  w.size = static_cast<int>(current.size());
  const auto mate = m2.match(current);
  if (!mate) throw NumericError("common independent set lost its matching");
  for (std::size_t j = 0; j < current.size(); ++j) {
    w.matching.push_back({current[j], (*mate)[j]});
    w.phi.push_back((*mate)[j]);
  }
  std::sort(w.phi.begin(), w.phi.end());
  return w;
}

// True when mode `mode` has k_i independently matched mode vertices under
// the pattern; the witness is returned either way.
inline std::pair<bool, IndependentMatchWitness> independently_matched(
    const EigenStructure& es, int mode, const SparsityPattern& pattern,
    const std::vector<int>& warm_start = {}) {
  if (pattern.n() != es.n)
    throw DimensionError("pattern rows do not match the state dimension");
  auto w = matroid_intersection(LinearMatroid::of_mode(es, mode),
                                TransversalMatroid(pattern), warm_start);
  w.mode_index = mode;
  return {w.size == es.modes[static_cast<std::size_t>(mode)].multiplicity, w};
}

}  // namespace ctrlsparse
