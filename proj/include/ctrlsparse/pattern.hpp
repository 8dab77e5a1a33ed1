#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/matching.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

// Support of a structured n x l input matrix. Entries are (row, col),
// 0-based, kept sorted row-major.
class SparsityPattern {
 public:
  using Entry = std::pair<int, int>;

  SparsityPattern() = default;
  SparsityPattern(int n, int l) : n_(n), l_(l) {
    if (n < 0 || l < 0) throw DimensionError("negative pattern dimension");
  }
  SparsityPattern(int n, int l, const std::vector<Entry>& entries)
      : SparsityPattern(n, l) {
    for (const auto& e : entries) insert(e.first, e.second);
  }

  // n x n pattern with a star at (s, s) for every s in `states`.
  static SparsityPattern diagonal(int n, const std::vector<int>& states) {
    SparsityPattern p(n, n);
    for (int s : states) p.insert(s, s);
    return p;
  }

  // Pattern of the nonzeros of a numeric matrix.
  static SparsityPattern of_matrix(const Eigen::MatrixXd& b) {
    SparsityPattern p(static_cast<int>(b.rows()), static_cast<int>(b.cols()));
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c)
        if (b(r, c) != 0.0) p.insert(static_cast<int>(r), static_cast<int>(c));
    return p;
  }

  int n() const { return n_; }
  int l() const { return l_; }
  std::size_t nnz() const { return support_.size(); }
  const std::set<Entry>& support() const { return support_; }
  std::vector<Entry> entries() const {
    return {support_.begin(), support_.end()};
  }

  bool contains(int r, int c) const { return support_.count({r, c}) > 0; }

  // Returns false when the entry was already present.
  bool insert(int r, int c) {
    if (r < 0 || r >= n_ || c < 0 || c >= l_)
      throw DimensionError("pattern entry (" + std::to_string(r + 1) + "," +
                           std::to_string(c + 1) + ") outside " +
                           std::to_string(n_) + "x" + std::to_string(l_));
    return support_.insert({r, c}).second;
  }
  void erase(int r, int c) { support_.erase({r, c}); }

  // Sorted rows carrying at least one star.
  std::vector<int> active_rows() const {
    std::vector<int> rows;
    for (const auto& e : support_)
      if (rows.empty() || rows.back() != e.first) rows.push_back(e.first);
    return rows;
  }

  // Row adjacency lists: inputs reachable from each state.
  std::vector<std::vector<int>> row_adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
    for (const auto& e : support_)
      adj[static_cast<std::size_t>(e.first)].push_back(e.second);
    return adj;
  }

  // Matrix with every star set to `value`.
  Eigen::MatrixXd instantiate(double value = 1.0) const {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_, l_);
    for (const auto& e : support_) b(e.first, e.second) = value;
    return b;
  }

  bool operator==(const SparsityPattern& o) const {
    return n_ == o.n_ && l_ == o.l_ && support_ == o.support_;
  }

 private:
  int n_ = 0;
  int l_ = 0;
  std::set<Entry> support_;
};

// Maximum matching between `rows` and `cols` inside the support. Equals the
// generic rank of the corresponding submatrix.
inline int pattern_generic_rank(const SparsityPattern& p,
                                const std::vector<int>& rows,
                                const std::vector<int>& cols) {
  std::vector<int> col_slot(static_cast<std::size_t>(p.l()), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= p.l())
      throw DimensionError("column index out of range");
    col_slot[static_cast<std::size_t>(cols[j])] = static_cast<int>(j);
  }
  std::vector<std::vector<int>> adj(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= p.n())
      throw DimensionError("row index out of range");
    auto it = p.support().lower_bound({rows[i], 0});
    for (; it != p.support().end() && it->first == rows[i]; ++it)
      if (col_slot[static_cast<std::size_t>(it->second)] >= 0)
        adj[i].push_back(col_slot[static_cast<std::size_t>(it->second)]);
  }
  return hopcroft_karp(adj, static_cast<int>(cols.size())).size;
}

inline int pattern_generic_rank(const SparsityPattern& p) {
  std::vector<int> rows(static_cast<std::size_t>(p.n()));
  std::vector<int> cols(static_cast<std::size_t>(p.l()));
  for (int i = 0; i < p.n(); ++i) rows[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < p.l(); ++j) cols[static_cast<std::size_t>(j)] = j;
  return pattern_generic_rank(p, rows, cols);
}

inline SparsityPattern pattern_union(const std::vector<SparsityPattern>& ps) {
  if (ps.empty()) return {};
  SparsityPattern out(ps.front().n(), ps.front().l());
  for (const auto& p : ps) {
    if (p.n() != out.n() || p.l() != out.l())
      throw DimensionError("pattern_union needs identical dimensions");
    for (const auto& e : p.support()) out.insert(e.first, e.second);
  }
  return out;
}

// Input -> state -> mode digraph. Mode vertices are numbered consecutively
// over (mode, basis column) pairs in mode order.
struct IsmDigraph {
  int l = 0;
  int n = 0;
  std::vector<std::pair<int, int>> mode_vertices;  // (mode, basis column)
  std::vector<std::pair<int, int>> edges_us;       // (input, state)
  std::vector<std::pair<int, int>> edges_sm;       // (state, mode vertex)

  std::size_t arc_count() const { return edges_us.size() + edges_sm.size(); }

  std::string to_dot() const {
    std::ostringstream os;
    os << "digraph ism {\n  rankdir=LR;\n";
    for (int u = 0; u < l; ++u)
      os << "  u" << u + 1 << " [shape=box,label=\"u" << u + 1 << "\"];\n";
    for (int s = 0; s < n; ++s)
      os << "  s" << s + 1 << " [shape=circle,label=\"" << s + 1 << "\"];\n";
    for (std::size_t m = 0; m < mode_vertices.size(); ++m)
      os << "  m" << m << " [shape=diamond,label=\"m"
         << mode_vertices[m].first + 1 << mode_vertices[m].second + 1
         << "\"];\n";
    for (const auto& e : edges_us)
      os << "  u" << e.first + 1 << " -> s" << e.second + 1 << ";\n";
    for (const auto& e : edges_sm)
      os << "  s" << e.first + 1 << " -> m" << e.second << ";\n";
    os << "}\n";
    return os.str();
  }
};

// The digraph depends on the particular eigenbasis stored in `es`.
inline IsmDigraph build_ism(const EigenStructure& es,
                            const SparsityPattern& pattern) {
  if (es.n != pattern.n())
    throw DimensionError("pattern has " + std::to_string(pattern.n()) +
                         " rows but the system has " + std::to_string(es.n) +
                         " states");
  IsmDigraph g;
  g.l = pattern.l();
  g.n = es.n;
  for (const auto& e : pattern.support()) g.edges_us.push_back({e.second, e.first});
  std::sort(g.edges_us.begin(), g.edges_us.end());
  for (int i = 0; i < es.p(); ++i) {
    const int k = es.modes[static_cast<std::size_t>(i)].multiplicity;
    for (int c = 0; c < k; ++c) {
      const int v = static_cast<int>(g.mode_vertices.size());
      g.mode_vertices.push_back({i, c});
      for (int s = 0; s < es.n; ++s)
        if (basis_entry_nonzero(es, i, s, c)) g.edges_sm.push_back({s, v});
    }
  }
  std::sort(g.edges_sm.begin(), g.edges_sm.end());
  return g;
}

}  // namespace ctrlsparse
