#pragma once

// Shared fixtures and oracles for the test suites. The oracles avoid the
// library's own rank and matching code: ranks come from a full pivoting LU,
// matchings from plain DFS augmentation, generic ranks from random
// instantiations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ctrlsparse/ctrlsparse.hpp"

namespace ctrlsparse {

// gtest printer: 1-based support list.
inline void PrintTo(const SparsityPattern& p, std::ostream* os) {
  *os << p.n() << "x" << p.l() << " {";
  for (const auto& [r, c] : p.support()) *os << " (" << r + 1 << "," << c + 1 << ")";
  *os << " }";
}

}  // namespace ctrlsparse

namespace fixtures {

using namespace ctrlsparse;

// Six states, eigenvalues 1, 2, 3, each with two independent left
// eigenvectors.
inline StateMatrix six_state_a() {
  StateMatrix a(6, 6);
  a << 4.0 / 3, 0, 0, -4.0 / 3, 0, 0,
       0, 1, 0, 0, 0, 0,
       0, 0, 3, 0, 0, 0,
       -1.0 / 6, 0, 0, 5.0 / 3, 0, 0,
       0, 0, -3, 0, 2, 0,
       0, 1, 0, 0, 0, 3;
  return a;
}

// Rows of X_i^T for the hand-derived bases of six_state_a.
inline std::vector<Eigen::MatrixXd> six_state_xt() {
  Eigen::MatrixXd x1(2, 6), x2(2, 6), x3(2, 6);
  x1 << 1, 0, 0, 2, 0, 0,
        0, 1, 0, 0, 0, 0;
  x2 << 0, 0, 3, 0, 1, 0,
        -1, 0, 0, 4, 0, 0;
  x3 << 0, 1, 0, 0, 0, 2,
        0, 0, 1, 0, 0, 0;
  return {x1, x2, x3};
}

inline EigenStructure six_state_printed() {
  std::vector<Eigen::MatrixXcd> bases;
  for (const auto& xt : six_state_xt())
    bases.push_back(xt.transpose().cast<cdouble>());
  return eigenstructure_from_bases(6, {1.0, 2.0, 3.0}, bases);
}

// Two-loop RLC ladder with unit parameters; states (i1, u1, i2, u2).
inline StateMatrix two_loop_a() {
  StateMatrix a(4, 4);
  a << -1, -1, 0, 0,
       1, 0, -1, 0,
       0, 0, -1, -1,
       0, 0, 1, 0;
  return a;
}

// Inputs u1 -> {1, 2}, u2 -> {2, 3} (0-based here).
inline SparsityPattern six_state_two_input_pattern() {
  return SparsityPattern(6, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 1}});
}

// ---------------------------------------------------------------- oracles

inline int lu_rank(const Eigen::MatrixXcd& m, double tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

// rank(X_i^T restricted to `states`) with an LU rank.
inline int oracle_restricted_rank(const EigenStructure& es, int mode,
                                  const std::vector<int>& states) {
  const auto xt = es.xt(mode);
  Eigen::MatrixXcd sub(xt.rows(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j)
    sub.col(static_cast<Eigen::Index>(j)) = xt.col(states[j]);
  return lu_rank(sub);
}

inline int oracle_f(const EigenStructure& es, const std::vector<int>& s) {
  int total = 0;
  for (int i : mode_representatives(es)) total += oracle_restricted_rank(es, i, s);
  return total;
}

// Maximum bipartite matching by repeated DFS augmentation.
inline int dfs_matching(const std::vector<std::vector<int>>& adj, int n_right) {
  std::vector<int> mate(static_cast<std::size_t>(n_right), -1);
  int size = 0;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    std::vector<char> seen(static_cast<std::size_t>(n_right), 0);
    std::function<bool(int)> aug = [&](int x) {
      for (int y : adj[static_cast<std::size_t>(x)]) {
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = 1;
        if (mate[static_cast<std::size_t>(y)] < 0 ||
            aug(mate[static_cast<std::size_t>(y)])) {
          mate[static_cast<std::size_t>(y)] = x;
          return true;
        }
      }
      return false;
    };
    if (aug(static_cast<int>(u))) ++size;
  }
  return size;
}

// Generic rank as the best rank over a few random instantiations.
inline int random_generic_rank(const SparsityPattern& p, std::mt19937_64& rng,
                               int draws = 3) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  int best = 0;
  for (int d = 0; d < draws; ++d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.n(), p.l());
    for (const auto& [r, c] : p.support()) m(r, c) = u(rng);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    best = std::max(best, static_cast<int>(lu.rank()));
  }
  return best;
}

// Largest subset of states independent in both X_i^T columns and the
// pattern's transversal matroid, by exhaustive search.
inline int exhaustive_intersection(const EigenStructure& es, int mode,
                                   const SparsityPattern& p) {
  const int n = es.n;
  const auto rows = p.row_adjacency();
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1u) s.push_back(j);
    const int sz = static_cast<int>(s.size());
    if (sz <= best) continue;
    if (oracle_restricted_rank(es, mode, s) != sz) continue;
    std::vector<std::vector<int>> adj;
    for (int j : s) adj.push_back(rows[static_cast<std::size_t>(j)]);
    if (dfs_matching(adj, p.l()) != sz) continue;
    best = sz;
  }
  return best;
}

// Kalman rank from scratch (powers of A applied to B, columns normalized).
inline int oracle_kalman_rank(const StateMatrix& a, const Eigen::MatrixXd& b) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd k(n, n * b.cols());
  Eigen::MatrixXd blk = b;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index c = 0; c < blk.cols(); ++c) {
      const double nrm = blk.col(c).norm();
      if (nrm > 0) blk.col(c) /= nrm;
    }
    k.middleCols(j * b.cols(), b.cols()) = blk;
    blk = a * blk;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  const auto s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0)) ++r;
  return r;
}

// All subsets of {0..n-1} of size k in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace fixtures
