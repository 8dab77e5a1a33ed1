#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/feasibility.hpp"
#include "ctrlsparse/macp.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

struct BruteMacpResult {
  int size = 0;
  std::vector<int> states;  // lexicographically smallest optimum
};

// Exact minimal actuated state set by enumerating subsets in increasing
// size, each size in lexicographic order.
inline BruteMacpResult brute_macp(const EigenStructure& es,
                                  const std::optional<AccessibleSet>& xa = {},
                                  int max_states = 20) {
  std::vector<int> pool;
  if (xa) {
    pool = detail::validated_states(*xa, es.n);
  } else {
    for (int s = 0; s < es.n; ++s) pool.push_back(s);
  }
  if (static_cast<int>(pool.size()) > max_states)
    throw BudgetError("exhaustive state search limited to " +
                      std::to_string(max_states) + " candidate states, got " +
                      std::to_string(pool.size()));
  const int bad = micp_violating_mode(es, pool);
  if (bad >= 0)
    throw InfeasibleError("mode " + std::to_string(bad + 1) +
                              " cannot be reached from the accessible states",
                          bad);
  const int target = representative_total(es);
  const int m = static_cast<int>(pool.size());
  for (int size = 0; size <= m; ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) idx[static_cast<std::size_t>(j)] = j;
    while (true) {
      std::vector<int> s;
      for (int j : idx) s.push_back(pool[static_cast<std::size_t>(j)]);
      if (f_value(es, s) == target) return {size, s};
      int j = size - 1;
      while (j >= 0 && idx[static_cast<std::size_t>(j)] == m - size + j) --j;
      if (j < 0) break;
      ++idx[static_cast<std::size_t>(j)];
      for (int t = j + 1; t < size; ++t)
        idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
  throw NumericError("no state set reaches full rank");
}

struct BruteMscpResult {
  bool feasible = false;
  int sparsity = 0;
  SparsityPattern pattern;
  std::uint64_t patterns_checked = 0;
};

// Exact sparsest feasible l-input pattern. Patterns are enumerated by size
// and then lexicographically over row-major entry indices. Column
// relabelings are skipped: a pattern is visited only when its columns
// first appear in increasing order.
inline BruteMscpResult brute_mscp(const EigenStructure& es, int l,
                                  std::uint64_t budget = 5'000'000) {
  BruteMscpResult out;
  out.pattern = SparsityPattern(es.n, std::max(l, 0));
  if (l < es.k_max || l <= 0) return out;
  if (es.p() == 0) {
    out.feasible = true;
    return out;
  }
  const int e_total = es.n * l;
  const std::vector<int> reps = mode_representatives(es);

  const auto quick_reject = [&](const std::vector<int>& entries) {
    std::vector<int> rows;
    for (int e : entries)
      if (rows.empty() || rows.back() != e / l) rows.push_back(e / l);
    return !micp_feasible(es, rows);
  };

  std::vector<int> chosen;
  bool done = false;
  const auto visit = [&](auto&& self, int start, int max_col, int remaining)
      -> void {
    if (done) return;
    if (remaining == 0) {
      if (++out.patterns_checked > budget)
        throw BudgetError("pattern enumeration exceeded " +
                          std::to_string(budget) + " candidates");
      if (quick_reject(chosen)) return;
      SparsityPattern p(es.n, l);
      for (int e : chosen) p.insert(e / l, e % l);
      if (pattern_feasible(es, p).feasible) {
        out.feasible = true;
        out.sparsity = static_cast<int>(chosen.size());
        out.pattern = p;
        done = true;
      }
      return;
    }
    for (int e = start; e <= e_total - remaining; ++e) {
      const int c = e % l;
      if (c > max_col + 1) continue;
      chosen.push_back(e);
      self(self, e + 1, std::max(max_col, c), remaining - 1);
      chosen.pop_back();
      if (done) return;
    }
  };
  for (int size = es.k_max; size <= e_total && !done; ++size)
    visit(visit, 0, -1, size);
  return out;
}

}  // namespace ctrlsparse
