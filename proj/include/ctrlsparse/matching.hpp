#pragma once

#include <limits>
#include <queue>
#include <vector>

namespace ctrlsparse {

// Maximum cardinality bipartite matching (Hopcroft-Karp). Left vertices
// 0..n_left-1 carry sorted adjacency lists into 0..n_right-1.
struct BipartiteMatching {
  std::vector<int> mate_left;   // -1 when unmatched
  std::vector<int> mate_right;  // -1 when unmatched
  int size = 0;
};

inline BipartiteMatching hopcroft_karp(
    const std::vector<std::vector<int>>& adj, int n_right) {
  const int n_left = static_cast<int>(adj.size());
  BipartiteMatching m;
  m.mate_left.assign(static_cast<std::size_t>(n_left), -1);
  m.mate_right.assign(static_cast<std::size_t>(n_right), -1);
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n_left));

  const auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int u = 0; u < n_left; ++u) {
      if (m.mate_left[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] = 0;
        q.push(u);
      } else {
        dist[static_cast<std::size_t>(u)] = kInf;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        const int w = m.mate_right[static_cast<std::size_t>(v)];
        if (w < 0) {
          found = true;
        } else if (dist[static_cast<std::size_t>(w)] == kInf) {
          dist[static_cast<std::size_t>(w)] =
              dist[static_cast<std::size_t>(u)] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> it(static_cast<std::size_t>(n_left));
  const auto dfs = [&](auto&& self, int u) -> bool {
    auto& pos = it[static_cast<std::size_t>(u)];
    const auto& nbrs = adj[static_cast<std::size_t>(u)];
    for (; pos < nbrs.size(); ++pos) {
      const int v = nbrs[pos];
      const int w = m.mate_right[static_cast<std::size_t>(v)];
      if (w < 0 || (dist[static_cast<std::size_t>(w)] ==
                        dist[static_cast<std::size_t>(u)] + 1 &&
                    self(self, w))) {
        m.mate_left[static_cast<std::size_t>(u)] = v;
        m.mate_right[static_cast<std::size_t>(v)] = u;
        ++pos;
        return true;
      }
    }
    dist[static_cast<std::size_t>(u)] = kInf;
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < n_left; ++u)
      if (m.mate_left[static_cast<std::size_t>(u)] < 0 && dfs(dfs, u))
        ++m.size;
  }
  return m;
}

}  // namespace ctrlsparse
