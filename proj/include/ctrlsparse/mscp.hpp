#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/feasibility.hpp"
#include "ctrlsparse/macp.hpp"
#include "ctrlsparse/matroid.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/realization.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

// g(pattern) = sum over representatives of the maximum number of
// independently matched mode vertices.
inline int g_value(const EigenStructure& es, const SparsityPattern& pattern) {
  if (pattern.n() != es.n)
    throw DimensionError("pattern rows do not match the state dimension");
  const TransversalMatroid m2(pattern);
  int total = 0;
  for (int i : mode_representatives(es))
    total += matroid_intersection(LinearMatroid::of_mode(es, i), m2).size;
  return total;
}

struct PatternTrace {
  std::vector<std::pair<int, int>> chosen;  // entries in selection order
  std::vector<int> gains;
  int value = 0;
};

struct PatternSelection {
  SparsityPattern pattern;
  PatternTrace trace;
};

// Adds, one at a time, the absent entry with the largest gain of g until
// the pattern is feasible. Ties go to the lexicographically first entry.
inline PatternSelection simple_greedy_mscp(const EigenStructure& es, int l) {
  if (l < es.k_max)
    throw InfeasibleError("l = " + std::to_string(l) +
                          " is below the largest geometric multiplicity " +
                          std::to_string(es.k_max));
  const std::vector<int> reps = mode_representatives(es);
  const int target = representative_total(es);

  struct ModeState {
    int mode;
    int k;
    LinearMatroid m1;
    std::vector<int> current;
    std::vector<int> mate;  // input matched to current[j]
  };
  std::vector<ModeState> st;
  for (int i : reps)
    st.push_back({i, es.modes[static_cast<std::size_t>(i)].multiplicity,
                  LinearMatroid::of_mode(es, i), {}, {}});

  PatternSelection out{SparsityPattern(es.n, l), {}};
  while (out.trace.value < target) {
    // Per mode: states outside the current set that extend it linearly, and
    // inputs already used by its matching.
    std::vector<std::vector<char>> extends(st.size());
    std::vector<std::vector<char>> used(st.size());
    for (std::size_t m = 0; m < st.size(); ++m) {
      auto& s = st[m];
      if (static_cast<int>(s.current.size()) == s.k) continue;
      extends[m].assign(static_cast<std::size_t>(es.n), 0);
      for (int r = 0; r < es.n; ++r) {
        if (s.m1.is_loop(r)) continue;
        if (std::binary_search(s.current.begin(), s.current.end(), r)) continue;
        std::vector<int> t = s.current;
        t.push_back(r);
        extends[m][static_cast<std::size_t>(r)] = s.m1.independent(t);
      }
      used[m].assign(static_cast<std::size_t>(l), 0);
      for (int c : s.mate) used[m][static_cast<std::size_t>(c)] = 1;
    }

    int best_gain = 0;
    std::pair<int, int> best{-1, -1};
    for (int r = 0; r < es.n; ++r) {
      for (int c = 0; c < l; ++c) {
        if (out.pattern.contains(r, c)) continue;
        int gain = 0;
        SparsityPattern trial = out.pattern;
        trial.insert(r, c);
        std::optional<TransversalMatroid> m2;
        for (std::size_t m = 0; m < st.size(); ++m) {
          const auto& s = st[m];
          if (static_cast<int>(s.current.size()) == s.k) continue;
          if (s.m1.is_loop(r)) continue;
          if (extends[m][static_cast<std::size_t>(r)] &&
              !used[m][static_cast<std::size_t>(c)]) {
            ++gain;
            continue;
          }
          // Any larger common independent set must use the new entry.
          if (!m2) m2.emplace(trial);
          if (matroid_intersection(s.m1, *m2, s.current).size >
              static_cast<int>(s.current.size()))
            ++gain;
        }
        if (gain > best_gain) {
          best_gain = gain;
          best = {r, c};
        }
      }
    }
    if (best_gain == 0)
      throw NumericError("simple greedy stalled at g = " +
                         std::to_string(out.trace.value));
    out.pattern.insert(best.first, best.second);
    const TransversalMatroid m2(out.pattern);
    int value = 0;
    for (auto& s : st) {
      if (static_cast<int>(s.current.size()) < s.k) {
        const auto w = matroid_intersection(s.m1, m2, s.current);
        s.current = w.h;
        s.mate.clear();
        for (const auto& e : w.matching) s.mate.push_back(e.second);
      }
      value += static_cast<int>(s.current.size());
    }
    out.trace.chosen.push_back(best);
    out.trace.gains.push_back(value - out.trace.value);
    out.trace.value = value;
  }
  return out;
}

// Union of cliques over the h-sets.
struct AuxiliaryGraph {
  std::vector<int> vertices;                   // sorted states
  std::map<int, std::set<int>> adjacency;      // simple, undirected
  std::map<int, std::vector<int>> origin;      // vertex -> h-set indices
  std::vector<std::vector<int>> h_sets;

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& [v, nbrs] : adjacency) e += nbrs.size();
    return e / 2;
  }
};

inline AuxiliaryGraph build_auxiliary_graph(
    const std::vector<std::vector<int>>& h_sets) {
  AuxiliaryGraph g;
  g.h_sets = h_sets;
  std::set<int> verts;
  for (std::size_t i = 0; i < h_sets.size(); ++i) {
    for (int v : h_sets[i]) {
      verts.insert(v);
      g.adjacency[v];
      auto& o = g.origin[v];
      if (o.empty() || o.back() != static_cast<int>(i))
        o.push_back(static_cast<int>(i));
      for (int w : h_sets[i])
        if (w != v) g.adjacency[v].insert(w);
    }
  }
  g.vertices.assign(verts.begin(), verts.end());
  return g;
}

struct Coloring {
  std::map<int, std::vector<int>> colors;  // vertex -> sorted colors, 0-based
  int used_colors = 0;
  std::vector<int> order;                  // vertices in coloring order
  std::vector<int> multi_colored;

  std::size_t assignments() const {
    std::size_t total = 0;
    for (const auto& [v, c] : colors) total += c.size();
    return total;
  }
};

// Saturation-driven coloring with l colors. The uncolored vertex seeing the
// most distinct colors among its residual neighbours goes next (lowest
// index on ties). If it sees all l colors it receives k*_max colors, the
// size of the largest h-set containing it, and loses its residual edges.
// Otherwise it takes the lowest used color not blocked by a neighbour, or
// else the lowest unused color.
inline Coloring dynamic_coloring(const AuxiliaryGraph& g, int l) {
  int k_max = 0;
  for (const auto& h : g.h_sets)
    k_max = std::max(k_max, static_cast<int>(h.size()));
  if (l < k_max)
    throw InfeasibleError("l = " + std::to_string(l) +
                          " is below the largest h-set size " +
                          std::to_string(k_max));
  auto residual = g.adjacency;
  Coloring col;
  std::set<int> uncolored(g.vertices.begin(), g.vertices.end());

  const auto neighbour_colors = [&](int v) {
    std::set<int> seen;
    for (int w : residual[v]) {
      auto it = col.colors.find(w);
      if (it != col.colors.end())
        seen.insert(it->second.begin(), it->second.end());
    }
    return seen;
  };

  while (!uncolored.empty()) {
    int pick = -1;
    int pick_sat = -1;
    for (int v : uncolored) {
      const int sat = static_cast<int>(neighbour_colors(v).size());
      if (sat > pick_sat) {
        pick_sat = sat;
        pick = v;
      }
    }
    uncolored.erase(pick);
    col.order.push_back(pick);
    if (pick_sat >= l) {
      int kstar = 0;
      for (int i : g.origin.at(pick))
        kstar = std::max(kstar, static_cast<int>(g.h_sets[static_cast<std::size_t>(i)].size()));
      std::vector<int> cs;
      for (int c = 0; c < kstar; ++c) cs.push_back(c);
      col.colors[pick] = cs;
      col.multi_colored.push_back(pick);
      for (int w : residual[pick]) residual[w].erase(pick);
      residual[pick].clear();
    } else {
      const std::set<int> blocked = neighbour_colors(pick);
      int chosen = -1;
      for (int c = 0; c < col.used_colors; ++c)
        if (!blocked.count(c)) {
          chosen = c;
          break;
        }
      if (chosen < 0) chosen = col.used_colors;
      col.colors[pick] = {chosen};
    }
    for (int c : col.colors[pick]) col.used_colors = std::max(col.used_colors, c + 1);
  }
  return col;
}

// Each h-set can pick one color per vertex, all distinct.
inline bool has_distinct_representatives(const AuxiliaryGraph& g,
                                         const Coloring& col, int l) {
  for (const auto& h : g.h_sets) {
    std::vector<std::vector<int>> adj;
    for (int v : h) adj.push_back(col.colors.at(v));
    if (hopcroft_karp(adj, l).size != static_cast<int>(h.size())) return false;
  }
  return true;
}

struct BoundCertificate {
  // "second": (ln N + 1) * OPT, no multi-colored vertex.
  // "first":  k_max (ln N + 1) * OPT - (k_max - 1) l.
  std::string branch;
  int multi_colored = 0;
  int stage1_size = 0;
  int sparsity = 0;
  int total_multiplicity = 0;  // N
  int k_max = 0;
  int l = 0;
  bool consistent = false;

  // Bound on sparsity for a given optimum of the l-input problem.
  double bound_for(double optimum) const {
    const double factor = std::log(static_cast<double>(
                              std::max(total_multiplicity, 1))) + 1.0;
    if (branch == "second") return factor * optimum;
    return k_max * factor * optimum - (k_max - 1.0) * l;
  }
};

struct TwoStageResult {
  SparsityPattern pattern;
  SelectionTrace stage1;
  std::vector<std::vector<int>> h_sets;  // one per representative
  AuxiliaryGraph graph;
  Coloring coloring;
  BoundCertificate certificate;
};

// Stage 1 selects actuated states greedily and extracts h_i by the rank
// increase scan in selection order; stage 2 colors the clique union; stage
// 3 places a star at (vertex, color) for every assigned color.
inline TwoStageResult two_stage_mscp(const EigenStructure& es, int l) {
  if (l < es.k_max)
    throw InfeasibleError("l = " + std::to_string(l) +
                          " is below the largest geometric multiplicity " +
                          std::to_string(es.k_max));
  TwoStageResult out;
  out.stage1 = greedy_macp(es);
  for (int i : mode_representatives(es))
    out.h_sets.push_back(extract_h_set(es, i, out.stage1.chosen));
  out.graph = build_auxiliary_graph(out.h_sets);
  out.coloring = dynamic_coloring(out.graph, l);
  out.pattern = SparsityPattern(es.n, l);
  for (const auto& [v, cs] : out.coloring.colors)
    for (int c : cs) out.pattern.insert(v, c);

  auto& cert = out.certificate;
  cert.multi_colored = static_cast<int>(out.coloring.multi_colored.size());
  cert.branch = cert.multi_colored ? "first" : "second";
  cert.stage1_size = static_cast<int>(out.stage1.chosen.size());
  cert.sparsity = static_cast<int>(out.pattern.nnz());
  cert.total_multiplicity = representative_total(es);
  cert.k_max = es.k_max;
  cert.l = l;
  cert.consistent =
      cert.multi_colored
          ? cert.sparsity <= es.k_max * (cert.stage1_size - l) + l
          : cert.sparsity == cert.stage1_size;
  if (!has_distinct_representatives(out.graph, out.coloring, l))
    throw NumericError("coloring lost its distinct representatives");
  return out;
}

enum class Equivalence { case_i, case_ii, case_iii, unknown };

inline const char* to_string(Equivalence e) {
  switch (e) {
    case Equivalence::case_i: return "case_i";
    case Equivalence::case_ii: return "case_ii";
    case Equivalence::case_iii: return "case_iii";
    default: return "unknown";
  }
}

// First of the sufficient conditions under which the minimal actuated
// state count equals the sparsest l-input pattern size.
inline Equivalence equivalence_sufficient(const EigenStructure& es, int l) {
  if (es.p() == 0 || l < es.k_max) return Equivalence::unknown;
  bool all_one = true;
  for (const auto& m : es.modes) all_one = all_one && m.multiplicity == 1;
  if (all_one) return Equivalence::case_i;

  const auto pairs = [](long k) { return k * (k - 1) / 2; };
  const std::vector<int> reps = mode_representatives(es);
  int at_max = 0;
  long others = 0;
  long all_pairs = 0;
  long total = 0;
  for (int i : reps) {
    const int k = es.modes[static_cast<std::size_t>(i)].multiplicity;
    total += k;
    all_pairs += pairs(k);
    if (k == es.k_max)
      ++at_max;
    else
      others += pairs(k);
  }
  if (at_max == 1 && others < es.k_max) return Equivalence::case_ii;
  if (l >= std::min(total, 1 + all_pairs)) return Equivalence::case_iii;
  return Equivalence::unknown;
}

}  // namespace ctrlsparse
