#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

// Seeded generator with distribution code that does not depend on the
// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of one benchmark trial.
inline std::uint64_t trial_seed(std::uint64_t seed, int n, int trial) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

// Preferential attachment network. Every new node links to
// m = round(avg_degree_coeff * ln n) (clamped to [1, n-1]) distinct
// existing nodes chosen with probability proportional to degree, starting
// from a single link between nodes 1 and 2. Each link becomes a pair of
// opposite arcs with independent weights in (0, 1]; entry (i, j) is the
// weight of the arc from j to i.
inline StateMatrix gen_scale_free(int n, double avg_degree_coeff,
                                  std::uint64_t seed) {
  if (n < 2) throw InputError("scale-free generator needs n >= 2");
  if (!(avg_degree_coeff > 0.0))
    throw InputError("average degree coefficient must be positive");
  Rng rng(seed);
  const int m = std::clamp(
      static_cast<int>(std::lround(avg_degree_coeff * std::log(n))), 1, n - 1);
  StateMatrix a = StateMatrix::Zero(n, n);
  std::vector<int> ends;  // each link contributes both endpoints
  const auto link = [&](int u, int v) {
    a(u, v) = 1.0 - rng.uniform();
    a(v, u) = 1.0 - rng.uniform();
    ends.push_back(u);
    ends.push_back(v);
  };
  link(1, 0);
  for (int v = 2; v < n; ++v) {
    const int k = std::min(m, v);
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < k) {
      const int u = ends[static_cast<std::size_t>(rng.below(ends.size()))];
      if (std::find(targets.begin(), targets.end(), u) == targets.end())
        targets.push_back(u);
    }
    for (int u : targets) link(v, u);
  }
  return a;
}

struct JordanSystem {
  StateMatrix a;
  std::vector<int> multiplicities;  // planted k_i for eigenvalue i + 1
  Eigen::MatrixXd x;                // A = X J X^{-1}
};

// A = X J X^{-1} with J diagonal. Eigenvalue i (i = 1..p) is repeated k_i
// times, k_i uniform in {1..k_max}, drawn until they sum to at least n;
// the last is truncated. X has the given fraction of random off-diagonal
// nonzeros in [-1, 1] and diagonal 1 + (row absolute sum); draws with
// cond(X) > 1e6 are repeated.
inline JordanSystem gen_jordan_system(int n, int k_max, double density,
                                      std::uint64_t seed) {
  if (n < 1) throw InputError("Jordan generator needs n >= 1");
  if (k_max < 1 || k_max > n) throw InputError("need 1 <= k_max <= n");
  if (!(density > 0.0 && density <= 1.0))
    throw InputError("density must lie in (0, 1]");
  Rng rng(seed);
  JordanSystem out;
  int total = 0;
  while (total < n) {
    int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k_max)));
    k = std::min(k, n - total);
    out.multiplicities.push_back(k);
    total += k;
  }
  Eigen::VectorXd diag(n);
  int pos = 0;
  for (std::size_t i = 0; i < out.multiplicities.size(); ++i)
    for (int j = 0; j < out.multiplicities[i]; ++j)
      diag(pos++) = static_cast<double>(i + 1);

  for (int attempt = 0;; ++attempt) {
    if (attempt == 100)
      throw NumericError("could not draw a well-conditioned eigenvector matrix");
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (r != c && rng.uniform() < density) x(r, c) = rng.uniform(-1.0, 1.0);
    for (int r = 0; r < n; ++r) x(r, r) = 1.0 + x.row(r).cwiseAbs().sum();
    const Eigen::VectorXd s = singular_values(x);
    if (s(0) / s(s.size() - 1) > 1e6) continue;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(x);
    out.x = x;
    out.a = x * diag.asDiagonal() * lu.inverse();
    return out;
  }
}

inline StateMatrix gen_jordan(int n, int k_max, double density,
                              std::uint64_t seed) {
  return gen_jordan_system(n, k_max, density, seed).a;
}

}  // namespace ctrlsparse
