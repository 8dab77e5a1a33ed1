#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/generators.hpp"
#include "ctrlsparse/gramian.hpp"
#include "ctrlsparse/macp.hpp"
#include "ctrlsparse/mscp.hpp"
#include "ctrlsparse/oracle.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse {

enum class GeneratorKind { scale_free, jordan };

inline const char* to_string(GeneratorKind g) {
  return g == GeneratorKind::scale_free ? "scale_free" : "jordan";
}

struct BenchConfig {
  GeneratorKind generator = GeneratorKind::scale_free;
  std::vector<int> sizes;
  int trials = 1;
  int k_max = 3;                   // jordan only
  double density = 0.5;            // jordan only
  double avg_degree_coeff = 0.5;   // scale_free only
  int l = 0;                       // 0: use the instance's k_max
  std::uint64_t seed = 1;
  // Any of greedy_macp, gramian_greedy, simple_greedy, two_stage,
  // brute_macp, brute_mscp.
  std::vector<std::string> algorithms;
  std::string output_path;         // empty: no file
  int threads = 0;                 // 0: CTRLSPARSE_THREADS or 1
  ToleranceConfig tol;
};

struct BenchRecord {
  std::string generator;
  int n = 0;
  int trial = 0;
  std::string algorithm;
  int result = -1;  // cardinality or sparsity; -1 on error
  std::string error;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

inline int concurrency_limit(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CTRLSPARSE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

inline void write_bench_csv(std::ostream& os,
                            const std::vector<BenchRecord>& records) {
  os << "generator,n,trial,algorithm,result,seconds,seed\n";
  for (const auto& r : records) {
    os << r.generator << ',' << r.n << ',' << r.trial << ',' << r.algorithm
       << ',';
    if (r.result < 0)
      os << "error";
    else
      os << r.result;
    os << ',' << r.seconds << ',' << r.seed << '\n';
  }
}

namespace detail {

inline StateMatrix bench_instance(const BenchConfig& cfg, int n,
                                  std::uint64_t seed) {
  if (cfg.generator == GeneratorKind::scale_free)
    return stabilize(gen_scale_free(n, cfg.avg_degree_coeff, seed));
  return gen_jordan(n, std::min(cfg.k_max, n), cfg.density, seed);
}

inline int run_algorithm(const std::string& algo, const StateMatrix& a, int l,
                         const ToleranceConfig& tol) {
  if (algo == "gramian_greedy") {
    const auto sel = gramian_greedy_macp(a, tol);
    return static_cast<int>(sel.chosen.size());
  }
  const EigenStructure es = compute_eigenstructure(a, tol);
  if (algo == "greedy_macp")
    return static_cast<int>(greedy_macp(es).chosen.size());
  if (algo == "simple_greedy")
    return static_cast<int>(simple_greedy_mscp(es, l).pattern.nnz());
  if (algo == "two_stage")
    return static_cast<int>(two_stage_mscp(es, l).pattern.nnz());
  if (algo == "brute_macp") return brute_macp(es).size;
  if (algo == "brute_mscp") {
    const auto r = brute_mscp(es, l);
    if (!r.feasible) throw InfeasibleError("no feasible pattern");
    return r.sparsity;
  }
  throw InputError("unknown algorithm '" + algo + "'");
}

}  // namespace detail

// Runs every configured algorithm on every (size, trial) instance. Trial
// instances are seeded from (seed, n, trial) and may run concurrently;
// records come back ordered by size, trial and algorithm.
inline std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
  if (cfg.sizes.empty()) throw InputError("benchmark needs at least one size");
  if (cfg.trials < 1) throw InputError("benchmark needs trials >= 1");
  for (int n : cfg.sizes)
    if (n < 1) throw InputError("benchmark sizes must be positive");
  static const std::vector<std::string> known = {
      "greedy_macp", "gramian_greedy", "simple_greedy",
      "two_stage",   "brute_macp",     "brute_mscp"};
  for (const auto& a : cfg.algorithms)
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw InputError("unknown algorithm '" + a + "'");

  struct Job {
    int n;
    int trial;
  };
  std::vector<Job> jobs;
  for (int n : cfg.sizes)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({n, t});

  const std::size_t per_job = cfg.algorithms.size();
  std::vector<BenchRecord> records(jobs.size() * per_job);
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto [n, trial] = jobs[j];
      const std::uint64_t seed = trial_seed(cfg.seed, n, trial);
      StateMatrix a;
      std::string gen_error;
      int l = cfg.l;
      try {
        a = detail::bench_instance(cfg, n, seed);
        if (l <= 0) l = compute_eigenstructure(a, cfg.tol).k_max;
      } catch (const std::exception& e) {
        gen_error = e.what();
      }
      for (std::size_t k = 0; k < per_job; ++k) {
        BenchRecord& r = records[j * per_job + k];
        r.generator = to_string(cfg.generator);
        r.n = n;
        r.trial = trial;
        r.algorithm = cfg.algorithms[k];
        r.seed = seed;
        if (!gen_error.empty()) {
          r.error = gen_error;
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
          r.result = detail::run_algorithm(r.algorithm, a, l, cfg.tol);
        } catch (const std::exception& e) {
          r.result = -1;
          r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      }
    }
  };

  const int threads = std::max(
      1, std::min<int>(concurrency_limit(cfg.threads),
                       static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!cfg.output_path.empty()) {
    std::ofstream os(cfg.output_path);
    if (!os) throw InputError("cannot write " + cfg.output_path);
    write_bench_csv(os, records);
  }
  return records;
}

}  // namespace ctrlsparse
