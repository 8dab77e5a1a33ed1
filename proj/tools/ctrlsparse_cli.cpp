// ctrlsparse command line tool.
//
// Exit codes: 0 success (or feasible), 1 infeasible, 2 bad input or a
// computation that refused to run (numeric failure, enumeration budget).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctrlsparse/ctrlsparse.hpp"
#include "ctrlsparse/io.hpp"

using namespace ctrlsparse;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kInputError = 2;

struct Globals {
  double tol = 0.0;
  double det_tol = 1e-10;
  std::uint64_t seed = 1;
  std::string format = "mm";
  std::string output;
};

ToleranceConfig tolerance(const Globals& g) {
  ToleranceConfig t;
  t.rank_rel_tol = g.tol;
  t.det_rel_tol = g.det_tol;
  return t;
}

std::vector<int> to_zero_based(const std::vector<int>& v, int n,
                               const std::string& what) {
  std::vector<int> out;
  for (int x : v) {
    if (x < 1 || x > n)
      throw DimensionError(what + " index " + std::to_string(x) +
                           " outside 1.." + std::to_string(n));
    out.push_back(x - 1);
  }
  return out;
}

// Sink for the primary output: the -o file when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Globals& g, const json& doc) {
  Output out(g.output);
  out.stream() << doc.dump(2) << '\n';
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m,
                  const std::string& format) {
  if (format == "csv")
    io::write_csv(os, m);
  else if (format == "json")
    os << io::matrix_to_json(m).dump(2) << '\n';
  else
    io::write_matrix_market(os, m);
}

struct SystemInput {
  std::string path;
  StateMatrix a;
  EigenStructure es;
};

SystemInput load_system(const std::string& path, const Globals& g) {
  SystemInput s;
  s.path = path;
  s.a = io::read_matrix_file(path);
  if (s.a.rows() != s.a.cols())
    throw DimensionError("state matrix in '" + path + "' is " +
                         std::to_string(s.a.rows()) + " x " +
                         std::to_string(s.a.cols()) + ", expected square");
  s.es = compute_eigenstructure(s.a, tolerance(g));
  return s;
}

std::optional<AccessibleSet> accessible(const std::vector<int>& forbidden,
                                        int n) {
  if (forbidden.empty()) return std::nullopt;
  return accessible_from_forbidden(n, to_zero_based(forbidden, n, "forbidden"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Input sparsity analysis and actuator selection for x' = Ax + Bu"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol,
                 "Relative singular value cutoff for ranks (0: 64 n eps)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--det-tol", g.det_tol, "Determinant test cutoff")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Seed for generators and benchmarks");
  app.add_option("--format", g.format, "Matrix output format")
      ->check(CLI::IsMember({"mm", "csv", "json"}));
  app.add_option("-o,--output", g.output, "Write the primary output here");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Eigenstructure of A");
  std::string a_path, pattern_path, dot_path;
  int inputs = 0;
  analyze->add_option("A", a_path, "State matrix (MatrixMarket or CSV)")->required();
  analyze->add_option("--pattern", pattern_path, "Pattern for the ISM digraph");
  analyze->add_option("--dot", dot_path, "Write the ISM digraph (Graphviz)");
  analyze->add_option("--inputs", inputs, "Report equivalence conditions for l inputs");

  // check
  auto* check = app.add_subcommand("check", "Is a sparsity pattern feasible?");
  std::vector<int> forbidden;
  bool explain = false;
  check->add_option("A", a_path)->required();
  check->add_option("pattern", pattern_path, "Pattern (JSON or 'row col' lines)")->required();
  check->add_option("--inputs", inputs, "Input count for coordinate patterns");
  check->add_option("--forbidden", forbidden, "States inputs may not touch")->delimiter(',');
  check->add_flag("--explain", explain, "Include per-mode witnesses");

  // construct
  auto* construct = app.add_subcommand("construct", "Realize a feasible pattern");
  bool trace = false;
  construct->add_option("A", a_path)->required();
  construct->add_option("pattern", pattern_path)->required();
  construct->add_option("--inputs", inputs, "Input count for coordinate patterns");
  construct->add_flag("--trace", trace, "Emit B with the construction trace as JSON");

  // macp
  auto* macp = app.add_subcommand("macp", "Greedy minimal actuated state set");
  std::string baseline;
  macp->add_option("A", a_path)->required();
  macp->add_option("--forbidden", forbidden)->delimiter(',');
  macp->add_option("--baseline", baseline, "Use a baseline selector")
      ->check(CLI::IsMember({"gramian"}));
  macp->add_flag("--trace", trace, "Include marginal gains");

  // mscp
  auto* mscp = app.add_subcommand("mscp", "Sparse pattern with l inputs");
  std::string algo = "two-stage";
  bool certify = false;
  bool realize = false;
  mscp->add_option("A", a_path)->required();
  mscp->add_option("--inputs", inputs, "Number of inputs l")->required();
  mscp->add_option("--algo", algo)->check(CLI::IsMember({"simple", "two-stage"}));
  mscp->add_flag("--certify", certify, "Emit the approximation bound certificate");
  mscp->add_flag("--realize", realize, "Also construct a numeric B");

  // micp
  auto* micp = app.add_subcommand("micp", "Minimal inputs avoiding forbidden states");
  micp->add_option("A", a_path)->required();
  micp->add_option("--forbidden", forbidden)->delimiter(',');

  // gen
  auto* gen = app.add_subcommand("gen", "Random state matrices");
  std::string kind;
  int n = 0;
  int kmax = 3;
  double density = 0.5;
  double coeff = 0.5;
  bool stable = false;
  gen->add_option("kind", kind)->required()->check(CLI::IsMember({"scale-free", "jordan"}));
  gen->add_option("-n", n, "State dimension")->required();
  gen->add_option("--kmax", kmax, "Largest multiplicity (jordan)");
  gen->add_option("--density", density, "Off-diagonal density of X (jordan)");
  gen->add_option("--coeff", coeff, "Links per node over ln n (scale-free)");
  gen->add_flag("--stabilize", stable, "Shift the spectrum into the left half plane");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark ensembles to CSV");
  BenchConfig cfg;
  std::string gen_kind = "scale-free";
  std::vector<std::string> algos;
  bench->add_option("--generator", gen_kind)->check(CLI::IsMember({"scale-free", "jordan"}));
  bench->add_option("--sizes", cfg.sizes, "State dimensions")->delimiter(',')->required();
  bench->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  bench->add_option("--kmax", cfg.k_max);
  bench->add_option("--density", cfg.density);
  bench->add_option("--coeff", cfg.avg_degree_coeff);
  bench->add_option("--inputs", cfg.l, "Inputs for pattern algorithms (0: k_max)");
  bench->add_option("--algos", algos, "Algorithms to run")->delimiter(',')->required();
  bench->add_option("--threads", cfg.threads, "Worker threads (0: CTRLSPARSE_THREADS or 1)");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact optima by enumeration");
  int oracle_inputs = 0;
  std::uint64_t budget = 5'000'000;
  oracle->add_option("A", a_path)->required();
  oracle->add_option("--forbidden", forbidden)->delimiter(',');
  oracle->add_option("--inputs", oracle_inputs, "Also solve the l-input problem");
  oracle->add_option("--budget", budget, "Pattern enumeration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  const ToleranceConfig tol = tolerance(g);
  try {
    if (*analyze) {
      const auto sys = load_system(a_path, g);
      json doc = io::eigenstructure_to_json(sys.es);
      if (inputs > 0) doc["equivalence"] = to_string(equivalence_sufficient(sys.es, inputs));
      if (!pattern_path.empty()) {
        const auto p = io::read_pattern_file(pattern_path, sys.es.n, inputs);
        const auto ism = build_ism(sys.es, p);
        doc["ism"] = {{"input_state_arcs", ism.edges_us.size()},
                      {"state_mode_arcs", ism.edges_sm.size()},
                      {"mode_vertices", ism.mode_vertices.size()}};
        if (!dot_path.empty()) {
          std::ofstream dot(dot_path);
          if (!dot) throw InputError("cannot write '" + dot_path + "'");
          dot << ism.to_dot();
        }
      } else if (!dot_path.empty()) {
        throw InputError("--dot needs --pattern");
      }
      emit_json(g, doc);
      return kOk;
    }

    if (*check) {
      const auto sys = load_system(a_path, g);
      const auto p = io::read_pattern_file(pattern_path, sys.es.n, inputs);
      json doc;
      std::vector<int> touched;
      for (int s : to_zero_based(forbidden, sys.es.n, "forbidden"))
        for (int r : p.active_rows())
          if (r == s) touched.push_back(s);
      const auto rep = pattern_feasible(sys.es, p);
      const bool ok = rep.feasible && touched.empty();
      doc["feasible"] = ok;
      doc["independently_matched"] = rep.feasible;
      doc["nnz"] = p.nnz();
      if (rep.failing_mode) doc["failing_mode"] = *rep.failing_mode + 1;
      if (!touched.empty()) doc["forbidden_rows_used"] = io::states_to_json(touched);
      if (explain) {
        json ws = json::array();
        for (const auto& w : rep.witnesses) ws.push_back(io::witness_to_json(w));
        doc["witnesses"] = ws;
      }
      emit_json(g, doc);
      return ok ? kOk : kInfeasible;
    }

    if (*construct) {
      const auto sys = load_system(a_path, g);
      const auto p = io::read_pattern_file(pattern_path, sys.es.n, inputs);
      const auto tr = construct_input_matrix(sys.es, p, tol);
      Output out(g.output);
      if (trace) {
        json doc = io::realization_trace_to_json(tr);
        doc["controllable"] = is_controllable(sys.es, tr.b, tol);
        out.stream() << doc.dump(2) << '\n';
      } else {
        write_matrix(out.stream(), tr.b, g.format);
      }
      return kOk;
    }

    if (*macp) {
      const auto sys = load_system(a_path, g);
      json doc;
      std::vector<int> chosen;
      if (baseline == "gramian") {
        if (!forbidden.empty())
          throw InputError("--baseline gramian does not support --forbidden");
        const StateMatrix shifted = stabilize(sys.a);
        const auto sel = gramian_greedy_macp(shifted, tol);
        chosen = sel.chosen;
        doc["baseline"] = "gramian";
        doc["stabilized"] = !(shifted == sys.a);
        doc["full_rank"] = sel.full_rank;
        if (trace) doc["gramian_ranks"] = sel.ranks;
      } else {
        const auto tr = greedy_macp(sys.es, accessible(forbidden, sys.es.n));
        chosen = tr.chosen;
        if (trace) doc["gains"] = tr.gains;
      }
      doc["states"] = io::states_to_json(chosen);
      doc["size"] = chosen.size();
      const auto real = construct_input_matrix(
          sys.es, SparsityPattern::diagonal(sys.es.n, chosen), tol);
      doc["B"] = io::matrix_to_json(real.b);
      doc["controllable"] = is_controllable(sys.es, real.b, tol);
      emit_json(g, doc);
      return kOk;
    }

    if (*mscp) {
      const auto sys = load_system(a_path, g);
      json doc;
      SparsityPattern p;
      if (algo == "simple") {
        p = simple_greedy_mscp(sys.es, inputs).pattern;
      } else {
        const auto r = two_stage_mscp(sys.es, inputs);
        p = r.pattern;
        if (certify) doc["certificate"] = io::certificate_to_json(r.certificate);
        json hs = json::array();
        for (const auto& h : r.h_sets) hs.push_back(io::states_to_json(h));
        doc["h_sets"] = hs;
      }
      if (certify && algo == "simple")
        doc["certificate"] = nullptr;  // no guarantee for the simple greedy
      doc["algorithm"] = algo;
      doc["pattern"] = io::pattern_to_json(p);
      doc["sparsity"] = p.nnz();
      if (realize) {
        const auto tr = construct_input_matrix(sys.es, p, tol);
        doc["B"] = io::matrix_to_json(tr.b);
        doc["controllable"] = is_controllable(sys.es, tr.b, tol);
      }
      emit_json(g, doc);
      return kOk;
    }

    if (*micp) {
      const auto sys = load_system(a_path, g);
      const AccessibleSet xa = accessible_from_forbidden(
          sys.es.n, to_zero_based(forbidden, sys.es.n, "forbidden"));
      const int bad = micp_violating_mode(sys.es, xa);
      if (bad >= 0) {
        emit_json(g, {{"feasible", false}, {"failing_mode", bad + 1}});
        return kInfeasible;
      }
      const auto p = micp_min_input_pattern(sys.es, xa);
      const auto tr = construct_input_matrix(sys.es, p, tol);
      emit_json(g, {{"feasible", true},
                    {"inputs", p.l()},
                    {"pattern", io::pattern_to_json(p)},
                    {"B", io::matrix_to_json(tr.b)},
                    {"controllable", is_controllable(sys.es, tr.b, tol)}});
      return kOk;
    }

    if (*gen) {
      StateMatrix a = kind == "jordan" ? gen_jordan(n, kmax, density, g.seed)
                                       : gen_scale_free(n, coeff, g.seed);
      if (stable) a = stabilize(a);
      Output out(g.output);
      write_matrix(out.stream(), a, g.format);
      return kOk;
    }

    if (*bench) {
      cfg.generator = gen_kind == "jordan" ? GeneratorKind::jordan
                                           : GeneratorKind::scale_free;
      cfg.seed = g.seed;
      cfg.algorithms = algos;
      cfg.tol = tol;
      const auto records = run_benchmark(cfg);
      Output out(g.output);
      write_bench_csv(out.stream(), records);
      return kOk;
    }

    if (*oracle) {
      const auto sys = load_system(a_path, g);
      json doc;
      const auto m = brute_macp(sys.es, accessible(forbidden, sys.es.n));
      doc["macp"] = {{"size", m.size}, {"states", io::states_to_json(m.states)}};
      if (oracle_inputs > 0) {
        const auto r = brute_mscp(sys.es, oracle_inputs, budget);
        doc["mscp"] = {{"inputs", oracle_inputs},
                       {"feasible", r.feasible},
                       {"patterns_checked", r.patterns_checked}};
        if (r.feasible) {
          doc["mscp"]["sparsity"] = r.sparsity;
          doc["mscp"]["pattern"] = io::pattern_to_json(r.pattern);
        }
      }
      emit_json(g, doc);
      return kOk;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
