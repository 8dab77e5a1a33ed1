#pragma once

// File formats and JSON views. External indices are 1-based everywhere in
// this header; the library itself is 0-based.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/matroid.hpp"
#include "ctrlsparse/mscp.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/realization.hpp"
#include "ctrlsparse/spectral.hpp"

namespace ctrlsparse::io {

using nlohmann::json;

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         lower(s.substr(s.size() - suffix.size())) == suffix;
}

inline double parse_double(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    if (!std::isfinite(v)) throw InputError("non-finite value in " + where);
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("cannot parse number '" + tok + "' in " + where);
  }
}

inline long parse_index(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse integer '" + tok + "' in " + where);
  }
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

}  // namespace detail

// MatrixMarket: coordinate (real, integer, pattern) and array (real,
// integer), general / symmetric / skew-symmetric. Repeated coordinate
// entries are summed.
inline Eigen::MatrixXd read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty MatrixMarket input");
  const auto banner = detail::split_ws(detail::lower(line));
  if (banner.size() < 5 || banner[0] != "%%matrixmarket" ||
      banner[1] != "matrix")
    throw InputError("missing MatrixMarket banner");
  const std::string& layout = banner[2];
  const std::string& field = banner[3];
  const std::string& sym = banner[4];
  if (layout != "coordinate" && layout != "array")
    throw InputError("unsupported MatrixMarket layout '" + layout + "'");
  if (field != "real" && field != "integer" && field != "double" &&
      !(field == "pattern" && layout == "coordinate"))
    throw InputError("unsupported MatrixMarket field '" + field + "'");
  if (sym != "general" && sym != "symmetric" && sym != "skew-symmetric")
    throw InputError("unsupported MatrixMarket symmetry '" + sym + "'");

  const auto next_data = [&](std::string& out) {
    while (std::getline(in, out)) {
      const std::string t = detail::trim(out);
      if (t.empty() || t[0] == '%') continue;
      out = t;
      return true;
    }
    return false;
  };
  if (!next_data(line)) throw InputError("MatrixMarket size line missing");
  const auto size = detail::split_ws(line);
  const bool coord = layout == "coordinate";
  if (size.size() != (coord ? 3u : 2u))
    throw InputError("malformed MatrixMarket size line '" + line + "'");
  const long rows = detail::parse_index(size[0], "size line");
  const long cols = detail::parse_index(size[1], "size line");
  if (rows < 0 || cols < 0) throw InputError("negative MatrixMarket size");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  const double mirror = sym == "skew-symmetric" ? -1.0 : 1.0;
  if (sym != "general" && rows != cols)
    throw InputError("symmetric MatrixMarket matrix must be square");

  if (coord) {
    const long nnz = detail::parse_index(size[2], "size line");
    for (long k = 0; k < nnz; ++k) {
      if (!next_data(line))
        throw InputError("MatrixMarket file ends after " + std::to_string(k) +
                         " of " + std::to_string(nnz) + " entries");
      const auto tok = detail::split_ws(line);
      const std::size_t want = field == "pattern" ? 2u : 3u;
      if (tok.size() < want) throw InputError("malformed entry '" + line + "'");
      const long r = detail::parse_index(tok[0], "entry") - 1;
      const long c = detail::parse_index(tok[1], "entry") - 1;
      if (r < 0 || r >= rows || c < 0 || c >= cols)
        throw InputError("entry (" + tok[0] + "," + tok[1] + ") out of range");
      const double v =
          field == "pattern" ? 1.0 : detail::parse_double(tok[2], "entry");
      m(r, c) += v;
      if (sym != "general" && r != c) m(c, r) += mirror * v;
    }
  } else {
    for (long c = 0; c < cols; ++c) {
      const long r0 = sym == "general" ? 0 : (sym == "symmetric" ? c : c + 1);
      for (long r = r0; r < rows; ++r) {
        if (!next_data(line)) throw InputError("MatrixMarket array truncated");
        const double v = detail::parse_double(line, "array entry");
        m(r, c) = v;
        if (sym != "general" && r != c) m(c, r) = mirror * v;
      }
    }
  }
  return m;
}

inline void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& m,
                                bool coordinate = false) {
  os << std::setprecision(17);
  if (coordinate) {
    long nnz = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (m(r, c) != 0.0) ++nnz;
    os << "%%MatrixMarket matrix coordinate real general\n"
       << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (m(r, c) != 0.0) os << r + 1 << ' ' << c + 1 << ' ' << m(r, c) << '\n';
    return;
  }
  os << "%%MatrixMarket matrix array real general\n"
     << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) os << m(r, c) << '\n';
}

// Dense CSV: one row per line, comma separated. Blank lines and lines
// starting with '#' are skipped.
inline Eigen::MatrixXd read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(t);
    for (std::string cell; std::getline(ss, cell, ',');)
      row.push_back(detail::parse_double(detail::trim(cell),
                                         "CSV line " + std::to_string(lineno)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError("CSV line " + std::to_string(lineno) + " has " +
                       std::to_string(row.size()) + " values, expected " +
                       std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

inline void write_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      os << (c ? "," : "") << m(r, c);
    os << '\n';
  }
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Format chosen by extension (.mtx/.mm, .csv) or, failing that, by a
// MatrixMarket banner.
inline Eigen::MatrixXd read_matrix_file(const std::string& path) {
  const std::string text = slurp(path);
  std::istringstream in(text);
  const bool mm = detail::ends_with(path, ".mtx") ||
                  detail::ends_with(path, ".mm") ||
                  detail::lower(text.substr(0, 14)) == "%%matrixmarket";
  if (mm) return read_matrix_market(in);
  return read_csv(in);
}

// ---------------------------------------------------------------- patterns

inline SparsityPattern pattern_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int l = j.at("l").get<int>();
    SparsityPattern p(n, l);
    for (const auto& e : j.at("support")) {
      if (!e.is_array() || e.size() != 2)
        throw InputError("support entries must be [row, col] pairs");
      p.insert(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    return p;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed pattern JSON: ") + e.what());
  }
}

inline json pattern_to_json(const SparsityPattern& p) {
  json support = json::array();
  for (const auto& [r, c] : p.support()) support.push_back({r + 1, c + 1});
  return {{"n", p.n()}, {"l", p.l()}, {"nnz", p.nnz()}, {"support", support}};
}

// Lines "r c" (1-based); '#' and '%' start comments. `l` <= 0 takes the
// largest column index seen.
inline SparsityPattern read_pattern_coords(std::istream& in, int n, int l = 0) {
  std::vector<std::pair<long, long>> entries;
  std::string line;
  int lineno = 0;
  long max_col = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '%') continue;
    const auto tok = detail::split_ws(t);
    if (tok.size() != 2)
      throw InputError("pattern line " + std::to_string(lineno) +
                       " must hold 'row col'");
    const long r = detail::parse_index(tok[0], "pattern");
    const long c = detail::parse_index(tok[1], "pattern");
    entries.push_back({r, c});
    max_col = std::max(max_col, c);
  }
  SparsityPattern p(n, l > 0 ? l : static_cast<int>(max_col));
  for (const auto& [r, c] : entries)
    p.insert(static_cast<int>(r - 1), static_cast<int>(c - 1));
  return p;
}

inline void write_pattern_coords(std::ostream& os, const SparsityPattern& p) {
  os << "# " << p.n() << " x " << p.l() << " pattern, " << p.nnz()
     << " entries\n";
  for (const auto& [r, c] : p.support()) os << r + 1 << ' ' << c + 1 << '\n';
}

// JSON when the file ends in .json or starts with '{'; coordinate lines
// otherwise.
inline SparsityPattern read_pattern_file(const std::string& path, int n,
                                         int l = 0) {
  const std::string text = slurp(path);
  const std::string t = detail::trim(text);
  if (detail::ends_with(path, ".json") || (!t.empty() && t[0] == '{')) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw InputError("cannot parse '" + path + "': " + e.what());
    }
    SparsityPattern p = pattern_from_json(j);
    if (p.n() != n)
      throw DimensionError("pattern has " + std::to_string(p.n()) +
                           " rows, the system has " + std::to_string(n));
    return p;
  }
  std::istringstream in(text);
  return read_pattern_coords(in, n, l);
}

// ------------------------------------------------------------- JSON views

inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline json states_to_json(const std::vector<int>& s) {
  json out = json::array();
  for (int x : s) out.push_back(x + 1);
  return out;
}

inline json eigenstructure_to_json(const EigenStructure& es) {
  json modes = json::array();
  for (int i = 0; i < es.p(); ++i) {
    const auto& m = es.modes[static_cast<std::size_t>(i)];
    json jm = {{"index", i + 1},
               {"eigenvalue", {{"re", m.lambda.real()}, {"im", m.lambda.imag()}}},
               {"multiplicity", m.multiplicity},
               {"algebraic_multiplicity", m.algebraic},
               {"residual", m.residual},
               {"is_real", m.is_real}};
    if (m.conjugate_partner) jm["conjugate_partner"] = *m.conjugate_partner + 1;
    modes.push_back(jm);
  }
  json reps = json::array();
  for (int i : mode_representatives(es)) reps.push_back(i + 1);
  return {{"n", es.n},        {"p", es.p()},   {"p_r", es.p_r},
          {"p_c", es.p_c},    {"k_max", es.k_max},
          {"representatives", reps},
          {"modes", modes}};
}

inline json witness_to_json(const IndependentMatchWitness& w) {
  json matching = json::array();
  for (const auto& [s, u] : w.matching) matching.push_back({s + 1, u + 1});
  return {{"mode", w.mode_index + 1},
          {"size", w.size},
          {"h", states_to_json(w.h)},
          {"phi", states_to_json(w.phi)},
          {"matching", matching}};
}

inline json realization_trace_to_json(const RealizationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"mode", s.mode + 1},
                     {"tried", s.tried},
                     {"z_counts", s.z_counts},
                     {"chosen", s.chosen},
                     {"z_size", s.z_size}});
  json witnesses = json::array();
  for (const auto& w : t.witnesses) witnesses.push_back(witness_to_json(w));
  return {{"witnesses", witnesses}, {"steps", steps}, {"B", matrix_to_json(t.b)}};
}

inline json certificate_to_json(const BoundCertificate& c) {
  return {{"branch", c.branch},
          {"bound",
           c.branch == "second" ? "(ln N + 1) * OPT"
                                : "k_max * (ln N + 1) * OPT - (k_max - 1) * l"},
          {"multi_colored_vertices", c.multi_colored},
          {"stage1_size", c.stage1_size},
          {"sparsity", c.sparsity},
          {"N", c.total_multiplicity},
          {"k_max", c.k_max},
          {"l", c.l},
          {"consistent", c.consistent}};
}

}  // namespace ctrlsparse::io
