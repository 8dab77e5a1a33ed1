#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/tolerance.hpp"

namespace ctrlsparse {

using StateMatrix = Eigen::MatrixXd;
using cdouble = std::complex<double>;

// Sorted, duplicate free, 0-based state indices.
using StateSet = std::vector<int>;

struct EigenMode {
  cdouble lambda;
  int multiplicity = 0;  // geometric multiplicity k_i
  int algebraic = 0;     // number of eigenvalue estimates in the cluster
  // n x k_i, columns span the left null space of lambda I - A.
  Eigen::MatrixXcd eigenbasis;
  std::optional<int> conjugate_partner;
  bool is_real = true;
  double residual = 0.0;  // ||X_i^T (lambda I - A)||_2
  double scale = 1.0;     // largest singular value of eigenbasis
};

struct EigenStructure {
  int n = 0;
  std::vector<EigenMode> modes;
  int p_r = 0;
  int p_c = 0;
  int k_max = 0;
  // Relative cutoff for ranks of eigenbasis restrictions and for treating
  // an eigenbasis entry as structurally zero. Scaled per mode by `scale`.
  double basis_tol = 0.0;

  int p() const { return static_cast<int>(modes.size()); }

  // Absolute singular value cutoff for submatrices of X_i^T.
  double threshold(int mode) const {
    return basis_tol * modes[static_cast<std::size_t>(mode)].scale;
  }

  // X_i^T, shape k_i x n.
  Eigen::MatrixXcd xt(int mode) const {
    return modes[static_cast<std::size_t>(mode)].eigenbasis.transpose();
  }
};

// Real modes plus the upper half plane member of every conjugate pair.
inline std::vector<int> mode_representatives(const EigenStructure& es) {
  std::vector<int> reps;
  for (int i = 0; i < es.p(); ++i) {
    const auto& m = es.modes[static_cast<std::size_t>(i)];
    if (m.is_real || !m.conjugate_partner || *m.conjugate_partner > i)
      reps.push_back(i);
  }
  return reps;
}

// Sum of k_i over representatives; the target value of f and g.
inline int representative_total(const EigenStructure& es) {
  int total = 0;
  for (int i : mode_representatives(es))
    total += es.modes[static_cast<std::size_t>(i)].multiplicity;
  return total;
}

// Columns `states` of X_i^T.
inline Eigen::MatrixXcd restrict_columns(const EigenStructure& es, int mode,
                                         const std::vector<int>& states) {
  const auto& x = es.modes[static_cast<std::size_t>(mode)].eigenbasis;
  Eigen::MatrixXcd out(x.cols(), static_cast<Eigen::Index>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = x.row(states[j]).transpose();
  return out;
}

// rank(X_i^T restricted to `states`), measured against the scale of the
// whole basis so that round-off-only submatrices count as rank 0.
inline int restricted_rank(const EigenStructure& es, int mode,
                           const std::vector<int>& states) {
  if (states.empty()) return 0;
  return rank_above(restrict_columns(es, mode, states), es.threshold(mode));
}

// J belongs to H_i: |J| = k_i and X_i^T restricted to J has full rank.
inline bool is_h_set(const EigenStructure& es, int mode,
                     const std::vector<int>& states) {
  const int k = es.modes[static_cast<std::size_t>(mode)].multiplicity;
  return static_cast<int>(states.size()) == k &&
         restricted_rank(es, mode, states) == k;
}

// Entry (state s, basis column c) of X_i counts as nonzero.
inline bool basis_entry_nonzero(const EigenStructure& es, int mode, int state,
                                int column) {
  return std::abs(es.modes[static_cast<std::size_t>(mode)].eigenbasis(
             state, column)) > es.threshold(mode);
}

namespace detail {

inline std::string format_lambda(cdouble z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ")
                          << std::abs(z.imag()) << "i";
  return os.str();
}

// Zero out entries below the structural threshold and record the scale.
inline void finalize_basis(EigenMode& m, double basis_tol) {
  const Eigen::VectorXd s = singular_values(m.eigenbasis);
  m.scale = s.size() ? s(0) : 0.0;
  const double cut = basis_tol * m.scale;
  for (Eigen::Index r = 0; r < m.eigenbasis.rows(); ++r)
    for (Eigen::Index c = 0; c < m.eigenbasis.cols(); ++c)
      if (std::abs(m.eigenbasis(r, c)) <= cut) m.eigenbasis(r, c) = 0.0;
}

inline double residual_norm(const Eigen::MatrixXd& a, const EigenMode& m) {
  if (m.eigenbasis.cols() == 0) return 0.0;
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd shifted =
      m.lambda * Eigen::MatrixXcd::Identity(n, n) - a.cast<cdouble>();
  const Eigen::MatrixXcd r = m.eigenbasis.transpose() * shifted;
  const Eigen::VectorXd s = singular_values(r);
  return s.size() ? s(0) : 0.0;
}

struct Cluster {
  std::vector<int> members;  // indices into the upper half estimate list
  cdouble center;
  bool is_real = true;
  int algebraic = 0;
  Eigen::MatrixXcd basis;
};

// Left null space of center I - A, i.e. the null space of center I - A^T.
// The cutoff is relative to max(sigma_max(center I - A), a_norm): for A
// equal to a multiple of I up to round-off the shifted matrix is pure noise.
inline Eigen::MatrixXcd left_null_space(const Eigen::MatrixXd& a,
                                        cdouble center, bool real,
                                        double rel_tol, double a_norm) {
  const Eigen::Index n = a.rows();
  if (real) {
    const Eigen::MatrixXd m =
        center.real() * Eigen::MatrixXd::Identity(n, n) - a.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cut = rel_tol * std::max(s.size() ? s(0) : 0.0, a_norm);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > cut) ++rank;
    return svd.matrixV().rightCols(n - rank).cast<cdouble>();
  }
  const Eigen::MatrixXcd m = center * Eigen::MatrixXcd::Identity(n, n) -
                             a.transpose().cast<cdouble>();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rel_tol * std::max(s.size() ? s(0) : 0.0, a_norm);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Largest principal cosine between the column spans of two orthonormal
// bases.
inline double span_overlap(const Eigen::MatrixXcd& qa,
                           const Eigen::MatrixXcd& qb) {
  if (qa.cols() == 0 || qb.cols() == 0) return 0.0;
  const Eigen::MatrixXcd c = qa.adjoint() * qb;
  const Eigen::VectorXd s = singular_values(c);
  return s(0);
}

}  // namespace detail

// Distinct eigenvalues of A with their left eigenbases.
//
// Eigenvalue estimates are clustered at cluster_tol * (1 + |lambda|). Round
// off can split a defective eigenvalue into several nearby estimates; such
// clusters are recognised by overlapping null spaces and merged. The basis
// of each cluster is the SVD null space of (center I - A^T), so its column
// count is the numerical geometric multiplicity.
//
// Mode order: real modes by ascending value, then upper half plane modes by
// (real, imag), then their conjugates in the same order.
inline EigenStructure compute_eigenstructure(const StateMatrix& a,
                                             const ToleranceConfig& tol = {}) {
  if (a.rows() != a.cols())
    throw DimensionError("state matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  if (!a.allFinite()) throw InputError("state matrix has non-finite entries");

  EigenStructure es;
  es.n = static_cast<int>(a.rows());
  es.basis_tol = tol.rank_tol_for(a.rows(), a.cols());
  if (es.n == 0) return es;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalue iteration did not converge");
  const Eigen::VectorXcd all = solver.eigenvalues();

  std::vector<cdouble> upper;
  for (Eigen::Index i = 0; i < all.size(); ++i)
    if (all(i).imag() >= 0.0) upper.push_back(all(i));
  std::sort(upper.begin(), upper.end(), [](cdouble x, cdouble y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  const auto close = [&](cdouble x, cdouble y, double rel) {
    return std::abs(x - y) <=
           rel * (1.0 + std::max(std::abs(x), std::abs(y)));
  };

  // Single linkage clustering through union-find.
  std::vector<int> parent(upper.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (std::size_t i = 0; i < upper.size(); ++i)
    for (std::size_t j = i + 1; j < upper.size(); ++j)
      if (close(upper[i], upper[j], tol.cluster_tol))
        parent[static_cast<std::size_t>(find(static_cast<int>(j)))] =
            find(static_cast<int>(i));

  std::vector<detail::Cluster> clusters;
  {
    std::vector<int> slot(upper.size(), -1);
    for (std::size_t i = 0; i < upper.size(); ++i) {
      const int root = find(static_cast<int>(i));
      if (slot[static_cast<std::size_t>(root)] < 0) {
        slot[static_cast<std::size_t>(root)] =
            static_cast<int>(clusters.size());
        clusters.emplace_back();
      }
      clusters[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])]
          .members.push_back(static_cast<int>(i));
    }
  }

  const double null_tol = es.basis_tol;
  const double a_norm = singular_values(a)(0);
  const auto evaluate = [&](detail::Cluster& c, bool force_real) {
    cdouble sum = 0.0;
    for (int m : c.members) sum += upper[static_cast<std::size_t>(m)];
    c.center = sum / static_cast<double>(c.members.size());
    c.is_real = force_real ||
                std::abs(c.center.imag()) <=
                    tol.cluster_tol * (1.0 + std::abs(c.center));
    if (c.is_real) c.center = c.center.real();
    c.algebraic = 0;
    for (int m : c.members)
      c.algebraic +=
          (c.is_real && upper[static_cast<std::size_t>(m)].imag() != 0.0) ? 2
                                                                          : 1;
    c.basis = detail::left_null_space(a, c.center, c.is_real, null_tol, a_norm);
  };
  for (auto& c : clusters) evaluate(c, false);

  // Merge clusters that are one eigenvalue split by round-off. The distance
  // gate keeps genuinely distinct but nearly parallel eigenvectors apart.
  const double merge_gate = 1e-3;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& c : clusters) {
      if (c.is_real || c.basis.cols() == 0) continue;
      if (close(c.center, std::conj(c.center), merge_gate) &&
          detail::span_overlap(c.basis, c.basis.conjugate()) >=
              1.0 - tol.overlap_tol) {
        evaluate(c, true);
        changed = true;
      }
    }
    for (std::size_t i = 0; i < clusters.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        auto& ci = clusters[i];
        auto& cj = clusters[j];
        if (!close(ci.center, cj.center, merge_gate)) continue;
        if (detail::span_overlap(ci.basis, cj.basis) < 1.0 - tol.overlap_tol)
          continue;
        ci.members.insert(ci.members.end(), cj.members.begin(),
                          cj.members.end());
        const bool real = ci.is_real || cj.is_real;
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
        evaluate(clusters[i], real);
        changed = true;
        break;
      }
    }
  }

  for (const auto& c : clusters) {
    const int k = static_cast<int>(c.basis.cols());
    if (k == 0 || k > c.algebraic) {
      std::string names;
      for (int m : c.members)
        names += (names.empty() ? "" : ", ") +
                 detail::format_lambda(upper[static_cast<std::size_t>(m)]);
      throw NumericError(
          "inconsistent eigenvalue cluster {" + names + "}: null space of "
          "dimension " + std::to_string(k) + " for " +
          std::to_string(c.algebraic) +
          " eigenvalue estimate(s); adjust the rank or cluster tolerance");
    }
  }

  std::vector<const detail::Cluster*> real_c;
  std::vector<const detail::Cluster*> cplx_c;
  for (const auto& c : clusters) (c.is_real ? real_c : cplx_c).push_back(&c);
  const auto by_value = [](const detail::Cluster* x, const detail::Cluster* y) {
    if (x->center.real() != y->center.real())
      return x->center.real() < y->center.real();
    return x->center.imag() < y->center.imag();
  };
  std::sort(real_c.begin(), real_c.end(), by_value);
  std::sort(cplx_c.begin(), cplx_c.end(), by_value);

  const auto make_mode = [&](cdouble lambda, const Eigen::MatrixXcd& basis,
                             bool real, int algebraic) {
    EigenMode m;
    m.lambda = lambda;
    m.eigenbasis = basis;
    m.multiplicity = static_cast<int>(basis.cols());
    m.algebraic = algebraic;
    m.is_real = real;
    detail::finalize_basis(m, es.basis_tol);
    m.residual = detail::residual_norm(a, m);
    return m;
  };
  for (const auto* c : real_c)
    es.modes.push_back(make_mode(c->center, c->basis, true, c->algebraic));
  const int pc2 = static_cast<int>(cplx_c.size());
  const int pr = static_cast<int>(real_c.size());
  for (const auto* c : cplx_c)
    es.modes.push_back(make_mode(c->center, c->basis, false, c->algebraic));
  for (int i = 0; i < pc2; ++i) {
    EigenMode m = es.modes[static_cast<std::size_t>(pr + i)];
    m.lambda = std::conj(m.lambda);
    m.eigenbasis = m.eigenbasis.conjugate();
    m.conjugate_partner = pr + i;
    es.modes[static_cast<std::size_t>(pr + i)].conjugate_partner =
        pr + pc2 + i;
    es.modes.push_back(std::move(m));
  }

  es.p_r = pr;
  es.p_c = 2 * pc2;
  int total = 0;
  for (const auto& m : es.modes) {
    es.k_max = std::max(es.k_max, m.multiplicity);
    total += m.multiplicity;
  }
  if (total > es.n)
    throw NumericError("geometric multiplicities sum to " +
                       std::to_string(total) + " > n = " +
                       std::to_string(es.n));
  return es;
}

// Builds an EigenStructure from caller supplied eigenvalues and left
// eigenbases (for instance a hand-computed basis). Complex eigenvalues must
// appear together with their conjugate and a conjugate basis; they are
// reordered into the canonical mode order.
inline EigenStructure eigenstructure_from_bases(
    int n, const std::vector<cdouble>& lambdas,
    const std::vector<Eigen::MatrixXcd>& bases,
    const ToleranceConfig& tol = {}) {
  if (lambdas.size() != bases.size())
    throw DimensionError("eigenvalue and eigenbasis counts differ");
  EigenStructure es;
  es.n = n;
  es.basis_tol = tol.rank_tol_for(n, n);
  std::vector<std::size_t> real_idx;
  std::vector<std::size_t> upper_idx;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (bases[i].rows() != n || bases[i].cols() == 0)
      throw DimensionError("eigenbasis " + std::to_string(i) +
                           " must have n rows and at least one column");
    if (lambdas[i].imag() == 0.0)
      real_idx.push_back(i);
    else if (lambdas[i].imag() > 0.0)
      upper_idx.push_back(i);
  }
  const auto by_value = [&](std::size_t x, std::size_t y) {
    if (lambdas[x].real() != lambdas[y].real())
      return lambdas[x].real() < lambdas[y].real();
    return lambdas[x].imag() < lambdas[y].imag();
  };
  std::sort(real_idx.begin(), real_idx.end(), by_value);
  std::sort(upper_idx.begin(), upper_idx.end(), by_value);
  if (2 * upper_idx.size() + real_idx.size() != lambdas.size())
    throw InputError("complex eigenvalues must come in conjugate pairs");

  const auto make = [&](cdouble lambda, const Eigen::MatrixXcd& basis,
                        bool real) {
    EigenMode m;
    m.lambda = lambda;
    m.eigenbasis = basis;
    m.multiplicity = static_cast<int>(basis.cols());
    m.algebraic = m.multiplicity;
    m.is_real = real;
    detail::finalize_basis(m, es.basis_tol);
    return m;
  };
  for (std::size_t i : real_idx)
    es.modes.push_back(make(lambdas[i], bases[i], true));
  const int pr = static_cast<int>(real_idx.size());
  const int pc2 = static_cast<int>(upper_idx.size());
  for (std::size_t i : upper_idx)
    es.modes.push_back(make(lambdas[i], bases[i], false));
  for (int i = 0; i < pc2; ++i) {
    EigenMode m = es.modes[static_cast<std::size_t>(pr + i)];
    m.lambda = std::conj(m.lambda);
    m.eigenbasis = m.eigenbasis.conjugate();
    m.conjugate_partner = pr + i;
    es.modes[static_cast<std::size_t>(pr + i)].conjugate_partner =
        pr + pc2 + i;
    es.modes.push_back(std::move(m));
  }
  es.p_r = pr;
  es.p_c = 2 * pc2;
  for (const auto& m : es.modes) es.k_max = std::max(es.k_max, m.multiplicity);
  return es;
}

}  // namespace ctrlsparse
