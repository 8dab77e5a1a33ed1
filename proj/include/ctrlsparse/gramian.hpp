#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/spectral.hpp"
#include "ctrlsparse/tolerance.hpp"

namespace ctrlsparse {

inline double max_real_eigenvalue(const StateMatrix& a) {
  if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalue iteration did not converge");
  return solver.eigenvalues().real().maxCoeff();
}

// Upper triangular U with U U^H = X for T X + X T^H + b b^H = 0, where T is
// upper triangular with eigenvalues in the open left half plane
// (Hammarling's square-root recurrence).
inline Eigen::MatrixXcd hammarling_factor(const Eigen::MatrixXcd& t,
                                          Eigen::VectorXcd b) {
  const Eigen::Index n = t.rows();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const cdouble tau = t(j, j);
    const cdouble beta = b(j);
    const double nu = std::abs(beta) / std::sqrt(-2.0 * tau.real());
    u(j, j) = nu;
    if (j == 0) break;
    if (nu == 0.0) {
      b.conservativeResize(j);
      continue;
    }
    const Eigen::MatrixXcd t1 = t.topLeftCorner(j, j);
    Eigen::MatrixXcd shifted = t1;
    shifted.diagonal().array() += std::conj(tau);
    const Eigen::VectorXcd rhs =
        -(b.head(j) * (std::conj(beta) / nu) + t.col(j).head(j) * nu);
    const Eigen::VectorXcd col =
        shifted.triangularView<Eigen::Upper>().solve(rhs);
    u.col(j).head(j) = col;
    const Eigen::VectorXcd next = b.head(j) - col * (beta / nu);
    b = next;
  }
  return u;
}

// Real factor F (n x r) with F F^T equal to the Gramian of single input
// e_state, compressed to its numerical rank. `q`, `t` are the complex
// Schur form of A.
inline Eigen::MatrixXd state_gramian_factor(const Eigen::MatrixXcd& q,
                                            const Eigen::MatrixXcd& t,
                                            int state, double rel_tol) {
  const Eigen::VectorXcd bt = q.row(state).adjoint();
  const Eigen::MatrixXcd l = q * hammarling_factor(t, bt);
  Eigen::MatrixXd f(l.rows(), 2 * l.cols());
  f << l.real(), l.imag();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(f, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return svd.matrixU().leftCols(r) * s.head(r).asDiagonal();
}

struct GramianSelection {
  std::vector<int> chosen;  // in selection order
  std::vector<int> ranks;   // rank of W_S after each choice
  bool full_rank = false;
  double seconds = 0.0;
};

// Baseline: greedily add the state that most increases rank(W_S), where
// A W_S + W_S A^T + I_S I_S^T = 0. W_S is kept as a square-root factor
// M_S (W_S = M_S M_S^T); its rank is the numerical rank of M_S at
// rank_rel_tol, which avoids squaring the condition number.
inline GramianSelection gramian_greedy_macp(const StateMatrix& a,
                                            const ToleranceConfig& tol = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (a.rows() != a.cols()) throw DimensionError("state matrix must be square");
  if (!a.allFinite()) throw InputError("state matrix has non-finite entries");
  const int n = static_cast<int>(a.rows());
  GramianSelection out;
  if (n == 0) {
    out.full_rank = true;
    return out;
  }

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.cast<cdouble>());
  if (schur.info() != Eigen::Success)
    throw NumericError("Schur decomposition did not converge");
  const Eigen::MatrixXcd& t = schur.matrixT();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(t(j, j).real() < 0.0))
      throw InputError(
          "state matrix is not Hurwitz (eigenvalue with real part " +
          std::to_string(t(j, j).real()) + "); stabilize it first");
  const double rel = tol.rank_tol_for(n, n);

  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    factors.push_back(state_gramian_factor(schur.matrixU(), t, s, rel));

  Eigen::MatrixXd m(n, 0);
  int rank = 0;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  const auto rank_of = [&](const Eigen::MatrixXd& x) {
    const Eigen::VectorXd s = singular_values(x);
    int r = 0;
    if (s.size() == 0 || !(s(0) > 0.0)) return 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel * s(0)) ++r;
    return r;
  };
  while (rank < n && static_cast<int>(out.chosen.size()) < n) {
    int best = -1;
    int best_rank = -1;
    for (int s = 0; s < n; ++s) {
      if (taken[static_cast<std::size_t>(s)]) continue;
      Eigen::MatrixXd cand(n, m.cols() + factors[static_cast<std::size_t>(s)].cols());
      cand << m, factors[static_cast<std::size_t>(s)];
      const int r = rank_of(cand);
      if (r > best_rank) {
        best_rank = r;
        best = s;
      }
    }
    Eigen::MatrixXd cand(n, m.cols() + factors[static_cast<std::size_t>(best)].cols());
    cand << m, factors[static_cast<std::size_t>(best)];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(cand, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > rel * sv(0)) ++r;
    m = svd.matrixU().leftCols(r) * sv.head(r).asDiagonal();
    rank = static_cast<int>(r);
    taken[static_cast<std::size_t>(best)] = 1;
    out.chosen.push_back(best);
    out.ranks.push_back(rank);
  }
  out.full_rank = rank == n;
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

// Shifts A left by 1.1 times its largest eigenvalue real part when that is
// nonnegative. A spectrum touching the imaginary axis (largest real part
// zero to rounding) is shifted by 0.1 * max(1, spectral radius) instead,
// since a zero shift would leave A unstable.
inline StateMatrix stabilize(const StateMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("state matrix must be square");
  if (a.rows() == 0) return a;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalue iteration did not converge");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  const double max_re = ev.real().maxCoeff();
  const double radius = ev.cwiseAbs().maxCoeff();
  const double floor = 1e-12 * std::max(1.0, radius);
  if (max_re < -floor) return a;
  const double shift =
      max_re > floor ? 1.1 * max_re : 0.1 * std::max(1.0, radius);
  return a - shift * StateMatrix::Identity(a.rows(), a.cols());
}

}  // namespace ctrlsparse
