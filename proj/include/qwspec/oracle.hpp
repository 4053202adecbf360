#ifndef QWSPEC_ORACLE_HPP
#define QWSPEC_ORACLE_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qwspec/model.hpp"
#include "qwspec/types.hpp"

// Finite sections of the walk operator, built straight from the row action of
// U = SC with no reference to transfer matrices.

namespace qwspec {

/// Dense restriction of an operator to sites [-N, N] with open boundaries.
/// Basis order: up(-N), down(-N), up(-N+1), down(-N+1), ...
template <typename Real = double>
struct TruncatedOperator {
  long half_width{0};
  MatrixXc<Real> entries;
  std::string boundary{"open"};

  Eigen::Index dim() const { return entries.rows(); }
  Eigen::Index index(long x, int component) const { return 2 * (x + half_width) + component; }
  long site(Eigen::Index row) const { return static_cast<long>(row / 2) - half_width; }
};

template <typename Real>
TruncatedOperator<Real> assemble_truncated(const ModelParams<Real>& mp, long half_width) {
  if (half_width < 2) throw DomainError("assemble_truncated: half-width must be >= 2");
  TruncatedOperator<Real> op;
  op.half_width = half_width;
  const Eigen::Index n = 2 * (2 * half_width + 1);
  op.entries = MatrixXc<Real>::Zero(n, n);
  auto& u = op.entries;
  const Real e = std::exp(2 * mp.gamma);
  const Real p = mp.p;
  const Complex<Real> q = mp.q;
  const Complex<Real> qc = std::conj(q);
  const long N = half_width;

  for (long x = -N; x <= N; ++x) {
    const Real a = mp.a_at(x);
    const Complex<Real> b = mp.b_at(x);
    const auto up = op.index(x, 0);
    const auto dn = op.index(x, 1);
    // (U psi)_1(x) = p (C psi)_1(x) + q (C psi)_2(x+1)
    u(up, op.index(x, 0)) += p * a / e;
    u(up, op.index(x, 1)) += p * std::conj(b);
    if (x + 1 <= N) {
      u(up, op.index(x + 1, 0)) += q * mp.b_at(x + 1);
      u(up, op.index(x + 1, 1)) += -q * e * mp.a_at(x + 1);
    }
    // (U psi)_2(x) = conj(q) (C psi)_1(x-1) - p (C psi)_2(x)
    if (x - 1 >= -N) {
      u(dn, op.index(x - 1, 0)) += qc * mp.a_at(x - 1) / e;
      u(dn, op.index(x - 1, 1)) += qc * std::conj(mp.b_at(x - 1));
    }
    u(dn, op.index(x, 0)) += -p * b;
    u(dn, op.index(x, 1)) += p * e * a;
  }
  return op;
}

/// Shift S = [[p, q L], [L^* conj(q), -p]] on the same window. Contains no gamma.
template <typename Real>
TruncatedOperator<Real> assemble_shift(const ModelParams<Real>& mp, long half_width) {
  if (half_width < 2) throw DomainError("assemble_shift: half-width must be >= 2");
  TruncatedOperator<Real> op;
  op.half_width = half_width;
  const Eigen::Index n = 2 * (2 * half_width + 1);
  op.entries = MatrixXc<Real>::Zero(n, n);
  const long N = half_width;
  for (long x = -N; x <= N; ++x) {
    op.entries(op.index(x, 0), op.index(x, 0)) = mp.p;
    if (x + 1 <= N) op.entries(op.index(x, 0), op.index(x + 1, 1)) = mp.q;
    if (x - 1 >= -N) op.entries(op.index(x, 1), op.index(x - 1, 0)) = std::conj(mp.q);
    op.entries(op.index(x, 1), op.index(x, 1)) = -mp.p;
  }
  return op;
}

/// Max |M_ij| over rows and columns whose sites are at least `margin` away
/// from the window edge.
template <typename Real>
Real interior_max_abs(const MatrixXc<Real>& m, long half_width, long margin) {
  const long lo = -half_width + margin;
  const long hi = half_width - margin;
  if (lo > hi) return Real(0);
  const Eigen::Index first = 2 * (lo + half_width);
  const Eigen::Index count = 2 * (hi - lo + 1);
  return m.block(first, first, count, count).cwiseAbs().maxCoeff();
}

/// Max-row-sum norm.
template <typename Real>
Real inf_norm(const MatrixXc<Real>& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Real = double>
struct DenseSpectrum {
  VectorXc<Real> values;
  MatrixXc<Real> vectors;  // column k belongs to values(k); empty when not requested
  std::vector<Real> residuals;  // ||A v - lambda v|| / (||A|| ||v||)
  Real matrix_norm{};
};

inline constexpr double kEigenResidualTol = 1e-8;

/// Full eigendecomposition of a general complex matrix (Hessenberg reduction
/// and shifted QR via Eigen).
template <typename Real>
DenseSpectrum<Real> dense_spectrum(const MatrixXc<Real>& a, bool with_vectors = true) {
  if (a.rows() != a.cols()) throw DomainError("dense_spectrum: matrix must be square");
  if (a.rows() > 2048) throw DomainError("dense_spectrum: dimension exceeds 2048");
  Eigen::ComplexEigenSolver<MatrixXc<Real>> solver;
  solver.compute(a, with_vectors);
  if (solver.info() != Eigen::Success) {
    throw OracleError("dense_spectrum: QR iteration did not converge within " +
                      std::to_string(solver.getMaxIterations()) + " iterations per eigenvalue (dim " +
                      std::to_string(a.rows()) + ")");
  }
  DenseSpectrum<Real> out;
  out.values = solver.eigenvalues();
  out.matrix_norm = inf_norm(a);
  if (with_vectors) {
    out.vectors = solver.eigenvectors();
    out.residuals.reserve(static_cast<std::size_t>(a.rows()));
    const Real scale = out.matrix_norm > Real(0) ? out.matrix_norm : Real(1);
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      const auto v = out.vectors.col(k);
      const Real r = (a * v - out.values(k) * v).norm() / (scale * v.norm());
      if (!(r <= Real(kEigenResidualTol))) {
        throw OracleError("dense_spectrum: eigenpair " + std::to_string(k) + " residual " +
                          std::to_string(static_cast<double>(r)) + " exceeds 1e-8");
      }
      out.residuals.push_back(r);
    }
  }
  return out;
}

template <typename Real>
DenseSpectrum<Real> dense_spectrum(const TruncatedOperator<Real>& op, bool with_vectors = true) {
  return dense_spectrum(op.entries, with_vectors);
}

template <typename Real = double>
struct EigenPair {
  Complex<Real> value{};
  VectorXc<Real> vector;
  Real residual{};
};

/// Eigenvector for an eigenvalue already located at `shift`, by inverse
/// iteration. Cheaper than a full decomposition when only one vector is needed.
template <typename Real>
EigenPair<Real> eigenvector_near(const MatrixXc<Real>& a, Complex<Real> shift, int iterations = 3) {
  const Eigen::Index n = a.rows();
  MatrixXc<Real> shifted = a;
  // Nudge off the exact eigenvalue so the factorisation stays finite.
  const Real nudge = Real(1e-13) * std::max(Real(1), inf_norm(a));
  shifted.diagonal().array() -= shift + Complex<Real>(nudge, nudge);
  Eigen::PartialPivLU<MatrixXc<Real>> lu(shifted);
  VectorXc<Real> v = VectorXc<Real>::Ones(n) / std::sqrt(Real(n));
  for (int it = 0; it < iterations; ++it) {
    v = lu.solve(v);
    const Real nv = v.norm();
    if (!(nv > Real(0)) || !std::isfinite(static_cast<double>(nv))) {
      throw OracleError("eigenvector_near: inverse iteration broke down");
    }
    v /= nv;
  }
  EigenPair<Real> out;
  out.vector = v;
  out.value = v.dot(a * v);  // Rayleigh quotient; dot conjugates the first argument
  const Real scale = std::max(Real(1), inf_norm(a));
  out.residual = (a * v - out.value * v).norm() / scale;
  return out;
}

/// ||U psi - lambda psi|| / ||psi|| over the interior sites [x0 + 1, x1 - 1].
template <typename Real>
Real residual(const ModelParams<Real>& mp, Complex<Real> lambda, const WindowedState<Real>& state) {
  if (state.size() < 5) throw DomainError("residual: window must contain at least 5 sites");
  const auto u_psi = apply_U(mp, state);
  Real num = 0;
  Real den = 0;
  for (long x = u_psi.x0; x <= u_psi.x1(); ++x) {
    const auto& s = state.at(x);
    const auto& t = u_psi.at(x);
    num += std::norm(t.up - lambda * s.up) + std::norm(t.down - lambda * s.down);
    den += std::norm(s.up) + std::norm(s.down);
  }
  if (!(den > Real(0))) throw DomainError("residual: zero state");
  return std::sqrt(num / den);
}

/// Fraction of squared mass on sites with |x| <= N/2.
template <typename Real, typename Derived>
Real localization(const Eigen::MatrixBase<Derived>& vec, const TruncatedOperator<Real>& op) {
  Real inner = 0;
  Real total = 0;
  for (Eigen::Index i = 0; i < vec.size(); ++i) {
    const Real m = std::norm(vec(i));
    total += m;
    if (2 * std::abs(op.site(i)) <= op.half_width) inner += m;
  }
  return total > Real(0) ? inner / total : Real(0);
}

/// Packs a windowed state into the interleaved ordering of a truncated operator.
template <typename Real>
VectorXc<Real> to_interleaved(const WindowedState<Real>& w) {
  VectorXc<Real> v(2 * static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    v(2 * static_cast<Eigen::Index>(i)) = w.sites[i].up;
    v(2 * static_cast<Eigen::Index>(i) + 1) = w.sites[i].down;
  }
  return v;
}

}  // namespace qwspec

#endif  // QWSPEC_ORACLE_HPP
