#ifndef QWSPEC_TRANSFER_HPP
#define QWSPEC_TRANSFER_HPP

#include <algorithm>
#include <array>
#include <cmath>

#include "qwspec/model.hpp"
#include "qwspec/types.hpp"

namespace qwspec {

// Solutions of U psi = lambda psi propagate as psi(x+1) = T psi(x), with
// T = T_p for x >= 0, T = T_m for x <= -2 and the interface step
// psi(0) = T_{-1} psi(-1).

/// Transfer matrix of one homogeneous half-line.
template <typename Real>
Mat2<Real> transfer_matrix(const ModelParams<Real>& mp, Side side, Complex<Real> lambda) {
  if (lambda == Complex<Real>(0)) throw DomainError("transfer_matrix: lambda must be nonzero");
  const Real a = mp.a(side);
  const Complex<Real> b = mp.b(side);
  const Real p = mp.p;
  const Real g2 = 2 * mp.gamma;
  const Complex<Real> scale = Real(1) / (b * mp.q * lambda);
  Mat2<Real> t;
  t(0, 0) = lambda * lambda - 2 * a * p * std::cosh(g2) * lambda + a * a;
  t(0, 1) = -std::conj(b) * (p * lambda - a * std::exp(g2));
  t(1, 0) = -b * (p * lambda - a * std::exp(-g2));
  t(1, 1) = std::norm(b);
  return scale * t;
}

/// Transfer matrix across the phase interface, psi(0) = T_{-1} psi(-1).
template <typename Real>
Mat2<Real> interface_matrix(const ModelParams<Real>& mp, Complex<Real> lambda) {
  if (lambda == Complex<Real>(0)) throw DomainError("interface_matrix: lambda must be nonzero");
  const Real p = mp.p;
  const Real ep = std::exp(2 * mp.gamma);
  const Real em = std::exp(-2 * mp.gamma);
  const Complex<Real> scale = Real(1) / (mp.b_p * mp.q * lambda);
  Mat2<Real> t;
  t(0, 0) = lambda * lambda - (mp.a_p * ep + mp.a_m * em) * p * lambda + mp.a_m * mp.a_p;
  t(0, 1) = -std::conj(mp.b_m) * (p * lambda - mp.a_p * ep);
  t(1, 0) = -mp.b_p * (p * lambda - mp.a_m * em);
  t(1, 1) = std::conj(mp.b_m) * mp.b_p;
  return scale * t;
}

/// Spectral data of T_m or T_p at a given lambda.
template <typename Real = double>
struct TransferData {
  Side side{Side::plus};
  Complex<Real> lambda{};
  Complex<Real> K{};   // p lambda - a e^{-2g}
  Complex<Real> Kp{};  // a e^{2g} - p / lambda
  Complex<Real> J{};   // lambda - 1/lambda + 2 p a sinh 2g
  Complex<Real> X{};   // lambda + 1/lambda - 2 p a cosh 2g
  Complex<Real> disc{};  // J^2 - 4 K Kp  (== X^2 - 4|bq|^2)
  Complex<Real> root{};  // principal sqrt(X^2 - 4|bq|^2)
  int s{0};              // 0 when |zeta_gt| == |zeta_lt|
  Complex<Real> zeta_gt{};
  Complex<Real> zeta_lt{};
  Vec2<Real> v_gt = Vec2<Real>::Zero();
  Vec2<Real> v_lt = Vec2<Real>::Zero();
  bool k_zero{false};
  bool degenerate{false};
  bool has_vectors{false};
};

inline constexpr double kSignEqualTol = 1e-12;
inline constexpr double kKZeroTol = 1e-12;
inline constexpr double kDoubleRootTol = 1e-13;  // relative size of X^2 - 4|bq|^2 treated as zero

namespace detail {

/// Unit norm, first non-negligible component real positive.
template <typename Real>
Vec2<Real> canonical(const Vec2<Real>& v) {
  const Real n = v.norm();
  if (!(n > Real(0))) return Vec2<Real>::Zero();
  Vec2<Real> u = v / n;
  for (int i = 0; i < 2; ++i) {
    const Real m = std::abs(u(i));
    if (m > Real(1e-14)) {
      u *= std::conj(u(i)) / m;
      u(i) = Complex<Real>(std::real(u(i)), Real(0));
      break;
    }
  }
  return u;
}

}  // namespace detail

template <typename Real>
TransferData<Real> transfer_data(const ModelParams<Real>& mp, Side side, Complex<Real> lambda) {
  if (lambda == Complex<Real>(0)) throw DomainError("transfer_data: lambda must be nonzero");
  using C = Complex<Real>;
  const Real a = mp.a(side);
  const C b = mp.b(side);
  const Real p = mp.p;
  const Real g2 = 2 * mp.gamma;
  const C inv = Real(1) / lambda;
  const C bq = b * mp.q;

  TransferData<Real> d;
  d.side = side;
  d.lambda = lambda;
  d.K = p * lambda - a * std::exp(-g2);
  d.Kp = a * std::exp(g2) - p * inv;
  d.J = lambda - inv + 2 * p * a * std::sinh(g2);
  d.X = lambda + inv - 2 * p * a * std::cosh(g2);
  d.disc = d.J * d.J - Real(4) * d.K * d.Kp;
  const C under = d.X * d.X - Real(4) * std::norm(bq);
  const Real under_scale = std::max({Real(1), std::norm(d.X), Real(4) * std::norm(bq)});
  d.root = std::abs(under) <= Real(kDoubleRootTol) * under_scale ? C(0) : std::sqrt(under);

  const C z_plus = (d.X + d.root) / (Real(2) * bq);
  const C z_minus = (d.X - d.root) / (Real(2) * bq);
  const Real m_plus = std::abs(z_plus);
  const Real m_minus = std::abs(z_minus);
  if (std::abs(m_plus - m_minus) <= Real(kSignEqualTol)) {
    d.s = 0;
  } else {
    d.s = m_plus > m_minus ? 1 : -1;
  }
  const int s_eff = d.s == 0 ? 1 : d.s;
  d.zeta_gt = s_eff > 0 ? z_plus : z_minus;
  d.zeta_lt = s_eff > 0 ? z_minus : z_plus;

  const Real k_scale = std::max({Real(1), std::abs(p * lambda), std::abs(a * std::exp(-g2))});
  d.k_zero = std::abs(d.K) <= Real(kKZeroTol) * k_scale;
  const bool j_zero = std::abs(d.J) <= Real(kKZeroTol) * std::max(Real(1), std::abs(lambda));
  d.degenerate = d.s == 0 || (d.k_zero && j_zero);

  if (!d.k_zero) {
    const C shift = Real(2) * a * std::exp(g2) * inv * d.K;
    const C lead = -lambda / (Real(2) * b);
    Vec2<Real> gt, lt;
    gt << lead * (d.J + Real(s_eff) * d.root - shift), d.K;
    lt << lead * (d.J - Real(s_eff) * d.root - shift), d.K;
    d.v_gt = detail::canonical(gt);
    d.v_lt = detail::canonical(lt);
    d.has_vectors = true;
  } else {
    const int sj = d.s * sgn(std::real(d.J));
    if (sj != 0) {
      Vec2<Real> e1, tail;
      e1 << C(1), C(0);
      tail << Real(2) * a * std::conj(b) * std::sinh(g2), -lambda * d.J;
      d.v_gt = detail::canonical(sj > 0 ? e1 : tail);
      d.v_lt = detail::canonical(sj > 0 ? tail : e1);
      d.has_vectors = d.v_gt.norm() > Real(0) && d.v_lt.norm() > Real(0);
    }
  }
  return d;
}

/// Per-side membership of lambda in the set where the decaying and growing
/// transfer eigenvalues have different moduli.
struct SideMembership {
  bool closed_form_in{false};  // from the real-axis / discriminant criterion
  bool direct_in{false};       // from comparing |zeta_gt| and |zeta_lt|
  double criterion{0};         // (Re X)^2 - 4|bq|^2, meaningful when lambda + 1/lambda is real
  double modulus_gap{0};       // |zeta_gt| - |zeta_lt|
};

struct LambdaMembership {
  std::array<SideMembership, 2> sides{};  // indexed by Side
  bool in{false};                          // both sides non-degenerate
  bool consistent{false};                  // closed form agrees with moduli on both sides

  const SideMembership& side(Side s) const { return sides[s == Side::minus ? 0 : 1]; }
};

inline constexpr double kLambdaModulusTol = 1e-10;

template <typename Real>
LambdaMembership in_lambda_set(const ModelParams<Real>& mp, Complex<Real> lambda) {
  if (lambda == Complex<Real>(0)) throw DomainError("in_lambda_set: lambda must be nonzero");
  LambdaMembership out;
  const Complex<Real> sum = lambda + Real(1) / lambda;
  const bool sum_real = std::abs(sum.imag()) <= Real(1e-12) * std::max(Real(1), std::abs(sum));
  out.in = true;
  out.consistent = true;
  for (Side side : {Side::minus, Side::plus}) {
    SideMembership& sm = out.sides[side == Side::minus ? 0 : 1];
    const Real x = sum.real() - 2 * mp.p * mp.a(side) * std::cosh(2 * mp.gamma);
    const Real four_bq = 4 * std::norm(mp.b(side) * mp.q);
    const Real crit = x * x - four_bq;
    const Real crit_scale = std::max({Real(1), x * x, four_bq});
    sm.criterion = static_cast<double>(crit);
    sm.closed_form_in = !(sum_real && crit <= Real(kDoubleRootTol) * crit_scale);

    const auto td = transfer_data(mp, side, lambda);
    sm.modulus_gap = static_cast<double>(std::abs(td.zeta_gt) - std::abs(td.zeta_lt));
    sm.direct_in = std::abs(sm.modulus_gap) > kLambdaModulusTol;

    out.in = out.in && sm.direct_in;
    out.consistent = out.consistent && (sm.direct_in == sm.closed_form_in);
  }
  return out;
}

}  // namespace qwspec

#endif  // QWSPEC_TRANSFER_HPP
