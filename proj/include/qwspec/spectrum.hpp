#ifndef QWSPEC_SPECTRUM_HPP
#define QWSPEC_SPECTRUM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qwspec/model.hpp"
#include "qwspec/transfer.hpp"
#include "qwspec/types.hpp"

namespace qwspec {

/// x + sqrt(1 + x^2), evaluated without cancellation. Increasing bijection onto (0, inf).
template <typename Real>
Real lambda_plus(Real x) {
  const Real r = std::sqrt(Real(1) + x * x);
  return x >= Real(0) ? x + r : Real(1) / (r - x);
}

/// x - sqrt(1 + x^2), evaluated without cancellation. Increasing bijection onto (-inf, 0).
template <typename Real>
Real lambda_minus(Real x) {
  const Real r = std::sqrt(Real(1) + x * x);
  return x <= Real(0) ? x - r : Real(-1) / (x + r);
}

/// Effective shift parameter p / sqrt(p^2 + |q|^2 / cosh^2 2g); selects the
/// branch of the point-spectrum case table.
template <typename Real>
Real p_gamma_prime(const ModelParams<Real>& mp) {
  const Real c = std::cosh(2 * mp.gamma);
  return mp.p / std::sqrt(mp.p * mp.p + std::norm(mp.q) / (c * c));
}

enum class Branch { plus_plus, plus_minus, minus_plus, minus_minus };

inline Branch branch_of(int s1, int s2) {
  if (s1 > 0) return s2 > 0 ? Branch::plus_plus : Branch::plus_minus;
  return s2 > 0 ? Branch::minus_plus : Branch::minus_minus;
}

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::plus_plus: return "plus_plus";
    case Branch::plus_minus: return "plus_minus";
    case Branch::minus_plus: return "minus_plus";
    case Branch::minus_minus: return "minus_minus";
  }
  return "?";
}

template <typename Real = double>
struct CandidateEigenvalue {
  int s1{1};
  int s2{1};
  Real value{};
};

/// lambda(s1, s2) = s1 p sinh 2g + s2 sqrt(1 + p^2 sinh^2 2g), in the order
/// (-,-), (+,-), (-,+), (+,+).
template <typename Real>
std::array<CandidateEigenvalue<Real>, 4> candidate_eigenvalues(const ModelParams<Real>& mp) {
  const Real x = mp.p * std::sinh(2 * mp.gamma);
  std::array<CandidateEigenvalue<Real>, 4> out;
  const int order[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  for (int i = 0; i < 4; ++i) {
    const int s1 = order[i][0];
    const int s2 = order[i][1];
    out[i] = {s1, s2, s2 > 0 ? lambda_plus(Real(s1) * x) : lambda_minus(Real(s1) * x)};
  }
  return out;
}

struct HypothesisReport {
  bool ok{true};
  double margin_m{0};  // p cosh 2g / |q| - s2 a_m / |b_m|
  double margin_p{0};
  std::string diagnostic;
};

inline constexpr double kHypothesisTol = 1e-12;

/// Checks p cosh 2g / |q| != s2 a / |b| on both sides.
template <typename Real>
HypothesisReport hypothesis_check(const ModelParams<Real>& mp, int s2) {
  HypothesisReport r;
  const Real lhs = mp.p * std::cosh(2 * mp.gamma) / std::abs(mp.q);
  r.margin_m = static_cast<double>(lhs - Real(s2) * mp.a_m / std::abs(mp.b_m));
  r.margin_p = static_cast<double>(lhs - Real(s2) * mp.a_p / std::abs(mp.b_p));
  for (auto [name, margin] : {std::pair{"m", r.margin_m}, std::pair{"p", r.margin_p}}) {
    if (std::abs(margin) <= kHypothesisTol) {
      r.ok = false;
      r.diagnostic += std::string("degenerate candidate (s2=") + (s2 > 0 ? "+1" : "-1") +
                      "): p cosh(2gamma)/|q| equals s2 a_" + name + "/|b_" + name + "|; ";
    }
  }
  return r;
}

struct ConditionCheck {
  bool holds{false};
  double lhs{0};
  double rhs{0};
  double residual{0};  // relative to the magnitude of the largest term
};

struct MatchReport {
  double lambda{0};
  ConditionCheck cond_i;
  ConditionCheck cond_ii;
  ConditionCheck cond_iii;
  int kernel_dim{0};
  double kernel_residual{0};  // ||(T_p - zeta_p^<) T_{-1} v_m^>|| / ||T_{-1} v_m^>||

  bool algebraic() const { return cond_i.holds && cond_ii.holds && cond_iii.holds; }
  bool routes_agree() const { return algebraic() == (kernel_dim == 1); }
};

inline constexpr double kConditionTol = 1e-9;
inline constexpr double kKernelTol = 1e-9;

namespace detail {

template <typename Real>
Real max_abs(std::initializer_list<Real> xs) {
  Real m = 0;
  for (Real x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Evaluates the three algebraic matching conditions at a real lambda and,
/// independently, whether T_{-1} v_m^> is an eigenvector of T_p for zeta_p^<.
template <typename Real>
MatchReport match_conditions(const ModelParams<Real>& mp, Real lambda) {
  const Complex<Real> lam(lambda, 0);
  if (lambda == Real(0)) throw DomainError("match_conditions: lambda must be nonzero");
  if (!in_lambda_set(mp, lam).in) throw DomainError("match_conditions: lambda is outside the admissible set");

  const auto dm = transfer_data(mp, Side::minus, lam);
  const auto dp = transfer_data(mp, Side::plus, lam);
  const Real Km = dm.K.real(), Kpm = dm.Kp.real(), Jm = dm.J.real(), Rm = dm.root.real();
  const Real Kp = dp.K.real(), Kpp = dp.Kp.real(), Jp = dp.J.real(), Rp = dp.root.real();
  const Real sm = dm.s, sp = dp.s;

  MatchReport r;
  r.lambda = static_cast<double>(lambda);

  {
    const Real a1 = Km * Jp - Kp * Jm;
    const Real a2 = Kpm * Jp - Kpp * Jm;
    const Real a3 = Km * Kpp - Kpm * Kp;
    const Real lhs = a1 * a2 + a3 * a3;
    const Real m3 = detail::max_abs({Km * Kpp, Kpm * Kp});
    const Real scale = detail::max_abs({Km * Jp, Kp * Jm}) * detail::max_abs({Kpm * Jp, Kpp * Jm}) + m3 * m3;
    r.cond_i.lhs = static_cast<double>(lhs);
    r.cond_i.rhs = 0;
    r.cond_i.residual = scale > Real(0) ? static_cast<double>(std::abs(lhs) / scale) : 0.0;
    r.cond_i.holds = std::abs(lhs) <= Real(kConditionTol) * scale;
  }
  {
    const Real lhs = sp * Km * Rp + sm * Kp * Rm;
    const Real rhs = Km * Jp - Kp * Jm;
    const Real scale = detail::max_abs({Km * Rp, Kp * Rm, Km * Jp, Kp * Jm});
    const Real tol = Real(kConditionTol) * scale;
    r.cond_ii.lhs = static_cast<double>(lhs);
    r.cond_ii.rhs = static_cast<double>(rhs);
    r.cond_ii.residual = scale > Real(0) ? static_cast<double>(std::abs(lhs - rhs) / scale) : 0.0;
    r.cond_ii.holds = sgn(lhs, tol) == sgn(rhs, tol);
  }
  {
    const Real lhs = 2 * Km * Kpp + 2 * Kp * Kpm - Jp * Jm;
    const Real rhs = sp * sm * Rp * Rm;
    const Real scale = detail::max_abs({2 * Km * Kpp, 2 * Kp * Kpm, Jp * Jm, rhs});
    const Real tol = Real(kConditionTol) * scale;
    r.cond_iii.lhs = static_cast<double>(lhs);
    r.cond_iii.rhs = static_cast<double>(rhs);
    r.cond_iii.residual = scale > Real(0) ? static_cast<double>(std::abs(lhs - rhs) / scale) : 0.0;
    r.cond_iii.holds = sgn(lhs, tol) == sgn(rhs, tol);
  }

  if (dm.has_vectors) {
    const Vec2<Real> w = interface_matrix(mp, lam) * dm.v_gt;
    const Vec2<Real> res = transfer_matrix(mp, Side::plus, lam) * w - dp.zeta_lt * w;
    const Real wn = w.norm();
    r.kernel_residual = wn > Real(0) ? static_cast<double>(res.norm() / wn) : 1.0;
    r.kernel_dim = res.norm() <= Real(kKernelTol) * wn ? 1 : 0;
  } else {
    r.kernel_residual = 1.0;
    r.kernel_dim = 0;
  }
  return r;
}

template <typename Real = double>
struct SpectrumEntry {
  Real lambda{};
  int s1{1};
  int s2{1};
  Branch branch{Branch::plus_plus};
  Vec2<Real> seed = Vec2<Real>::Zero();  // phi = psi(-1)
};

template <typename Real = double>
struct SpectrumResult {
  std::vector<SpectrumEntry<Real>> entries;
  Real p_gamma_prime{};
  bool reliable{true};
  std::vector<std::string> diagnostics;
};

inline constexpr double kBoundaryTol = 1e-10;

/// Closed-form point spectrum: sigma_+ and sigma_- from the case table in
/// p'_gamma against a_m and a_p, each entry re-checked with the kernel test.
template <typename Real>
SpectrumResult<Real> point_spectrum(const ModelParams<Real>& mp) {
  if (!is_valid(mp)) throw DomainError("point_spectrum: invalid parameters");
  SpectrumResult<Real> out;
  out.p_gamma_prime = p_gamma_prime(mp);
  const Real x = mp.p * std::sinh(2 * mp.gamma);

  for (int s2 : {1, -1}) {
    const auto hyp = hypothesis_check(mp, s2);
    if (!hyp.ok) {
      out.reliable = false;
      out.diagnostics.push_back(hyp.diagnostic);
    }
    const Real t = Real(s2) * out.p_gamma_prime;
    const Real margin = std::min(std::abs(t - mp.a_m), std::abs(t - mp.a_p));
    if (margin <= Real(kBoundaryTol)) {
      out.reliable = false;
      out.diagnostics.push_back(std::string("boundary: ") + (s2 > 0 ? "+" : "-") +
                                "p'_gamma within 1e-10 of a coin amplitude; classification unreliable");
      continue;
    }
    int s1 = 0;
    if (mp.a_m < t && t < mp.a_p) s1 = 1;
    else if (mp.a_p < t && t < mp.a_m) s1 = -1;
    if (s1 == 0) continue;

    SpectrumEntry<Real> e;
    e.s1 = s1;
    e.s2 = s2;
    e.branch = branch_of(s1, s2);
    e.lambda = s2 > 0 ? lambda_plus(Real(s1) * x) : lambda_minus(Real(s1) * x);
    out.entries.push_back(e);
  }

  if (!out.reliable) {
    out.entries.clear();
    return out;
  }

  for (auto& e : out.entries) {
    const Complex<Real> lam(e.lambda, 0);
    e.seed = transfer_data(mp, Side::minus, lam).v_gt;
    const auto report = match_conditions(mp, e.lambda);
    if (report.kernel_dim != 1) {
      out.reliable = false;
      out.diagnostics.push_back("kernel test rejects lambda=" + std::to_string(static_cast<double>(e.lambda)) +
                                " selected by the case table");
    }
  }
  return out;
}

template <typename Real = double>
struct Eigenstate {
  Real lambda{};
  Vec2<Real> phi = Vec2<Real>::Zero();
  WindowedState<Real> values;
  Real decay_plus{};   // |zeta_p^<|
  Real decay_minus{};  // 1 / |zeta_m^>|
  Real norm_sq{};
};

/// Builds psi(x) on [x0, x1] from the transfer recurrences:
/// psi(-1) = phi, psi(0) = T_{-1} phi, psi(x+1) = T_p psi(x), psi(x-1) = T_m^{-1} psi(x).
/// Each step is followed by the spectral projection onto the decaying mode, so
/// rounding never seeds the growing solution.
template <typename Real>
Eigenstate<Real> eigenstate(const ModelParams<Real>& mp, const SpectrumEntry<Real>& entry, long x0, long x1) {
  if (x0 > -2 || x1 < 1) throw DomainError("eigenstate: window must contain [-2, 1]");
  const auto spec = point_spectrum(mp);
  const Real tol = Real(1e-12) * std::max(Real(1), std::abs(entry.lambda));
  const bool listed = std::any_of(spec.entries.begin(), spec.entries.end(), [&](const auto& e) {
    return e.s1 == entry.s1 && e.s2 == entry.s2 && std::abs(e.lambda - entry.lambda) <= tol;
  });
  if (!listed) throw DomainError("eigenstate: lambda is not in the point spectrum");
  if (match_conditions(mp, entry.lambda).kernel_dim != 1) throw DomainError("eigenstate: kernel test failed");

  const Complex<Real> lam(entry.lambda, 0);
  const auto dm = transfer_data(mp, Side::minus, lam);
  const auto dp = transfer_data(mp, Side::plus, lam);
  const Mat2<Real> tp = transfer_matrix(mp, Side::plus, lam);
  const Mat2<Real> tm = transfer_matrix(mp, Side::minus, lam);
  const Mat2<Real> tm_inv = tm.inverse();
  const Mat2<Real> id = Mat2<Real>::Identity();
  // Riesz projections onto ker(T_p - zeta_p^<) and ker(T_m - zeta_m^>).
  const Mat2<Real> keep_plus = (tp - dp.zeta_gt * id) / (dp.zeta_lt - dp.zeta_gt);
  const Mat2<Real> keep_minus = (tm - dm.zeta_lt * id) / (dm.zeta_gt - dm.zeta_lt);

  Eigenstate<Real> st;
  st.lambda = entry.lambda;
  st.phi = dm.v_gt;
  st.decay_plus = std::abs(dp.zeta_lt);
  st.decay_minus = Real(1) / std::abs(dm.zeta_gt);
  st.values = WindowedState<Real>::zeros(x0, x1);

  auto store = [&](long x, const Vec2<Real>& v) { st.values.at(x) = {v(0), v(1)}; };
  store(-1, st.phi);
  Vec2<Real> v = keep_plus * (interface_matrix(mp, lam) * st.phi);
  store(0, v);
  for (long x = 1; x <= x1; ++x) {
    v = keep_plus * (tp * v);
    store(x, v);
  }
  v = st.phi;
  for (long x = -2; x >= x0; --x) {
    v = keep_minus * (tm_inv * v);
    store(x, v);
  }
  st.norm_sq = st.values.norm_sq();
  return st;
}

}  // namespace qwspec

#endif  // QWSPEC_SPECTRUM_HPP
