#ifndef QWSPEC_MODEL_HPP
#define QWSPEC_MODEL_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qwspec/types.hpp"

namespace qwspec {

/// Parameters of the two-phase split-step walk U = SC.
///
/// The shift S is uniform (p, q); the coin takes (a_p, b_p) on x >= 0 and
/// (a_m, b_m) on x < 0, with a uniform gain-loss strength gamma.
template <typename Real = double>
struct ModelParams {
  Real gamma{0};
  Real p{0};
  Complex<Real> q{1, 0};
  Real a_m{0};
  Real a_p{0};
  Complex<Real> b_m{1, 0};
  Complex<Real> b_p{1, 0};

  Real a(Side side) const { return side == Side::plus ? a_p : a_m; }
  Complex<Real> b(Side side) const { return side == Side::plus ? b_p : b_m; }

  static constexpr Side side_of(long x) { return x >= 0 ? Side::plus : Side::minus; }
  Real a_at(long x) const { return a(side_of(x)); }
  Complex<Real> b_at(long x) const { return b(side_of(x)); }

  template <typename Other>
  ModelParams<Other> cast() const {
    return {Other(gamma),  Other(p),   Complex<Other>(Other(q.real()), Other(q.imag())),
            Other(a_m),    Other(a_p), Complex<Other>(Other(b_m.real()), Other(b_m.imag())),
            Complex<Other>(Other(b_p.real()), Other(b_p.imag()))};
  }
};

/// Values of the two components at one lattice site.
template <typename Real = double>
struct SiteState {
  Complex<Real> up{};
  Complex<Real> down{};
};

/// A two-component sequence restricted to the closed window [x0, x0 + size - 1].
template <typename Real = double>
struct WindowedState {
  long x0{0};
  std::vector<SiteState<Real>> sites;

  long x1() const { return x0 + static_cast<long>(sites.size()) - 1; }
  std::size_t size() const { return sites.size(); }
  bool contains(long x) const { return x >= x0 && x <= x1(); }
  SiteState<Real>& at(long x) { return sites.at(static_cast<std::size_t>(x - x0)); }
  const SiteState<Real>& at(long x) const { return sites.at(static_cast<std::size_t>(x - x0)); }

  static WindowedState zeros(long x0, long x1) {
    WindowedState w;
    w.x0 = x0;
    w.sites.assign(static_cast<std::size_t>(x1 - x0 + 1), SiteState<Real>{});
    return w;
  }

  Real norm_sq() const {
    Real s = 0;
    for (const auto& v : sites) s += std::norm(v.up) + std::norm(v.down);
    return s;
  }
};

struct ValidationIssue {
  std::string field;
  std::string message;
  double defect{0};
};

inline constexpr double kUnitarityTol = 1e-12;

namespace detail {

inline std::string format_defect(const char* fmt, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace detail

/// Reports every violated parameter constraint. An empty list means valid.
template <typename Real>
std::vector<ValidationIssue> validate(const ModelParams<Real>& mp) {
  std::vector<ValidationIssue> issues;
  auto finite = [](auto v) { return std::isfinite(static_cast<double>(v)); };
  const bool all_finite = finite(mp.gamma) && finite(mp.p) && finite(mp.q.real()) && finite(mp.q.imag()) &&
                          finite(mp.a_m) && finite(mp.a_p) && finite(mp.b_m.real()) && finite(mp.b_m.imag()) &&
                          finite(mp.b_p.real()) && finite(mp.b_p.imag());
  if (!all_finite) {
    issues.push_back({"params", "non-finite parameter value", 0.0});
    return issues;
  }

  auto open_interval = [&](const char* name, Real v) {
    if (!(v > Real(-1) && v < Real(1))) {
      issues.push_back({name, std::string(name) + " outside open interval (-1,1)",
                        static_cast<double>(std::abs(v)) - 1.0});
    }
  };
  open_interval("p", mp.p);
  open_interval("a_m", mp.a_m);
  open_interval("a_p", mp.a_p);

  auto pythagoras = [&](const char* field, const char* lhs, Real a, Complex<Real> b) {
    const double s = static_cast<double>(a * a + std::norm(b));
    if (std::abs(s - 1.0) > kUnitarityTol) {
      issues.push_back({field, detail::format_defect((std::string(lhs) + " = %.6g != 1").c_str(), s), s - 1.0});
    }
  };
  pythagoras("q", "p^2+|q|^2", mp.p, mp.q);
  pythagoras("b_m", "a_m^2+|b_m|^2", mp.a_m, mp.b_m);
  pythagoras("b_p", "a_p^2+|b_p|^2", mp.a_p, mp.b_p);

  if (std::abs(mp.q) == Real(0)) issues.push_back({"q", "|q| must be positive", 0.0});
  if (std::abs(mp.b_m) == Real(0)) issues.push_back({"b_m", "|b_m| must be positive", 0.0});
  if (std::abs(mp.b_p) == Real(0)) issues.push_back({"b_p", "|b_p| must be positive", 0.0});
  return issues;
}

template <typename Real>
bool is_valid(const ModelParams<Real>& mp) {
  return validate(mp).empty();
}

/// Local coin [[e^{-2g} a, conj(b)], [b, -e^{2g} a]] at site x.
template <typename Real>
Mat2<Real> coin_at(const ModelParams<Real>& mp, long x) {
  const Real a = mp.a_at(x);
  const Complex<Real> b = mp.b_at(x);
  const Real e = std::exp(2 * mp.gamma);
  Mat2<Real> c;
  c << Complex<Real>(a / e), std::conj(b), b, Complex<Real>(-e * a);
  return c;
}

/// Action of U = SC on a window; only sites whose neighbours are inside the
/// window are returned, i.e. the result covers [x0 + 1, x1 - 1].
template <typename Real>
WindowedState<Real> apply_U(const ModelParams<Real>& mp, const WindowedState<Real>& psi) {
  if (psi.size() < 3) throw DomainError("apply_U: window must contain at least 3 sites");
  const Real e = std::exp(2 * mp.gamma);
  const Complex<Real> q = mp.q;
  const Complex<Real> qc = std::conj(q);
  const Real p = mp.p;

  // (C psi)_1(x) and (C psi)_2(x)
  auto c_up = [&](long x) {
    const auto& s = psi.at(x);
    return (mp.a_at(x) / e) * s.up + std::conj(mp.b_at(x)) * s.down;
  };
  auto c_down = [&](long x) {
    const auto& s = psi.at(x);
    return mp.b_at(x) * s.up - (e * mp.a_at(x)) * s.down;
  };

  WindowedState<Real> out = WindowedState<Real>::zeros(psi.x0 + 1, psi.x1() - 1);
  for (long x = out.x0; x <= out.x1(); ++x) {
    auto& o = out.at(x);
    o.up = p * c_up(x) + q * c_down(x + 1);
    o.down = qc * c_up(x - 1) - p * c_down(x);
  }
  return out;
}

}  // namespace qwspec

#endif  // QWSPEC_MODEL_HPP
