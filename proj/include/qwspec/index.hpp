#ifndef QWSPEC_INDEX_HPP
#define QWSPEC_INDEX_HPP

#include <complex>
#include <vector>

#include "qwspec/model.hpp"

namespace qwspec {

/// Limits p(-inf), p(+inf), a(-inf), a(+inf) of the shift and coin amplitudes.
struct AsymptoticData {
  double p_minus{0};
  double p_plus{0};
  double a_minus{0};
  double a_plus{0};

  static AsymptoticData from(const ModelParams<double>& mp) { return {mp.p, mp.p, mp.a_m, mp.a_p}; }
};

struct GapReport {
  bool gap_minus{false};
  bool gap_plus{false};
};

struct IndexResult {
  bool defined{false};
  int value{0};
  bool gap_minus{false};
  bool gap_plus{false};

  bool operator==(const IndexResult&) const = default;
};

inline constexpr double kGapTol = 1e-12;

/// +-1 lie outside the essential spectrum at an end iff |p| != |a| there.
GapReport essential_gap(const AsymptoticData& asym);

/// Chiral index of the unitary walk with Gamma = S, from the asymptotic values only.
IndexResult chiral_index(const AsymptoticData& asym);

struct ProtectionOptions {
  long half_width{60};
  double eigenvalue_tol{1e-3};
  double localization_threshold{0.99};
};

struct ProtectionReport {
  IndexResult index;
  int count_plus{0};   // localized eigenvalues near +1
  int count_minus{0};  // localized eigenvalues near -1
  std::vector<std::complex<double>> localized;
  bool holds{false};   // count_plus + count_minus >= |index|
};

/// Counts localized eigenvalues of the truncated unitary walk near +-1 and
/// compares with |index|. Requires gamma == 0 and a defined index.
ProtectionReport protection_check(const ModelParams<double>& mp, const ProtectionOptions& opts = {});

}  // namespace qwspec

#endif  // QWSPEC_INDEX_HPP
