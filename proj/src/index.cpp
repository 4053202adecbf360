#include "qwspec/index.hpp"

#include <cmath>
#include <cstdlib>

#include "qwspec/oracle.hpp"

namespace qwspec {

GapReport essential_gap(const AsymptoticData& asym) {
  return {std::abs(std::abs(asym.p_minus) - std::abs(asym.a_minus)) > kGapTol,
          std::abs(std::abs(asym.p_plus) - std::abs(asym.a_plus)) > kGapTol};
}

IndexResult chiral_index(const AsymptoticData& asym) {
  const auto gap = essential_gap(asym);
  IndexResult r;
  r.gap_minus = gap.gap_minus;
  r.gap_plus = gap.gap_plus;
  r.defined = gap.gap_minus && gap.gap_plus;
  if (!r.defined) return r;

  const bool shift_minus = std::abs(asym.p_minus) > std::abs(asym.a_minus);
  const bool shift_plus = std::abs(asym.p_plus) > std::abs(asym.a_plus);
  if (!shift_minus && !shift_plus) {
    r.value = 0;
  } else if (!shift_minus && shift_plus) {
    r.value = sgn(asym.p_plus);
  } else if (shift_minus && !shift_plus) {
    r.value = -sgn(asym.p_minus);
  } else {
    r.value = sgn(asym.p_plus) - sgn(asym.p_minus);
  }
  return r;
}

ProtectionReport protection_check(const ModelParams<double>& mp, const ProtectionOptions& opts) {
  if (mp.gamma != 0.0) throw DomainError("protection_check: only defined for gamma = 0");
  ProtectionReport rep;
  rep.index = chiral_index(AsymptoticData::from(mp));
  if (!rep.index.defined) throw DomainError("protection_check: index undefined (essential gap closed)");

  const auto op = assemble_truncated(mp, opts.half_width);
  const auto spec = dense_spectrum(op);
  for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
    const auto z = spec.values(k);
    const bool near_plus = std::abs(z - 1.0) < opts.eigenvalue_tol;
    const bool near_minus = std::abs(z + 1.0) < opts.eigenvalue_tol;
    if (!near_plus && !near_minus) continue;
    if (localization(spec.vectors.col(k), op) < opts.localization_threshold) continue;
    rep.localized.push_back(z);
    (near_plus ? rep.count_plus : rep.count_minus) += 1;
  }
  rep.holds = rep.count_plus + rep.count_minus >= std::abs(rep.index.value);
  return rep;
}

}  // namespace qwspec
