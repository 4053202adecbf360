#ifndef QWSPEC_SWEEP_HPP
#define QWSPEC_SWEEP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwspec/io.hpp"
#include "qwspec/spectrum.hpp"

namespace qwspec {

struct SweepAxis {
  std::string name;  // gamma | p | a_m | a_p
  double lo{0};
  double hi{0};
  int steps{2};

  /// Grid value i of steps, endpoints exact.
  double value(int i) const;
};

struct SweepSpec {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  LoadedParams fixed;
};

struct SweepRow {
  double v1{0};
  double v2{0};
  double p_gamma_prime{0};
  std::string flag;  // ok | unreliable | error
  std::vector<SpectrumEntry<double>> entries;
};

/// Returns a description of every problem with the spec; empty means runnable.
std::vector<std::string> validate_sweep(const SweepSpec& spec);

SweepSpec sweep_from_json(const nlohmann::json& j);

/// Sets one named parameter, keeping the phase of the partner q or b and
/// restoring p^2 + |q|^2 = 1 (resp. a^2 + |b|^2 = 1).
ModelParams<double> with_parameter(ModelParams<double> mp, const std::string& name, double value);

/// Evaluates the point spectrum on the grid, row-major (axis1 outer).
/// `threads` = 0 picks the hardware concurrency capped by QWSPEC_THREADS.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace qwspec

#endif  // QWSPEC_SWEEP_HPP
