#ifndef QWSPEC_VERIFY_HPP
#define QWSPEC_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwspec/io.hpp"
#include "qwspec/model.hpp"

namespace qwspec {

struct CheckResult {
  std::string name;
  bool pass{false};
  double value{0};      // measured worst-case quantity
  double threshold{0};  // bound it is compared against
  std::string detail;
};

struct VerifyOptions {
  long half_width{60};
  long window{150};
  std::uint64_t seed{20240611};
  double tol{1e-9};  // eigenstate residual bound
  std::optional<EigenstateFile> state;  // externally supplied eigenstate to re-check
};

/// Cross-validation battery: closed forms against each other and against the
/// dense truncated operator.
std::vector<CheckResult> run_verification(const ModelParams<double>& mp, const VerifyOptions& opts);

std::string verification_json(const std::vector<CheckResult>& checks, const VerifyOptions& opts);

}  // namespace qwspec

#endif  // QWSPEC_VERIFY_HPP
