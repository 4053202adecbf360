#ifndef QWSPEC_IO_HPP
#define QWSPEC_IO_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwspec/index.hpp"
#include "qwspec/model.hpp"
#include "qwspec/oracle.hpp"
#include "qwspec/spectrum.hpp"

namespace qwspec {

/// Malformed or unreadable input; the CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedParams {
  ModelParams<double> params;
  std::vector<std::string> defaulted;  // fields filled by the +sqrt(1 - x^2) convention
};

/// Reads keys gamma, p, q_re, q_im, a_m, a_p, b_m_re, b_m_im, b_p_re, b_p_im.
/// Missing q or b pairs default to the real root +sqrt(1 - p^2) / +sqrt(1 - a^2).
LoadedParams params_from_json(const nlohmann::json& j);
LoadedParams load_params(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

/// Keys p_minus, p_plus, a_minus, a_plus; nullopt if the document has none of them.
std::optional<AsymptoticData> asymptotics_from_json(const nlohmann::json& j);

/// 17 significant digits, lowercase scientific.
std::string format_number(double v);

std::string params_json(const LoadedParams& lp);
std::string spectrum_json(const SpectrumResult<double>& result, const LoadedParams& lp);
std::string index_json(const IndexResult& r, const ProtectionReport* protection = nullptr);

void write_eigenstate_csv(std::ostream& os, const Eigenstate<double>& st, const SpectrumEntry<double>& entry);

struct EigenstateFile {
  double lambda{0};
  WindowedState<double> values;
};

EigenstateFile read_eigenstate_csv(std::istream& is);

/// Row-major dense dump; one matrix row per line as re,im pairs.
void write_matrix_csv(std::ostream& os, const TruncatedOperator<double>& op);

}  // namespace qwspec

#endif  // QWSPEC_IO_HPP
