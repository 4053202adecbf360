#include "qwspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace qwspec {

namespace {

double number_at(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return number_at(j, key);
}

std::complex<double> complex_or_default(const nlohmann::json& j, const char* re_key, const char* im_key,
                                        double partner, const char* field, std::vector<std::string>& defaulted) {
  const auto re = optional_number(j, re_key);
  const auto im = optional_number(j, im_key);
  if (!re && !im) {
    defaulted.emplace_back(field);
    return {std::sqrt(std::max(0.0, 1.0 - partner * partner)), 0.0};
  }
  return {re.value_or(0.0), im.value_or(0.0)};
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string string_array(const std::vector<std::string>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + quoted(xs[i]);
  return out + "]";
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero in output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

LoadedParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("parameter document must be a JSON object");
  LoadedParams lp;
  try {
    auto& mp = lp.params;
    mp.gamma = optional_number(j, "gamma").value_or(0.0);
    mp.p = number_at(j, "p");
    mp.a_m = number_at(j, "a_m");
    mp.a_p = number_at(j, "a_p");
    mp.q = complex_or_default(j, "q_re", "q_im", mp.p, "q", lp.defaulted);
    mp.b_m = complex_or_default(j, "b_m_re", "b_m_im", mp.a_m, "b_m", lp.defaulted);
    mp.b_p = complex_or_default(j, "b_p_re", "b_p_im", mp.a_p, "b_p", lp.defaulted);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("missing or invalid parameter: ") + e.what());
  }
  return lp;
}

LoadedParams load_params(const std::string& path) { return params_from_json(read_json_file(path)); }

std::optional<AsymptoticData> asymptotics_from_json(const nlohmann::json& j) {
  if (!j.is_object()) return std::nullopt;
  const char* keys[] = {"p_minus", "p_plus", "a_minus", "a_plus"};
  bool any = false;
  for (const char* k : keys) any = any || j.contains(k);
  if (!any) return std::nullopt;
  try {
    return AsymptoticData{number_at(j, "p_minus"), number_at(j, "p_plus"), number_at(j, "a_minus"),
                          number_at(j, "a_plus")};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("incomplete asymptotic data: ") + e.what());
  }
}

std::string params_json(const LoadedParams& lp) {
  const auto& mp = lp.params;
  std::ostringstream os;
  os << "{\"gamma\":" << format_number(mp.gamma) << ",\"p\":" << format_number(mp.p)
     << ",\"q_re\":" << format_number(mp.q.real()) << ",\"q_im\":" << format_number(mp.q.imag())
     << ",\"a_m\":" << format_number(mp.a_m) << ",\"a_p\":" << format_number(mp.a_p)
     << ",\"b_m_re\":" << format_number(mp.b_m.real()) << ",\"b_m_im\":" << format_number(mp.b_m.imag())
     << ",\"b_p_re\":" << format_number(mp.b_p.real()) << ",\"b_p_im\":" << format_number(mp.b_p.imag())
     << ",\"defaulted\":" << string_array(lp.defaulted) << "}";
  return os.str();
}

std::string spectrum_json(const SpectrumResult<double>& result, const LoadedParams& lp) {
  std::ostringstream os;
  os << "{\"p_gamma_prime\":" << format_number(result.p_gamma_prime) << ",\"reliable\":" << bool_str(result.reliable)
     << ",\"diagnostics\":" << string_array(result.diagnostics) << ",\"params\":" << params_json(lp)
     << ",\"entries\":[";
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& e = result.entries[i];
    os << (i ? "," : "") << "{\"lambda\":" << format_number(e.lambda) << ",\"s1\":" << e.s1 << ",\"s2\":" << e.s2
       << ",\"branch\":" << quoted(to_string(e.branch)) << ",\"phi\":[" << format_number(e.seed(0).real()) << ","
       << format_number(e.seed(0).imag()) << "," << format_number(e.seed(1).real()) << ","
       << format_number(e.seed(1).imag()) << "]}";
  }
  os << "]}";
  return os.str();
}

std::string index_json(const IndexResult& r, const ProtectionReport* protection) {
  std::ostringstream os;
  os << "{\"defined\":" << bool_str(r.defined) << ",\"value\":";
  if (r.defined) os << r.value;
  else os << "null";
  os << ",\"gap_minus\":" << bool_str(r.gap_minus) << ",\"gap_plus\":" << bool_str(r.gap_plus);
  if (protection) {
    os << ",\"protection\":{\"holds\":" << bool_str(protection->holds)
       << ",\"count_plus\":" << protection->count_plus << ",\"count_minus\":" << protection->count_minus
       << ",\"eigenvalues\":[";
    for (std::size_t i = 0; i < protection->localized.size(); ++i) {
      os << (i ? "," : "") << "[" << format_number(protection->localized[i].real()) << ","
         << format_number(protection->localized[i].imag()) << "]";
    }
    os << "]}";
  }
  os << "}";
  return os.str();
}

void write_eigenstate_csv(std::ostream& os, const Eigenstate<double>& st, const SpectrumEntry<double>& entry) {
  os << "# lambda=" << format_number(st.lambda) << "\n";
  os << "# s1=" << entry.s1 << ",s2=" << entry.s2 << ",branch=" << to_string(entry.branch) << "\n";
  os << "# phi=" << format_number(st.phi(0).real()) << "," << format_number(st.phi(0).imag()) << ","
     << format_number(st.phi(1).real()) << "," << format_number(st.phi(1).imag()) << "\n";
  os << "# decay_plus=" << format_number(st.decay_plus) << "\n";
  os << "# decay_minus=" << format_number(st.decay_minus) << "\n";
  os << "# window=" << st.values.x0 << "," << st.values.x1() << "\n";
  os << "# norm_sq=" << format_number(st.norm_sq) << "\n";
  os << "x,re_up,im_up,re_down,im_down\n";
  for (long x = st.values.x0; x <= st.values.x1(); ++x) {
    const auto& s = st.values.at(x);
    os << x << "," << format_number(s.up.real()) << "," << format_number(s.up.imag()) << ","
       << format_number(s.down.real()) << "," << format_number(s.down.imag()) << "\n";
  }
}

EigenstateFile read_eigenstate_csv(std::istream& is) {
  EigenstateFile f;
  bool have_lambda = false;
  bool have_header = false;
  std::string line;
  long expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# lambda=", 0) == 0) {
        f.lambda = std::stod(line.substr(9));
        have_lambda = true;
      }
      continue;
    }
    if (!have_header) {
      if (line != "x,re_up,im_up,re_down,im_down") throw InputError("eigenstate CSV: unexpected header '" + line + "'");
      have_header = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    double vals[5];
    for (double& v : vals) {
      if (!std::getline(row, cell, ',')) throw InputError("eigenstate CSV: short row '" + line + "'");
      v = std::stod(cell);
    }
    const long x = static_cast<long>(vals[0]);
    if (f.values.sites.empty()) f.values.x0 = x;
    else if (x != expected) throw InputError("eigenstate CSV: non-contiguous sites");
    expected = x + 1;
    f.values.sites.push_back({{vals[1], vals[2]}, {vals[3], vals[4]}});
  }
  if (!have_lambda || f.values.sites.empty()) throw InputError("eigenstate CSV: missing lambda or data rows");
  return f;
}

void write_matrix_csv(std::ostream& os, const TruncatedOperator<double>& op) {
  os << "# half_width=" << op.half_width << ",dim=" << op.dim() << ",boundary=" << op.boundary
     << ",ordering=interleaved up(-N) down(-N) up(-N+1) ...,row-major re,im pairs\n";
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    for (Eigen::Index c = 0; c < op.dim(); ++c) {
      os << (c ? "," : "") << format_number(op.entries(r, c).real()) << "," << format_number(op.entries(r, c).imag());
    }
    os << "\n";
  }
}

}  // namespace qwspec
