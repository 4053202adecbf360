// qwspec: point spectrum, bound states, sweeps, index and cross-checks for the
// two-phase split-step walk.
//
//   qwspec spectrum   PARAMS.json [--out FILE] [--dump-matrix FILE --half-width N]
//   qwspec eigenstate PARAMS.json [--window N] [--out FILE.csv]
//   qwspec sweep      SWEEP.json  [--out FILE.csv]
//   qwspec index      PARAMS_OR_ASYMPTOTICS.json [--protect] [--half-width N]
//   qwspec verify     PARAMS.json [--half-width N] [--window N] [--seed S] [--tol T] [--state FILE.csv]
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 no bound state.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qwspec/qwspec.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kEmpty = 3 };

struct Options {
  std::string params;
  std::string out;
  std::string dump_matrix;
  std::string state;
  long half_width{60};
  long window{150};
  std::uint64_t seed{20240611};
  double tol{1e-9};
  bool protect{false};
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw qwspec::InputError("cannot write '" + o.out + "'");
  f << text;
}

qwspec::LoadedParams checked_params(const qwspec::LoadedParams& lp) {
  const auto issues = qwspec::validate(lp.params);
  if (issues.empty()) return lp;
  std::string msg = "invalid parameters:";
  for (const auto& v : issues) msg += "\n  " + v.field + ": " + v.message;
  throw qwspec::InputError(msg);
}

qwspec::LoadedParams load_checked(const Options& o) {
  if (o.params.empty()) throw Usage("a parameter file is required (--params FILE)");
  return checked_params(qwspec::load_params(o.params));
}

void dump_matrix(const Options& o, const qwspec::ModelParams<double>& mp) {
  if (o.dump_matrix.empty()) return;
  std::ofstream f(o.dump_matrix);
  if (!f) throw qwspec::InputError("cannot write '" + o.dump_matrix + "'");
  qwspec::write_matrix_csv(f, qwspec::assemble_truncated(mp, o.half_width));
}

int cmd_spectrum(const Options& o) {
  const auto lp = load_checked(o);
  const auto res = qwspec::point_spectrum(lp.params);
  for (const auto& d : res.diagnostics) std::cerr << "qwspec: " << d << "\n";
  emit(o, qwspec::spectrum_json(res, lp) + "\n");
  dump_matrix(o, lp.params);
  return kOk;
}

std::string branch_path(const std::string& out, qwspec::Branch b) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string() + "_" + qwspec::to_string(b);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

int cmd_eigenstate(const Options& o) {
  const auto lp = load_checked(o);
  if (o.window < 2) throw Usage("--window must be >= 2 so the window contains [-2, 1]");
  const auto res = qwspec::point_spectrum(lp.params);
  for (const auto& d : res.diagnostics) std::cerr << "qwspec: " << d << "\n";
  if (res.entries.empty()) {
    std::cerr << "qwspec: no bound state\n";
    return kEmpty;
  }
  for (const auto& e : res.entries) {
    const auto st = qwspec::eigenstate(lp.params, e, -o.window, o.window);
    std::ostringstream os;
    qwspec::write_eigenstate_csv(os, st, e);
    if (o.out.empty()) {
      std::cout << os.str();
      continue;
    }
    const std::string path = res.entries.size() > 1 ? branch_path(o.out, e.branch) : o.out;
    std::ofstream f(path);
    if (!f) throw qwspec::InputError("cannot write '" + path + "'");
    f << os.str();
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  if (o.params.empty()) throw Usage("a sweep file is required (--params FILE)");
  const auto spec = qwspec::sweep_from_json(qwspec::read_json_file(o.params));
  const auto issues = qwspec::validate_sweep(spec);
  if (!issues.empty()) {
    std::string msg = "invalid sweep:";
    for (const auto& s : issues) msg += "\n  " + s;
    throw qwspec::InputError(msg);
  }
  const auto rows = qwspec::run_sweep(spec);
  std::ostringstream os;
  qwspec::write_sweep_csv(os, spec, rows);
  emit(o, os.str());
  return kOk;
}

int cmd_index(const Options& o) {
  if (o.params.empty()) throw Usage("a parameter or asymptotics file is required (--params FILE)");
  const auto doc = qwspec::read_json_file(o.params);
  if (auto asym = qwspec::asymptotics_from_json(doc)) {
    if (o.protect) throw Usage("--protect needs full walk parameters, not asymptotic data");
    emit(o, qwspec::index_json(qwspec::chiral_index(*asym)) + "\n");
    return kOk;
  }
  const auto lp = checked_params(qwspec::params_from_json(doc));
  const auto idx = qwspec::chiral_index(qwspec::AsymptoticData::from(lp.params));
  if (!o.protect || !idx.defined) {
    emit(o, qwspec::index_json(idx) + "\n");
    return kOk;
  }
  if (lp.params.gamma != 0.0) throw Usage("--protect requires gamma = 0");
  qwspec::ProtectionOptions po;
  po.half_width = o.half_width;
  const auto rep = qwspec::protection_check(lp.params, po);
  emit(o, qwspec::index_json(idx, &rep) + "\n");
  return rep.holds ? kOk : kVerifyFailed;
}

int cmd_verify(const Options& o) {
  const auto lp = load_checked(o);
  qwspec::VerifyOptions vo;
  vo.half_width = o.half_width;
  vo.window = o.window;
  vo.seed = o.seed;
  vo.tol = o.tol;
  if (vo.half_width < 2) throw Usage("--half-width must be >= 2");
  if (vo.window < 2) throw Usage("--window must be >= 2");
  if (!o.state.empty()) {
    std::ifstream f(o.state);
    if (!f) throw qwspec::InputError("cannot open '" + o.state + "'");
    vo.state = qwspec::read_eigenstate_csv(f);
  }
  dump_matrix(o, lp.params);
  const auto checks = qwspec::run_verification(lp.params, vo);
  emit(o, qwspec::verification_json(checks, vo) + "\n");
  bool all = true;
  for (const auto& c : checks) {
    if (c.pass) continue;
    all = false;
    std::cerr << "qwspec: check " << c.name << " failed: value " << qwspec::format_number(c.value)
              << " > threshold " << qwspec::format_number(c.threshold) << " (" << c.detail << ")\n";
  }
  return all ? kOk : kVerifyFailed;
}

void common_flags(CLI::App* sub, Options& o, const std::string& file_help) {
  sub->add_option("--params,file", o.params, file_help);
  sub->add_option("--out", o.out, "Output file (default: stdout)");
  sub->add_option("--half-width", o.half_width, "Half-width N of the truncated operator")->capture_default_str();
  sub->add_option("--window", o.window, "Eigenstate window half-width")->capture_default_str();
  sub->add_option("--seed", o.seed, "Seed for randomized checks")->capture_default_str();
  sub->add_option("--tol", o.tol, "Eigenstate residual tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of the two-phase non-unitary split-step quantum walk"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&)> run;

  auto add = [&](const char* name, const char* help, const std::string& file_help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    common_flags(sub, o, file_help);
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };
  auto* spec = add("spectrum", "Closed-form point spectrum as JSON", "Parameter file", cmd_spectrum);
  spec->add_option("--dump-matrix", o.dump_matrix, "Also write the truncated operator as CSV");
  add("eigenstate", "Bound-state eigenvectors as CSV", "Parameter file", cmd_eigenstate);
  add("sweep", "Phase diagram over one or two parameters as CSV", "Sweep file", cmd_sweep);
  auto* idx = add("index", "Chiral index as JSON", "Parameter or asymptotics file", cmd_index);
  idx->add_flag("--protect", o.protect, "Count localized eigenvalues near +-1 (gamma = 0)");
  auto* ver = add("verify", "Cross-validation battery as JSON", "Parameter file", cmd_verify);
  ver->add_option("--state", o.state, "Eigenstate CSV to re-check");
  ver->add_option("--dump-matrix", o.dump_matrix, "Also write the truncated operator as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    return run(o);
  } catch (const Usage& e) {
    std::cerr << "qwspec: " << e.what() << "\n";
  } catch (const qwspec::InputError& e) {
    std::cerr << "qwspec: " << e.what() << "\n";
  } catch (const qwspec::DomainError& e) {
    std::cerr << "qwspec: " << e.what() << "\n";
  } catch (const qwspec::OracleError& e) {
    std::cerr << "qwspec: oracle failure: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "qwspec: " << e.what() << "\n";
  }
  return kInputError;
}
