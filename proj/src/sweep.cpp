#include "qwspec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

namespace qwspec {

namespace {

bool is_axis_name(const std::string& n) { return n == "gamma" || n == "p" || n == "a_m" || n == "a_p"; }

SweepAxis axis_from_json(const nlohmann::json& j, const char* which) {
  if (!j.is_object()) throw InputError(std::string(which) + " must be an object");
  try {
    SweepAxis a;
    a.name = j.at("name").get<std::string>();
    a.lo = j.at("lo").get<double>();
    a.hi = j.at("hi").get<double>();
    a.steps = j.at("steps").get<int>();
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(which) + ": " + e.what());
  }
}

void check_axis(const SweepAxis& a, std::vector<std::string>& issues) {
  if (!is_axis_name(a.name)) {
    issues.push_back("axis '" + a.name + "' is not one of gamma, p, a_m, a_p");
    return;
  }
  if (a.steps < 2) issues.push_back("axis '" + a.name + "': steps must be >= 2");
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) issues.push_back("axis '" + a.name + "': non-finite range");
  if (a.name != "gamma") {
    for (double v : {a.lo, a.hi}) {
      if (!(v > -1.0 && v < 1.0)) issues.push_back("axis '" + a.name + "': range leaves the open interval (-1,1)");
    }
  }
}

unsigned thread_budget(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QWSPEC_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

std::complex<double> phase_of(std::complex<double> z) {
  const double m = std::abs(z);
  return m > 0 ? z / m : std::complex<double>(1.0, 0.0);
}

}  // namespace

double SweepAxis::value(int i) const {
  if (i == steps - 1) return hi;
  const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
  return lo + (hi - lo) * t;
}

std::vector<std::string> validate_sweep(const SweepSpec& spec) {
  std::vector<std::string> issues;
  check_axis(spec.axis1, issues);
  if (spec.axis2) {
    check_axis(*spec.axis2, issues);
    if (spec.axis2->name == spec.axis1.name) issues.push_back("axis1 and axis2 must differ");
  }
  for (const auto& v : validate(spec.fixed.params)) issues.push_back("fixed parameters: " + v.message);
  return issues;
}

SweepSpec sweep_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("axis1")) throw InputError("sweep document needs an 'axis1' object");
  SweepSpec s;
  s.axis1 = axis_from_json(j.at("axis1"), "axis1");
  if (j.contains("axis2") && !j.at("axis2").is_null()) s.axis2 = axis_from_json(j.at("axis2"), "axis2");

  nlohmann::json fixed = j.value("fixed", nlohmann::json::object());
  // Swept parameters need no fixed value; seed them with a legal placeholder.
  for (const SweepAxis* ax : {&s.axis1, s.axis2 ? &*s.axis2 : nullptr}) {
    if (ax && is_axis_name(ax->name) && !fixed.contains(ax->name)) fixed[ax->name] = ax->lo;
  }
  s.fixed = params_from_json(fixed);
  return s;
}

ModelParams<double> with_parameter(ModelParams<double> mp, const std::string& name, double value) {
  auto partner = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
  if (name == "gamma") {
    mp.gamma = value;
  } else if (name == "p") {
    mp.p = value;
    mp.q = partner(value) * phase_of(mp.q);
  } else if (name == "a_m") {
    mp.a_m = value;
    mp.b_m = partner(value) * phase_of(mp.b_m);
  } else if (name == "a_p") {
    mp.a_p = value;
    mp.b_p = partner(value) * phase_of(mp.b_p);
  } else {
    throw DomainError("unknown sweep parameter '" + name + "'");
  }
  return mp;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  const int n1 = spec.axis1.steps;
  const int n2 = spec.axis2 ? spec.axis2->steps : 1;
  const std::size_t total = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  std::vector<SweepRow> rows(total);

  auto evaluate = [&](std::size_t k) {
    const int i = static_cast<int>(k / static_cast<std::size_t>(n2));
    const int j = static_cast<int>(k % static_cast<std::size_t>(n2));
    SweepRow& row = rows[k];
    row.v1 = spec.axis1.value(i);
    auto mp = with_parameter(spec.fixed.params, spec.axis1.name, row.v1);
    if (spec.axis2) {
      row.v2 = spec.axis2->value(j);
      mp = with_parameter(mp, spec.axis2->name, row.v2);
    }
    try {
      const auto res = point_spectrum(mp);
      row.p_gamma_prime = res.p_gamma_prime;
      row.entries = res.entries;
      row.flag = res.reliable ? "ok" : "unreliable";
    } catch (const std::exception&) {
      row.p_gamma_prime = std::nan("");
      row.flag = "error";
    }
  };

  const unsigned nt = std::min<unsigned>(thread_budget(threads), static_cast<unsigned>(std::max<std::size_t>(total, 1)));
  if (nt <= 1) {
    for (std::size_t k = 0; k < total; ++k) evaluate(k);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < total; k = next++) evaluate(k);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  os << "# qwspec sweep: axis1=" << spec.axis1.name << "[" << format_number(spec.axis1.lo) << ","
     << format_number(spec.axis1.hi) << "," << spec.axis1.steps << "]";
  if (spec.axis2) {
    os << " axis2=" << spec.axis2->name << "[" << format_number(spec.axis2->lo) << ","
       << format_number(spec.axis2->hi) << "," << spec.axis2->steps << "]";
  }
  os << "\n# fixed=" << params_json(spec.fixed) << "\n";
  os << spec.axis1.name;
  if (spec.axis2) os << "," << spec.axis2->name;
  os << ",p_gamma_prime,count,lambda_1,s1_1,s2_1,branch_1,lambda_2,s1_2,s2_2,branch_2,flag\n";
  for (const auto& r : rows) {
    os << format_number(r.v1);
    if (spec.axis2) os << "," << format_number(r.v2);
    os << "," << format_number(r.p_gamma_prime) << "," << r.entries.size();
    for (std::size_t k = 0; k < 2; ++k) {
      if (k < r.entries.size()) {
        const auto& e = r.entries[k];
        os << "," << format_number(e.lambda) << "," << e.s1 << "," << e.s2 << "," << to_string(e.branch);
      } else {
        os << ",,,,";
      }
    }
    os << "," << r.flag << "\n";
  }
}

}  // namespace qwspec
