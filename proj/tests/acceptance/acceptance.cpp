// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Seeds are fixed so every run evaluates the same draws.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/draws.hpp"

using namespace qwspec;
using qwspec::testing::C;
using qwspec::testing::Rng;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass{false};
  std::string summary;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Distance from lambda to the nearest eigenvalue of the truncation at half-width n (diagnostic only).
double distance_at(const ModelParams<double>& mp, double lambda, long n) {
  const auto dense = dense_spectrum(assemble_truncated(mp, n), false);
  return std::abs(dense.values(testing::nearest(dense.values, C(lambda))) - lambda);
}

// 1. Positive branches: analytic eigenvalue against the dense truncation, plus eigenstate residual.
Outcome positive_branches() {
  constexpr int kDraws = 500;
  constexpr long kHalfWidth = 60;
  constexpr long kWindow = 150;
  const int branches[4][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
  Rng rng(kSeed + 1);
  int failures = 0;
  double worst_dist = 0, worst_res = 0, min_loc = 1;
  std::ostringstream fail_log;
  for (const auto& b : branches) {
    for (int k = 0; k < kDraws; ++k) {
      const auto mp = testing::draw_in_branch(rng, b[0], b[1]);
      if (!mp) return {false, "could not draw branch (" + std::to_string(b[0]) + "," + std::to_string(b[1]) + ")"};
      const auto spec = point_spectrum(*mp);
      const auto it = std::find_if(spec.entries.begin(), spec.entries.end(),
                                   [&](const auto& e) { return e.s1 == b[0] && e.s2 == b[1]; });
      if (it == spec.entries.end()) {
        ++failures;
        continue;
      }
      const auto op = assemble_truncated(*mp, kHalfWidth);
      const auto dense = dense_spectrum(op, false);
      const auto idx = testing::nearest(dense.values, C(it->lambda));
      const double dist = std::abs(dense.values(idx) - it->lambda);
      const double loc = localization(eigenvector_near(op.entries, dense.values(idx)).vector, op);
      const auto st = eigenstate(*mp, *it, -kWindow, kWindow);
      const double res = residual(*mp, C(it->lambda), st.values);
      worst_dist = std::max(worst_dist, dist);
      worst_res = std::max(worst_res, res);
      min_loc = std::min(min_loc, loc);
      if (dist > 1e-6 || loc < 0.99 || !(res <= 1e-9)) {
        if (failures < 5) {
          fail_log << " [branch (" << b[0] << "," << b[1] << ") decay=" << sci(testing::decay_of(*mp, it->lambda))
                   << " dist=" << sci(dist) << " loc=" << loc << " res=" << sci(res)
                   << " dist@N=" << 2 * kHalfWidth << "=" << sci(distance_at(*mp, it->lambda, 2 * kHalfWidth)) << "]";
        }
        ++failures;
      }
    }
  }
  std::ostringstream s;
  s << 4 * kDraws - failures << "/" << 4 * kDraws << " draws ok; max |lambda - dense| " << sci(worst_dist)
    << " (tol 1e-6), min localization " << min_loc << " (>= 0.99), max residual " << sci(worst_res) << " (tol 1e-9)"
    << fail_log.str();
  return {failures == 0, s.str()};
}

// 2. Empty branch: no candidate passes either route; at gamma = 0 the truncation has no localized
// eigenvector near a candidate.
Outcome empty_branch() {
  constexpr int kDraws = 500;
  constexpr int kUnitaryDraws = 100;
  Rng rng(kSeed + 2);
  int route_disagree = 0, false_positive = 0, outside = 0, tested = 0, dense_hits = 0;
  for (int k = 0; k < kDraws; ++k) {
    const bool unitary = k < kUnitaryDraws;
    const auto mp = testing::draw_empty(rng, unitary ? 0.0 : 1.0);
    const auto spec = point_spectrum(mp);
    if (!spec.entries.empty()) ++false_positive;
    for (const auto& c : candidate_eigenvalues(mp)) {
      if (!in_lambda_set(mp, C(c.value)).in) {
        ++outside;
        continue;
      }
      ++tested;
      const auto m = match_conditions(mp, c.value);
      if (m.algebraic() || m.kernel_dim != 0) ++false_positive;
      if (!m.routes_agree()) ++route_disagree;
    }
    if (!unitary) continue;
    const auto op = assemble_truncated(mp, 60);
    const auto dense = dense_spectrum(op, true);
    for (const auto& c : candidate_eigenvalues(mp)) {
      for (Eigen::Index i = 0; i < dense.values.size(); ++i) {
        if (std::abs(dense.values(i) - c.value) <= 1e-4 && localization(dense.vectors.col(i), op) >= 0.99) ++dense_hits;
      }
    }
  }
  std::ostringstream s;
  s << kDraws << " draws (" << kUnitaryDraws << " at gamma=0): " << tested << " candidates in Lambda, " << outside
    << " outside; accepted by a route " << false_positive << ", route disagreements " << route_disagree
    << ", localized truncated eigenvectors near a candidate " << dense_hits;
  return {false_positive == 0 && route_disagree == 0 && dense_hits == 0, s.str()};
}

// 3. Algebraic identities.
Outcome identities() {
  constexpr int kDraws = 10000;
  Rng rng(kSeed + 3);
  double disc = 0, det = 0, prod = 0;
  for (int k = 0; k < kDraws; ++k) {
    const auto mp = testing::random_params(rng);
    const C lam = std::polar(testing::uniform(rng, 0.1, 5.0), testing::uniform(rng, 0, 2 * M_PI));
    for (Side side : {Side::minus, Side::plus}) {
      const auto d = transfer_data(mp, side, lam);
      const C x = lam + 1.0 / lam - 2 * mp.p * mp.a(side) * std::cosh(2 * mp.gamma);
      const C ref = x * x - 4.0 * std::norm(mp.b(side) * mp.q);
      const double scale = std::max({1.0, std::norm(x), std::abs(d.J * d.J), std::abs(4.0 * d.K * d.Kp)});
      disc = std::max(disc, std::abs(d.disc - ref) / scale);
      det = std::max(det, std::abs(std::abs(transfer_matrix(mp, side, lam).determinant()) - 1.0));
    }
  }
  for (int k = 0; k < kDraws; ++k) {
    const auto c = candidate_eigenvalues(testing::random_params(rng, 2.0));
    prod = std::max({prod, std::abs(c[0].value * c[2].value + 1), std::abs(c[1].value * c[3].value + 1)});
  }
  std::ostringstream s;
  s << "disc identity " << sci(disc) << " (tol 1e-12), ||det T| - 1| " << sci(det) << " (tol 1e-10), "
    << "lambda(s1,+)lambda(s1,-) + 1 " << sci(prod) << " (tol 1e-14)";
  return {disc <= 1e-12 && det <= 1e-10 && prod <= 1e-14, s.str()};
}

// 4. Unitary limit at gamma = 0.
Outcome unitary_limit() {
  constexpr int kDraws = 100;
  constexpr long n = 60;
  Rng rng(kSeed + 4);
  double uu = 0, chiral = 0;
  for (int k = 0; k < kDraws; ++k) {
    const auto mp = testing::random_params(rng, 0.0);
    const auto u = assemble_truncated(mp, n).entries;
    const auto s = assemble_shift(mp, n).entries;
    const MatrixXc<double> id = MatrixXc<double>::Identity(u.rows(), u.cols());
    uu = std::max(uu, interior_max_abs<double>(u.adjoint() * u - id, n, 2));
    chiral = std::max(chiral, interior_max_abs<double>(s * u * s - u.adjoint(), n, 2));
  }
  std::ostringstream s;
  s << kDraws << " draws at N=60: max |U*U - I| " << sci(uu) << ", max |SUS - U*| " << sci(chiral) << " (tol 1e-12)";
  return {uu < 1e-12 && chiral < 1e-12, s.str()};
}

// 5. Index table and the protection bound.
Outcome index_table() {
  bool examples = true;
  examples = examples && chiral_index({0.5, 0.5, 0.8, 0.9}).value == 0 && chiral_index({0.5, 0.5, 0.8, 0.9}).defined;
  examples = examples && chiral_index({0.5, 0.5, 0.8, 0.2}).value == 1;
  examples = examples && chiral_index({0.5, 0.5, 0.2, 0.2}).value == 0 && chiral_index({0.5, 0.5, 0.2, 0.2}).defined;

  Rng rng(kSeed + 5);
  int bad_cases = 0, drawn = 0;
  while (drawn < 10000) {
    const AsymptoticData d{testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1),
                           testing::uniform(rng, -1, 1)};
    const auto r = chiral_index(d);
    if (!r.defined) continue;
    ++drawn;
    const bool m = std::abs(d.p_minus) > std::abs(d.a_minus);
    const bool p = std::abs(d.p_plus) > std::abs(d.a_plus);
    const int fired = (!m && !p) + (!m && p) + (m && !p) + (m && p);
    int expect = 0;
    if (!m && p) expect = sgn(d.p_plus);
    if (m && !p) expect = -sgn(d.p_minus);
    if (m && p) expect = sgn(d.p_plus) - sgn(d.p_minus);
    if (fired != 1 || r.value != expect) ++bad_cases;
  }

  int protected_ok = 0, checked = 0;
  while (checked < 50) {
    const auto mp = testing::random_params(rng, 0.0);
    const auto idx = chiral_index(AsymptoticData::from(mp));
    if (!idx.defined || idx.value == 0) continue;
    if (std::abs(std::abs(mp.p) - std::abs(mp.a_m)) < 0.1 || std::abs(std::abs(mp.p) - std::abs(mp.a_p)) < 0.1) continue;
    ++checked;
    if (protection_check(mp).holds) ++protected_ok;
  }
  std::ostringstream s;
  s << "reference examples " << (examples ? "ok" : "WRONG") << ", " << drawn << " random tables with " << bad_cases
    << " mismatches, protection bound held on " << protected_ok << "/" << checked << " gamma=0 draws";
  return {examples && bad_cases == 0 && protected_ok == checked, s.str()};
}

// 6. Lambda-set membership.
Outcome lambda_membership() {
  Rng rng(kSeed + 6);
  int disagree = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto mp = testing::random_params(rng);
    const double v = testing::uniform(rng, 0.05, 5.0);
    disagree += !in_lambda_set(mp, C(rng() % 2 ? v : -v)).consistent;
  }
  for (int k = 0; k < 1000; ++k) {
    const auto mp = testing::random_params(rng);
    disagree += !in_lambda_set(mp, std::polar(1.0, testing::uniform(rng, 0, 2 * M_PI))).consistent;
  }
  return {disagree == 0, std::to_string(11000 - disagree) + "/11000 draws agree (10^4 real, 10^3 unit circle)"};
}

// 7. Sweep continuity through gamma = 0.
Outcome sweep_continuity() {
  const auto spec = sweep_from_json(nlohmann::json::parse(
      R"({"axis1":{"name":"gamma","lo":-0.2,"hi":0.2,"steps":400},"fixed":{"p":0.5,"a_m":0.8,"a_p":0.2}})"));
  if (chiral_index(AsymptoticData::from(spec.fixed.params)).value == 0) return {false, "sweep parameters have index 0"};
  const auto rows = run_sweep(spec);
  const double step = (spec.axis1.hi - spec.axis1.lo) / (spec.axis1.steps - 1);
  double max_jump = 0;
  bool single = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    single = single && rows[i].entries.size() == 1 && rows[i].flag == "ok";
    if (!single) break;
    if (i) max_jump = std::max(max_jump, std::abs(rows[i].entries[0].lambda - rows[i - 1].entries[0].lambda));
  }
  if (!single) return {false, "sweep path does not carry exactly one eigenvalue per row"};
  const int s2 = rows[0].entries[0].s2;
  bool crosses = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].v1 > 0 || rows[i].v1 < 0) continue;
    const double lo = rows[i - 1].entries[0].lambda - s2, hi = rows[i].entries[0].lambda - s2;
    crosses = lo == 0 || hi == 0 || (lo < 0) != (hi < 0);
  }
  const auto at_zero = point_spectrum(with_parameter(spec.fixed.params, "gamma", 0.0));
  const bool exact = at_zero.entries.size() == 1 && std::abs(at_zero.entries[0].lambda - s2) <= 1e-12;
  std::ostringstream s;
  s << rows.size() << " points, max adjacent jump " << sci(max_jump) << " vs 10 x step " << sci(10 * step)
    << "; path crosses " << (s2 > 0 ? "+1" : "-1") << " between the rows bracketing gamma=0: " << (crosses ? "yes" : "no")
    << "; lambda(gamma=0) = " << (at_zero.entries.empty() ? std::string("none") : sci(at_zero.entries[0].lambda));
  return {max_jump < 10 * step && crosses && exact, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 theorem reproduction, positive branches", positive_branches},
      {"2 theorem reproduction, empty branch", empty_branch},
      {"3 algebraic identities", identities},
      {"4 unitary-limit structure at gamma=0", unitary_limit},
      {"5 index table and protection bound", index_table},
      {"6 Lambda-membership consistency", lambda_membership},
      {"7 sweep continuity", sweep_continuity},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("[%s] criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, o.summary.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
