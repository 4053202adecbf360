#include <doctest.h>

#include "support/draws.hpp"

using namespace qwspec;
using qwspec::testing::C;

namespace {

ModelParams<double> pythagorean() {
  ModelParams<double> mp;
  mp.p = 0.6;
  mp.q = 0.8;
  mp.a_m = 0;
  mp.a_p = 0;
  mp.b_m = 1;
  mp.b_p = 1;
  return mp;
}

bool has_field(const std::vector<ValidationIssue>& v, const std::string& field) {
  return std::any_of(v.begin(), v.end(), [&](const auto& i) { return i.field == field; });
}

}  // namespace

TEST_CASE("validate accepts Pythagorean pairs") { CHECK(validate(pythagorean()).empty()); }

TEST_CASE("validate reports the shift defect with its value") {
  auto mp = pythagorean();
  mp.q = 0.9;
  const auto issues = validate(mp);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].field == "q");
  CHECK(issues[0].message == "p^2+|q|^2 = 1.17 != 1");
  CHECK(issues[0].defect == doctest::Approx(0.17));
}

TEST_CASE("validate excludes the interval endpoints") {
  auto mp = pythagorean();
  mp.a_p = 1.0;
  mp.b_p = 0.0;
  const auto issues = validate(mp);
  CHECK(has_field(issues, "a_p"));
  CHECK(std::any_of(issues.begin(), issues.end(),
                    [](const auto& i) { return i.message == "a_p outside open interval (-1,1)"; }));
  CHECK(has_field(issues, "b_p"));
}

TEST_CASE("validate lists every violation") {
  ModelParams<double> mp;
  mp.p = 1.5;
  mp.q = 0.3;
  mp.a_m = -2;
  mp.a_p = 0.6;
  mp.b_m = 0.1;
  mp.b_p = 0.7;
  const auto issues = validate(mp);
  for (const char* f : {"p", "a_m", "q", "b_m", "b_p"}) CHECK(has_field(issues, f));
  CHECK_FALSE(has_field(issues, "a_p"));
}

TEST_CASE("validate rejects non-finite values") {
  auto mp = pythagorean();
  mp.gamma = std::nan("");
  CHECK_FALSE(is_valid(mp));
}

TEST_CASE("coin_at") {
  auto mp = pythagorean();
  SUBCASE("Pauli-X limit") {
    const auto c = coin_at(mp, 3);
    CHECK(std::abs(c(0, 0)) == 0.0);
    CHECK(c(0, 1) == C(1));
    CHECK(c(1, 0) == C(1));
    CHECK(std::abs(c(1, 1)) == 0.0);
  }
  SUBCASE("gamma = 0.5, a = 0.6, b = 0.8") {
    mp.gamma = 0.5;
    mp.a_p = 0.6;
    mp.b_p = 0.8;
    const auto c = coin_at(mp, 0);
    CHECK(c(0, 0).real() == doctest::Approx(0.6 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(c(0, 1).real() == doctest::Approx(0.8));
    CHECK(c(1, 0).real() == doctest::Approx(0.8));
    CHECK(c(1, 1).real() == doctest::Approx(-0.6 * std::exp(1.0)).epsilon(1e-15));
    CHECK(std::abs(c.determinant() + 1.0) < 1e-12);
  }
  SUBCASE("sides switch at the origin") {
    mp.a_m = -0.28;
    mp.b_m = 0.96;
    mp.a_p = 0.6;
    mp.b_p = 0.8;
    CHECK(coin_at(mp, -1)(0, 0).real() == doctest::Approx(-0.28));
    CHECK(coin_at(mp, 0)(0, 0).real() == doctest::Approx(0.6));
  }
}

TEST_CASE("coin is unitary and self-adjoint at gamma = 0, det = -1 always") {
  testing::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    auto mp = testing::random_params(rng);
    for (long x : {-3L, 0L}) {
      const auto c = coin_at(mp, x);
      CHECK(std::abs(c.determinant() + 1.0) < 1e-12);
    }
    mp.gamma = 0;
    const auto c = coin_at(mp, 5);
    CHECK((c.adjoint() * c - Mat2<double>::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((c - c.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("apply_U") {
  SUBCASE("zero window maps to zero") {
    testing::Rng rng(2);
    const auto mp = testing::random_params(rng);
    const auto out = apply_U(mp, WindowedState<double>::zeros(-4, 4));
    CHECK(out.x0 == -3);
    CHECK(out.x1() == 3);
    CHECK(out.norm_sq() == 0.0);
  }
  SUBCASE("pure shift: the coin swaps components, then L moves up left and L* moves down right") {
    ModelParams<double> mp;
    mp.p = 0;
    mp.q = 1;
    mp.a_m = mp.a_p = 0;
    mp.b_m = mp.b_p = 1;
    for (int comp : {0, 1}) {
      auto psi = WindowedState<double>::zeros(-3, 3);
      (comp == 0 ? psi.at(0).up : psi.at(0).down) = 1;
      const auto out = apply_U(mp, psi);
      for (long x = out.x0; x <= out.x1(); ++x) {
        const C expect_up = comp == 0 && x == -1 ? C(1) : C(0);
        const C expect_down = comp == 1 && x == 1 ? C(1) : C(0);
        CHECK(out.at(x).up == expect_up);
        CHECK(out.at(x).down == expect_down);
      }
    }
  }
  SUBCASE("short window refused") {
    ModelParams<double> mp;
    CHECK_THROWS_AS(apply_U(mp, WindowedState<double>::zeros(0, 1)), DomainError);
  }
  SUBCASE("linearity") {
    testing::Rng rng(5);
    const auto mp = testing::random_params(rng);
    auto a = WindowedState<double>::zeros(-5, 6);
    auto b = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.sites[i] = {C(testing::uniform(rng, -1, 1), 0.3), C(0.1, testing::uniform(rng, -1, 1))};
      b.sites[i] = {C(testing::uniform(rng, -1, 1), -0.2), C(-0.4, testing::uniform(rng, -1, 1))};
    }
    const C alpha(0.7, -1.3);
    auto comb = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
      comb.sites[i].up = a.sites[i].up + alpha * b.sites[i].up;
      comb.sites[i].down = a.sites[i].down + alpha * b.sites[i].down;
    }
    const auto ua = apply_U(mp, a), ub = apply_U(mp, b), uc = apply_U(mp, comb);
    for (long x = uc.x0; x <= uc.x1(); ++x) {
      CHECK(std::abs(uc.at(x).up - (ua.at(x).up + alpha * ub.at(x).up)) < 1e-14);
      CHECK(std::abs(uc.at(x).down - (ua.at(x).down + alpha * ub.at(x).down)) < 1e-14);
    }
  }
}

TEST_CASE("apply_U equals the product S C assembled from 2x2 blocks") {
  // S acts as (S phi)_1(x) = p phi_1(x) + q phi_2(x+1), (S phi)_2(x) = conj(q) phi_1(x-1) - p phi_2(x).
  testing::Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const auto mp = testing::random_params(rng);
    auto psi = WindowedState<double>::zeros(-6, 5);
    for (auto& s : psi.sites) s = {C(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)),
                                   C(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1))};
    auto cpsi = psi;
    for (long x = psi.x0; x <= psi.x1(); ++x) {
      Vec2<double> v;
      v << psi.at(x).up, psi.at(x).down;
      const Vec2<double> w = coin_at(mp, x) * v;
      cpsi.at(x) = {w(0), w(1)};
    }
    const auto out = apply_U(mp, psi);
    for (long x = out.x0; x <= out.x1(); ++x) {
      const C up = mp.p * cpsi.at(x).up + mp.q * cpsi.at(x + 1).down;
      const C down = std::conj(mp.q) * cpsi.at(x - 1).up - mp.p * cpsi.at(x).down;
      CHECK(std::abs(out.at(x).up - up) < 1e-14);
      CHECK(std::abs(out.at(x).down - down) < 1e-14);
    }
  }
}

TEST_CASE("apply_U agrees with the dense truncation on random windows") {
  testing::Rng rng(23);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const auto mp = testing::random_params(rng);
    const long n = 2 + static_cast<long>(rng() % 14);  // window size up to 31 sites, 62 entries
    auto psi = WindowedState<double>::zeros(-n, n);
    for (auto& s : psi.sites) s = {C(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)),
                                   C(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1))};
    const auto op = assemble_truncated(mp, n);
    const VectorXc<double> dense = op.entries * to_interleaved(psi);
    const auto out = apply_U(mp, psi);
    for (long x = out.x0; x <= out.x1(); ++x) {
      worst = std::max({worst, std::abs(out.at(x).up - dense(op.index(x, 0))),
                        std::abs(out.at(x).down - dense(op.index(x, 1)))});
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("cast preserves values") {
  testing::Rng rng(3);
  const auto mp = testing::random_params(rng);
  const auto ld = mp.cast<long double>();
  CHECK(static_cast<double>(ld.p) == mp.p);
  CHECK(static_cast<double>(ld.b_m.imag()) == mp.b_m.imag());
}
