#include "doctest.h"

#include <cmath>

#include "ztr/jets.hpp"

using namespace ztr;

TEST_CASE("teichmueller expansion and peeling invert each other") {
  auto one = teich_expand(1.0, 3);
  CHECK(one == std::vector<double>{1.0, 0.0, 0.0});

  // [x] = x + x log|x| X + x log^2|x|/2 X^2
  double x = 3.0, lx = std::log(3.0);
  auto j = teich_expand(x, 3);
  CHECK(j[0] == doctest::Approx(3.0));
  CHECK(j[1] == doctest::Approx(3.0 * lx));
  CHECK(j[2] == doctest::Approx(1.5 * lx * lx));

  std::vector<double> tc = {2.0, -0.7, 0.25};
  auto back = teich_coords(teich_to_std(tc));
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(tc[i]).epsilon(1e-10));

  CHECK(teich_coords({0.0, 0.0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("jet arithmetic is truncated polynomial arithmetic") {
  Jet a = {1.0, 1.0};
  CHECK(jet_mul(a, a) == std::vector<double>{1.0, 2.0});
  CHECK(jet_add(a, jet_scale(a, -1.0)) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("lp mass in teichmueller coordinates") {
  JetMeasure w;
  w.n = 1;
  w.p = 0.5;
  w.teich = {{4.0}};
  CHECK(lp_norm(w) == doctest::Approx(2.0));

  JetMeasure v;
  v.n = 2;
  v.p = 1.0;
  v.teich = {{3.0, -4.0}};
  CHECK(lp_norm(v) == doctest::Approx(7.0));
}

TEST_CASE("full collapse of the uniform measure inflates by 1 + log k") {
  JetMeasure w;
  w.n = 2;
  w.p = 1.0;
  w.teich = {{0.5, 0.0}, {0.5, 0.0}};
  CHECK(lp_norm(w) == doctest::Approx(1.0));

  auto pw = pushforward(w, {0, 0}, 1);
  REQUIRE(pw.points() == 1);
  CHECK(pw.teich[0][0] == doctest::Approx(1.0));
  CHECK(pw.teich[0][1] == doctest::Approx(-std::log(2.0)));
  CHECK(lp_norm(pw) == doctest::Approx(1.0 + std::log(2.0)));

  CHECK(collapse_ratio_uniform(2) == doctest::Approx(1.0 + std::log(2.0)));
  CHECK(collapse_ratio_uniform(150) == doctest::Approx(1.0 + std::log(150.0)));
}

TEST_CASE("empirical constants stay finite and are seeded") {
  auto a = estimate_constants("addition", 2, 1.0, 100, 5);
  CHECK(a.sup_ratio >= 1.0);
  CHECK(std::isfinite(a.sup_ratio));
  CHECK(a.trials == 100);
  auto b = estimate_constants("addition", 2, 1.0, 100, 5);
  CHECK(a.sup_ratio == b.sup_ratio);  // same seed, same sup
  CHECK(a.witness == b.witness);

  CHECK_THROWS_AS(estimate_constants("nonsense", 2, 1.0, 10, 5), domain_error);
}

TEST_CASE("truncated integer measures push forward exactly") {
  TruncatedMeasure w;
  w.S = 2;
  w.order = 2;
  w.set(1, 0, Integer(2));
  w.set(2, 1, Integer(-1));
  CHECK(measure_norm(w, Radius(Rational(1, 2))) == Rational(5, 4));

  // cancellation under pushforward only shrinks the norm
  TruncatedMeasure v;
  v.S = 2;
  v.order = 1;
  v.set(1, 0, Integer(1));
  v.set(1, 1, Integer(-1));
  auto pv = measure_pushforward(v, {0, 0}, 1);
  CHECK(pv.coeff(1, 0) == 0);
  CHECK(measure_norm(pv, Radius(Rational(1, 2))) == 0);

  w.set(1, 0, Integer(0));
  CHECK(w.coeff(1, 0) == 0);
  CHECK(w.a.size() == 1);  // stored zeros are erased
}

TEST_CASE("doubly null factorization dominates the matrix") {
  std::vector<std::vector<double>> lam = {{1.0, 0.5, 0.25},
                                          {0.5, 0.25, 0.125},
                                          {0.25, 0.125, 0.0625}};
  auto f = double_null_factorize(lam);
  REQUIRE(f.row.size() == 3);
  REQUIRE(f.col.size() == 3);
  for (size_t n = 0; n < 3; ++n)
    for (size_t m = 0; m < 3; ++m) {
      CHECK(f.row[n] * f.col[m] >= lam[n][m] * (1 - 1e-12));
      CHECK(f.row[n] <= 1.0 + 1e-12);
      CHECK(f.col[m] <= 1.0 + 1e-12);
    }
}

TEST_CASE("quotient isomorphism desk check at a tiny size") {
  QuotientIsoParams p;
  p.S = 1;
  p.m = 2;
  p.backward_samples = 5;
  p.seed = 9;
  p.cap = 100000;
  auto rows = quotient_iso_check(p);
  CHECK(!rows.empty());
  for (auto& row : rows) {
    INFO(row.id, ": ", row.measured, " vs ", row.expected);
    CHECK(row.pass);
  }

  auto tiny = p;
  tiny.cap = 1;
  CHECK_THROWS_AS(quotient_iso_check(tiny), budget_exceeded);
}
