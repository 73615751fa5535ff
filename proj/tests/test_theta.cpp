#include "doctest.h"

#include <cmath>

#include "ztr/theta.hpp"

using namespace ztr;

TEST_CASE("theta of an exact series is a point interval") {
  // 2 - T^{-1} at x = 1/2: theta = 2 - 2 = 0 exactly
  auto f = JetLaurent::from_exact(parse_series("-1*T^-1 + 2*T^0"));
  auto iv = theta_eval(f, RealPoint(Rational(1, 2)), Rational(0));
  CHECK(iv.lo == 0);
  CHECK(iv.hi == 0);
  CHECK(iv.width() == 0);
}

TEST_CASE("theta tail enclosure from the coefficient bound") {
  // known part 1 + T, unknown from order 2 with |a_n| <= 1 at x = 1/2:
  // exact part 3/2, tail radius (1/2)^2 / (1 - 1/2) = 1/2
  JetLaurent f(0, 2, {{0, Integer(1)}, {1, Integer(1)}});
  auto iv = theta_eval(f, RealPoint(Rational(1, 2)), Rational(1));
  CHECK(iv.lo == 1);
  CHECK(iv.hi == 2);
  CHECK(iv.contains(Rational(3, 2)));
}

TEST_CASE("evaluation point rejects |x| >= 1 and 0") {
  CHECK_THROWS_AS(RealPoint(Rational(1)), domain_error);
  CHECK_THROWS_AS(RealPoint(Rational(0)), domain_error);
  CHECK_THROWS_AS(RealPoint(Rational(-3, 2)), domain_error);
}

TEST_CASE("real digit expansion, greedy base x") {
  // y = 3, x = 1/2, digits in {0, 1}: 3 = 2 + 1 = T^-1 + T^0 at x
  auto f = real_digit_expand(Rational(3), Rational(1, 2), 2, 32);
  CHECK(to_text(f) == "1*T^-1 + 1*T^0");

  // y = 5/16 = (1/2)^2 + (1/2)^4
  auto g = real_digit_expand(Rational(5, 16), Rational(1, 2), 2, 32);
  CHECK(to_text(g) == "1*T^2 + 1*T^4");

  // exponents strictly increase even when the digit cap binds
  auto h = real_digit_expand(Rational(7), Rational(1, 2), 2, 32);
  int64_t prev = INT64_MIN;
  Rational acc(0);
  for (auto& [n, a] : h.c) {
    CHECK(n > prev);
    CHECK(a >= 0);
    CHECK(a <= 1);
    acc += Rational(a) * pow_q(Rational(1, 2), n);
    prev = n;
  }
  CHECK(acc <= 7);
}

TEST_CASE("bounded digit expansion meets its norm bound") {
  auto f = bounded_digit_expand(Rational(1, 2), Rational(1, 2), 24);
  CHECK(to_text(f) == "1*T^1");

  // generic z: reconstruct within the dropped remainder and keep |a_i| <= 2
  Rational z(-7, 5), x(1, 2);
  auto g = bounded_digit_expand(z, x, 24);
  Rational acc(0);
  int64_t prev = INT64_MIN;
  for (auto& [n, a] : g.c) {
    CHECK(n > prev);
    CHECK(abs(a) <= 2);  // ceil(1/x)
    acc += Rational(a) * pow_q(x, n);
    prev = n;
  }
  CHECK(abs_q(z - acc) <= pow_q(x, g.max_exp() + 1) * 4);

  // the lift realizing the C4 bound: nu_r(g) <= |z|^p / (x(1-r)) at p = 1,
  // r = x taken as the weight
  Radius r(x);
  CHECK(weighted_norm(g, r) <= abs_q(z) / (x * (1 - x)));
}

TEST_CASE("p-adic expansion and reconstruction") {
  // x = 2 in Z_2 at precision 2^3, y = 5 = 1 + x^2
  PadicPoint pt(Integer(2), Integer(2), 3);
  auto f = padic_digit_expand(Integer(5), pt);
  CHECK(to_text(f) == "1*T^0 + 1*T^2");
  CHECK(padic_theta(f, pt) == 5);

  // v_2(4) = 2 so each digit costs two bits; 6 needs a second digit but
  // only one bit of precision is left
  PadicPoint pt2(Integer(2), Integer(4), 3);
  CHECK_THROWS_AS(padic_digit_expand(Integer(6), pt2), precision_exhausted);

  CHECK_THROWS_AS(PadicPoint(Integer(2), Integer(3), 4), domain_error);  // v_p(x) = 0
}

TEST_CASE("generator certificate at x = 1/2, r = 1/2") {
  auto cert = construct_generator(Rational(1, 2), Rational(0), Radius(Rational(1, 2)), 80);
  CHECK(cert.f.coeff(0) == 1);
  for (int64_t n = 1; n < cert.n_vanish; ++n) CHECK(cert.f.coeff(n) == 0);

  // certificate that the greedy integer unit exists: r^n_vanish < 2(1-r)
  Rational r = cert.r;
  CHECK(pow_q(r, cert.n_vanish) / (2 * (1 - r)) < 1);

  auto iv = theta_eval(cert.f, RealPoint(Rational(1, 2)), cert.coeff_bound);
  CHECK(iv.contains(Rational(0)));
  CHECK(iv.width() <= Rational(1, 1000));
}

TEST_CASE("evaluation radius for rational and irrational exponents") {
  // p = 1/2: r' = r^2 exactly
  auto e = eval_radius_for(Radius(Rational(1, 2)), Rational(1, 2));
  CHECK(e.exact);
  CHECK(e.rp == Rational(1, 4));

  // p = 2/3: r' = (1/2)^{3/2} is irrational, a nearby rational is used
  auto e2 = eval_radius_for(Radius(Rational(1, 2)), Rational(2, 3));
  CHECK(!e2.exact);
  CHECK(e2.rp > 0);
  CHECK(e2.rp < 1);
  double want = std::pow(0.5, 1.5);
  CHECK(std::abs(to_ld(e2.rp) - want) < 1e-5);
}

TEST_CASE("theta jet evaluation in standard coordinates") {
  JetLaurent one(0, 1, {{0, Integer(1)}});
  auto j = theta_jet_eval(one, 0.5, 3);
  CHECK(j[0] == doctest::Approx(1.0));
  CHECK(j[1] == doctest::Approx(0.0));

  // T maps to x^(1+X) = x + x log x X + ...
  JetLaurent t(1, 2, {{1, Integer(1)}});
  auto jt = theta_jet_eval(t, 0.5, 2);
  CHECK(jt[0] == doctest::Approx(0.5));
  CHECK(jt[1] == doctest::Approx(0.5 * std::log(0.5)));
}

TEST_CASE("norm domination of theta on a small ball, exact arithmetic") {
  // |theta_{r'}(g)|^p <= nu_r(g) at r = 1/2, p = 1/2, r' = 1/4; squaring
  // makes it a rational comparison: theta^2 <= nu^2 ... i.e. |theta| <= nu^2
  Radius r(Rational(1, 2));
  RealPoint rp(Rational(1, 4));
  for (auto& g : enumerate_ball(r, Rational(1), 4, 2'000'000)) {
    auto iv = theta_eval(JetLaurent::from_exact(g), rp, Rational(0));
    Rational nu = weighted_norm(g, r);
    CHECK(abs_q(iv.lo) <= nu * nu);
  }
}

TEST_CASE("constants desk check at r = 1/2, p = 1/2") {
  auto rows = verify_lec7_constants(Radius(Rational(1, 2)), Rational(1, 2), 4, 200, 7);
  CHECK(!rows.empty());
  for (auto& row : rows) {
    INFO(row.id, ": ", row.measured, " vs ", row.expected);
    CHECK(row.pass);
  }
}
