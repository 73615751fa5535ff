#include "doctest.h"

#include <cstdlib>

#include "ztr/laurent.hpp"

using namespace ztr;

namespace {

ExactLaurent series(std::initializer_list<std::pair<int64_t, long>> terms) {
  ExactLaurent f;
  for (auto& [n, a] : terms) f.set(n, Integer(a));
  return f;
}

}  // namespace

TEST_CASE("text form round trips and is canonical") {
  ExactLaurent f = series({{-1, -1}, {0, 2}});
  CHECK(to_text(f) == "-1*T^-1 + 2*T^0");
  CHECK(parse_series("-1*T^-1 + 2*T^0") == f);
  CHECK(parse_series(to_text(f)) == f);

  CHECK(to_text(ExactLaurent()) == "0");
  CHECK(parse_series("0").is_zero());

  // parser accepts any order, printer sorts ascending
  CHECK(to_text(parse_series("3*T^2 + 1*T^-5")) == "1*T^-5 + 3*T^2");

  CHECK_THROWS_AS(parse_series("2T^3"), parse_error);
  CHECK_THROWS_AS(parse_series("1*T^x"), parse_error);
  CHECK_THROWS_AS(parse_series(""), parse_error);
}

TEST_CASE("explicit zeros are pruned") {
  ExactLaurent f = series({{0, 1}});
  f.set(0, Integer(0));
  CHECK(f.is_zero());
  CHECK(ExactLaurent(CoeffMap{{3, Integer(0)}, {4, Integer(2)}}).min_exp() == 4);
}

TEST_CASE("jet ring ops track the truncation order") {
  JetLaurent f(0, 3, {{0, Integer(1)}, {2, Integer(5)}});
  JetLaurent g(1, 4, {{1, Integer(-2)}});
  auto s = ring_add(f, g);
  CHECK(s.order == 3);
  CHECK(s.coeff(0) == 1);
  CHECK(s.coeff(1) == -2);
  CHECK(s.coeff(2) == 5);

  // product order = min(lead f + order g, lead g + order f) = min(0+4, 1+3)
  auto p = ring_mul(f, g);
  CHECK(p.order == 4);
  CHECK(p.lead == 1);
  CHECK(p.coeff(1) == -2);
  CHECK(p.coeff(3) == -10);

  auto sh = shift(g, -2);
  CHECK(sh.lead == -1);
  CHECK(sh.order == 2);
  CHECK(sh.coeff(-1) == -2);
}

TEST_CASE("invert_unit against a hand multiplication") {
  // f = 2 - T^{-1} = -T^{-1}(1 - 2T); 1/f = -T - 2T^2 - 4T^3 - ... so that
  // f * g == 1 holds mod T^4 with support of g in [1, 4).
  JetLaurent f = JetLaurent::from_exact(parse_series("-1*T^-1 + 2*T^0"));
  auto g = invert_unit(f, 3);
  CHECK(g.lead == 1);
  CHECK(g.order == 4);
  CHECK(g.coeff(1) == -1);
  CHECK(g.coeff(2) == -2);
  CHECK(g.coeff(3) == -4);
  auto prod = ring_mul(f, g);
  CHECK(prod.coeff(0) == 1);
  CHECK(prod.coeff(1) == 0);
  CHECK(prod.coeff(2) == 0);

  JetLaurent bad = JetLaurent::from_exact(parse_series("2*T^0 + 1*T^1"));
  CHECK_THROWS_AS(invert_unit(bad, 5), not_a_unit);
}

TEST_CASE("weighted norm is exact") {
  Radius r(Rational(1, 2));
  CHECK(weighted_norm(series({{0, 2}, {2, -3}}), r) == Rational(11, 4));
  CHECK(weighted_norm(ExactLaurent(), r) == 0);
  CHECK_THROWS_AS(Radius(Rational(1)), domain_error);
  CHECK_THROWS_AS(Radius(Rational(0)), domain_error);
}

TEST_CASE("ball enumeration counts, determinism, budget") {
  // r = 1/2, c = 1, m = 1: coefficients (a0, a1) with |a0| + |a1|/2 <= 1,
  // by hand: (0,0), (0,+-1), (0,+-2), (+-1,0). 7 elements.
  Radius r(Rational(1, 2));
  auto b1 = enumerate_ball(r, Rational(1), 1, 1000);
  CHECK(b1.size() == 7);

  // m = 2 adds the T^2 digit: 23 by the same hand count
  auto b2 = enumerate_ball(r, Rational(1), 2, 1000);
  CHECK(b2.size() == 23);
  CHECK(enumerate_ball(r, Rational(1), 2, 1000) == b2);  // deterministic order

  for (auto& g : b2) CHECK(weighted_norm(g, r) <= 1);

  CHECK_THROWS_AS(enumerate_ball(r, Rational(1), 2, 5), budget_exceeded);
}

TEST_CASE("budget cap honors the environment override") {
  size_t dflt = budget_cap();
  setenv("ZTR_BUDGET_CAP", "123", 1);
  CHECK(budget_cap() == 123);
  unsetenv("ZTR_BUDGET_CAP");
  CHECK(budget_cap() == dflt);
}

TEST_CASE("mod p lift reuses digits verbatim") {
  auto f = mod_p_lift({{-1, 4L}, {0, 2L}}, 5);
  CHECK(f.coeff(-1) == 4);
  CHECK(f.coeff(0) == 2);
  CHECK_THROWS_AS(mod_p_lift({{0, 5L}}, 5), domain_error);
}

TEST_CASE("json form round trips jets") {
  JetLaurent f(-1, 3, {{-1, Integer(-1)}, {2, Integer(7)}});
  auto back = jet_from_json(to_json(f));
  CHECK(back.lead == f.lead);
  CHECK(back.order == f.order);
  CHECK(back.c == f.c);
  CHECK_THROWS_AS(jet_from_json("{"), parse_error);
}
