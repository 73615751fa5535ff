#include "doctest.h"

#include <cmath>

#include "ztr/instances.hpp"
#include "ztr/normed.hpp"

using namespace ztr;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

Norm flat_l1(size_t n) { return Norm::l1(std::vector<Rational>(n, Rational(1))); }

}  // namespace

TEST_CASE("weighted norms evaluate exactly") {
  CHECK(flat_l1(2).eval(qv({3, -4})) == Rational(7));
  CHECK(Norm::linf({Rational(2), Rational(1)}).eval(qv({3, -4})) == Rational(6));

  // pullback through the swap matrix
  QMat swap = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  auto n = Norm::l1({Rational(1), Rational(2)}).with_pullback(swap);
  CHECK(n.eval(qv({3, -4})) == Rational(10));

  CHECK_THROWS_AS(Norm::l1({Rational(0)}).validate(), domain_error);
}

TEST_CASE("quotient norm is the lp minimum over the subgroup") {
  QMat F = {{Rational(1)}, {Rational(1)}};  // divide out the diagonal
  auto q = Norm::quotient(flat_l1(2), F);
  CHECK(q.eval(qv({1, -1})) == Rational(2));
  CHECK(q.eval(qv({1, 1})) == Rational(0));
  CHECK(q.eval(qv({3, 1})) == Rational(2));
}

TEST_CASE("defect_min with empty D is a norm evaluation") {
  CHECK(defect_min(flat_l1(2), qv({2, -5}), QMat{}) == Rational(7));
  QMat D = {{Rational(1)}, {Rational(0)}};  // kill the first coordinate
  CHECK(defect_min(flat_l1(2), qv({2, -5}), D) == Rational(5));
}

TEST_CASE("ball vertices and operator norm") {
  auto verts = ball_vertices(flat_l1(2));
  CHECK(verts.size() == 4);
  QMat A = {{Rational(2), Rational(0)}, {Rational(0), Rational(1)}};
  CHECK(op_norm(A, flat_l1(2), flat_l1(2)) == Rational(2));

  // a map out of a quotient must kill the divided subgroup
  QMat F = {{Rational(1)}, {Rational(1)}};
  auto q = Norm::quotient(flat_l1(2), F);
  QMat desc = {{Rational(1), Rational(-1)}};
  CHECK(op_norm(desc, q, flat_l1(1)) == Rational(1));
  QMat bad = {{Rational(1), Rational(0)}};
  CHECK_THROWS_AS(op_norm(bad, q, flat_l1(1)), domain_error);
}

TEST_CASE("sup_ratio detects surviving kernel vectors") {
  QMat id2 = mat_identity(2);
  QMat proj = {{Rational(1), Rational(0)}, {Rational(0), Rational(0)}};
  CHECK(!sup_ratio(id2, proj, flat_l1(2), flat_l1(2)).has_value());
  auto r = sup_ratio(proj, id2, flat_l1(2), flat_l1(2));
  REQUIRE(r.has_value());
  CHECK(*r == Rational(1));
}

TEST_CASE("k-exactness falsifier flags the planted violation") {
  auto sys = make_k_exact_violation(Rational(2), Rational(4));
  sys.validate();
  Rng rng(3);
  auto rep = check_k_exact(sys, Rational(2), 0, sys.levels[0], 8, rng);
  CHECK(rep.violation_found);
  CHECK(rep.worst_ratio == doctest::Approx(4.0));
}

TEST_CASE("snake checker on generated and degenerate instances") {
  Rng rng(17);
  auto inst = make_snake_instance(rng);
  inst.m_sys.validate();
  inst.mp_sys.validate();
  Rng probe(18);
  auto out = snake_quotient_check(inst.m_sys, inst.mp_sys, inst.f, inst.k, inst.m, 6, probe);
  CHECK(out.constant >= 1);
  CHECK(!out.conclusion.violation_found);

  Rng rng2(19);
  auto zero = make_snake_zero_m(rng2);
  Rng probe2(20);
  auto out0 = snake_quotient_check(zero.m_sys, zero.mp_sys, zero.f, zero.k, zero.m, 6, probe2);
  CHECK(!out0.conclusion.violation_found);

  Rng rng3(21);
  auto ident = make_snake_identity(rng3);
  Rng probe3(22);
  auto out1 = snake_quotient_check(ident.m_sys, ident.mp_sys, ident.f, ident.k, ident.m, 6, probe3);
  CHECK(!out1.conclusion.violation_found);
}

TEST_CASE("double complex checker, degree 0 only") {
  Rng rng(23);
  auto di = make_double_instance(rng);
  di.sys.validate();
  Rng probe(24);
  auto out = double_complex_check(di.sys, di.k, 0, 6, probe);
  CHECK(out.constant >= 1);
  CHECK(out.eps * 2 * di.k <= 1);
  CHECK(!out.conclusion.violation_found);

  Rng probe2(25);
  CHECK_THROWS_AS(double_complex_check(di.sys, di.k, 1, 6, probe2), domain_error);
}

TEST_CASE("shift module scales the norm by exactly r") {
  Rng rng(29);
  auto V = make_shift_module(rng, 3, Rational(1, 2));
  V.validate(rng);
  QVec x = qv({3, -1, 2});
  CHECK(V.norm.eval(mat_apply(V.T, x)) == Rational(1, 2) * V.norm.eval(x));
}

TEST_CASE("shift model closure and weights") {
  auto model = build_shift_model(Rational(1, 2), Rational(1), 3, 100000);
  REQUIRE(!model.outer.empty());
  CHECK(model.weight(model.outer[0]) == 0);  // index 0 is the zero tuple
  CHECK(model.inner.size() <= model.outer.size());
  for (size_t i = 0; i < model.inner.size(); ++i) {
    CHECK(model.weight(model.inner[i]) <= model.rp * model.c);
    auto down = model.shift_down(model.inner[i]);
    CHECK(model.outer_index(down).has_value());
    CHECK(model.outer[model.inner_to_outer[i]] == model.inner[i]);
  }
}

TEST_CASE("tinv solve is exact and within the norm budget") {
  auto model = build_shift_model(Rational(1, 2), Rational(1), 3, 100000);
  Rng rng(31);
  auto V = make_shift_module(rng, 2, Rational(1, 2));
  std::vector<QVec> f(model.inner.size(), QVec(2, Rational(0)));
  for (auto& row : f)
    for (auto& v : row) v = Rational(long(rng.range(-5, 5))) / long(1 + rng.below(2));

  Rational eps(1, 20);
  auto res = tinv_solve(model, V, f, eps, model.depth + 4);
  CHECK(res.residual_max == 0);
  CHECK(res.g_norm <= Rational(1) * (1 + eps) * res.f_norm);  // r/(1-r) = 1 here
  CHECK(res.bound_ratio <= 1.0 + 0.05 + 1e-12);

  CHECK_THROWS_AS(tinv_solve(model, V, f, eps, 2), budget_exceeded);

  CHECK(tinv_forward_ratio(model, V, res.g) <= Rational(3));  // 1/r + 1
}

TEST_CASE("completion lift accumulates kernel corrections") {
  CompleteLiftProblem pb;
  pb.dim0 = 1;
  auto absn = [](const std::vector<double>& v) { return std::fabs(v[0]); };
  pb.norm0 = absn;
  pb.norm1 = absn;
  pb.norm2 = absn;
  pb.d0 = [](const std::vector<double>& v) { return v; };
  pb.d1 = [](const std::vector<double>& v) { return std::vector<double>{0.0}; };
  pb.C = 1;
  pb.D = 1;
  pb.d1_norm = 1;
  pb.solve0 = [](const std::vector<double>& v) { return v; };
  pb.solve1 = [](const std::vector<double>& v) { return std::vector<double>{0.0}; };
  pb.approx = [](const std::vector<double>& v, double) { return v; };

  auto out = complete_exact_lift(pb, {2.0}, 0.1);
  CHECK(out.bound_ok);
  CHECK(out.residual <= 1e-9);
  CHECK(out.x_hat[0] == doctest::Approx(2.0));

  auto zero = complete_exact_lift(pb, {0.0}, 0.1);
  CHECK(zero.bound_ok);
  CHECK(zero.corrections == 0);
  CHECK(zero.x_hat == std::vector<double>{0.0});

  // an oracle breaking its advertised constant is detected, not trusted
  auto bad = pb;
  bad.solve0 = [](const std::vector<double>& v) {
    return std::vector<double>{2.0 * v[0]};
  };
  CHECK_THROWS_AS(complete_exact_lift(bad, {2.0}, 0.1), hypothesis_failure);
}
