#include "doctest.h"

#include <cmath>

#include "ztr/entropy.hpp"
#include "ztr/numeric.hpp"

using namespace ztr;

TEST_CASE("xlogx extends continuously through 0") {
  CHECK(xlogx(0.0) == 0.0);
  CHECK(xlogx(1.0) == 0.0);
  CHECK(xlogx(-1.0) == 0.0);
  CHECK(xlogx(std::exp(1.0)) == doctest::Approx(std::exp(1.0)));
  CHECK(xlogx(-2.0) == doctest::Approx(-2.0 * std::log(2.0)));
}

TEST_CASE("entropy defect values and bound") {
  CHECK(entropy_defect(1.0, 1.0) == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(entropy_defect(3.0, 0.0) == 0.0);
  CHECK(entropy_defect(1.0, -1.0) == 0.0);  // s + t = 0 reads 0 log 0

  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    double s = rng.signed_log_uniform(1e-8, 1e3);
    double t = rng.signed_log_uniform(1e-8, 1e3);
    CHECK(entropy_defect(s, t) <= 2.0 * std::log(2.0) * (std::fabs(s) + std::fabs(t)) + 1e-9);
  }
}

TEST_CASE("H of the uniform measure is log n") {
  for (size_t n : {2, 10, 137, 10000}) {
    std::vector<double> x(n, 1.0 / double(n));
    CHECK(std::fabs(entropy_H(x) - std::log(double(n))) <= 1e-12);
  }
  CHECK(entropy_H({0.7}) == 0.0);
  CHECK(entropy_H({}) == 0.0);
}

TEST_CASE("H is positively homogeneous") {
  std::vector<double> x = {0.3, -1.2, 4.0, 0.01};
  double h = entropy_H(x);
  for (double lam : {2.0, 0.125, 97.0}) {
    std::vector<double> y;
    for (double v : x) y.push_back(lam * v);
    CHECK(entropy_H(y) == doctest::Approx(lam * h).epsilon(1e-10));
  }
}

TEST_CASE("ribe norm and quasi-norm constant") {
  double e = std::exp(1.0);
  CHECK(ribe_norm({{1.0}, {0.0}}) == doctest::Approx(1.0));
  CHECK(ribe_norm({{e}, {0.0}}) == doctest::Approx(2.0 * e));
  CHECK(ribe_norm({{0.0}, {-3.0}}) == doctest::Approx(3.0));
  CHECK(ribe_quasi_constant() == doctest::Approx(1.0 + 2.0 * std::log(2.0)));

  Rng rng(12);
  double cap = ribe_quasi_constant() * (1.0 + 1e-12);
  for (int i = 0; i < 500; ++i) {
    RibeElement u, v;
    size_t dim = 1 + rng.below(5);
    for (size_t j = 0; j < dim; ++j) {
      u.x.push_back(rng.signed_log_uniform(1e-6, 1e2));
      u.y.push_back(rng.signed_log_uniform(1e-6, 1e2));
      v.x.push_back(rng.signed_log_uniform(1e-6, 1e2));
      v.y.push_back(rng.signed_log_uniform(1e-6, 1e2));
    }
    double lhs = ribe_norm(ribe_add(u, v));
    CHECK(lhs <= cap * (ribe_norm(u) + ribe_norm(v)) + 1e-9);
  }
}

TEST_CASE("nonsplit witness forces log n growth") {
  auto w = nonsplit_witness(5.0, 1.0);
  CHECK(w.n == 404);  // ceil(exp(6))
  CHECK(w.defect >= 1.0);

  // n is monotone in L and at least e^L
  uint64_t expect[] = {2, 5, 13, 34, 245, 4915};
  double ls[] = {0.0, 1.0, 2.0, 3.0, 5.0, 8.0};
  for (int i = 0; i < 6; ++i) {
    auto wi = nonsplit_witness(ls[i], 0.5);
    CHECK(wi.n == expect[i]);
    CHECK(wi.defect >= 0.5 - 1e-12);
    CHECK(double(wi.n) >= std::exp(ls[i]));
  }
}
