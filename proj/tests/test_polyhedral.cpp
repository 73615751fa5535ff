#include "doctest.h"

#include <algorithm>
#include <set>

#include "ztr/polyhedral.hpp"

using namespace ztr;

namespace {

QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

ZVec zv(std::initializer_list<long> xs) {
  ZVec v;
  for (long x : xs) v.push_back(Integer(x));
  return v;
}

PolyLattice scalar_lattice() {
  return PolyLattice(1, {qv({1}), qv({-1})}, {zv({1})});
}

}  // namespace

TEST_CASE("hilbert basis of the quadrant and of a width-2 cone") {
  auto quad = hilbert_basis(2, {qv({1, 0}), qv({0, 1})});
  std::sort(quad.begin(), quad.end());
  CHECK(quad == std::vector<ZVec>{zv({0, 1}), zv({1, 0})});

  // cone spanned by (1,0) and (1,2): inward normals (0,1) and (2,-1);
  // parallelepiped points (1,0), (1,1), (1,2), (2,2); the last is the sum
  // of the first and third, so the basis is the other three
  auto cone = hilbert_basis(2, {qv({0, 1}), qv({2, -1})});
  std::sort(cone.begin(), cone.end());
  CHECK(cone == std::vector<ZVec>{zv({1, 0}), zv({1, 1}), zv({1, 2})});
  CHECK(check_generates(2, {qv({0, 1}), qv({2, -1})}, cone, 5));
  CHECK(!check_generates(2, {qv({0, 1}), qv({2, -1})}, {zv({1, 0}), zv({1, 2})}, 5));
}

TEST_CASE("lattice construction is validated") {
  CHECK_THROWS_AS(PolyLattice(1, {qv({1})}, {zv({1})}), domain_error);  // F != -F
  // norm vanishes on e2: not a norm
  CHECK_THROWS_AS(PolyLattice(2, {qv({1, 0}), qv({-1, 0})}, {zv({1, 0})}),
                  domain_error);
  CHECK_THROWS_AS(PolyLattice(1, {qv({1, 0}), qv({-1, 0})}, {zv({1})}),
                  domain_error);  // shape mismatch
}

TEST_CASE("norm is the max over functionals") {
  PolyLattice L(2, {qv({1, 0}), qv({-1, 0}), qv({0, 1}), qv({0, -1})},
                {zv({1, 0}), zv({0, 1}), zv({1, 1})});
  CHECK(L.norm(qv({3, -4})) == Rational(4));
  CHECK(L.norm_z(zv({-5, 2})) == Rational(5));
}

TEST_CASE("scalar digit set is {-1, 0, 1}") {
  auto L = scalar_lattice();
  auto A = digit_set(L, 2);
  std::set<ZVec> s(A.begin(), A.end());
  CHECK(s == std::set<ZVec>{zv({-1}), zv({0}), zv({1})});
}

TEST_CASE("same-sign decomposition splits compatibly") {
  PolyLattice L(2, {qv({1, 0}), qv({-1, 0}), qv({0, 1}), qv({0, -1})},
                {zv({1, 0}), zv({0, 1}), zv({1, 1}), zv({1, -1})});
  for (long N : {2L, 4L}) {
    auto A = digit_set(L, N);
    for (auto x : {zv({5, 3}), zv({-4, 7}), zv({3, -3}), zv({0, 0})}) {
      auto sp = same_sign_decompose(L, x, N, A);
      for (size_t c = 0; c < 2; ++c)
        CHECK(x[c] == Integer(N) * sp.x0[c] + sp.digit[c]);
      CHECK(std::find(A.begin(), A.end(), sp.digit) != A.end());
      for (auto& lam : L.generators) {
        Integer a = 0, b = 0;
        for (size_t c = 0; c < 2; ++c) {
          a += sp.digit[c] * lam[c];
          b += sp.x0[c] * lam[c];
        }
        CHECK(a * b >= 0);  // weakly same sign per generator
      }
    }
  }
}

TEST_CASE("key decomposition, scalar closed case") {
  auto L = scalar_lattice();
  LatticeMeasure w(1, 2, Rational(1, 2), 1);
  w.x[0][0] = zv({5});
  w.x[1][0] = zv({3});
  Rational c = membership_level(L, w);
  CHECK(c == Rational(13, 4));

  auto kd = key_decompose(L, w, 2);
  CHECK(kd.d == 1);
  REQUIRE(kd.parts.size() == 2);

  // parts reconstruct w coefficientwise
  for (long n = 1; n <= 2; ++n) {
    Integer sum = 0;
    for (auto& part : kd.parts) sum += part.x[size_t(n - 1)][0][0];
    CHECK(sum == w.x[size_t(n - 1)][0][0]);
  }

  // 5 = 2*2+1, 3 = 2*1+1; the two unit items balance to masses 7/4 and 3/2
  std::multiset<Rational> masses;
  for (auto& part : kd.parts) masses.insert(measure_nu(L, part, 0));
  CHECK(masses == std::multiset<Rational>{Rational(3, 2), Rational(7, 4)});
  for (auto& m : masses) CHECK(m <= c / 2 + kd.d);
}

TEST_CASE("lattice json round trip") {
  PolyLattice L(2, {qv({1, 0}), qv({-1, 0}), qv({0, 1}), qv({0, -1})},
                {zv({2, 1}), zv({0, 1})});
  auto back = lattice_from_json(lattice_to_json(L));
  CHECK(back.k == L.k);
  CHECK(back.functionals == L.functionals);
  CHECK(back.generators == L.generators);
}
