#include "doctest.h"

#include "ztr/qcomplex.hpp"

using namespace ztr;

TEST_CASE("group arithmetic and element enumeration") {
  FinAbGroup g({2, 3});
  CHECK(g.order() == 6);
  CHECK(g.elements().size() == 6);
  CHECK(g.add({1, 2}, {1, 2}) == GroupElem{0, 1});
  CHECK(g.neg({1, 1}) == GroupElem{1, 2});
  CHECK(g.reduce({5, -1}) == GroupElem{1, 2});
  CHECK(g.square().factors == std::vector<long>{2, 3, 2, 3});
  CHECK_THROWS_AS(FinAbGroup({1}), domain_error);
  CHECK_THROWS_AS(FinAbGroup({2, 0}).order(), domain_error);
}

TEST_CASE("differential squares to zero, homotopy identity holds") {
  CHECK(verify_dd_zero(FinAbGroup({2}), 3));
  CHECK(verify_dd_zero(FinAbGroup({3}), 3));
  CHECK(verify_homotopy(FinAbGroup({2}), 2));
  CHECK(verify_homotopy(FinAbGroup({3}), 1));
}

TEST_CASE("degree-2 differential is the six-term formula") {
  // d2[(a,b,c,d)] = [(a+c,b+d)] - [(a,b)] - [(c,d)] - [(a+b,c+d)]
  //                 + [(a,c)] + [(b,d)], checked on every tuple over Z/5
  FinAbGroup M({5});
  auto pair_tuple = [&](long u, long v) {
    return QTuple{((u % 5) + 5) % 5, ((v % 5) + 5) % 5};
  };
  for (long a = 0; a < 5; ++a)
    for (long b = 0; b < 5; ++b)
      for (long c = 0; c < 5; ++c)
        for (long d = 0; d < 5; ++d) {
          QChain want(M, 1);
          want.add_term(pair_tuple(a + c, b + d), 1);
          want.add_term(pair_tuple(a, b), -1);
          want.add_term(pair_tuple(c, d), -1);
          want.add_term(pair_tuple(a + b, c + d), -1);
          want.add_term(pair_tuple(a, c), 1);
          want.add_term(pair_tuple(b, d), 1);
          auto got = q_differential(qchain_single(M, 2, {a, b, c, d}));
          REQUIRE(got == want);
        }
}

TEST_CASE("identify places the halves at paired positions") {
  FinAbGroup G({3});
  auto in = qchain_single(G.square(), 0, {1, 2});
  CHECK(q_identify(G, in) == qchain_single(G, 1, {1, 2}));

  // degree 1 over (Z/3)^2: component j of the input lands at j and j + 2
  auto in1 = qchain_single(G.square(), 1, {1, 2, 0, 1});
  CHECK(q_identify(G, in1) == qchain_single(G, 2, {1, 0, 2, 1}));
}

TEST_CASE("sigma maps on a degree-1 chain") {
  FinAbGroup G({4});
  auto ch = qchain_single(G.square(), 1, {1, 3, 2, 1});  // ((1,3),(2,1))
  CHECK(q_sigma(SigmaKind::Sum, G, ch) == qchain_single(G, 1, {0, 3}));
  QChain split(G, 1);
  split.add_term({1, 2}, 1);
  split.add_term({3, 1}, 1);
  CHECK(q_sigma(SigmaKind::Split, G, ch) == split);
}

TEST_CASE("homology of the complex at Z/2") {
  // H0 is the group itself
  auto h0 = q_homology(FinAbGroup({2}), 0);
  CHECK(h0.free_rank == 0);
  CHECK(h0.divisor_list() == std::vector<Integer>{Integer(2)});

  // H1: ker d1 is the rank-2 sum-zero lattice on {[00],[01],[10]} and the
  // image of d2 is exactly twice it (direct enumeration of the 16 images),
  // so H1 = (Z/2)^2
  auto h1 = q_homology(FinAbGroup({2}), 1);
  CHECK(h1.free_rank == 0);
  CHECK(h1.divisor_list() == std::vector<Integer>{Integer(2), Integer(2)});
}

TEST_CASE("H0 does not depend on the presentation") {
  auto a = q_homology(FinAbGroup({2, 3}), 0);
  auto b = q_homology(FinAbGroup({6}), 0);
  CHECK(a.divisor_list() == b.divisor_list());
  CHECK(a.divisor_list() == std::vector<Integer>{Integer(6)});
}

TEST_CASE("homology respects the matrix entry budget") {
  CHECK_THROWS_AS(q_homology(FinAbGroup({2}), 2, 100), budget_exceeded);
}

TEST_CASE("N-fold homotopy and its filtration") {
  FinAbGroup M({2});
  CHECK(verify_homotopy_N(M, 4, 1));

  auto F = integer_abs_filtered();
  CHECK(check_pseudonorm(F, Rational(10)));
  CHECK(filtered_check(F, Rational(8), 2));
  CHECK(!filtered_check(F, Rational(8), 2, Rational(1, 2)));
  CHECK(homotopy_N_filtration(F, 4, Rational(8), 1));
}

TEST_CASE("pseudonorm check rejects a triangle violation") {
  FinAbGroup z4({4});
  auto bad = finite_filtered(z4, [](const GroupElem& e) {
    long v = e[0] <= 2 ? e[0] : 4 - e[0];  // |e| in Z/4
    return v == 2 ? Rational(5) : Rational(v);
  });
  CHECK(!check_pseudonorm(bad, Rational(5)));
}

TEST_CASE("chains serialize and come back") {
  FinAbGroup M({2, 2});
  QChain ch(M, 1);
  ch.add_term({1, 0, 0, 1}, 3);
  ch.add_term({0, 1, 1, 1}, -2);
  auto j = qchain_to_json(ch);
  CHECK(qchain_from_json(M, j) == ch);
}
