#include <doctest.h>

#include <random>

#include "logdrw/homology.hpp"

using namespace logdrw;

namespace {
Mat from_rows(int r, int c, std::vector<std::vector<long>> rows) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  return m;
}
}  // namespace

TEST_CASE("snf small examples") {
  CHECK(snf(from_rows(2, 2, {{2, 0}, {0, 3}})).divisors() == std::vector<bigint>{1, 6});
  CHECK(snf(Mat(2, 3)).divisors().empty());
  // gcd-of-minors oracle for [[p,p],[0,p]]: d1 = gcd of entries = p,
  // d1*d2 = gcd of 2x2 minors = p^2, so (p, p).
  for (long p : {2L, 3L}) {
    auto d = snf(from_rows(2, 2, {{p, p}, {0, p}})).divisors();
    CHECK(d == std::vector<bigint>{p, p});
  }
}

TEST_CASE("snf certificates verify on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 6), val(-9, 9);
  for (int t = 0; t < 200; ++t) {
    int r = dim(rng), c = dim(rng);
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = val(rng);
    Snf s = snf(m);
    CHECK(s.verify(m));
    auto dv = s.divisors();
    for (size_t i = 1; i < dv.size(); ++i) CHECK(dv[i] % dv[i - 1] == 0);
  }
}

TEST_CASE("kernel and solve") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 5), val(-6, 6);
  for (int t = 0; t < 100; ++t) {
    int r = dim(rng), c = dim(rng);
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = val(rng);
    Mat k = kernel_basis(m);
    CHECK((m * k).is_zero());
    // A * (A-combination) is always solvable.
    Mat x(c, 1);
    for (int i = 0; i < c; ++i) x.at(i, 0) = val(rng);
    Mat b = m * x;
    Mat sol;
    REQUIRE(solve_integer(m, b, sol));
    CHECK(m * sol == b);
  }
}

TEST_CASE("invert_mod") {
  for (i64 p : {2, 3})
    for (int m = 1; m <= 3; ++m) {
      Mat a = from_rows(2, 2, {{1, (long)p}, {2 * (long)p + 1, 1}});
      Mat inv = invert_mod(a, p, m);
      bigint mod = 1;
      for (int i = 0; i < m; ++i) mod *= p;
      CHECK((a * inv).reduced_mod(mod) == Mat::identity(2));
    }
}

TEST_CASE("homology: multiplication by p on Z/p^2 in both degrees") {
  for (long p : {2L, 3L}) {
    PresentedComplex c = PresentedComplex::from_orders(
        0, {{bigint(p * p)}, {bigint(p * p)}}, {from_rows(1, 1, {{p}})});
    c.check_well_formed();
    auto rep = homology_of(c);
    CHECK(rep.divisors[0] == std::vector<bigint>{p});
    CHECK(rep.divisors[1] == std::vector<bigint>{p});
  }
}

TEST_CASE("homology: exact and identity complexes are acyclic") {
  long p = 3;
  PresentedComplex ident = PresentedComplex::from_orders(
      0, {{bigint(p)}, {bigint(p)}}, {from_rows(1, 1, {{1}})});
  CHECK(homology_of(ident).trivial());
  // 0 -> Z/p -> Z/p^2 -> Z/p -> 0 (x -> px, y -> y mod p) is exact.
  PresentedComplex ext = PresentedComplex::from_orders(
      0, {{bigint(p)}, {bigint(p * p)}, {bigint(p)}},
      {from_rows(1, 1, {{p}}), from_rows(1, 1, {{1}})});
  ext.check_well_formed();
  auto rep = homology_of(ext);
  CHECK(rep.trivial());
}

TEST_CASE("homology against brute-force group orders <= p^6") {
  // Random two-step complexes of cyclic p-groups; compare |H| computed via
  // |ker|/|im| order counting with the SNF result.
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    long p = (t % 2) ? 2 : 3;
    std::uniform_int_distribution<int> ord(1, 2), val(0, 8), dim(1, 2);
    int r0 = dim(rng), r1 = dim(rng), r2 = dim(rng);
    std::vector<std::vector<bigint>> orders(3);
    auto owner = [&](int r) {
      std::vector<bigint> o;
      for (int i = 0; i < r; ++i) o.push_back(bigint(p) * ((ord(rng) == 2) ? p : 1));
      return o;
    };
    orders[0] = owner(r0);
    orders[1] = owner(r1);
    orders[2] = owner(r2);
    // Boundary d0: multiply into compatible targets; build d with entries
    // divisible enough to be well-defined, then check d1 d0 = 0 by
    // construction d1 = 0.
    Mat d0(r1, r0), d1(r2, r1);
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < r0; ++j) {
        // need d0[i][j] * order(j) = 0 mod order(i): choose multiples.
        bigint need = orders[1][i] / boost::multiprecision::gcd(orders[1][i], orders[0][j]);
        d0.at(i, j) = need * val(rng);
      }
    PresentedComplex c = PresentedComplex::from_orders(0, orders, {d0, d1});
    c.check_well_formed();
    auto rep = homology_of(c);
    // |H^1| = |ker d1| / |im d0| = |C1| / |im d0|.
    ChainMap f{0, {d0, d1}};
    bigint im = image_order(c, c, ChainMap{0, {Mat(r1, r0), d0}}, 1);
    // image_order wants the map indexed at degree 1: build directly.
    PresentedComplex c0 = PresentedComplex::from_orders(0, {orders[0]}, {});
    PresentedComplex c1 = PresentedComplex::from_orders(0, {orders[1]}, {});
    bigint im01 = image_order(c0, c1, ChainMap{0, {d0}}, 0);
    bigint h1_order = 1;
    for (auto& d : rep.divisors[1]) h1_order *= d;
    bigint c1_order = c.group_order(1);
    CHECK(h1_order == c1_order / im01);
  }
}
