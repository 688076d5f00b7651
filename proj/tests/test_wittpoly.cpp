#include <doctest.h>

#include <random>

#include "logdrw/wittpoly.hpp"

using namespace logdrw;

TEST_CASE("universal witt polynomials: small cases") {
  // N=1: s0 = X0+Y0, m0 = X0Y0.
  const auto& u1 = universal_witt(2, 1);
  CHECK(u1.s(0) == ZPoly::variable(2, 0) + ZPoly::variable(2, 1));
  CHECK(u1.m(0) == ZPoly::variable(2, 0) * ZPoly::variable(2, 1));
  // N=2, p=2: s1 = X1 + Y1 - X0 Y0.
  const auto& u2 = universal_witt(2, 2);
  ZPoly x0 = ZPoly::variable(4, 0), y0 = ZPoly::variable(4, 1);
  ZPoly x1 = ZPoly::variable(4, 2), y1 = ZPoly::variable(4, 3);
  CHECK(u2.s(1) == x1 + y1 - x0 * y0);
  // N=2, any p: m1 = X0^p Y1 + X1 Y0^p + p X1 Y1.
  for (i64 p : {2, 3}) {
    const auto& u = universal_witt(p, 2);
    ZPoly a0 = ZPoly::variable(4, 0), b0 = ZPoly::variable(4, 1);
    ZPoly a1 = ZPoly::variable(4, 2), b1 = ZPoly::variable(4, 3);
    CHECK(u.m(1) == a0.pow((int)p) * b1 + a1 * b0.pow((int)p) + a1 * b1 * bigint(p));
  }
}

TEST_CASE("ghost identities hold exactly up to N = 4") {
  for (i64 p : {2, 3}) CHECK(universal_witt(p, 4).verify_ghost_identities());
}

TEST_CASE("witt vector examples") {
  for (i64 p : {2, 3}) {
    int N = 3, n = 2;
    FpPoly t1 = FpPoly::variable(p, n, 0), t2 = FpPoly::variable(p, n, 1);
    // [T1][T2] = [T1 T2].
    CHECK(w_mul(w_teichmuller(t1, N), w_teichmuller(t2, N)) == w_teichmuller(t1 * t2, N));
    // a + 0 = a.
    WittVectorPoly a = w_teichmuller(t1, N);
    a.coords[1] = t2;
    CHECK(w_add(a, w_zero(p, n, N)) == a);
    // V then F is multiplication by p.
    WittVectorPoly pa = w_mul(w_int(p, p, n, N - 1), [&] {
      WittVectorPoly r(p, n, N - 1);
      for (int i = 0; i < N - 1; ++i) r.coords[i] = a.coords[i];
      return r;
    }());
    CHECK(w_frobenius(w_verschiebung([&] {
            WittVectorPoly r(p, n, N - 1);
            for (int i = 0; i < N - 1; ++i) r.coords[i] = a.coords[i];
            return r;
          }())) == pa);
  }
  // p=2, N=2: [T] + [T] = (0, T^2).
  FpPoly t = FpPoly::variable(2, 1, 0);
  WittVectorPoly s = w_add(w_teichmuller(t, 2), w_teichmuller(t, 2));
  CHECK(s.coords[0].is_zero());
  CHECK(s.coords[1] == t * t);
}

TEST_CASE("frobenius is coordinate-wise p-th power") {
  for (i64 p : {2, 3}) {
    FpPoly t = FpPoly::variable(p, 1, 0);
    // F([T]) = [T^p].
    CHECK(w_frobenius(w_teichmuller(t, 3)) == w_teichmuller(t.pow((int)p), 2));
    CHECK(w_verschiebung(w_zero(p, 1, 2)) == w_zero(p, 1, 3));
  }
}

namespace {
WittVectorPoly random_wvp(std::mt19937_64& rng, i64 p, int n, int N, int max_terms) {
  WittVectorPoly a(p, n, N);
  std::uniform_int_distribution<int> deg(0, 2), coef(0, (int)p - 1), cnt(0, max_terms);
  for (int i = 0; i < N; ++i) {
    int k = cnt(rng);
    for (int t = 0; t < k; ++t) {
      Expo e(n);
      for (int v = 0; v < n; ++v) e[v] = deg(rng);
      a.coords[i].add_term(e, coef(rng));
    }
  }
  return a;
}
}  // namespace

TEST_CASE("expansion round-trips with coordinates") {
  // (T1, 0) -> {(e1, 0, 1)}; V([T1]) -> {(e1, 1, 1)}.
  for (i64 p : {2, 3}) {
    FpPoly t1 = FpPoly::variable(p, 2, 0);
    auto e1 = coords_to_expansion(w_teichmuller(t1, 2));
    REQUIRE(e1.size() == 1);
    CHECK(e1[0] == ExpansionTerm{{1, 0}, 0, 1});
    auto e2 = coords_to_expansion(w_verschiebung(w_teichmuller(t1, 1)));
    REQUIRE(e2.size() == 1);
    CHECK(e2[0] == ExpansionTerm{{1, 0}, 1, 1});
  }
  std::mt19937_64 rng(20240817);
  int trials = 500;
  for (int t = 0; t < trials; ++t) {
    i64 p = (t % 2 == 0) ? 2 : 3;
    int n = 1 + (t % 2), N = 2 + (t % 3);
    WittVectorPoly a = random_wvp(rng, p, n, N, 5);
    CHECK(expansion_to_coords(coords_to_expansion(a), p, n, N) == a);
  }
}
