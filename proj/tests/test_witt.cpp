#include <doctest.h>

#include "logdrw/witt.hpp"

using namespace logdrw;

TEST_CASE("witt scalar arithmetic examples") {
  CHECK(WittScalar(3, 2, 4) + WittScalar(3, 2, 5) == WittScalar(3, 2, 0));
  CHECK(WittScalar(2, 3, 7) + WittScalar(2, 3, 1) == WittScalar(2, 3, 0));
  CHECK(WittScalar(3, 2, 0) + WittScalar(3, 2, 7) == WittScalar(3, 2, 7));
  CHECK(WittScalar(3, 2, 3) * WittScalar(3, 2, 3) == WittScalar(3, 2, 0));
  CHECK(WittScalar(2, 3, 3) * WittScalar(2, 3, 5) == WittScalar(2, 3, 7));
  CHECK(WittScalar(2, 3, 1) * WittScalar(2, 3, 6) == WittScalar(2, 3, 6));
}

TEST_CASE("level mismatch is an error") {
  CHECK_THROWS_AS(WittScalar(3, 2, 1) + WittScalar(3, 3, 1), LevelMismatch);
  CHECK_THROWS_AS(WittScalar(3, 2, 1) * WittScalar(2, 2, 1), LevelMismatch);
}

TEST_CASE("frobenius and verschiebung") {
  // 10 mod 9 at level 2.
  CHECK(WittScalar(3, 3, 10).frobenius() == WittScalar(3, 2, 1));
  CHECK(WittScalar(3, 3, 1).frobenius() == WittScalar(3, 2, 1));
  CHECK_THROWS_AS(WittScalar(3, 1, 1).frobenius(), LevelMismatch);
  // V(2) at p=3, m=1 -> 6 at level 2 (Witt coordinates (0,2)).
  CHECK(WittScalar(3, 1, 2).verschiebung() == WittScalar(3, 2, 6));
  CHECK(WittScalar(3, 1, 0).verschiebung() == WittScalar(3, 2, 0));
}

TEST_CASE("FV = p exhaustively for p in {2,3}, m <= 3") {
  for (i64 p : {2, 3})
    for (int m = 1; m <= 3; ++m)
      for (i64 v = 0; v < ipow(p, m); ++v) {
        WittScalar a(p, m, v);
        CHECK(a.verschiebung().frobenius() == a.scaled(p));
      }
}

TEST_CASE("ring axioms exhaustively for p in {2,3}, m <= 3") {
  for (i64 p : {2, 3})
    for (int m = 1; m <= 3; ++m) {
      i64 mod = ipow(p, m);
      for (i64 a = 0; a < mod; ++a)
        for (i64 b = 0; b < mod; ++b) {
          WittScalar x(p, m, a), y(p, m, b);
          CHECK(x + y == y + x);
          CHECK(x * y == y * x);
          for (i64 c = 0; c < mod; ++c) {
            WittScalar z(p, m, c);
            CHECK((x + y) + z == x + (y + z));
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
          }
        }
    }
}

TEST_CASE("teichmuller lifts") {
  CHECK(teichmuller(2, 3, 2) == WittScalar(3, 2, 8));
  CHECK(teichmuller(0, 3, 2) == WittScalar(3, 2, 0));
  CHECK(teichmuller(1, 3, 2) == WittScalar(3, 2, 1));
  // multiplicative: [a][b] = [ab] for all a, b in F_p.
  for (i64 p : {2, 3})
    for (int m = 1; m <= 4; ++m)
      for (i64 a = 0; a < p; ++a)
        for (i64 b = 0; b < p; ++b)
          CHECK(teichmuller(a, p, m) * teichmuller(b, p, m) == teichmuller(a * b % p, p, m));
}

TEST_CASE("ord_p") {
  CHECK(WittScalar(3, 2, 6).ord() == 1);
  CHECK(WittScalar(3, 2, 0).ord() == 2);  // >= m means +infinity
  CHECK(WittScalar(3, 2, 1).ord() == 0);
  // ord(ab) = ord(a) + ord(b) when the sum stays below m.
  for (i64 p : {2, 3}) {
    int m = 3;
    for (i64 a = 1; a < ipow(p, m); ++a)
      for (i64 b = 1; b < ipow(p, m); ++b) {
        WittScalar x(p, m, a), y(p, m, b);
        if (x.ord() + y.ord() < m) CHECK((x * y).ord() == x.ord() + y.ord());
      }
  }
}
