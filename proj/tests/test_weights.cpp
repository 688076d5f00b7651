#include <doctest.h>

#include "logdrw/weights.hpp"

using namespace logdrw;

namespace {
Weight wt(std::vector<WeightEntry> v) { return Weight{std::move(v)}; }
WeightEntry fr(i64 num, int t, i64 p) { return WeightEntry::make(num, t, p); }
}  // namespace

TEST_CASE("model descriptor grammar round-trips") {
  LocalModel a = parse_model("poly:p=3,n=2,e=1,f=0");
  CHECK(a.p == 3);
  CHECK(a.n == 2);
  CHECK(a.e == 1);
  CHECK(a.d == 0);
  CHECK(parse_model(a.descriptor()) == a);
  LocalModel b = parse_model("semistable:p=3,n=2,e=2,f=0,d=2");
  CHECK(b.d == 2);
  CHECK(parse_model(b.descriptor()) == b);
  LocalModel c = parse_model("semistable:p=2,n=3,e=2,f=1,d=2,base=log");
  CHECK(c.log_point_base);
  CHECK(parse_model(c.descriptor()) == c);
  CHECK_THROWS(parse_model("poly:p=3"));
  CHECK_THROWS(parse_model("semistable:p=3,n=2,e=2,f=0"));
  CHECK_THROWS(parse_model("cubic:p=3,n=1,e=0,f=0"));
}

TEST_CASE("canonical order sorts by ord then index") {
  i64 p = 3;
  // k = (1/p, 2, pole) -> order (3, 1, 2).
  Weight k = wt({fr(1, 1, p), fr(2, 0, p), WeightEntry::make_pole()});
  CHECK(canonical_order(k, p) == std::vector<int>{3, 1, 2});
  Weight z = wt({WeightEntry::zero(), WeightEntry::zero()});
  CHECK(canonical_order(z, p).empty());
  Weight ones = wt({fr(1, 0, p), fr(1, 0, p)});
  CHECK(canonical_order(ones, p) == std::vector<int>{1, 2});
}

TEST_CASE("u, t, k_plus") {
  i64 p = 2;
  Weight k = wt({fr(1, 2, p), fr(3, 0, p)});
  CHECK(k.u_plus(p) == 2);
  Weight ik = wt({fr(4, 0, p), fr(3, 0, p)});
  CHECK(ik.u_plus(p) == 0);
  Weight pk = wt({WeightEntry::make_pole(), fr(1, 1, p)});
  Weight plus = pk.plus();
  CHECK(plus.k[0].is_zero());
  CHECK(plus.k[1] == fr(1, 1, p));
  CHECK(pk.u_plus(p) == 1);
}

TEST_CASE("weight scaling by p") {
  i64 p = 3;
  Weight k = wt({fr(2, 1, p), fr(9, 0, p)});
  Weight kp = k.times_p(p);
  CHECK(kp.k[0] == fr(2, 0, p));
  CHECK(kp.k[1] == fr(27, 0, p));
  CHECK(k.times_p(p).div_p(p) == k);
  // u(p*k) = max(0, u(k)-1) on pole-free weights.
  for (int t = 0; t <= 3; ++t) {
    Weight w = wt({fr(2, t, p)});
    CHECK(w.times_p(p).u_plus(p) == std::max(0, t - 1));
  }
}

TEST_CASE("partition enumeration counts and validation") {
  i64 p = 3;
  Weight empty = wt({WeightEntry::zero()});
  auto pe = enumerate_partitions(empty, p);
  REQUIRE(pe.size() == 1);
  CHECK(pe[0].seg == std::vector<int>{0});

  Weight one = wt({fr(1, 0, p)});
  auto p1 = enumerate_partitions(one, p);
  CHECK(p1.size() == 2);  // I0={i} or I0=empty, I1={i}

  Weight two = wt({fr(1, 0, p), fr(2, 0, p)});
  auto p2 = enumerate_partitions(two, p);
  CHECK(p2.size() == 4);

  for (auto& part : p2) CHECK(validate_partition(two, part, p));
  CHECK_FALSE(validate_partition(two, Partition{{0, 0}}, p));
  CHECK_FALSE(validate_partition(two, Partition{{3}}, p));
  CHECK_FALSE(validate_partition(two, Partition{{}}, p));

  // 2^(r-1) + 2^(r-1) structure: r=3 gives 8.
  Weight three = wt({fr(1, 0, p), fr(2, 0, p), fr(4, 0, p)});
  CHECK(enumerate_partitions(three, p).size() == 8);
}

TEST_CASE("weight enumeration respects bounds and the relation rule") {
  LocalModel poly = parse_model("poly:p=2,n=2,e=1,f=0");
  WeightBounds b{2, 1, true};
  auto ws = enumerate_weights(poly, b);
  for (auto& w : ws) {
    CHECK(w.valid_for(poly));
    CHECK_FALSE(w.k[1].pole);  // position 2 is not a log slot
  }
  LocalModel ss = parse_model("semistable:p=2,n=2,e=2,f=0,d=2");
  for (auto& w : enumerate_weights(ss, b)) {
    bool both = !w.k[0].pole && !w.k[0].is_zero() && !w.k[1].pole && !w.k[1].is_zero();
    CHECK_FALSE(both);
  }
}

TEST_CASE("abs_plus exact rational") {
  i64 p = 2;
  Weight k = wt({fr(3, 1, p), fr(1, 0, p), WeightEntry::make_pole()});
  auto [num, den] = k.abs_plus(p);
  CHECK(num == 5);  // 3/2 + 1 = 5/2
  CHECK(den == 1);
}
