#include <doctest.h>

#include "logdrw/drw.hpp"
#include "logdrw/liftdr.hpp"
#include "logdrw/random.hpp"
#include "logdrw/wittpoly.hpp"

using namespace logdrw;

namespace {

const char* kModels[] = {
    "poly:p=2,n=2,e=1,f=1",
    "poly:p=3,n=3,e=2,f=0",
    "semistable:p=2,n=2,e=2,f=0,d=2",
    "semistable:p=3,n=3,e=3,f=0,d=2",
};

Weight wt(const LocalModel& mdl, std::vector<WeightEntry> v) {
  Weight w{std::move(v)};
  if (w.n() != mdl.n) throw std::logic_error("test weight arity");
  return w;
}

}  // namespace

TEST_CASE("unit, dlog and vanishing rule") {
  LocalModel mdl = parse_model("poly:p=3,n=2,e=1,f=1");
  int m = 2;
  DrwElement one = drw_unit(mdl, m);
  CHECK(one.degree() == 0);
  CHECK(multiply(one, one) == one);
  DrwElement dx = dlog_x(mdl, m, 1);
  CHECK(multiply(one, dx) == dx);
  CHECK(multiply(dx, dx).is_zero());
  // At m=1 a weight with denominator p vanishes.
  Weight k = wt(mdl, {WeightEntry::make(1, 1, 3), WeightEntry::zero()});
  CHECK(make_basic(mdl, 1, 0, k, Partition{{1}}, 0).is_zero());
  CHECK_FALSE(make_basic(mdl, 2, 3, k, Partition{{1}}, 0).is_zero());
  // ord_p(xi) < u(k+) is rejected.
  CHECK_THROWS(make_basic(mdl, 2, 1, k, Partition{{1}}, 0));
}

TEST_CASE("teichmuller multiplicativity in the normal form") {
  for (const char* desc : kModels) {
    LocalModel mdl = parse_model(desc);
    int m = 2;
    Expo e1(mdl.n, 0), e2(mdl.n, 0);
    e1[0] = 1;
    e2[mdl.n - 1] = 1;
    DrwElement x1 = teich_monomial(mdl, m, e1);
    DrwElement x2 = teich_monomial(mdl, m, e2);
    Expo both(mdl.n, 0);
    both[0] += 1;
    both[mdl.n - 1] += 1;
    CHECK(multiply(x1, x2) == teich_monomial(mdl, m, both));
  }
}

TEST_CASE("F, V, d on basic examples") {
  LocalModel mdl = parse_model("semistable:p=3,n=3,e=3,f=0,d=2");
  int m = 3;
  // F(dlog X_1) = dlog X_1.
  CHECK(frobenius(dlog_x(mdl, m, 1)) == dlog_x(mdl, m - 1, 1));
  // d(dlog X_1) = 0.
  CHECK(differential(dlog_x(mdl, m, 1)).is_zero());
  // F(V(w)) = p w on random elements.
  Sampler s(42);
  WeightBounds b{4, 1, true};
  for (int t = 0; t < 200; ++t) {
    DrwElement w = s.element(mdl, m, b, 3);
    CHECK(frobenius(verschiebung(w)) == w.scaled(3));
  }
}

TEST_CASE("identity suite across models") {
  Sampler s(20250815);
  for (const char* desc : kModels) {
    LocalModel mdl = parse_model(desc);
    WeightBounds b{4, 1, true};
    for (int m = 1; m <= 3; ++m) {
      for (int t = 0; t < 60; ++t) {
        DrwElement a = s.element(mdl, m, b, 2);
        DrwElement c = s.element(mdl, m, b, 2);
        // d o d = 0.
        CHECK(differential(differential(a)).is_zero());
        // Leibniz and graded commutativity on homogeneous pieces.
        for (int da = 0; da <= mdl.n + mdl.f; ++da)
          for (int dc = 0; dc <= mdl.n + mdl.f; ++dc) {
            DrwElement ha = a.degree_part(da), hc = c.degree_part(dc);
            if (ha.is_zero() || hc.is_zero()) continue;
            DrwElement prod = multiply(ha, hc);
            int sg = (da * dc % 2 == 0) ? 1 : -1;
            CHECK(prod == multiply(hc, ha).scaled(sg));
            // d is right-acting: d(ab) = a db + (-1)^{deg b} da b.
            CHECK(differential(prod) ==
                  multiply(ha, differential(hc)) +
                      multiply(differential(ha), hc).scaled(dc % 2 == 0 ? 1 : -1));
            if (da % 2 == 1) CHECK(multiply(ha, ha).is_zero());
          }
        if (m >= 2) {
          DrwElement am = s.element(mdl, m - 1, b, 2);
          // F d V = d.
          CHECK(frobenius(differential(verschiebung(am))) == differential(am));
          // V(x . F y) = V(x) . y.
          DrwElement y = s.element(mdl, m, b, 2);
          CHECK(verschiebung(multiply(am, frobenius(y))) == multiply(verschiebung(am), y));
          // pi compatibility.
          CHECK(restrict_level(differential(a)) == differential(restrict_level(a)));
          if (m - 1 >= 2)
            CHECK(restrict_level(verschiebung(am)) == verschiebung(restrict_level(am)));
          if (m - 1 >= 2) {
            DrwElement a2 = s.element(mdl, m, b, 2);
            CHECK(restrict_level(frobenius(a2)) == frobenius(restrict_level(a2)));
          }
        }
        // FV = p.
        CHECK(frobenius(verschiebung(a)) == a.scaled(mdl.p));
      }
    }
  }
}

TEST_CASE("F d [x] = [x^{p-1}] d [x]") {
  Sampler s(99);
  for (const char* desc : kModels) {
    LocalModel mdl = parse_model(desc);
    int m = 3;
    for (int t = 0; t < 50; ++t) {
      Expo kp(mdl.n, 0);
      for (int i = 0; i < mdl.n; ++i) kp[i] = (std::int32_t)s.uniform(0, 2);
      DrwElement x = teich_monomial(mdl, m, kp);
      Expo kpm1 = kp;
      for (auto& v : kpm1) v *= (std::int32_t)(mdl.p - 1);
      DrwElement lhs = frobenius(differential(x));
      DrwElement rhs = multiply(teich_monomial(mdl, m - 1, kpm1),
                                differential(teich_monomial(mdl, m - 1, kp)));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("restrict examples") {
  LocalModel mdl = parse_model("poly:p=2,n=1,e=0,f=0");
  Weight k = wt(mdl, {WeightEntry::make(1, 1, 2)});
  DrwElement e = make_basic(mdl, 2, 2, k, Partition{{1}}, 0);
  REQUIRE_FALSE(e.is_zero());
  CHECK(restrict_level(e).is_zero());
  CHECK(restrict_level(drw_unit(mdl, 2)) == drw_unit(mdl, 1));
}

TEST_CASE("degree-0 products match the independent Witt-vector oracle") {
  Sampler s(777);
  for (i64 p : {2, 3}) {
    LocalModel mdl;
    mdl.p = p;
    mdl.n = 2;
    mdl.e = 0;
    mdl.f = 0;
    mdl.d = 0;
    int N = 3;
    auto to_drw = [&](const std::vector<ExpansionTerm>& ts) {
      DrwElement r(mdl, N);
      for (auto& term : ts) {
        // The expansion coefficient is an F_p element: its scalar is the
        // Teichmueller lift, not the plain integer.
        i64 tau = teichmuller_lift(term.coeff, p, N - term.shift);
        DrwElement one = teich_monomial(mdl, N - term.shift, term.k, tau);
        for (int v = 0; v < term.shift; ++v) one = verschiebung(one);
        r = r + one;
      }
      return r;
    };
    auto drw_to_coords = [&](const DrwElement& dp) {
      std::vector<ExpansionTerm> pe;
      for (auto& [key, c] : dp.terms()) {
        i64 v = c;
        for (int depth = 0; depth < N; ++depth) {
          i64 digit = v % p;
          if (digit != 0) {
            Expo kk(2, 0);
            for (int i = 0; i < 2; ++i) {
              const WeightEntry& we = key.k.k[i];
              kk[i] = (std::int32_t)(we.num * ipow(p, depth - we.tpow));
            }
            pe.push_back({kk, depth, digit});
          }
          if (depth + 1 >= N) break;
          v = (v - teichmuller_lift(digit, p, N - depth)) / p;
          i64 shrink = ipow(p, N - depth - 1);
          v = ((v % shrink) + shrink) % shrink;
        }
      }
      return expansion_to_coords(pe, p, 2, N);
    };
    for (int t = 0; t < 250; ++t) {
      std::vector<ExpansionTerm> ta, tb;
      int na = (int)s.uniform(1, 3), nb = (int)s.uniform(1, 3);
      for (int i = 0; i < na; ++i)
        ta.push_back({{(std::int32_t)s.uniform(0, 2), (std::int32_t)s.uniform(0, 2)},
                      (int)s.uniform(0, N - 1),
                      s.uniform(1, p - 1)});
      for (int i = 0; i < nb; ++i)
        tb.push_back({{(std::int32_t)s.uniform(0, 2), (std::int32_t)s.uniform(0, 2)},
                      (int)s.uniform(0, N - 1),
                      s.uniform(1, p - 1)});
      DrwElement dp = multiply(to_drw(ta), to_drw(tb));
      WittVectorPoly wp = w_mul(expansion_to_coords(ta, p, 2, N), expansion_to_coords(tb, p, 2, N));
      CHECK(drw_to_coords(dp) == wp);
    }
  }
}

TEST_CASE("normal form words round-trip through normalization") {
  // Realize each basic term as the product of its word factors and check
  // the product normalizes back to the same term.
  Sampler s(31337);
  for (const char* desc : kModels) {
    LocalModel mdl = parse_model(desc);
    for (int m = 1; m <= 3; ++m) {
      WeightBounds b{4, 1, true};
      for (int t = 0; t < 120; ++t) {
        BasicKey key = s.basic_key(mdl, m, b);
        int u = key.k.u_plus(mdl.p);
        if (u >= m) continue;
        i64 xi = s.uniform(0, ipow(mdl.p, m - u) - 1) * ipow(mdl.p, u);
        DrwElement e = make_basic(mdl, m, xi, key.k, key.part, key.cset);
        if (e.is_zero()) continue;
        auto word = basic_word(mdl, m, key, xi);
        DrwElement acc = drw_unit(mdl, m);
        for (auto& fac : word) {
          DrwElement g(mdl, m);
          switch (fac.kind) {
            case WordFactor::DlogC:
              g = dlog_c(mdl, m, fac.index);
              break;
            case WordFactor::DlogX:
              g = dlog_x(mdl, m, fac.index);
              break;
            case WordFactor::VHead: {
              g = teich_monomial(mdl, m - fac.depth, fac.kappa, fac.eta);
              for (int v = 0; v < fac.depth; ++v) g = verschiebung(g);
              break;
            }
            case WordFactor::DV: {
              g = teich_monomial(mdl, m - fac.depth, fac.kappa, fac.eta);
              for (int v = 0; v < fac.depth; ++v) g = verschiebung(g);
              g = differential(g);
              break;
            }
            case WordFactor::FdX: {
              g = differential(teich_monomial(mdl, m + fac.depth, fac.kappa));
              for (int v = 0; v < fac.depth; ++v) g = frobenius(g);
              break;
            }
          }
          acc = multiply(acc, g);
        }
        CHECK(acc == e);
      }
    }
  }
}
