#ifndef LOGDRW_RANDOM_HPP
#define LOGDRW_RANDOM_HPP

#include <random>

#include "logdrw/drw.hpp"

namespace logdrw {

// Deterministic random elements for the property suites; mt19937_64 is
// fully specified, so reports are reproducible across platforms.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  i64 uniform(i64 lo, i64 hi) {
    return std::uniform_int_distribution<i64>(lo, hi)(rng_);
  }

  Weight weight(const LocalModel& mdl, const WeightBounds& b) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      Weight w;
      w.k.assign(mdl.n, WeightEntry::zero());
      for (int i = 1; i <= mdl.n; ++i) {
        int kind = (int)uniform(0, 3);
        if (kind == 0) continue;
        if (kind == 1 && i <= mdl.e && b.allow_poles) {
          w.k[i - 1] = WeightEntry::make_pole();
          continue;
        }
        int t = (int)uniform(0, b.max_den);
        i64 a = uniform(1, b.max_num);
        if (t > 0 && a % mdl.p == 0) a = (a % mdl.p == 0) ? a + 1 : a;
        if (a > b.max_num) a = 1;
        w.k[i - 1] = WeightEntry::make(a, t, mdl.p);
      }
      if (w.valid_for(mdl)) return w;
    }
    Weight w;
    w.k.assign(mdl.n, WeightEntry::zero());
    return w;
  }

  BasicKey basic_key(const LocalModel& mdl, int m, const WeightBounds& b) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      Weight w = weight(mdl, b);
      if (w.u_plus(mdl.p) >= m) continue;
      auto parts = enumerate_partitions(w, mdl.p);
      BasicKey key;
      key.k = w;
      key.part = parts[(size_t)uniform(0, (i64)parts.size() - 1)];
      key.cset = 0;
      for (int j = 1; j <= mdl.f; ++j)
        if (uniform(0, 1)) key.cset |= 1u << j;
      return key;
    }
    BasicKey key;
    key.k.k.assign(mdl.n, WeightEntry::zero());
    key.part.seg = {0};
    return key;
  }

  // Random element with at most max_terms basic terms.
  DrwElement element(const LocalModel& mdl, int m, const WeightBounds& b, int max_terms) {
    DrwElement r(mdl, m);
    int nt = (int)uniform(1, max_terms);
    for (int t = 0; t < nt; ++t) {
      BasicKey key = basic_key(mdl, m, b);
      int u = key.k.u_plus(mdl.p);
      i64 xi = uniform(0, ipow(mdl.p, m - u) - 1) * ipow(mdl.p, u);
      r.add_term(key, xi);
    }
    return r;
  }

  // Homogeneous random element of one degree (may be zero if the degree is
  // not reachable quickly).
  DrwElement element_of_degree(const LocalModel& mdl, int m, const WeightBounds& b, int max_terms,
                               int degree) {
    DrwElement r(mdl, m);
    int nt = (int)uniform(1, max_terms);
    int guard = 0;
    while (nt > 0 && guard < 512) {
      ++guard;
      BasicKey key = basic_key(mdl, m, b);
      if (key.degree() != degree) continue;
      int u = key.k.u_plus(mdl.p);
      i64 xi = uniform(0, ipow(mdl.p, m - u) - 1) * ipow(mdl.p, u);
      r.add_term(key, xi);
      --nt;
    }
    return r;
  }

private:
  std::mt19937_64 rng_;
};

}  // namespace logdrw

#endif
