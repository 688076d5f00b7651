#include "logdrw/drw.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>

#include "logdrw/matrix.hpp"

namespace logdrw {

int BasicKey::degree() const {
  int poles = 0;
  for (auto& w : k.k)
    if (w.pole) ++poles;
  return std::popcount(cset) + poles + part.l();
}

void DrwElement::check_compatible(const DrwElement& o) const {
  if (!(mdl_ == o.mdl_) || m_ != o.m_)
    throw LevelMismatch("DrwElement: model/level mismatch");
}

void DrwElement::add_term(const BasicKey& key, i64 c) {
  int u = key.k.u_plus(mdl_.p);
  if (u >= m_) return;  // p^{m-1} k+ not integral: the class vanishes
  i64 mod = ipow(mdl_.p, m_);
  c = ((c % mod) + mod) % mod;
  if (c == 0) return;
  if (vp(c, mdl_.p, m_) < u)
    throw std::invalid_argument("DrwElement: coefficient leaves V^{u(k+)}W");
  auto it = t_.find(key);
  if (it == t_.end()) {
    t_.emplace(key, c);
  } else {
    it->second = (it->second + c) % mod;
    if (it->second == 0) t_.erase(it);
  }
}

DrwElement DrwElement::operator+(const DrwElement& o) const {
  check_compatible(o);
  DrwElement r = *this;
  for (auto& [k, c] : o.t_) r.add_term(k, c);
  return r;
}

DrwElement DrwElement::operator-(const DrwElement& o) const {
  check_compatible(o);
  DrwElement r = *this;
  for (auto& [k, c] : o.t_) r.add_term(k, -c);
  return r;
}

DrwElement DrwElement::scaled(i64 c) const {
  DrwElement r(mdl_, m_);
  for (auto& [k, v] : t_) r.add_term(k, v * (c % ipow(mdl_.p, m_)));
  return r;
}

bool DrwElement::homogeneous() const {
  int deg = -1;
  for (auto& [k, c] : t_) {
    if (deg < 0) deg = k.degree();
    if (k.degree() != deg) return false;
  }
  return true;
}

int DrwElement::degree() const {
  if (t_.empty()) return -1;
  return t_.begin()->first.degree();
}

DrwElement DrwElement::degree_part(int deg) const {
  DrwElement r(mdl_, m_);
  for (auto& [k, c] : t_)
    if (k.degree() == deg) r.add_term(k, c);
  return r;
}

DrwElement drw_zero(const LocalModel& mdl, int m) { return DrwElement(mdl, m); }

DrwElement drw_unit(const LocalModel& mdl, int m) {
  DrwElement r(mdl, m);
  BasicKey key;
  key.k.k.assign(mdl.n, WeightEntry::zero());
  key.part.seg = {0};
  r.add_term(key, 1);
  return r;
}

DrwElement make_basic(const LocalModel& mdl, int m, i64 xi, const Weight& k, const Partition& part,
                      std::uint32_t cset) {
  if (k.n() != mdl.n) throw std::invalid_argument("make_basic: weight arity mismatch");
  for (int i = mdl.e + 1; i <= mdl.n; ++i)
    if (k.k[i - 1].pole) throw std::invalid_argument("make_basic: pole beyond the log positions");
  if (!k.valid_for(mdl))
    throw std::invalid_argument("make_basic: weight violates the relation constraint");
  if (!validate_partition(k, part, mdl.p)) throw std::invalid_argument("make_basic: bad partition");
  if ((cset >> (mdl.f + 1)) != 0 || (cset & 1u))
    throw std::invalid_argument("make_basic: phantom subset out of range");
  int u = k.u_plus(mdl.p);
  i64 mod = ipow(mdl.p, m);
  i64 v = ((xi % mod) + mod) % mod;
  if (v != 0 && vp(v, mdl.p, m) < std::min(u, m))
    throw std::invalid_argument("make_basic: ord_p(xi) < u(k+)");
  DrwElement r(mdl, m);
  r.add_term(BasicKey{k, part, cset}, v);
  return r;
}

DrwElement dlog_x(const LocalModel& mdl, int m, int i) {
  if (i < 1 || i > mdl.e) throw std::invalid_argument("dlog_x: index beyond log positions");
  Weight k;
  k.k.assign(mdl.n, WeightEntry::zero());
  k.k[i - 1] = WeightEntry::make_pole();
  Partition part;
  part.seg = {0};
  return make_basic(mdl, m, 1, k, part, 0);
}

DrwElement dlog_c(const LocalModel& mdl, int m, int j) {
  if (j < 1 || j > mdl.f) throw std::invalid_argument("dlog_c: index beyond phantom generators");
  Weight k;
  k.k.assign(mdl.n, WeightEntry::zero());
  Partition part;
  part.seg = {0};
  return make_basic(mdl, m, 1, k, part, 1u << j);
}

namespace {

// ---------------------------------------------------------------------
// Word machinery.  A star word is
//   (dlog c_{cs}) (dlog X_{xs}) * V^{u0}(eta0 X^{k0}) * prod_i dV^{u_i}(eta_i X^{k_i})
// with integral exponent vectors; every element is a sum of such words,
// and normalization rewrites a word into the normal form.
// ---------------------------------------------------------------------

struct VFac {
  int u = 0;
  i64 eta = 1;
  Expo kap;
};

struct Star {
  std::vector<int> cs, xs;  // sorted ascending
  VFac head;
  std::vector<VFac> dfs;
};

bool kap_zero(const Expo& k) {
  for (auto x : k)
    if (x) return false;
  return true;
}

bool kap_div_p(const Expo& k, i64 p) {
  for (auto x : k)
    if (x % p) return false;
  return true;
}

Expo kap_scaled(const Expo& k, i64 c) {
  Expo r = k;
  for (auto& x : r) x = (std::int32_t)(x * c);
  return r;
}

Expo kap_add(const Expo& a, const Expo& b) {
  Expo r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

// V^u(eta X^kap) with p | kap pulls one V inside: (u,eta,p*lam) -> (u-1, p*eta, lam).
void depth_minimize(VFac& v, i64 p) {
  while (v.u > 0 && kap_div_p(v.kap, p)) {
    --v.u;
    v.eta *= p;
    for (auto& x : v.kap) x = (std::int32_t)(x / p);
  }
}

// V^a(x) * V^b(y) = V^max(a,b)(..) with the shallower side Frobenius-
// twisted; eta is reduced at its own level m - u to keep values small.
VFac v_merge(const VFac& a, const VFac& b, i64 p, int m) {
  const VFac& hi = (a.u >= b.u) ? a : b;
  const VFac& lo = (a.u >= b.u) ? b : a;
  VFac r;
  r.u = hi.u;
  r.eta = hi.eta % ipow(p, std::max(1, m)) * (lo.eta % ipow(p, std::max(1, m))) % ipow(p, std::max(1, m));
  r.eta = r.eta * ipow(p, lo.u);
  if (m - r.u >= 1) r.eta %= ipow(p, m - r.u);
  r.kap = kap_add(hi.kap, kap_scaled(lo.kap, ipow(p, hi.u - lo.u)));
  return r;
}

// Merge two ascending index lists; sign collects one transposition per
// crossing; duplicate index kills the product (returns false).
bool merge_sorted_sign(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out,
                       int& sign) {
  out.clear();
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      if ((a.size() - i) % 2 == 1) sign = -sign;
      out.push_back(b[j++]);
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return true;
}

struct RawForm {
  // coeff * X^a * dX_{dxs} under fixed (cs, xs); dxs sorted ascending.
  i64 coeff;
  Expo a;
  std::vector<int> dxs;
};

// Key of the inverse expansion-matrix cache.  The full weight is part of
// the key: the expansion matrix depends on the positions, not just on the
// canonically ordered value list.
struct SolveKey {
  i64 p;
  int m;
  int l;
  Weight w;
  auto operator<=>(const SolveKey& o) const = default;
};

std::map<SolveKey, Mat>& solve_cache() {
  static std::map<SolveKey, Mat> cache;
  return cache;
}
std::mutex solve_cache_mu;

std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& base, int l) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, size_t start) -> void {
    if ((int)cur.size() == l) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i + (l - cur.size()) <= base.size(); ++i) {
      cur.push_back(base[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

int sort_sign(std::vector<int>& v) {
  int sign = 1;
  for (size_t i = 1; i < v.size(); ++i)
    for (size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  return sign;
}

// Expansion matrix of the integral normal-form basis into raw monomial
// forms, inverted mod p^m.  Rows/cols are indexed by the returned lists.
struct IntegralBasisSolve {
  std::vector<std::vector<int>> tsets;     // raw indices: sorted subsets of Supp w
  std::vector<Partition> parts;            // basis indices: partitions with l slots
  Mat einv;                                // maps raw coordinates to basis coordinates
};

IntegralBasisSolve integral_basis_solve(const LocalModel& mdl, int m, const Weight& w, int l) {
  i64 p = mdl.p;
  std::vector<int> order = canonical_order(w, p);
  SolveKey key{p, m, l, w};
  IntegralBasisSolve out;
  out.tsets = subsets_of_size(order, l);
  for (auto& t : out.tsets) std::sort(t.begin(), t.end());
  std::sort(out.tsets.begin(), out.tsets.end());
  for (auto& part : enumerate_partitions(w, p))
    if (part.l() == l) out.parts.push_back(part);
  {
    std::lock_guard<std::mutex> lock(solve_cache_mu);
    auto it = solve_cache().find(key);
    if (it != solve_cache().end()) {
      out.einv = it->second;
      return out;
    }
  }
  int nn = (int)out.tsets.size();
  if ((int)out.parts.size() != nn)
    throw std::runtime_error("integral basis: partition/subset count mismatch");
  Mat e(nn, nn);
  for (int col = 0; col < nn; ++col) {
    auto ivs = partition_intervals(w, out.parts[col], p);
    // Expand prod_j F^{s_j} dX^{w_{I_j}/p^{s_j}}: pick one t_j per interval.
    std::vector<int> pick(l, 0);
    auto rec = [&](auto&& self, int j, i64 coeff, std::vector<int> ts) -> void {
      if (j > l) {
        int sgn = sort_sign(ts);
        auto row = std::lower_bound(out.tsets.begin(), out.tsets.end(), ts);
        e.at((int)(row - out.tsets.begin()), col) += bigint(sgn) * coeff;
        return;
      }
      const auto& iv = ivs[j];
      int s = -t_of(w, iv, p);  // = ord of the leading entry, >= 0
      for (int t : iv) {
        i64 wt = w.k[t - 1].num;  // integral weight: value = num
        ts.push_back(t);
        self(self, j + 1, coeff * (wt / ipow(p, s)), ts);
        ts.pop_back();
      }
    };
    rec(rec, 1, 1, {});
  }
  out.einv = invert_mod(e, p, m);
  {
    std::lock_guard<std::mutex> lock(solve_cache_mu);
    solve_cache().emplace(key, out.einv);
  }
  return out;
}

DrwElement normalize_star(const LocalModel& mdl, int m, Star st, i64 coeff);

// All factors integral: expand to raw monomial wedge forms, absorb dlog X
// against positive exponents, apply the relation kill rule, and re-express
// in the normal-form basis.
DrwElement normalize_integral(const LocalModel& mdl, int m, const Star& st, i64 coeff) {
  i64 p = mdl.p;
  i64 mod = ipow(p, m);
  DrwElement out(mdl, m);
  i64 c0 = coeff % mod;
  c0 = c0 * (st.head.eta % mod) % mod;
  for (auto& df : st.dfs) c0 = c0 * (df.eta % mod) % mod;
  if (c0 == 0) return out;

  // Expand d(X^kap_i) = sum_t kap_i[t] X^{kap_i - e_t} dX_t over all picks.
  std::vector<RawForm> raws;
  RawForm base{c0, st.head.kap, {}};
  raws.push_back(base);
  for (auto& df : st.dfs) {
    std::vector<RawForm> next;
    for (auto& r : raws)
      for (int t = 1; t <= mdl.n; ++t) {
        if (df.kap[t - 1] == 0) continue;
        RawForm nr = r;
        nr.coeff = nr.coeff * (df.kap[t - 1] % mod) % mod;
        nr.a = kap_add(nr.a, df.kap);
        nr.a[t - 1] -= 1;
        nr.dxs.push_back(t);  // word order; sorted later
        next.push_back(std::move(nr));
      }
    raws = std::move(next);
  }

  std::uint32_t rel = mdl.rel_mask();
  // Group raw forms by (poles, weight, degree) after absorption.
  std::map<std::tuple<std::vector<int>, Weight, int>, std::map<std::vector<int>, i64>> groups;
  for (auto& r : raws) {
    // Symbol list in current order: LX_x slots (ascending x), then the dX
    // factors in word order.  Absorption replaces an LX slot in place by a
    // DX; the final insertion sort charges one sign per transposition.
    struct Sym {
      int kind;  // 1 = dlog X, 2 = dX
      int idx;
      auto operator<=>(const Sym& o) const = default;
    };
    std::vector<Sym> syms;
    Expo a = r.a;
    bool dead = false;
    for (int x : st.xs) {
      if (a[x - 1] > 0) {
        a[x - 1] -= 1;
        syms.push_back({2, x});
      } else {
        syms.push_back({1, x});
      }
    }
    for (int t : r.dxs) syms.push_back({2, t});
    // Insertion sort with sign; duplicate degree-1 symbols kill the form.
    int sign = 1;
    for (size_t i = 1; i < syms.size() && !dead; ++i)
      for (size_t j = i; j > 0; --j) {
        if (syms[j - 1] == syms[j]) {
          dead = true;
          break;
        }
        if (syms[j] < syms[j - 1]) {
          std::swap(syms[j - 1], syms[j]);
          sign = -sign;
        } else {
          break;
        }
      }
    if (dead) continue;
    std::vector<int> poles, dxs;
    for (auto& s : syms)
      (s.kind == 1 ? poles : dxs).push_back(s.idx);
    // dlog X ∧ dX of the same variable vanishes.
    for (int x : poles)
      if (std::find(dxs.begin(), dxs.end(), x) != dxs.end()) dead = true;
    if (dead) continue;
    // Relation kill: X^a dX_T vanishes when the relation divisors are all
    // present among supp(a) + T.
    if (rel) {
      bool covered = true;
      for (int i = 1; i <= mdl.n && covered; ++i) {
        if (!((rel >> i) & 1u)) continue;
        bool present = a[i - 1] > 0 || std::find(dxs.begin(), dxs.end(), i) != dxs.end();
        if (!present) covered = false;
      }
      if (covered) continue;
    }
    Weight w;
    w.k.assign(mdl.n, WeightEntry::zero());
    for (int i = 1; i <= mdl.n; ++i)
      if (a[i - 1] > 0) w.k[i - 1] = WeightEntry::make(a[i - 1], 0, p);
    for (int t : dxs) w.k[t - 1] = WeightEntry::make(w.k[t - 1].num + 1, 0, p);
    groups[{poles, w, (int)dxs.size()}][dxs] += sign * r.coeff;
  }

  std::uint32_t cset = 0;
  for (int j : st.cs) cset |= 1u << j;

  for (auto& [pk, rawcoords] : groups) {
    const auto& [poles, w, l] = pk;
    IntegralBasisSolve solve = integral_basis_solve(mdl, m, w, l);
    int nn = (int)solve.tsets.size();
    Mat rho(nn, 1);
    for (auto& [ts, c] : rawcoords) {
      auto it = std::lower_bound(solve.tsets.begin(), solve.tsets.end(), ts);
      rho.at((int)(it - solve.tsets.begin()), 0) = ((c % mod) + mod) % mod;
    }
    Mat beta = solve.einv * rho;
    for (int row = 0; row < nn; ++row) {
      bigint b = beta.at(row, 0) % mod;
      if (b < 0) b += mod;
      if (b == 0) continue;
      Weight kk = w;
      for (int x : poles) kk.k[x - 1] = WeightEntry::make_pole();
      out.add_term(BasicKey{kk, solve.parts[row], cset}, (i64)b);
    }
  }
  return out;
}

// Reconstruct the star word of one basic term; xi rides the head or the
// first d-factor depending on whether I_0 is empty.
Star star_of_basic(const LocalModel& mdl, const BasicKey& key, i64 xi, int m) {
  i64 p = mdl.p;
  Star st;
  for (int j = 1; j <= mdl.f; ++j)
    if ((key.cset >> j) & 1u) st.cs.push_back(j);
  st.xs = key.k.poles();
  st.head.kap.assign(mdl.n, 0);
  int u = key.k.u_plus(p);
  i64 eta = xi / ipow(p, std::min(u, m));
  auto ivs = partition_intervals(key.k, key.part, p);
  Expo zero(mdl.n, 0);

  auto interval_kap = [&](const std::vector<int>& iv, int scale_pow) {
    Expo kap = zero;
    for (int t : iv) {
      const WeightEntry& we = key.k.k[t - 1];
      // entry value * p^scale_pow must be integral here.
      i64 v;
      if (we.tpow <= scale_pow) {
        v = we.num * ipow(p, scale_pow - we.tpow);
      } else {
        i64 div = ipow(p, we.tpow - scale_pow);
        if (we.num % div != 0) throw std::runtime_error("interval_kap: fractional exponent");
        v = we.num / div;
      }
      kap[t - 1] = (std::int32_t)v;
    }
    return kap;
  };

  bool coeff_placed = false;
  if (!ivs[0].empty()) {
    int u0 = u_of_interval(key.k, ivs[0], p);
    st.head = VFac{u0, eta, interval_kap(ivs[0], u0)};
    coeff_placed = true;
  } else {
    st.head = VFac{0, 1, zero};
  }
  for (size_t j = 1; j < ivs.size(); ++j) {
    int uj = u_of_interval(key.k, ivs[j], p);
    if (uj > 0) {
      i64 et = 1;
      if (!coeff_placed) {
        et = eta;
        coeff_placed = true;
      }
      st.dfs.push_back(VFac{uj, et, interval_kap(ivs[j], uj)});
    } else {
      int s = -t_of(key.k, ivs[j], p);
      Expo kapj = interval_kap(ivs[j], -s);  // entries / p^s
      // F^s dX^kap = X^{(p^s-1)kap} dX^kap: exteriorize the Teichmueller part.
      st.head = v_merge(st.head, VFac{0, 1, kap_scaled(kapj, ipow(p, s) - 1)}, p, m);
      st.dfs.push_back(VFac{0, 1, kapj});
    }
  }
  if (!coeff_placed) st.head.eta = eta * st.head.eta;
  return st;
}

DrwElement apply_v_times(const DrwElement& w, int times);

DrwElement normalize_star(const LocalModel& mdl, int m, Star st, i64 coeff) {
  i64 p = mdl.p;
  DrwElement zero(mdl, m);
  if (m < 1) return zero;
  if (coeff % ipow(p, m) == 0) return zero;

  depth_minimize(st.head, p);
  for (auto& df : st.dfs) {
    depth_minimize(df, p);
    if (kap_zero(df.kap)) return zero;  // d of a base scalar
    if (df.eta % ipow(p, std::max(1, m - df.u)) == 0 && m - df.u >= 1) return zero;
    if (m - df.u < 1) return zero;  // the inner level is empty
  }
  if (st.head.u >= m) return zero;
  if (st.head.eta % ipow(p, m - st.head.u) == 0) return zero;

  int umax = 0;
  for (auto& df : st.dfs) umax = std::max(umax, df.u);

  if (st.head.u == 0 && umax == 0) return normalize_integral(mdl, m, st, coeff);

  if (st.head.u >= umax) {
    // Pull everything inside V^{u0}.
    int u0 = st.head.u;
    int mlev = m - u0;
    Star inner;
    inner.cs = st.cs;
    inner.xs = st.xs;
    inner.head = VFac{0, st.head.eta, st.head.kap};
    for (auto& df : st.dfs) {
      int a = u0 - df.u;
      inner.head.eta = inner.head.eta * (df.eta % ipow(p, mlev)) % ipow(p, mlev);
      inner.head.kap = kap_add(inner.head.kap, kap_scaled(df.kap, ipow(p, a) - 1));
      inner.dfs.push_back(VFac{0, 1, df.kap});
    }
    DrwElement in = normalize_integral(mdl, mlev, inner, coeff % ipow(p, mlev));
    return apply_v_times(in, u0);
  }

  // A d-factor carries the maximal depth: Leibniz split.
  int istar = 0;
  for (size_t i = 0; i < st.dfs.size(); ++i)
    if (st.dfs[i].u == umax) {
      istar = (int)i;
      break;
    }
  int move_sign = (istar % 2 == 0) ? 1 : -1;
  VFac vd = st.dfs[istar];
  std::vector<VFac> rest;
  for (size_t i = 0; i < st.dfs.size(); ++i)
    if ((int)i != istar) rest.push_back(st.dfs[i]);

  // d is the right-acting derivation, so d(HV . rest) picks up one sign per
  // remaining (closed, degree-1) d-factor: d(HV).rest = (-1)^{|rest|} d(HV.rest).
  int rest_sign = (rest.size() % 2 == 0) ? 1 : -1;

  Star inner1;
  inner1.cs = st.cs;
  inner1.xs = st.xs;
  inner1.head = v_merge(vd, st.head, p, m);
  inner1.dfs = rest;
  DrwElement e1 = normalize_star(mdl, m, inner1, coeff);
  DrwElement t1 = differential(e1).scaled(move_sign * rest_sign);

  DrwElement result = t1;
  if (!kap_zero(st.head.kap)) {
    Star inner2;
    inner2.cs = st.cs;
    inner2.xs = st.xs;
    inner2.head = vd;
    inner2.dfs.push_back(VFac{st.head.u, st.head.eta, st.head.kap});
    for (auto& r : rest) inner2.dfs.push_back(r);
    DrwElement e2 = normalize_star(mdl, m, inner2, coeff);
    result = result - e2.scaled(move_sign);
  }
  return result;
}

DrwElement apply_v_times(const DrwElement& w, int times) {
  DrwElement r = w;
  for (int i = 0; i < times; ++i) r = verschiebung(r);
  return r;
}

}  // namespace

DrwElement teich_monomial(const LocalModel& mdl, int m, const Expo& kappa, i64 coeff) {
  if ((int)kappa.size() != mdl.n) throw std::invalid_argument("teich_monomial: arity");
  Star st;
  st.head = VFac{0, coeff, kappa};
  return normalize_star(mdl, m, st, 1);
}

DrwElement frobenius(const DrwElement& w) {
  if (w.level() < 2) throw LevelMismatch("frobenius: image level would be 0");
  const LocalModel& mdl = w.model();
  i64 p = mdl.p;
  DrwElement r(mdl, w.level() - 1);
  for (auto& [key, c] : w.terms()) {
    bool i0_empty = key.part.i0_size() == 0;
    bool frac = !key.k.plus().integral();
    BasicKey nk = key;
    nk.k = key.k.times_p(p);
    i64 nc = (i0_empty && frac) ? c / p : c;
    r.add_term(nk, nc);
  }
  return r;
}

DrwElement verschiebung(const DrwElement& w) {
  const LocalModel& mdl = w.model();
  i64 p = mdl.p;
  DrwElement r(mdl, w.level() + 1);
  for (auto& [key, c] : w.terms()) {
    bool i0_empty = key.part.i0_size() == 0;
    Weight kp = key.k.plus().div_p(p);
    bool frac_after = !kp.integral();
    BasicKey nk = key;
    nk.k = key.k.div_p(p);
    i64 nc = (i0_empty && frac_after) ? p * p * c : p * c;
    r.add_term(nk, nc);
  }
  return r;
}

DrwElement differential(const DrwElement& w) {
  const LocalModel& mdl = w.model();
  i64 p = mdl.p;
  DrwElement r(mdl, w.level());
  for (auto& [key, c] : w.terms()) {
    auto sp = key.k.supp_plus();
    if (sp.empty()) continue;
    if (key.part.i0_size() == 0) continue;
    BasicKey nk = key;
    nk.part.seg.clear();
    nk.part.seg.push_back(0);
    for (auto s : key.part.seg) nk.part.seg.push_back(s);
    i64 nc = c;
    if (key.k.plus().integral()) {
      std::vector<int> order = canonical_order(key.k.plus(), p);
      int s = key.k.k[order.front() - 1].ord(p);
      nc = c * ipow(p, s);
    }
    r.add_term(nk, nc);
  }
  return r;
}

DrwElement restrict_level(const DrwElement& w) {
  if (w.level() < 2) throw LevelMismatch("restrict: image level would be 0");
  DrwElement r(w.model(), w.level() - 1);
  for (auto& [key, c] : w.terms()) r.add_term(key, c);
  return r;
}

DrwElement multiply(const DrwElement& a, const DrwElement& b) {
  if (!(a.model() == b.model()) || a.level() != b.level())
    throw LevelMismatch("multiply: model/level mismatch");
  const LocalModel& mdl = a.model();
  int m = a.level();
  DrwElement out(mdl, m);
  for (auto& [k1, c1] : a.terms())
    for (auto& [k2, c2] : b.terms()) {
      Star s1 = star_of_basic(mdl, k1, c1, m);
      Star s2 = star_of_basic(mdl, k2, c2, m);
      int sign = 1;
      // Move the dlog block of the second word past the d-factors of the
      // first, then merge the dlog blocks.
      int cross = (int)s1.dfs.size() * (int)(s2.cs.size() + s2.xs.size());
      if (cross % 2 == 1) sign = -sign;
      if ((s1.xs.size() * s2.cs.size()) % 2 == 1) sign = -sign;
      Star prod;
      if (!merge_sorted_sign(s1.cs, s2.cs, prod.cs, sign)) continue;
      if (!merge_sorted_sign(s1.xs, s2.xs, prod.xs, sign)) continue;
      prod.head = v_merge(s1.head, s2.head, mdl.p, m);
      prod.dfs = s1.dfs;
      for (auto& d : s2.dfs) prod.dfs.push_back(d);
      out = out + normalize_star(mdl, m, prod, sign);
    }
  return out;
}

bool in_standard_filtration(const DrwElement& w, int s) {
  if (s < 0 || s > w.level()) throw std::invalid_argument("in_standard_filtration: bad s");
  if (s == 0) return true;
  DrwElement r = w;
  for (int i = 0; i < w.level() - s; ++i) r = restrict_level(r);
  return r.is_zero();
}

std::vector<WordFactor> basic_word(const LocalModel& mdl, int m, const BasicKey& key, i64 xi) {
  i64 p = mdl.p;
  std::vector<WordFactor> out;
  for (int j = 1; j <= mdl.f; ++j)
    if ((key.cset >> j) & 1u) out.push_back(WordFactor{WordFactor::DlogC, j, 0, 1, Expo{}});
  for (int x : key.k.poles()) out.push_back(WordFactor{WordFactor::DlogX, x, 0, 1, Expo{}});
  int u = key.k.u_plus(p);
  i64 eta = xi / ipow(p, std::min(u, m));
  auto ivs = partition_intervals(key.k, key.part, p);
  auto interval_kap = [&](const std::vector<int>& iv, int scale_pow) {
    Expo kap(mdl.n, 0);
    for (int t : iv) {
      const WeightEntry& we = key.k.k[t - 1];
      if (we.tpow <= scale_pow) {
        kap[t - 1] = (std::int32_t)(we.num * ipow(p, scale_pow - we.tpow));
      } else {
        i64 div = ipow(p, we.tpow - scale_pow);
        if (we.num % div != 0) throw std::runtime_error("basic_word: fractional exponent");
        kap[t - 1] = (std::int32_t)(we.num / div);
      }
    }
    return kap;
  };
  bool coeff_placed = false;
  if (!ivs[0].empty()) {
    int u0 = u_of_interval(key.k, ivs[0], p);
    out.push_back(WordFactor{WordFactor::VHead, 0, u0, eta, interval_kap(ivs[0], u0)});
    coeff_placed = true;
  }
  for (size_t j = 1; j < ivs.size(); ++j) {
    int uj = u_of_interval(key.k, ivs[j], p);
    if (uj > 0) {
      i64 et = coeff_placed ? 1 : eta;
      coeff_placed = true;
      out.push_back(WordFactor{WordFactor::DV, 0, uj, et, interval_kap(ivs[j], uj)});
    } else {
      int s = -t_of(key.k, ivs[j], p);
      out.push_back(WordFactor{WordFactor::FdX, 0, s, 1, interval_kap(ivs[j], -s)});
    }
  }
  if (!coeff_placed) out.push_back(WordFactor{WordFactor::VHead, 0, 0, eta, Expo(mdl.n, 0)});
  return out;
}

std::vector<BasicKey> enumerate_basics(const LocalModel& mdl, int m, const Weight& w) {
  std::vector<BasicKey> out;
  if (!w.poles().empty()) throw std::invalid_argument("enumerate_basics: w must be pole-free");
  if (w.u_plus(mdl.p) >= m) return out;
  if (!w.valid_for(mdl)) return out;
  std::vector<int> free_slots;
  for (int i = 1; i <= mdl.e; ++i)
    if (w.k[i - 1].is_zero()) free_slots.push_back(i);
  auto parts = enumerate_partitions(w, mdl.p);
  for (std::uint32_t pmask = 0; pmask < (1u << free_slots.size()); ++pmask) {
    Weight k = w;
    for (size_t i = 0; i < free_slots.size(); ++i)
      if ((pmask >> i) & 1u) k.k[free_slots[i] - 1] = WeightEntry::make_pole();
    for (auto& part : parts)
      for (std::uint32_t j = 0; j < (1u << mdl.f); ++j) out.push_back(BasicKey{k, part, j << 1});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BasicKey> enumerate_basics_degree(const LocalModel& mdl, int m, const Weight& w,
                                              int degree) {
  std::vector<BasicKey> out;
  for (auto& k : enumerate_basics(mdl, m, w))
    if (k.degree() == degree) out.push_back(k);
  return out;
}

DrwElement theta(const LocalModel& mdl, int m) {
  if (!mdl.semistable() || !mdl.log_point_base)
    throw std::invalid_argument("theta: needs a semistable model over the log point");
  DrwElement r(mdl, m);
  for (int i = 1; i <= mdl.e; ++i) r = r + dlog_x(mdl, m, i);
  for (int j = 1; j <= mdl.f; ++j) r = r + dlog_c(mdl, m, j);
  return r;
}

DrwElement wedge_theta(const DrwElement& w) {
  LocalModel mdl = w.model();
  DrwElement th(mdl, w.level());
  for (int i = 1; i <= mdl.e; ++i) th = th + dlog_x(mdl, w.level(), i);
  for (int j = 1; j <= mdl.f; ++j) th = th + dlog_c(mdl, w.level(), j);
  return multiply(th, w);
}

int theta_slot(const LocalModel& mdl, const Weight& pole_free_w) {
  for (int i = mdl.e; i >= 1; --i)
    if (pole_free_w.k[i - 1].is_zero() && !pole_free_w.k[i - 1].pole) return i;
  throw std::invalid_argument("theta_slot: weight has no free log slot");
}

DrwElement contraction(const DrwElement& w) {
  const LocalModel& mdl = w.model();
  if (!mdl.semistable()) throw std::invalid_argument("contraction: semistable models only");
  DrwElement r(mdl, w.level());
  for (auto& [key, c] : w.terms()) {
    int slot = theta_slot(mdl, key.k.plus());
    if (!key.k.has_pole_at(slot)) continue;
    auto poles = key.k.poles();
    int rank = 0;
    for (size_t i = 0; i < poles.size(); ++i)
      if (poles[i] == slot) rank = (int)i + 1;
    int sign = ((std::popcount(key.cset) + rank - 1) % 2 == 0) ? 1 : -1;
    BasicKey nk = key;
    nk.k.k[slot - 1] = WeightEntry::zero();
    r.add_term(nk, sign * c);
  }
  return r;
}

DrwElement to_relative(const DrwElement& w) {
  return w - wedge_theta(contraction(w));
}

std::pair<DrwElement, DrwElement> eps_prime_decompose(const DrwElement& w) {
  const LocalModel& mdl = w.model();
  if (!mdl.semistable()) throw std::invalid_argument("eps_prime_decompose: semistable only");
  int e = mdl.e;
  DrwElement wc(mdl, w.level()), wcp(mdl, w.level());
  for (auto& [key, c] : w.terms()) {
    if (!key.k.has_pole_at(e)) {
      wc.add_term(key, c);
      continue;
    }
    // eps'(key) = sign * theta ∧ rho with the e-pole removed from rho.
    auto poles = key.k.poles();
    int sign = ((std::popcount(key.cset) + (int)poles.size() - 1) % 2 == 0) ? 1 : -1;
    BasicKey rho = key;
    rho.k.k[e - 1] = WeightEntry::zero();
    DrwElement rhoe(mdl, w.level());
    rhoe.add_term(rho, c);
    wcp = wcp + wedge_theta(rhoe).scaled(sign);
  }
  wc = w - wcp;
  return {wc, wcp};
}

LocalModel mv_model(const LocalModel& mdl, MvTarget t) {
  if (!mdl.semistable()) throw std::invalid_argument("mv_model: semistable only");
  LocalModel r = mdl;
  switch (t) {
    case MvTarget::Z1:
      if (mdl.d < 2) throw std::invalid_argument("mv_model: Z1 needs d >= 2");
      r.d = mdl.d - 1;
      r.rel_override = 0;
      break;
    case MvTarget::Z2:
      r.d = 1;
      r.rel_override = 1u << mdl.d;
      break;
    case MvTarget::Z:
      if (mdl.d < 2) throw std::invalid_argument("mv_model: Z needs d >= 2");
      r.n = mdl.n - 1;
      r.e = mdl.e - 1;
      r.d = mdl.d - 1;
      r.f = mdl.f + 1;
      r.rel_override = 0;
      break;
  }
  r.validate();
  return r;
}

DrwElement mv_restrict(const DrwElement& w, MvTarget t) {
  const LocalModel& mdl = w.model();
  LocalModel tgt = mv_model(mdl, t);
  int m = w.level();
  DrwElement r(tgt, m);
  int dd = mdl.d;
  for (auto& [key, c] : w.terms()) {
    if (t == MvTarget::Z1) {
      if (key.k.valid_for(tgt)) r.add_term(key, c);
      continue;
    }
    // Z2 and Z both require T_d -> 0: drop terms with d in Supp+ k.
    if (!key.k.k[dd - 1].pole && !key.k.k[dd - 1].is_zero()) continue;
    if (t == MvTarget::Z2) {
      r.add_term(key, c);
      continue;
    }
    // Z: remove the variable d; a pole at d becomes the phantom f+1.
    BasicKey nk;
    nk.part = key.part;
    nk.cset = key.cset;
    nk.k.k.clear();
    for (int i = 1; i <= mdl.n; ++i)
      if (i != dd) nk.k.k.push_back(key.k.k[i - 1]);
    i64 sign = 1;
    if (key.k.k[dd - 1].pole) {
      nk.cset |= 1u << (mdl.f + 1);
      auto poles = key.k.poles();
      int rank = 0;
      for (size_t i = 0; i < poles.size(); ++i)
        if (poles[i] == dd) rank = (int)i + 1;
      if ((rank - 1) % 2 == 1) sign = -1;
    }
    if (!nk.k.valid_for(tgt)) continue;
    r.add_term(nk, sign * c);
  }
  return r;
}

}  // namespace logdrw
