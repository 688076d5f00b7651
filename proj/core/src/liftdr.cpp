#include "logdrw/liftdr.hpp"

#include <algorithm>
#include <mutex>

#include "logdrw/matrix.hpp"

namespace logdrw {

int lift_slot_c(const LocalModel& mdl, int j) {
  (void)mdl;
  return j - 1;
}
int lift_slot_t(const LocalModel& mdl, int i) { return mdl.f + i - 1; }

void LiftForm::add_term(const LiftKey& key, i64 c) {
  i64 mod = ipow(mdl_.p, m_);
  c = ((c % mod) + mod) % mod;
  if (c == 0) return;
  std::uint32_t rel = mdl_.rel_mask();
  if (rel) {
    bool covered = true;
    for (int i = 1; i <= mdl_.n && covered; ++i)
      if (((rel >> i) & 1u) && key.mono[i - 1] == 0) covered = false;
    if (covered) return;  // divisible by T_{rel} = 0
  }
  auto it = t_.find(key);
  if (it == t_.end()) {
    t_.emplace(key, c);
  } else {
    it->second = (it->second + c) % mod;
    if (it->second == 0) t_.erase(it);
  }
}

LiftForm LiftForm::operator+(const LiftForm& o) const {
  LiftForm r = *this;
  for (auto& [k, c] : o.t_) r.add_term(k, c);
  return r;
}

LiftForm LiftForm::operator-(const LiftForm& o) const {
  LiftForm r = *this;
  for (auto& [k, c] : o.t_) r.add_term(k, -c);
  return r;
}

LiftForm LiftForm::scaled(i64 c) const {
  LiftForm r(mdl_, m_);
  for (auto& [k, v] : t_) r.add_term(k, v * (c % ipow(mdl_.p, m_)));
  return r;
}

Weight LiftForm::key_weight(const LiftKey& key) const {
  Weight w;
  w.k.assign(mdl_.n, WeightEntry::zero());
  for (int i = 1; i <= mdl_.n; ++i) {
    i64 v = key.mono[i - 1];
    if (i > mdl_.e && ((key.gens >> lift_slot_t(mdl_, i)) & 1)) v += 1;
    if (v > 0) w.k[i - 1] = WeightEntry::make(v, 0, mdl_.p);
  }
  return w;
}

bool LiftForm::homogeneous_weight() const {
  bool first = true;
  Weight w;
  for (auto& [k, c] : t_) {
    Weight kw = key_weight(k);
    if (first) {
      w = kw;
      first = false;
    } else if (!(kw == w)) {
      return false;
    }
  }
  return true;
}

LiftForm LiftForm::weight_part(const Weight& w) const {
  LiftForm r(mdl_, m_);
  for (auto& [k, c] : t_)
    if (key_weight(k) == w) r.add_term(k, c);
  return r;
}

LiftForm lift_zero(const LocalModel& mdl, int m) { return LiftForm(mdl, m); }

LiftForm lift_unit(const LocalModel& mdl, int m) {
  LiftForm r(mdl, m);
  r.add_term(LiftKey{Expo(mdl.n, 0), 0}, 1);
  return r;
}

LiftForm lift_monomial(const LocalModel& mdl, int m, const Expo& mono, i64 c) {
  LiftForm r(mdl, m);
  r.add_term(LiftKey{mono, 0}, c);
  return r;
}

LiftForm lift_dlog_t(const LocalModel& mdl, int m, int i) {
  if (i < 1 || i > mdl.e) throw std::invalid_argument("lift_dlog_t: not a log position");
  LiftForm r(mdl, m);
  r.add_term(LiftKey{Expo(mdl.n, 0), 1ull << lift_slot_t(mdl, i)}, 1);
  return r;
}

LiftForm lift_dt(const LocalModel& mdl, int m, int i) {
  LiftForm r(mdl, m);
  if (i <= mdl.e) {
    // dT_i = T_i dlog T_i at a log position.
    Expo mono(mdl.n, 0);
    mono[i - 1] = 1;
    r.add_term(LiftKey{mono, 1ull << lift_slot_t(mdl, i)}, 1);
  } else {
    r.add_term(LiftKey{Expo(mdl.n, 0), 1ull << lift_slot_t(mdl, i)}, 1);
  }
  return r;
}

LiftForm lift_dlog_c(const LocalModel& mdl, int m, int j) {
  if (j < 1 || j > mdl.f) throw std::invalid_argument("lift_dlog_c: out of range");
  LiftForm r(mdl, m);
  r.add_term(LiftKey{Expo(mdl.n, 0), 1ull << lift_slot_c(mdl, j)}, 1);
  return r;
}

namespace {

// Sign of g1 ∧ g2 as bitmask wedge; 0 coefficient when they intersect.
int wedge_sign(std::uint64_t g1, std::uint64_t g2) {
  if (g1 & g2) return 0;
  int inversions = 0;
  for (std::uint64_t b = g2; b; b &= b - 1) {
    int slot = std::countr_zero(b);
    inversions += std::popcount(g1 >> (slot + 1));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

LiftForm mul_lift(const LiftForm& a, const LiftForm& b) {
  if (!(a.model() == b.model()) || a.level() != b.level())
    throw LevelMismatch("mul_lift: model/level mismatch");
  LiftForm r(a.model(), a.level());
  for (auto& [k1, c1] : a.terms())
    for (auto& [k2, c2] : b.terms()) {
      int s = wedge_sign(k1.gens, k2.gens);
      if (s == 0) continue;
      LiftKey k;
      k.mono = k1.mono;
      for (size_t i = 0; i < k.mono.size(); ++i) k.mono[i] += k2.mono[i];
      k.gens = k1.gens | k2.gens;
      r.add_term(k, s * c1 * c2);
    }
  return r;
}

LiftForm d_lift(const LiftForm& a) {
  const LocalModel& mdl = a.model();
  LiftForm r(mdl, a.level());
  for (auto& [key, c] : a.terms()) {
    for (int i = 1; i <= mdl.n; ++i) {
      i64 ki = key.mono[i - 1];
      if (ki == 0) continue;
      int slot = lift_slot_t(mdl, i);
      if ((key.gens >> slot) & 1) continue;  // dT_i ∧ dT_i (or dlog) dies
      int crossings = std::popcount(key.gens & ((1ull << slot) - 1));
      int sgn = (crossings % 2 == 0) ? 1 : -1;
      LiftKey nk = key;
      nk.gens |= 1ull << slot;
      if (i > mdl.e) nk.mono[i - 1] -= 1;  // dT factor consumes one power
      r.add_term(nk, sgn * c * ki);
    }
  }
  return r;
}

LiftForm make_p_basic(const LocalModel& mdl, int m, const Weight& k, const Partition& part,
                      std::uint32_t cset) {
  if (!k.plus().integral()) throw std::invalid_argument("make_p_basic: fractional weight");
  if (!k.valid_for(mdl)) throw std::invalid_argument("make_p_basic: invalid weight");
  if (!validate_partition(k, part, mdl.p)) throw std::invalid_argument("make_p_basic: bad partition");
  i64 p = mdl.p;
  LiftForm acc = lift_unit(mdl, m);
  for (int j = 1; j <= mdl.f; ++j)
    if ((cset >> j) & 1u) acc = mul_lift(acc, lift_dlog_c(mdl, m, j));
  for (int i : k.poles()) acc = mul_lift(acc, lift_dlog_t(mdl, m, i));
  auto ivs = partition_intervals(k, part, p);
  // T^{k_{I0}}
  {
    Expo mono(mdl.n, 0);
    for (int t : ivs[0]) mono[t - 1] = (std::int32_t)k.k[t - 1].num;
    acc = mul_lift(acc, lift_monomial(mdl, m, mono));
  }
  for (size_t j = 1; j < ivs.size(); ++j) {
    int s = -t_of(k, ivs[j], p);  // >= 0
    // p^{-s} d(T^{k_{I_j}}) = sum_t (k_t / p^s) T^{k_Ij - e_t} dT_t,
    // evaluated as exact integers.
    LiftForm factor(mdl, m);
    for (int t : ivs[j]) {
      i64 kt = k.k[t - 1].num;
      Expo mono(mdl.n, 0);
      for (int t2 : ivs[j]) mono[t2 - 1] = (std::int32_t)k.k[t2 - 1].num;
      LiftKey fk;
      fk.mono = mono;
      int slot = lift_slot_t(mdl, t);
      fk.gens = 1ull << slot;
      if (t > mdl.e) fk.mono[t - 1] -= 1;
      factor.add_term(fk, kt / ipow(p, s));
    }
    acc = mul_lift(acc, factor);
  }
  return acc;
}

namespace {

struct LiftSolve {
  std::vector<BasicKey> basis;   // p-basic index set (enumerate order)
  std::vector<LiftKey> rawkeys;  // raw exterior keys of the weight class
  Mat einv;
};

struct LiftSolveKey {
  LocalModel mdl;
  int m;
  Weight w;
  int degree;
  auto operator<=>(const LiftSolveKey& o) const = default;
};

std::map<LiftSolveKey, LiftSolve>& lift_cache() {
  static std::map<LiftSolveKey, LiftSolve> c;
  return c;
}
std::mutex lift_cache_mu;

std::vector<LiftKey> enumerate_lift_keys(const LocalModel& mdl, const Weight& w, int degree) {
  // Raw keys of weight w: choose dT positions S among supp(w) beyond e is
  // not required -- dT_i allowed at any i > e with w_i >= 1; dlog T_i at
  // any i <= e; dlog c_j freely.  mono = w - sum_{dT} e_i must be >= 0 and
  // satisfy the relation rule.
  std::vector<LiftKey> out;
  std::vector<int> dt_candidates, dlog_candidates, c_candidates;
  for (int i = mdl.e + 1; i <= mdl.n; ++i)
    if (!w.k[i - 1].is_zero()) dt_candidates.push_back(i);
  for (int i = 1; i <= mdl.e; ++i) dlog_candidates.push_back(i);
  for (int j = 1; j <= mdl.f; ++j) c_candidates.push_back(j);
  int nd = (int)dt_candidates.size(), nl = (int)dlog_candidates.size(), nc = (int)c_candidates.size();
  for (std::uint32_t sd = 0; sd < (1u << nd); ++sd)
    for (std::uint32_t sl = 0; sl < (1u << nl); ++sl)
      for (std::uint32_t sc = 0; sc < (1u << nc); ++sc) {
        LiftKey key;
        key.mono.assign(mdl.n, 0);
        key.gens = 0;
        for (int i = 1; i <= mdl.n; ++i)
          key.mono[i - 1] = (std::int32_t)(w.k[i - 1].num);
        bool ok = true;
        for (int b = 0; b < nd; ++b)
          if ((sd >> b) & 1) {
            int i = dt_candidates[b];
            key.gens |= 1ull << lift_slot_t(mdl, i);
            key.mono[i - 1] -= 1;
            if (key.mono[i - 1] < 0) ok = false;
          }
        for (int b = 0; b < nl && ok; ++b)
          if ((sl >> b) & 1) key.gens |= 1ull << lift_slot_t(mdl, dlog_candidates[b]);
        for (int b = 0; b < nc && ok; ++b)
          if ((sc >> b) & 1) key.gens |= 1ull << lift_slot_c(mdl, c_candidates[b]);
        if (!ok || key.degree() != degree) continue;
        std::uint32_t rel = mdl.rel_mask();
        if (rel) {
          bool covered = true;
          for (int i = 1; i <= mdl.n && covered; ++i)
            if (((rel >> i) & 1u) && key.mono[i - 1] == 0) covered = false;
          if (covered) continue;
        }
        out.push_back(key);
      }
  std::sort(out.begin(), out.end());
  return out;
}

const LiftSolve& lift_basis_solve(const LocalModel& mdl, int m, const Weight& w, int degree) {
  LiftSolveKey key{mdl, m, w, degree};
  {
    std::lock_guard<std::mutex> lock(lift_cache_mu);
    auto it = lift_cache().find(key);
    if (it != lift_cache().end()) return it->second;
  }
  LiftSolve s;
  s.basis = enumerate_basics_degree(mdl, kMaxLevel, w, degree);
  s.rawkeys = enumerate_lift_keys(mdl, w, degree);
  if (s.basis.size() != s.rawkeys.size())
    throw std::runtime_error("lift basis: raw/p-basic count mismatch");
  int nn = (int)s.basis.size();
  Mat e(nn, nn);
  for (int col = 0; col < nn; ++col) {
    const BasicKey& bk = s.basis[col];
    LiftForm phi = make_p_basic(mdl, m, bk.k, bk.part, bk.cset);
    for (auto& [raw, c] : phi.terms()) {
      auto it = std::lower_bound(s.rawkeys.begin(), s.rawkeys.end(), raw);
      if (it == s.rawkeys.end() || !(*it == raw))
        throw std::runtime_error("lift basis: unexpected raw key");
      e.at((int)(it - s.rawkeys.begin()), col) = c;
    }
  }
  s.einv = invert_mod(e, mdl.p, m);
  std::lock_guard<std::mutex> lock(lift_cache_mu);
  auto [it, inserted] = lift_cache().emplace(key, std::move(s));
  return it->second;
}

}  // namespace

std::vector<std::pair<BasicKey, i64>> p_basic_coordinates(const LiftForm& phi) {
  std::vector<std::pair<BasicKey, i64>> out;
  if (phi.is_zero()) return out;
  const LocalModel& mdl = phi.model();
  int m = phi.level();
  i64 mod = ipow(mdl.p, m);
  // Split by (weight, degree).
  std::map<std::pair<Weight, int>, std::vector<std::pair<LiftKey, i64>>> parts;
  for (auto& [k, c] : phi.terms())
    parts[{phi.key_weight(k), k.degree()}].push_back({k, c});
  for (auto& [wd, terms] : parts) {
    const auto& [w, degree] = wd;
    const LiftSolve& s = lift_basis_solve(mdl, m, w, degree);
    Mat rho((int)s.rawkeys.size(), 1);
    for (auto& [k, c] : terms) {
      auto it = std::lower_bound(s.rawkeys.begin(), s.rawkeys.end(), k);
      rho.at((int)(it - s.rawkeys.begin()), 0) = c;
    }
    Mat beta = s.einv * rho;
    for (int i = 0; i < (int)s.basis.size(); ++i) {
      bigint b = beta.at(i, 0) % mod;
      if (b < 0) b += mod;
      if (b != 0) out.push_back({s.basis[i], (i64)b});
    }
  }
  return out;
}

DrwElement compare_to_drw(const LiftForm& phi) {
  const LocalModel& mdl = phi.model();
  DrwElement r(mdl, phi.level());
  for (auto& [bk, c] : p_basic_coordinates(phi)) r.add_term(bk, c);
  return r;
}

DrwElement chart_map(const LiftForm& phi) {
  const LocalModel& mdl = phi.model();
  int m = phi.level();
  DrwElement out(mdl, m);
  for (auto& [key, c] : phi.terms()) {
    DrwElement acc = teich_monomial(mdl, m, key.mono, c);
    for (int j = 1; j <= mdl.f; ++j)
      if ((key.gens >> lift_slot_c(mdl, j)) & 1) acc = multiply(acc, dlog_c(mdl, m, j));
    for (int i = 1; i <= mdl.e; ++i)
      if ((key.gens >> lift_slot_t(mdl, i)) & 1) acc = multiply(acc, dlog_x(mdl, m, i));
    for (int i = mdl.e + 1; i <= mdl.n; ++i)
      if ((key.gens >> lift_slot_t(mdl, i)) & 1) {
        Expo ei(mdl.n, 0);
        ei[i - 1] = 1;
        acc = multiply(acc, differential(teich_monomial(mdl, m, ei)));
      }
    out = out + acc;
  }
  return out;
}

namespace {

// w_i of a level-m scalar, as an exact integer from the Teichmueller
// digits of depth <= i, computed mod p^prec.
i64 scalar_ghost(i64 value, i64 p, int m, int i, int prec) {
  i64 mod_m = ipow(p, m);
  i64 mod = ipow(p, prec);
  i64 v = ((value % mod_m) + mod_m) % mod_m;
  i64 acc = 0;
  for (int t = 0; t <= std::min(i, m - 1); ++t) {
    i64 digit = v % p;
    i64 tau = teichmuller_lift(digit, p, prec);
    acc = (acc + tau % mod * ipow(p, t)) % mod;
    v = (v - teichmuller_lift(digit, p, m - t)) / p;
    i64 shrink = ipow(p, m - t - 1);
    v = ((v % shrink) + shrink) % shrink;
  }
  return acc;
}

}  // namespace

LiftForm ghost_component(const DrwElement& w, int i, int prec) {
  const LocalModel& mdl = w.model();
  if (i < 0 || i >= w.level()) throw std::invalid_argument("ghost_component: i out of range");
  i64 p = mdl.p;
  LiftForm out(mdl, prec);
  for (auto& [key, c] : w.terms()) {
    if (!key.k.plus().integral_after_mul(p, i)) continue;  // p^i k+ fractional
    int u = key.k.u_plus(p);
    bool i0_empty = key.part.i0_size() == 0;
    bool integral = key.k.plus().integral();
    i64 lead;
    if (!i0_empty || integral) {
      lead = scalar_ghost(c, p, w.level(), i, prec);
    } else {
      i64 eta = c / ipow(p, u);
      lead = scalar_ghost(eta, p, w.level() - u, i - u, prec);
    }
    LiftForm acc = lift_unit(mdl, prec).scaled(lead);
    for (int j = 1; j <= mdl.f; ++j)
      if ((key.cset >> j) & 1u) acc = mul_lift(acc, lift_dlog_c(mdl, prec, j));
    for (int x : key.k.poles()) acc = mul_lift(acc, lift_dlog_t(mdl, prec, x));
    auto ivs = partition_intervals(key.k, key.part, p);
    {
      Expo mono(mdl.n, 0);
      for (int t : ivs[0]) {
        const WeightEntry& we = key.k.k[t - 1];
        mono[t - 1] = (std::int32_t)(we.num * ipow(p, i - we.tpow));
      }
      acc = mul_lift(acc, lift_monomial(mdl, prec, mono));
    }
    for (size_t j = 1; j < ivs.size(); ++j) {
      // p^{-ord} d T^{p^i k_{I_j}} with exact integer division.
      int s = i - t_of(key.k, ivs[j], p);  // ord of p^i k_{I_j}
      LiftForm factor(mdl, prec);
      for (int t : ivs[j]) {
        const WeightEntry& we = key.k.k[t - 1];
        i64 kt = we.num * ipow(p, i - we.tpow);
        Expo mono(mdl.n, 0);
        for (int t2 : ivs[j]) {
          const WeightEntry& w2 = key.k.k[t2 - 1];
          mono[t2 - 1] = (std::int32_t)(w2.num * ipow(p, i - w2.tpow));
        }
        LiftKey fk;
        fk.mono = mono;
        fk.gens = 1ull << lift_slot_t(mdl, t);
        if (t > mdl.e) fk.mono[t - 1] -= 1;
        factor.add_term(fk, kt / ipow(p, s));
      }
      acc = mul_lift(acc, factor);
    }
    out = out + acc;
  }
  return out;
}

LiftForm ghost_component_via_word(const DrwElement& w, int i, int prec) {
  const LocalModel& mdl = w.model();
  if (i < 0 || i >= w.level()) throw std::invalid_argument("ghost: i out of range");
  i64 p = mdl.p;
  int m = w.level();
  LiftForm out(mdl, prec);
  for (auto& [key, c] : w.terms()) {
    auto word = basic_word(mdl, m, key, c);
    LiftForm acc = lift_unit(mdl, prec);
    bool dead = false;
    for (auto& fac : word) {
      LiftForm g(mdl, prec);
      switch (fac.kind) {
        case WordFactor::DlogC:
          g = lift_dlog_c(mdl, prec, fac.index);
          break;
        case WordFactor::DlogX:
          g = lift_dlog_t(mdl, prec, fac.index);
          break;
        case WordFactor::VHead: {
          if (i < fac.depth) {
            dead = true;
            break;
          }
          i64 lead = scalar_ghost(fac.eta, p, m - fac.depth, i - fac.depth, prec);
          lead = lead % ipow(p, prec) * (ipow(p, fac.depth) % ipow(p, prec)) % ipow(p, prec);
          Expo mono(mdl.n, 0);
          for (int t = 1; t <= mdl.n; ++t)
            mono[t - 1] = (std::int32_t)(fac.kappa[t - 1] * ipow(p, i - fac.depth));
          g = lift_monomial(mdl, prec, mono, lead);
          break;
        }
        case WordFactor::DV: {
          if (i < fac.depth) {
            dead = true;
            break;
          }
          i64 lead = scalar_ghost(fac.eta, p, m - fac.depth, i - fac.depth, prec);
          i64 scale = ipow(p, i - fac.depth);
          for (int t = 1; t <= mdl.n; ++t) {
            if (fac.kappa[t - 1] == 0) continue;
            Expo mono(mdl.n, 0);
            for (int t2 = 1; t2 <= mdl.n; ++t2)
              mono[t2 - 1] = (std::int32_t)(fac.kappa[t2 - 1] * scale);
            LiftKey fk;
            fk.mono = mono;
            fk.gens = 1ull << lift_slot_t(mdl, t);
            if (t > mdl.e) fk.mono[t - 1] -= 1;
            g.add_term(fk, lead * fac.kappa[t - 1]);
          }
          break;
        }
        case WordFactor::FdX: {
          i64 scale = ipow(p, i + fac.depth);
          for (int t = 1; t <= mdl.n; ++t) {
            if (fac.kappa[t - 1] == 0) continue;
            Expo mono(mdl.n, 0);
            for (int t2 = 1; t2 <= mdl.n; ++t2)
              mono[t2 - 1] = (std::int32_t)(fac.kappa[t2 - 1] * scale);
            LiftKey fk;
            fk.mono = mono;
            fk.gens = 1ull << lift_slot_t(mdl, t);
            if (t > mdl.e) fk.mono[t - 1] -= 1;
            g.add_term(fk, fac.kappa[t - 1]);
          }
          break;
        }
      }
      if (dead) break;
      acc = mul_lift(acc, g);
    }
    if (!dead) out = out + acc;
  }
  return out;
}

LiftForm lift_theta(const LocalModel& mdl, int m) {
  LiftForm r(mdl, m);
  for (int i = 1; i <= mdl.e; ++i) r = r + lift_dlog_t(mdl, m, i);
  for (int j = 1; j <= mdl.f; ++j) r = r + lift_dlog_c(mdl, m, j);
  return r;
}

}  // namespace logdrw
