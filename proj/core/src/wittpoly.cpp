#include "logdrw/wittpoly.hpp"

#include <map>
#include <mutex>

namespace logdrw {

ZPoly ghost_poly(int nvars, int off, int step, int i, i64 p) {
  ZPoly w(nvars);
  bigint pj = 1;
  for (int j = 0; j <= i; ++j) {
    int e = 1;
    for (int t = 0; t < i - j; ++t) e *= (int)p;
    w = w + ZPoly::variable(nvars, off + step * j).pow(e) * pj;
    pj *= p;
  }
  return w;
}

UniversalWittPolynomials::UniversalWittPolynomials(i64 p, int N) : p_(p), N_(N) {
  if (N < 1) throw std::invalid_argument("UniversalWittPolynomials: N >= 1 required");
  int nv = 2 * N;
  s_.reserve(N);
  m_.reserve(N);
  for (int i = 0; i < N; ++i) {
    ZPoly gx = ghost_poly(nv, 0, 2, i, p_);
    ZPoly gy = ghost_poly(nv, 1, 2, i, p_);
    ZPoly rhs_s = gx + gy;
    ZPoly rhs_m = gx * gy;
    // Subtract p^j * s_j^{p^(i-j)} for j < i, then divide by p^i.
    bigint pj = 1;
    for (int j = 0; j < i; ++j) {
      int e = 1;
      for (int t = 0; t < i - j; ++t) e *= (int)p;
      rhs_s = rhs_s - s_[j].pow(e) * pj;
      rhs_m = rhs_m - m_[j].pow(e) * pj;
      pj *= p;
    }
    s_.push_back(rhs_s.divexact(pj));
    m_.push_back(rhs_m.divexact(pj));
  }
}

bool UniversalWittPolynomials::verify_ghost_identities() const {
  int nv = 2 * N_;
  for (int i = 0; i < N_; ++i) {
    ZPoly gx = ghost_poly(nv, 0, 2, i, p_);
    ZPoly gy = ghost_poly(nv, 1, 2, i, p_);
    ZPoly ws(nv), wm(nv);
    bigint pj = 1;
    for (int j = 0; j <= i; ++j) {
      int e = 1;
      for (int t = 0; t < i - j; ++t) e *= (int)p_;
      ws = ws + s_[j].pow(e) * pj;
      wm = wm + m_[j].pow(e) * pj;
      pj *= p_;
    }
    if (!(ws == gx + gy)) return false;
    if (!(wm == gx * gy)) return false;
  }
  return true;
}

const UniversalWittPolynomials& universal_witt(i64 p, int N) {
  static std::mutex mu;
  static std::map<std::pair<i64, int>, UniversalWittPolynomials> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, N);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, UniversalWittPolynomials(p, N)).first;
  return it->second;
}

bool WittVectorPoly::is_zero() const {
  for (auto& c : coords)
    if (!c.is_zero()) return false;
  return true;
}

WittVectorPoly w_zero(i64 p, int nvars, int N) { return WittVectorPoly(p, nvars, N); }

WittVectorPoly w_teichmuller(const FpPoly& f, int N) {
  WittVectorPoly r(f.prime(), f.nvars(), N);
  r.coords[0] = f;
  return r;
}

WittVectorPoly w_int(i64 c, i64 p, int nvars, int N) {
  // Solve the ghost equations for the constant: all ghost components are c.
  WittVectorPoly r(p, nvars, N);
  std::vector<bigint> digits;
  for (int i = 0; i < N; ++i) {
    bigint acc = c;
    bigint pj = 1;
    for (int j = 0; j < i; ++j) {
      int e = 1;
      for (int t = 0; t < i - j; ++t) e *= (int)p;
      bigint power = 1;
      for (int t = 0; t < e; ++t) power *= digits[j];
      acc -= pj * power;
      pj *= p;
    }
    if (acc % pj != 0) throw std::runtime_error("w_int: ghost solve failed");
    bigint ai = (acc / pj) % p;
    if (ai < 0) ai += p;
    digits.push_back(ai);
    r.coords[i] = FpPoly::constant(p, nvars, (i64)ai);
  }
  return r;
}

namespace {

void check_shape(const WittVectorPoly& a, const WittVectorPoly& b) {
  if (a.p != b.p || a.nvars != b.nvars || a.length() != b.length())
    throw std::invalid_argument("witt vector shape mismatch");
}

WittVectorPoly eval_universal(const WittVectorPoly& a, const WittVectorPoly& b, bool mul) {
  check_shape(a, b);
  int N = a.length();
  const auto& uw = universal_witt(a.p, N);
  WittVectorPoly r(a.p, a.nvars, N);
  // Substitute coordinates into s_i / m_i mod p, memoizing powers.
  for (int i = 0; i < N; ++i) {
    const ZPoly& u = mul ? uw.m(i) : uw.s(i);
    FpPoly acc(a.p, a.nvars);
    std::vector<std::vector<FpPoly>> pows(2 * N);
    auto arg = [&](int v) -> const FpPoly& { return (v % 2 == 0) ? a.coords[v / 2] : b.coords[v / 2]; };
    auto power = [&](int v, int k) -> const FpPoly& {
      auto& cache = pows[v];
      if (cache.empty()) cache.push_back(FpPoly::constant(a.p, a.nvars, 1));
      while ((int)cache.size() <= k) cache.push_back(cache.back() * arg(v));
      return cache[k];
    };
    for (auto& [e, c] : u.terms()) {
      bigint cc = c % a.p;
      if (cc < 0) cc += a.p;
      if (cc == 0) continue;
      FpPoly term = FpPoly::constant(a.p, a.nvars, (i64)cc);
      for (int v = 0; v < 2 * N; ++v)
        if (e[v] > 0) term = term * power(v, e[v]);
      acc = acc + term;
    }
    r.coords[i] = acc;
  }
  return r;
}

}  // namespace

WittVectorPoly w_add(const WittVectorPoly& a, const WittVectorPoly& b) {
  return eval_universal(a, b, false);
}

WittVectorPoly w_mul(const WittVectorPoly& a, const WittVectorPoly& b) {
  return eval_universal(a, b, true);
}

WittVectorPoly w_neg(const WittVectorPoly& a) {
  return w_mul(w_int(-1, a.p, a.nvars, a.length()), a);
}

WittVectorPoly w_sub(const WittVectorPoly& a, const WittVectorPoly& b) {
  return w_add(a, w_neg(b));
}

WittVectorPoly w_frobenius(const WittVectorPoly& a) {
  if (a.length() < 2) throw std::invalid_argument("w_frobenius: length must be >= 2");
  WittVectorPoly r(a.p, a.nvars, a.length() - 1);
  for (int i = 0; i + 1 < a.length(); ++i) r.coords[i] = a.coords[i].frobenius();
  return r;
}

WittVectorPoly w_verschiebung(const WittVectorPoly& a) {
  WittVectorPoly r(a.p, a.nvars, a.length() + 1);
  for (int i = 0; i < a.length(); ++i) r.coords[i + 1] = a.coords[i];
  return r;
}

std::vector<ExpansionTerm> coords_to_expansion(const WittVectorPoly& a) {
  std::vector<ExpansionTerm> out;
  WittVectorPoly rest = a;
  int shift = 0;
  while (!rest.is_zero()) {
    // Peel level `shift`: the head coordinate's monomials become
    // V^shift-Teichmueller terms.
    WittVectorPoly head(rest.p, rest.nvars, rest.length());
    for (auto& [e, c] : rest.coords[0].terms()) {
      out.push_back({e, shift, c});
      FpPoly mono(rest.p, rest.nvars);
      mono.add_term(e, c);
      head = w_add(head, w_teichmuller(mono, rest.length()));
    }
    rest = w_sub(rest, head);
    if (!rest.coords[0].is_zero())
      throw std::runtime_error("coords_to_expansion: head did not cancel");
    // rest = V(shorter vector): strip the leading zero.
    WittVectorPoly shorter(rest.p, rest.nvars, rest.length() - 1);
    for (int i = 1; i < rest.length(); ++i) shorter.coords[i - 1] = rest.coords[i];
    rest = shorter;
    ++shift;
    if (rest.length() == 0) break;
  }
  return out;
}

WittVectorPoly expansion_to_coords(const std::vector<ExpansionTerm>& terms, i64 p, int nvars,
                                   int N) {
  WittVectorPoly r(p, nvars, N);
  for (auto& t : terms) {
    if (t.shift >= N) continue;
    FpPoly mono(p, nvars);
    mono.add_term(t.k, t.coeff);
    WittVectorPoly v = w_teichmuller(mono, N - t.shift);
    for (int i = 0; i < t.shift; ++i) v = w_verschiebung(v);
    r = w_add(r, v);
  }
  return r;
}

}  // namespace logdrw
