#include "logdrw/fppoly.hpp"

#include <numeric>
#include <sstream>

namespace logdrw {

bool GrlexLess::operator()(const Expo& a, const Expo& b) const {
  long da = std::accumulate(a.begin(), a.end(), 0L);
  long db = std::accumulate(b.begin(), b.end(), 0L);
  if (da != db) return da < db;
  return a < b;
}

ZPoly ZPoly::constant(int nvars, const bigint& c) {
  ZPoly r(nvars);
  r.add_term(Expo(nvars, 0), c);
  return r;
}

ZPoly ZPoly::variable(int nvars, int i, int exp) {
  ZPoly r(nvars);
  Expo e(nvars, 0);
  e[i] = exp;
  r.add_term(e, 1);
  return r;
}

void ZPoly::add_term(const Expo& e, const bigint& c) {
  if (c == 0) return;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
  ZPoly r = *this;
  for (auto& [e, c] : o.t_) r.add_term(e, c);
  return r;
}

ZPoly ZPoly::operator-(const ZPoly& o) const {
  ZPoly r = *this;
  for (auto& [e, c] : o.t_) r.add_term(e, -c);
  return r;
}

ZPoly ZPoly::operator*(const ZPoly& o) const {
  ZPoly r(n_);
  for (auto& [e1, c1] : t_)
    for (auto& [e2, c2] : o.t_) {
      Expo e = e1;
      for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

ZPoly ZPoly::operator*(const bigint& c) const {
  ZPoly r(n_);
  if (c == 0) return r;
  for (auto& [e, v] : t_) r.add_term(e, v * c);
  return r;
}

ZPoly ZPoly::pow(int k) const {
  ZPoly r = constant(n_, 1);
  ZPoly b = *this;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

ZPoly ZPoly::divexact(const bigint& c) const {
  ZPoly r(n_);
  for (auto& [e, v] : t_) {
    if (v % c != 0) throw std::runtime_error("ZPoly::divexact: inexact division");
    r.add_term(e, v / c);
  }
  return r;
}

ZPoly ZPoly::subst(const std::vector<ZPoly>& args) const {
  if ((int)args.size() != n_) throw std::invalid_argument("ZPoly::subst: arity mismatch");
  int out_n = args.empty() ? 0 : args[0].nvars();
  ZPoly r(out_n);
  // Memoized powers of each argument.
  std::vector<std::vector<ZPoly>> pows(n_);
  auto power = [&](int i, int k) -> const ZPoly& {
    auto& cache = pows[i];
    if (cache.empty()) cache.push_back(ZPoly::constant(out_n, 1));
    while ((int)cache.size() <= k) cache.push_back(cache.back() * args[i]);
    return cache[k];
  };
  for (auto& [e, c] : t_) {
    ZPoly term = ZPoly::constant(out_n, c);
    for (int i = 0; i < n_; ++i)
      if (e[i] > 0) term = term * power(i, e[i]);
    r = r + term;
  }
  return r;
}

ZPoly ZPoly::reduce_mod(const bigint& mod) const {
  ZPoly r(n_);
  for (auto& [e, v] : t_) {
    bigint c = v % mod;
    if (c < 0) c += mod;
    r.add_term(e, c);
  }
  return r;
}

std::string ZPoly::str(const std::string& stem) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) {
        os << "*" << stem << i;
        if (e[i] > 1) os << "^" << e[i];
      }
  }
  return os.str();
}

FpPoly FpPoly::constant(i64 p, int nvars, i64 c) {
  FpPoly r(p, nvars);
  r.add_term(Expo(nvars, 0), c);
  return r;
}

FpPoly FpPoly::variable(i64 p, int nvars, int i, int exp) {
  FpPoly r(p, nvars);
  Expo e(nvars, 0);
  e[i] = exp;
  r.add_term(e, 1);
  return r;
}

void FpPoly::add_term(const Expo& e, i64 c) {
  c %= p_;
  if (c < 0) c += p_;
  if (c == 0) return;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, c);
  } else {
    it->second = (it->second + c) % p_;
    if (it->second == 0) t_.erase(it);
  }
}

FpPoly FpPoly::operator+(const FpPoly& o) const {
  FpPoly r = *this;
  for (auto& [e, c] : o.t_) r.add_term(e, c);
  return r;
}

FpPoly FpPoly::operator-(const FpPoly& o) const {
  FpPoly r = *this;
  for (auto& [e, c] : o.t_) r.add_term(e, p_ - c);
  return r;
}

FpPoly FpPoly::operator*(const FpPoly& o) const {
  FpPoly r(p_, n_);
  for (auto& [e1, c1] : t_)
    for (auto& [e2, c2] : o.t_) {
      Expo e = e1;
      for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

FpPoly FpPoly::scaled(i64 c) const {
  FpPoly r(p_, n_);
  for (auto& [e, v] : t_) r.add_term(e, v * (c % p_));
  return r;
}

FpPoly FpPoly::pow(int k) const {
  FpPoly r = constant(p_, n_, 1);
  FpPoly b = *this;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

FpPoly FpPoly::frobenius() const {
  FpPoly r(p_, n_);
  for (auto& [e, c] : t_) {
    Expo pe = e;
    for (auto& x : pe) x *= (std::int32_t)p_;
    r.add_term(pe, c);
  }
  return r;
}

std::string FpPoly::str(const std::string& stem) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) {
        os << "*" << stem << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
      }
  }
  return os.str();
}

}  // namespace logdrw
