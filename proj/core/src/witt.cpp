#include "logdrw/witt.hpp"

namespace logdrw {

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int vp(i64 v, i64 p, int cap) {
  if (v < 0) v = -v;
  if (v == 0) return cap;
  int t = 0;
  while (t < cap && v % p == 0) {
    v /= p;
    ++t;
  }
  return t;
}

i64 teichmuller_lift(i64 a, i64 p, int prec) {
  i64 mod = ipow(p, prec);
  i64 x = ((a % mod) + mod) % mod;
  if (x % p == 0) return 0;
  // x^(p^prec) stabilises to the Teichmueller representative mod p^prec.
  for (int i = 0; i < prec; ++i) {
    i64 y = 1;
    for (i64 j = 0; j < p; ++j) y = (y * x) % mod;
    x = y;
  }
  return x;
}

WittScalar::WittScalar(i64 p, int m, i64 value) : p_(p), m_(m), v_(value) {
  if (p < 2) throw std::invalid_argument("WittScalar: prime must be >= 2");
  if (m < 1 || m > kMaxLevel) throw std::invalid_argument("WittScalar: bad level");
  i64 mod = ipow(p_, m_);
  v_ = ((v_ % mod) + mod) % mod;
}

void WittScalar::check_compatible(const WittScalar& o) const {
  if (p_ != o.p_) throw LevelMismatch("WittScalar: prime mismatch");
  if (m_ != o.m_) throw LevelMismatch("WittScalar: level mismatch");
}

WittScalar WittScalar::operator+(const WittScalar& o) const {
  check_compatible(o);
  return WittScalar(p_, m_, v_ + o.v_);
}

WittScalar WittScalar::operator-(const WittScalar& o) const {
  check_compatible(o);
  return WittScalar(p_, m_, v_ - o.v_);
}

WittScalar WittScalar::operator*(const WittScalar& o) const {
  check_compatible(o);
  return WittScalar(p_, m_, v_ * o.v_);
}

WittScalar WittScalar::operator-() const { return WittScalar(p_, m_, -v_); }

WittScalar WittScalar::frobenius() const {
  if (m_ < 2) throw LevelMismatch("WittScalar::frobenius: image level would be 0");
  return WittScalar(p_, m_ - 1, v_);
}

WittScalar WittScalar::verschiebung() const {
  return WittScalar(p_, m_ + 1, p_ * v_);
}

WittScalar WittScalar::v_shift_down() const {
  if (m_ < 2) throw LevelMismatch("WittScalar::v_shift_down: image level would be 0");
  if (v_ % p_ != 0) throw std::invalid_argument("WittScalar::v_shift_down: value not in VW");
  return WittScalar(p_, m_ - 1, v_ / p_);
}

std::string WittScalar::str() const {
  return std::to_string(v_) + " (W_" + std::to_string(m_) + "(F_" + std::to_string(p_) + "))";
}

WittScalar teichmuller(i64 a, i64 p, int m) {
  return WittScalar(p, m, teichmuller_lift(a, p, m));
}

}  // namespace logdrw
