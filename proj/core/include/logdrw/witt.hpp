#ifndef LOGDRW_WITT_HPP
#define LOGDRW_WITT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace logdrw {

using i64 = std::int64_t;

// Largest truncation level we ever instantiate; p^(2*kMaxLevel) must fit
// in i64 with room to spare for intermediate products.
constexpr int kMaxLevel = 12;

i64 ipow(i64 base, int exp);

// p-adic valuation of v, capped at `cap` (so ord(0) reports cap).
int vp(i64 v, i64 p, int cap = 64);

// Teichmueller lift of a mod p^prec: the unique (p-1)-st root of unity
// congruent to a mod p (0 lifts to 0).  Computed by iterating x -> x^p.
i64 teichmuller_lift(i64 a, i64 p, int prec);

struct LevelMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An element of W_m(F_p) = Z/p^m.  Frobenius drops the level and reduces,
// Verschiebung raises the level and multiplies by p.  Levels never coerce
// silently: mixing levels or primes throws.
class WittScalar {
public:
  WittScalar() : p_(2), m_(1), v_(0) {}
  WittScalar(i64 p, int m, i64 value);

  i64 prime() const { return p_; }
  int level() const { return m_; }
  i64 value() const { return v_; }
  i64 modulus() const { return ipow(p_, m_); }
  bool is_zero() const { return v_ == 0; }

  WittScalar operator+(const WittScalar& o) const;
  WittScalar operator-(const WittScalar& o) const;
  WittScalar operator*(const WittScalar& o) const;
  WittScalar operator-() const;
  bool operator==(const WittScalar& o) const = default;

  // Level m -> m-1, value mod p^(m-1).  On W(F_p) the Witt Frobenius is the
  // identity of Z_p, so at finite level it is plain reduction.
  WittScalar frobenius() const;

  // Level m -> m+1, value p*v.
  WittScalar verschiebung() const;

  // Inverse of verschiebung on its image: requires p | v, drops the level.
  WittScalar v_shift_down() const;

  // ord_p of the value; returns level() for 0 (callers treat >= m as +inf).
  int ord() const { return vp(v_, p_, m_); }

  WittScalar scaled(i64 c) const { return WittScalar(p_, m_, v_ * (c % modulus())); }

  std::string str() const;

private:
  i64 p_;
  int m_;
  i64 v_;
  void check_compatible(const WittScalar& o) const;
};

// Teichmueller lift [a] at level m.
WittScalar teichmuller(i64 a, i64 p, int m);

}  // namespace logdrw

#endif
