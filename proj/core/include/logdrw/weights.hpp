#ifndef LOGDRW_WEIGHTS_HPP
#define LOGDRW_WEIGHTS_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logdrw/witt.hpp"

namespace logdrw {

// ord_p values live in Z extended by -inf (poles) and +inf (zero entries);
// keep them as plain ints with sentinels.
constexpr int kOrdNegInf = -1000000;
constexpr int kOrdPosInf = 1000000;

// Local model descriptor.  d = 0 is the polynomial (NCD-chart) family
// R[T_1..T_n] with log structure N^e + N^f; d >= 1 is the semistable family
// R[T]/(T_1...T_d).  `log_point_base` only makes sense for d >= 1 and
// switches the base from (R,{*}) to (R,N) via the diagonal.
struct LocalModel {
  i64 p = 3;
  int n = 1;
  int e = 0;
  int f = 0;
  int d = 0;
  bool log_point_base = false;
  // Relation divisor set as a bitmask over [1,n]; 0 means the default
  // prefix [1,d].  Only non-prefix internally (Mayer-Vietoris pieces).
  std::uint32_t rel_override = 0;

  bool semistable() const { return d >= 1; }
  std::uint32_t rel_mask() const {
    if (rel_override) return rel_override;
    return d >= 1 ? ((1u << d) - 1u) << 1 : 0u;  // bits 1..d, 1-based
  }
  bool in_relation(int i) const { return (rel_mask() >> i) & 1u; }
  void validate() const;
  std::string descriptor() const;
  auto operator<=>(const LocalModel& o) const = default;
};

// Grammar: poly:p=3,n=2,e=1,f=0  |  semistable:p=3,n=2,e=2,f=0,d=2
// An optional ,base=log suffix selects the log-point base.
LocalModel parse_model(const std::string& descriptor);

// One weight entry: either a/p^t >= 0 (t minimal, so p does not divide a
// when t > 0) or the pole marker p^{-inf}.
struct WeightEntry {
  i64 num = 0;
  std::int32_t tpow = 0;
  bool pole = false;

  static WeightEntry zero() { return {}; }
  static WeightEntry make(i64 num, int tpow, i64 p);
  static WeightEntry make_pole() { return {0, 0, true}; }

  bool is_zero() const { return !pole && num == 0; }
  bool integral() const { return !pole && tpow == 0; }
  int ord(i64 p) const;

  // Multiplication by p and by 1/p, with p*p^{-inf} = p^{-inf}.
  WeightEntry times_p(i64 p) const;
  WeightEntry div_p(i64 p) const;

  auto operator<=>(const WeightEntry& o) const = default;
};

struct Weight {
  std::vector<WeightEntry> k;

  int n() const { return (int)k.size(); }
  bool valid_for(const LocalModel& mdl) const;

  std::vector<int> supp() const;        // 1-based positions with k_i != 0
  std::vector<int> supp_plus() const;   // pole-free support
  std::vector<int> poles() const;       // pole positions
  bool has_pole_at(int i) const { return k[i - 1].pole; }

  Weight plus() const;  // zero out the poles
  bool integral() const;
  bool integral_after_mul(i64 p, int s) const;  // p^s * k+ integral?
  int u_plus(i64 p) const;                      // least s >= 0 with p^s k+ integral
  Weight times_p(i64 p) const;
  Weight div_p(i64 p) const;

  // |k+| as an exact rational (num, p-power denominator exponent).
  std::pair<i64, int> abs_plus(i64 p) const;

  auto operator<=>(const Weight& o) const = default;
};

// The fixed total order on Supp k: ord_p ascending (poles first), ties by
// index ascending.  Returns 1-based positions.
std::vector<int> canonical_order(const Weight& k, i64 p);

// t(k_I) = -ord_p of the first element of the interval, u = max(0, t).
int t_of(const Weight& k, const std::vector<int>& interval, i64 p);
int u_of_interval(const Weight& k, const std::vector<int>& interval, i64 p);

// Interval decomposition of Supp k+ in the canonical order: seg[0] = |I_0|
// (may be 0), seg[j] = |I_j| >= 1 for j >= 1.  I_{-inf} is forced to be the
// pole set, so it is not stored.
struct Partition {
  std::vector<int> seg;

  int l() const { return (int)seg.size() - 1; }
  int i0_size() const { return seg.empty() ? 0 : seg[0]; }
  auto operator<=>(const Partition& o) const = default;
};

bool validate_partition(const Weight& k, const Partition& part, i64 p);
std::vector<Partition> enumerate_partitions(const Weight& k, i64 p);

// The intervals I_0..I_l as position lists in the canonical order.
std::vector<std::vector<int>> partition_intervals(const Weight& k, const Partition& part, i64 p);

// Weight enumeration with explicit bounds: every entry ranges over
// {a/p^t : 0 <= a <= max_num, 0 <= t <= max_den} plus the pole marker at
// log positions.  Semistable models drop weights with [1,d] in Supp k+.
struct WeightBounds {
  i64 max_num = 4;
  int max_den = 1;
  bool allow_poles = true;
};

std::vector<Weight> enumerate_weights(const LocalModel& mdl, const WeightBounds& b);
// Pole-free variant (weights with no marker), used for weight classes.
std::vector<Weight> enumerate_pole_free_weights(const LocalModel& mdl, const WeightBounds& b);

}  // namespace logdrw

#endif
