#ifndef LOGDRW_DRW_HPP
#define LOGDRW_DRW_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "logdrw/fppoly.hpp"
#include "logdrw/weights.hpp"
#include "logdrw/witt.hpp"

namespace logdrw {

// Index of a log basic Witt differential: a weight k (poles included), the
// interval decomposition of Supp k+, and a subset of the phantom log
// generators.  The coefficient xi is stored separately in DrwElement.
struct BasicKey {
  Weight k;
  Partition part;
  std::uint32_t cset = 0;

  int degree() const;
  auto operator<=>(const BasicKey& o) const = default;
};

// Canonical word factors of a basic element, used by the phantom-component
// cross-check and by diagnostics.  `VHead u eta kappa` denotes
// V^u(eta X^kappa), `DV` denotes d V^u(eta X^kappa), `FdX s kappa` denotes
// F^s d X^kappa.
struct WordFactor {
  enum Kind { DlogC, DlogX, VHead, DV, FdX } kind;
  int index = 0;  // generator index for Dlog*
  int depth = 0;  // u for VHead/DV, s for FdX
  i64 eta = 1;    // scalar inside VHead/DV
  Expo kappa;     // integral exponent vector
};

// A finite element of W_m(Lambda) in the normal form: a sparse map from
// basic keys to coefficient values in [0, p^m).  Every stored coefficient
// satisfies ord_p >= u(k+) and the level-m vanishing rule.
class DrwElement {
public:
  DrwElement() = default;
  DrwElement(const LocalModel& mdl, int m) : mdl_(mdl), m_(m) {}

  const LocalModel& model() const { return mdl_; }
  int level() const { return m_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<BasicKey, i64>& terms() const { return t_; }
  size_t term_count() const { return t_.size(); }

  // Adds c * eps(k, part, cset); normalizes mod p^m and drops vanishing
  // terms (p^{m-1} k+ not integral) silently.
  void add_term(const BasicKey& key, i64 c);

  DrwElement operator+(const DrwElement& o) const;
  DrwElement operator-(const DrwElement& o) const;
  DrwElement scaled(i64 c) const;
  bool operator==(const DrwElement& o) const = default;

  // True when every term has the same degree; degree of 0 is -1.
  bool homogeneous() const;
  int degree() const;
  DrwElement degree_part(int deg) const;

private:
  LocalModel mdl_;
  int m_ = 1;
  std::map<BasicKey, i64> t_;
  void check_compatible(const DrwElement& o) const;
};

DrwElement drw_zero(const LocalModel& mdl, int m);
DrwElement drw_unit(const LocalModel& mdl, int m);

// eps(xi, k, P, J).  Throws on invalid data (partition not tiling the
// support, ord_p(xi) < u(k+), pole beyond e, semistable support violation);
// returns zero when the level-m vanishing rule applies.
DrwElement make_basic(const LocalModel& mdl, int m, i64 xi, const Weight& k, const Partition& part,
                      std::uint32_t cset);

DrwElement dlog_x(const LocalModel& mdl, int m, int i);
DrwElement dlog_c(const LocalModel& mdl, int m, int j);
// Teichmueller monomial [T^kappa] as a degree-0 element.
DrwElement teich_monomial(const LocalModel& mdl, int m, const Expo& kappa, i64 coeff = 1);

// The F-V-d-pi operators on normal forms.
DrwElement frobenius(const DrwElement& w);      // level m -> m-1
DrwElement verschiebung(const DrwElement& w);   // level m -> m+1
DrwElement differential(const DrwElement& w);   // degree +1
DrwElement restrict_level(const DrwElement& w); // level m -> m-1

// Graded-commutative product via word expansion and normalization.
DrwElement multiply(const DrwElement& a, const DrwElement& b);

// Fil^s membership: restriction applied (m-s) times vanishes.
bool in_standard_filtration(const DrwElement& w, int s);

// Canonical word factor sequence of one basic element (the displayed
// product shape).  The coefficient value is folded into the head factor.
std::vector<WordFactor> basic_word(const LocalModel& mdl, int m, const BasicKey& key, i64 xi);

// Basis enumeration for a fixed pole-free weight class w: all (k,P,J) with
// k+ = w, poles over log slots with w_i = 0, J over subsets of [1,f].
// Deterministic order.  Empty when u(w) >= m.
std::vector<BasicKey> enumerate_basics(const LocalModel& mdl, int m, const Weight& w);
std::vector<BasicKey> enumerate_basics_degree(const LocalModel& mdl, int m, const Weight& w,
                                              int degree);

// theta = sum of all dlog generators (semistable, log-point base).
DrwElement theta(const LocalModel& mdl, int m);
DrwElement wedge_theta(const DrwElement& w);  // theta ∧ w

// Interior product at the distinguished pole-free log slot i0(w); the
// contracting homotopy of the theta complex: theta∧c + c∘theta∧ = id.
int theta_slot(const LocalModel& mdl, const Weight& pole_free_w);
DrwElement contraction(const DrwElement& w);

// Projection to the relative complex (quotient by theta wedge), realized
// by the idempotent id - theta∧contraction; the result carries no pole at
// the slot i0(w) in each weight class.
DrwElement to_relative(const DrwElement& w);

// WC / WC' decomposition: wc collects the eps'-coordinates with k_e not a
// pole, wc_prime the rest; w = wc + wc_prime.
std::pair<DrwElement, DrwElement> eps_prime_decompose(const DrwElement& w);

// Mayer-Vietoris restrictions for semistable models of relation depth d:
// Z1 keeps terms with [1,d-1] not in Supp+ k (model relation shrinks),
// Z2 keeps terms with d not in Supp+ k (relation becomes {d}),
// Z drops the variable d entirely (pole at d turns into a new phantom
// generator with index f+1).
enum class MvTarget { Z1, Z2, Z };
LocalModel mv_model(const LocalModel& mdl, MvTarget t);
DrwElement mv_restrict(const DrwElement& w, MvTarget t);

}  // namespace logdrw

#endif
