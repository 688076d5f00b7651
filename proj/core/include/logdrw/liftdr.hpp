#ifndef LOGDRW_LIFTDR_HPP
#define LOGDRW_LIFTDR_HPP

#include <bit>
#include <cstdint>
#include <map>

#include "logdrw/drw.hpp"
#include "logdrw/fppoly.hpp"
#include "logdrw/weights.hpp"

namespace logdrw {

// Exterior monomial of the lifted log de Rham algebra over Z/p^m:
// T^mono times a subset of the generators
//   dlog c_j (slot j-1), dlog T_i for i <= e and dT_i for i > e
//   (slot f+i-1).
// Signs follow ascending slot order.
struct LiftKey {
  Expo mono;
  std::uint64_t gens = 0;

  int degree() const { return std::popcount(gens); }
  auto operator<=>(const LiftKey& o) const = default;
};

int lift_slot_c(const LocalModel& mdl, int j);
int lift_slot_t(const LocalModel& mdl, int i);

class LiftForm {
public:
  LiftForm() = default;
  LiftForm(const LocalModel& mdl, int m) : mdl_(mdl), m_(m) {}

  const LocalModel& model() const { return mdl_; }
  int level() const { return m_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<LiftKey, i64>& terms() const { return t_; }

  // Reduces mod p^m and applies the semistable monomial rule (the
  // relation divisors cannot all appear in the monomial).
  void add_term(const LiftKey& key, i64 c);

  LiftForm operator+(const LiftForm& o) const;
  LiftForm operator-(const LiftForm& o) const;
  LiftForm scaled(i64 c) const;
  bool operator==(const LiftForm& o) const = default;

  // T-weight of a key: monomial exponents plus one for each dT factor.
  Weight key_weight(const LiftKey& key) const;
  bool homogeneous_weight() const;
  LiftForm weight_part(const Weight& w) const;

private:
  LocalModel mdl_;
  int m_ = 1;
  std::map<LiftKey, i64> t_;
};

LiftForm lift_zero(const LocalModel& mdl, int m);
LiftForm lift_unit(const LocalModel& mdl, int m);
LiftForm lift_monomial(const LocalModel& mdl, int m, const Expo& mono, i64 c = 1);
LiftForm lift_dlog_t(const LocalModel& mdl, int m, int i);
LiftForm lift_dt(const LocalModel& mdl, int m, int i);
LiftForm lift_dlog_c(const LocalModel& mdl, int m, int j);

LiftForm mul_lift(const LiftForm& a, const LiftForm& b);
LiftForm d_lift(const LiftForm& a);

// The log p-basic element eps(k, P, J): integral k (poles allowed at log
// positions), expanded over the exterior basis with the p-divided d
// factors evaluated exactly over Z before reduction.
LiftForm make_p_basic(const LocalModel& mdl, int m, const Weight& k, const Partition& part,
                      std::uint32_t cset);

// Coordinates of a weight-homogeneous form in the p-basic basis of its
// weight class; index order matches enumerate_basics_degree.
std::vector<std::pair<BasicKey, i64>> p_basic_coordinates(const LiftForm& phi);

// Comparison into the de Rham-Witt normal form: the p-basic dictionary
// eps(k,P,J) -> eps(1,k,P,J), extended linearly.
DrwElement compare_to_drw(const LiftForm& phi);

// The generic chart map T^k -> [T^k], dT_i -> d[T_i], dlog -> dlog,
// products via drw multiplication; must agree with compare_to_drw.
DrwElement chart_map(const LiftForm& phi);

// Phantom component i of a finite normal-form element, as a form over
// Z/p^prec: the displayed divided-power formula (route 1).
LiftForm ghost_component(const DrwElement& w, int i, int prec);
// The same value computed from the canonical word factors and the
// elementary ghost rules (route 2); agreement pins the word shapes.
LiftForm ghost_component_via_word(const DrwElement& w, int i, int prec);

// theta on the lift side: sum of all dlog generators.
LiftForm lift_theta(const LocalModel& mdl, int m);

}  // namespace logdrw

#endif
