#ifndef LOGDRW_WITTPOLY_HPP
#define LOGDRW_WITTPOLY_HPP

#include <vector>

#include "logdrw/fppoly.hpp"

namespace logdrw {

// Ghost polynomial w_i(X_0..X_i) = sum_j p^j X_j^{p^(i-j)} in the given
// slice X[off], X[off+step], ... of a 2N-variable polynomial ring.
ZPoly ghost_poly(int nvars, int off, int step, int i, i64 p);

// Universal addition/multiplication polynomials s_i, m_i over Z, solved
// from the ghost equations; the divisions by p^i are exact.
class UniversalWittPolynomials {
public:
  UniversalWittPolynomials(i64 p, int N);

  i64 prime() const { return p_; }
  int length() const { return N_; }

  // 2N-variable polynomials: X_j = var 2j, Y_j = var 2j+1.
  const ZPoly& s(int i) const { return s_.at(i); }
  const ZPoly& m(int i) const { return m_.at(i); }

  // Exact integer-polynomial ghost identities; false indicates a bug.
  bool verify_ghost_identities() const;

private:
  i64 p_;
  int N_;
  std::vector<ZPoly> s_, m_;
};

// Shared table per (p, N); built on first use and read-only afterwards.
const UniversalWittPolynomials& universal_witt(i64 p, int N);

// A p-typical Witt vector of length N over F_p[T_1..T_n], coordinates
// stored as sparse polynomials.
struct WittVectorPoly {
  i64 p = 2;
  int nvars = 0;
  std::vector<FpPoly> coords;

  WittVectorPoly() = default;
  WittVectorPoly(i64 p_, int nvars_, int N) : p(p_), nvars(nvars_), coords(N, FpPoly(p_, nvars_)) {}
  int length() const { return (int)coords.size(); }
  bool is_zero() const;
  bool operator==(const WittVectorPoly& o) const = default;
};

WittVectorPoly w_zero(i64 p, int nvars, int N);
WittVectorPoly w_teichmuller(const FpPoly& f, int N);
// Witt coordinates of the integer constant c.
WittVectorPoly w_int(i64 c, i64 p, int nvars, int N);

WittVectorPoly w_add(const WittVectorPoly& a, const WittVectorPoly& b);
WittVectorPoly w_mul(const WittVectorPoly& a, const WittVectorPoly& b);
WittVectorPoly w_neg(const WittVectorPoly& a);
WittVectorPoly w_sub(const WittVectorPoly& a, const WittVectorPoly& b);

// F: length N -> N-1 (requires N >= 2), coordinate-wise p-th powers.
WittVectorPoly w_frobenius(const WittVectorPoly& a);
// V: prepend a zero coordinate, length N -> N+1.
WittVectorPoly w_verschiebung(const WittVectorPoly& a);

// One term of the V-Teichmueller expansion sum_{k,m} V^m([a] T^k).
struct ExpansionTerm {
  Expo k;     // integral monomial exponent
  int shift;  // V-depth m
  i64 coeff;  // element of F_p
  bool operator==(const ExpansionTerm& o) const = default;
};

// Greedy peeling: read off monomials of a_0, Witt-subtract, strip one V,
// recurse.  Inverse of expansion_to_coords.
std::vector<ExpansionTerm> coords_to_expansion(const WittVectorPoly& a);
WittVectorPoly expansion_to_coords(const std::vector<ExpansionTerm>& terms, i64 p, int nvars,
                                   int N);

}  // namespace logdrw

#endif
