#ifndef LOGDRW_FPPOLY_HPP
#define LOGDRW_FPPOLY_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "logdrw/witt.hpp"

namespace logdrw {

using bigint = boost::multiprecision::cpp_int;

using Expo = std::vector<std::int32_t>;

// Graded lexicographic order; fixes the term order everywhere so that
// printed polynomials and iteration are reproducible.
struct GrlexLess {
  bool operator()(const Expo& a, const Expo& b) const;
};

// Sparse multivariate polynomial with exact integer coefficients.
class ZPoly {
public:
  ZPoly() = default;
  explicit ZPoly(int nvars) : n_(nvars) {}
  static ZPoly constant(int nvars, const bigint& c);
  static ZPoly variable(int nvars, int i, int exp = 1);

  int nvars() const { return n_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<Expo, bigint, GrlexLess>& terms() const { return t_; }

  void add_term(const Expo& e, const bigint& c);

  ZPoly operator+(const ZPoly& o) const;
  ZPoly operator-(const ZPoly& o) const;
  ZPoly operator*(const ZPoly& o) const;
  ZPoly operator*(const bigint& c) const;
  ZPoly pow(int k) const;

  // Exact division by a nonzero integer; throws if any coefficient fails.
  ZPoly divexact(const bigint& c) const;

  // Substitute args[i] for variable i.  args must have size nvars().
  ZPoly subst(const std::vector<ZPoly>& args) const;

  ZPoly reduce_mod(const bigint& mod) const;
  bool operator==(const ZPoly& o) const { return n_ == o.n_ && t_ == o.t_; }

  std::string str(const std::string& stem = "x") const;

private:
  int n_ = 0;
  std::map<Expo, bigint, GrlexLess> t_;
};

// Sparse multivariate polynomial over F_p, coefficients in [0,p).
class FpPoly {
public:
  FpPoly() : p_(2), n_(0) {}
  FpPoly(i64 p, int nvars) : p_(p), n_(nvars) {}
  static FpPoly constant(i64 p, int nvars, i64 c);
  static FpPoly variable(i64 p, int nvars, int i, int exp = 1);

  i64 prime() const { return p_; }
  int nvars() const { return n_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<Expo, i64, GrlexLess>& terms() const { return t_; }

  void add_term(const Expo& e, i64 c);

  FpPoly operator+(const FpPoly& o) const;
  FpPoly operator-(const FpPoly& o) const;
  FpPoly operator*(const FpPoly& o) const;
  FpPoly scaled(i64 c) const;
  FpPoly pow(int k) const;

  // x -> x^p; over F_p this just scales every exponent vector by p.
  FpPoly frobenius() const;

  bool operator==(const FpPoly& o) const = default;

  std::string str(const std::string& stem = "T") const;

private:
  i64 p_;
  int n_;
  std::map<Expo, i64, GrlexLess> t_;
};

}  // namespace logdrw

#endif
