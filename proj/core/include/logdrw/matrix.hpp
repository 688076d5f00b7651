#ifndef LOGDRW_MATRIX_HPP
#define LOGDRW_MATRIX_HPP

#include <string>
#include <vector>

#include "logdrw/fppoly.hpp"

namespace logdrw {

// Dense matrix over arbitrary-precision integers.  Sizes here are tiny
// (per-weight bases), so no attempt at sparsity.
class Mat {
public:
  Mat() : r_(0), c_(0) {}
  Mat(int rows, int cols) : r_(rows), c_(cols), a_((size_t)rows * cols, 0) {}
  static Mat identity(int n);

  int rows() const { return r_; }
  int cols() const { return c_; }
  bigint& at(int i, int j) { return a_[(size_t)i * c_ + j]; }
  const bigint& at(int i, int j) const { return a_[(size_t)i * c_ + j]; }

  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat transpose() const;
  bool is_zero() const;
  bool operator==(const Mat& o) const = default;

  Mat col(int j) const;
  static Mat hconcat(const Mat& a, const Mat& b);
  Mat reduced_mod(const bigint& mod) const;

  std::string str() const;

private:
  int r_, c_;
  std::vector<bigint> a_;
};

// Smith normal form U*M*V = D with unimodular U, V; divisor chain
// d1 | d2 | ... on the diagonal, nonnegative.  Uinv/Vinv are maintained
// alongside so no matrix inversion is ever needed downstream.
struct Snf {
  Mat d, u, v, uinv, vinv;
  std::vector<bigint> divisors() const;  // nonzero diagonal entries
  bool verify(const Mat& m) const;
};

Snf snf(const Mat& m);

// Basis of the integer kernel lattice {x : A x = 0}, one column per basis
// vector.
Mat kernel_basis(const Mat& a);

// Basis of the column-space lattice of A.
Mat column_space_basis(const Mat& a);

// Solve A x = b over the integers; returns false if no solution.
// b may have several columns; x receives one solution per column.
bool solve_integer(const Mat& a, const Mat& b, Mat& x);

// Inverse of A modulo p^m; throws if A is not invertible mod p.
Mat invert_mod(const Mat& a, i64 p, int m);

}  // namespace logdrw

#endif
