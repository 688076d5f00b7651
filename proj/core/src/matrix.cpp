#include "logdrw/matrix.hpp"

#include <sstream>

namespace logdrw {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  if (c_ != o.r_) throw std::invalid_argument("Mat::mul: shape mismatch");
  Mat r(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const bigint& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.c_; ++j) r.at(i, j) += x * o.at(k, j);
    }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Mat::add: shape mismatch");
  Mat r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("Mat::sub: shape mismatch");
  Mat r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

Mat Mat::transpose() const {
  Mat r(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool Mat::is_zero() const {
  for (auto& x : a_)
    if (x != 0) return false;
  return true;
}

Mat Mat::col(int j) const {
  Mat r(r_, 1);
  for (int i = 0; i < r_; ++i) r.at(i, 0) = at(i, j);
  return r;
}

Mat Mat::hconcat(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row mismatch");
  Mat r(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
  }
  return r;
}

Mat Mat::reduced_mod(const bigint& mod) const {
  Mat r = *this;
  for (auto& x : r.a_) {
    x %= mod;
    if (x < 0) x += mod;
  }
  return r;
}

std::string Mat::str() const {
  std::ostringstream os;
  for (int i = 0; i < r_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < c_; ++j) os << at(i, j).str() << (j + 1 == c_ ? "" : " ");
    os << (i + 1 == r_ ? "]" : "\n");
  }
  return os.str();
}

std::vector<bigint> Snf::divisors() const {
  std::vector<bigint> out;
  int n = std::min(d.rows(), d.cols());
  for (int i = 0; i < n; ++i)
    if (d.at(i, i) != 0) out.push_back(d.at(i, i));
  return out;
}

bool Snf::verify(const Mat& m) const {
  if (!(u * m * v == d)) return false;
  if (!(u * uinv == Mat::identity(u.rows()))) return false;
  if (!(v * vinv == Mat::identity(v.rows()))) return false;
  return true;
}

namespace {

bigint babs(const bigint& x) { return x < 0 ? bigint(-x) : x; }

struct SnfWork {
  Mat d, u, v, uinv, vinv;

  void row_swap(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < d.cols(); ++j) std::swap(d.at(a, j), d.at(b, j));
    for (int j = 0; j < u.cols(); ++j) std::swap(u.at(a, j), u.at(b, j));
    for (int i = 0; i < uinv.rows(); ++i) std::swap(uinv.at(i, a), uinv.at(i, b));
  }
  void col_swap(int a, int b) {
    if (a == b) return;
    for (int i = 0; i < d.rows(); ++i) std::swap(d.at(i, a), d.at(i, b));
    for (int i = 0; i < v.rows(); ++i) std::swap(v.at(i, a), v.at(i, b));
    for (int j = 0; j < vinv.cols(); ++j) std::swap(vinv.at(a, j), vinv.at(b, j));
  }
  // row[a] += q * row[b]
  void row_add(int a, int b, const bigint& q) {
    if (q == 0) return;
    for (int j = 0; j < d.cols(); ++j) d.at(a, j) += q * d.at(b, j);
    for (int j = 0; j < u.cols(); ++j) u.at(a, j) += q * u.at(b, j);
    for (int i = 0; i < uinv.rows(); ++i) uinv.at(i, b) -= q * uinv.at(i, a);
  }
  // col[a] += q * col[b]
  void col_add(int a, int b, const bigint& q) {
    if (q == 0) return;
    for (int i = 0; i < d.rows(); ++i) d.at(i, a) += q * d.at(i, b);
    for (int i = 0; i < v.rows(); ++i) v.at(i, a) += q * v.at(i, b);
    for (int j = 0; j < vinv.cols(); ++j) vinv.at(b, j) -= q * vinv.at(a, j);
  }
  void row_negate(int a) {
    for (int j = 0; j < d.cols(); ++j) d.at(a, j) = -d.at(a, j);
    for (int j = 0; j < u.cols(); ++j) u.at(a, j) = -u.at(a, j);
    for (int i = 0; i < uinv.rows(); ++i) uinv.at(i, a) = -uinv.at(i, a);
  }
};

}  // namespace

Snf snf(const Mat& m) {
  SnfWork w;
  w.d = m;
  w.u = Mat::identity(m.rows());
  w.uinv = Mat::identity(m.rows());
  w.v = Mat::identity(m.cols());
  w.vinv = Mat::identity(m.cols());
  int R = m.rows(), C = m.cols();
  int t = 0;
  while (t < R && t < C) {
    // Locate a pivot of minimal absolute value in the trailing block.
    int pi = -1, pj = -1;
    bigint best = 0;
    for (int i = t; i < R; ++i)
      for (int j = t; j < C; ++j)
        if (w.d.at(i, j) != 0 && (pi < 0 || babs(w.d.at(i, j)) < best)) {
          pi = i;
          pj = j;
          best = babs(w.d.at(i, j));
        }
    if (pi < 0) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < R; ++i) {
        if (w.d.at(i, t) == 0) continue;
        bigint q = w.d.at(i, t) / w.d.at(t, t);
        w.row_add(i, t, -q);
        if (w.d.at(i, t) != 0) {
          // Remainder became the smaller pivot candidate.
          w.row_swap(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < C; ++j) {
        if (w.d.at(t, j) == 0) continue;
        bigint q = w.d.at(t, j) / w.d.at(t, t);
        w.col_add(j, t, -q);
        if (w.d.at(t, j) != 0) {
          w.col_swap(t, j);
          clean = false;
        }
      }
      if (clean) {
        // Divisibility sweep: pull any non-multiple into column t.
        for (int i = t + 1; i < R && clean; ++i)
          for (int j = t + 1; j < C && clean; ++j)
            if (w.d.at(i, j) % w.d.at(t, t) != 0) {
              w.row_add(t, i, 1);
              clean = false;
            }
      }
    }
    if (w.d.at(t, t) < 0) w.row_negate(t);
    ++t;
  }
  Snf out;
  out.d = w.d;
  out.u = w.u;
  out.v = w.v;
  out.uinv = w.uinv;
  out.vinv = w.vinv;
  return out;
}

Mat kernel_basis(const Mat& a) {
  Snf s = snf(a);
  int rank = 0;
  int n = std::min(a.rows(), a.cols());
  for (int i = 0; i < n; ++i)
    if (s.d.at(i, i) != 0) ++rank;
  Mat k(a.cols(), a.cols() - rank);
  for (int j = rank; j < a.cols(); ++j)
    for (int i = 0; i < a.cols(); ++i) k.at(i, j - rank) = s.v.at(i, j);
  return k;
}

Mat column_space_basis(const Mat& a) {
  Snf s = snf(a);
  int n = std::min(a.rows(), a.cols());
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (s.d.at(i, i) != 0) ++rank;
  Mat b(a.rows(), rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < a.rows(); ++i) b.at(i, j) = s.uinv.at(i, j) * s.d.at(j, j);
  return b;
}

bool solve_integer(const Mat& a, const Mat& b, Mat& x) {
  Snf s = snf(a);
  Mat ub = s.u * b;
  Mat z(a.cols(), b.cols());
  int n = std::min(a.rows(), a.cols());
  for (int col = 0; col < b.cols(); ++col) {
    for (int i = 0; i < a.rows(); ++i) {
      bigint di = (i < n) ? s.d.at(i, i) : bigint(0);
      if (di == 0) {
        if (ub.at(i, col) != 0) return false;
      } else {
        if (ub.at(i, col) % di != 0) return false;
        if (i < a.cols()) z.at(i, col) = ub.at(i, col) / di;
      }
    }
  }
  x = s.v * z;
  return true;
}

Mat invert_mod(const Mat& a, i64 p, int m) {
  if (a.rows() != a.cols()) throw std::invalid_argument("invert_mod: square matrix required");
  bigint mod = 1;
  for (int i = 0; i < m; ++i) mod *= p;
  int n = a.rows();
  Mat w = a.reduced_mod(mod);
  Mat inv = Mat::identity(n);
  auto mod_norm = [&](bigint& x) {
    x %= mod;
    if (x < 0) x += mod;
  };
  for (int col = 0; col < n; ++col) {
    // Pick a unit pivot (invertible mod p).
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (w.at(i, col) % p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::runtime_error("invert_mod: matrix not invertible mod p");
    for (int j = 0; j < n; ++j) {
      std::swap(w.at(col, j), w.at(piv, j));
      std::swap(inv.at(col, j), inv.at(piv, j));
    }
    // Invert the pivot mod p^m by Hensel from the mod-p inverse.
    bigint a0 = w.at(col, col) % p;
    i64 inv_p = 0;
    for (i64 cand = 1; cand < p; ++cand)
      if ((i64)((a0 * cand) % p) == 1) {
        inv_p = cand;
        break;
      }
    bigint piv_inv = inv_p;
    for (int it = 0; it < m; ++it) {
      piv_inv = piv_inv * (2 - w.at(col, col) * piv_inv);
      piv_inv %= mod;
      if (piv_inv < 0) piv_inv += mod;
    }
    for (int j = 0; j < n; ++j) {
      w.at(col, j) = w.at(col, j) * piv_inv;
      inv.at(col, j) = inv.at(col, j) * piv_inv;
      mod_norm(w.at(col, j));
      mod_norm(inv.at(col, j));
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      bigint q = w.at(i, col);
      if (q == 0) continue;
      for (int j = 0; j < n; ++j) {
        w.at(i, j) -= q * w.at(col, j);
        inv.at(i, j) -= q * inv.at(col, j);
        mod_norm(w.at(i, j));
        mod_norm(inv.at(i, j));
      }
    }
  }
  return inv;
}

}  // namespace logdrw
