#include "logdrw/homology.hpp"

#include <sstream>

namespace logdrw {

PresentedComplex PresentedComplex::from_orders(int lo,
                                               const std::vector<std::vector<bigint>>& orders,
                                               const std::vector<Mat>& bnd) {
  PresentedComplex c;
  c.lo = lo;
  for (auto& ord : orders) {
    c.gens.push_back((int)ord.size());
    Mat r((int)ord.size(), (int)ord.size());
    for (size_t i = 0; i < ord.size(); ++i) r.at((int)i, (int)i) = ord[i];
    c.rel.push_back(r);
  }
  c.bnd = bnd;
  return c;
}

void PresentedComplex::check_well_formed() const {
  if (rel.size() != gens.size()) throw std::invalid_argument("complex: rel size mismatch");
  if (!bnd.empty() && bnd.size() + 1 != gens.size())
    throw std::invalid_argument("complex: bnd size mismatch");
  for (size_t i = 0; i + 1 < gens.size(); ++i) {
    if (bnd[i].rows() != gens[i + 1] || bnd[i].cols() != gens[i])
      throw std::invalid_argument("complex: bnd shape mismatch");
    // d(rel_i) must lie in the relation lattice of degree i+1.
    Mat img = bnd[i] * rel[i];
    Mat x;
    if (!solve_integer(rel[i + 1], img, x))
      throw std::invalid_argument("complex: boundary does not respect relations");
  }
  for (size_t i = 0; i + 2 < gens.size(); ++i) {
    Mat dd = bnd[i + 1] * bnd[i];
    Mat x;
    if (!solve_integer(rel[i + 2], dd, x))
      throw std::invalid_argument("complex: d o d != 0 modulo relations");
  }
}

bigint PresentedComplex::group_order(int degree) const {
  int i = idx(degree);
  if (gens[i] == 0) return 1;
  Snf s = snf(rel[i]);
  auto dv = s.divisors();
  if ((int)dv.size() < gens[i]) throw std::runtime_error("group_order: infinite group");
  bigint o = 1;
  for (auto& d : dv) o *= d;
  return o;
}

bool HomologyReport::trivial() const {
  for (auto& [deg, dv] : divisors)
    if (!dv.empty()) return false;
  for (auto& [deg, fr] : free_rank)
    if (fr != 0) return false;
  return true;
}

bigint HomologyReport::total_length_at(int degree, i64 p) const {
  auto it = divisors.find(degree);
  if (it == divisors.end()) return 0;
  bigint len = 0;
  for (auto d : it->second) {
    while (d % p == 0) {
      d /= p;
      ++len;
    }
  }
  return len;
}

std::string HomologyReport::str() const {
  std::ostringstream os;
  for (auto& [deg, dv] : divisors) {
    os << "H^" << deg << ": ";
    if (dv.empty())
      os << "0";
    else
      for (size_t i = 0; i < dv.size(); ++i) os << (i ? " + " : "") << "Z/" << dv[i].str();
    auto fr = free_rank.find(deg);
    if (fr != free_rank.end() && fr->second > 0) os << " + Z^" << fr->second;
    os << "\n";
  }
  return os.str();
}

HomologyGroup::HomologyGroup(int r, const Mat& cyc, const Mat& bdry) : r_(r) {
  basis_ = column_space_basis(cyc);
  z_ = basis_.cols();
  Mat w(z_, bdry.cols());
  if (bdry.cols() > 0) {
    if (!solve_integer(basis_, bdry, w))
      throw std::runtime_error("HomologyGroup: boundaries not contained in cycles");
  }
  wsnf_ = snf(w);
  int n = std::min(w.rows(), w.cols());
  for (int j = 0; j < z_; ++j) {
    bigint dj = (j < n) ? wsnf_.d.at(j, j) : bigint(0);
    if (dj == 0) {
      ++free_rank_;
      div_pos_.push_back(j);
      div_.push_back(0);
    } else if (dj != 1) {
      div_pos_.push_back(j);
      div_.push_back(dj);
    }
  }
  // Trim sentinel zeros out of div_ (they are tracked by free_rank_).
  std::vector<bigint> dv;
  std::vector<int> dp;
  for (size_t i = 0; i < div_.size(); ++i)
    if (div_[i] != 0) {
      dv.push_back(div_[i]);
      dp.push_back(div_pos_[i]);
    }
  div_ = dv;
  div_pos_ = dp;
}

Mat HomologyGroup::representative(int j) const {
  Mat e(z_, 1);
  e.at(div_pos_[j], 0) = 1;
  return basis_ * (wsnf_.uinv * e);
}

std::vector<bigint> HomologyGroup::classify(const Mat& x) const {
  Mat xi;
  if (z_ == 0) return {};
  if (!solve_integer(basis_, x, xi)) throw std::runtime_error("classify: not a cycle");
  Mat eta = wsnf_.u * xi;
  std::vector<bigint> out;
  for (size_t j = 0; j < div_.size(); ++j) {
    bigint v = eta.at(div_pos_[j], 0) % div_[j];
    if (v < 0) v += div_[j];
    out.push_back(v);
  }
  return out;
}

bool HomologyGroup::is_boundary(const Mat& x) const {
  for (auto& v : classify(x))
    if (v != 0) return false;
  return true;
}

HomologyGroup homology_at(const PresentedComplex& c, int degree) {
  int i = c.idx(degree);
  int r = c.gens[i];
  Mat cyc;
  if (degree < c.hi() && c.bnd[i].rows() > 0) {
    Mat stacked = Mat::hconcat(c.bnd[i], c.rel[i + 1]);
    Mat k = kernel_basis(stacked);
    cyc = Mat(r, k.cols());
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < k.cols(); ++b) cyc.at(a, b) = k.at(a, b);
  } else {
    cyc = Mat::identity(r);
  }
  Mat bdry = c.rel[i];
  if (degree > c.lo) bdry = Mat::hconcat(c.bnd[i - 1], bdry);
  return HomologyGroup(r, cyc, bdry);
}

HomologyReport homology_of(const PresentedComplex& c) {
  HomologyReport rep;
  for (int deg = c.lo; deg <= c.hi(); ++deg) {
    HomologyGroup h = homology_at(c, deg);
    std::vector<bigint> dv = h.divisors();
    std::sort(dv.begin(), dv.end());
    rep.divisors[deg] = dv;
    rep.free_rank[deg] = h.free_rank();
  }
  return rep;
}

Mat induced_on_homology(const PresentedComplex& src, const HomologyGroup& hsrc,
                        const PresentedComplex& dst, const HomologyGroup& hdst, int degree,
                        const ChainMap& f) {
  (void)src;
  (void)dst;
  Mat out(hdst.rank(), hsrc.rank());
  for (int j = 0; j < hsrc.rank(); ++j) {
    Mat x = hsrc.representative(j);
    Mat y = f.at_degree(degree) * x;
    auto cls = hdst.classify(y);
    for (int i = 0; i < hdst.rank(); ++i) out.at(i, j) = cls[i];
  }
  return out;
}

bigint image_order(const PresentedComplex& b, const PresentedComplex& c, const ChainMap& g,
                   int degree) {
  int ic = c.idx(degree);
  bigint full = c.group_order(degree);
  if (c.gens[ic] == 0) return 1;
  Mat span = Mat::hconcat(g.at_degree(degree), c.rel[ic]);
  Snf s = snf(span);
  auto dv = s.divisors();
  if ((int)dv.size() < c.gens[ic]) throw std::runtime_error("image_order: infinite quotient");
  bigint q = 1;
  for (auto& d : dv) q *= d;
  return full / q;
}

bigint kernel_order(const PresentedComplex& b, const PresentedComplex& c, const ChainMap& g,
                    int degree) {
  return b.group_order(degree) / image_order(b, c, g, degree);
}

bool exact_at_middle(const PresentedComplex& a, const PresentedComplex& b,
                     const PresentedComplex& c, const ChainMap& f, const ChainMap& g, int degree,
                     const ExactnessOptions& opt, std::string* why) {
  int ia = a.idx(degree), ic = c.idx(degree);
  // g o f = 0 in C.
  if (a.gens[ia] > 0 && c.gens[ic] > 0) {
    Mat gf = g.at_degree(degree) * f.at_degree(degree);
    Mat x;
    if (!solve_integer(c.rel[ic], gf, x)) {
      if (why) *why = "g o f != 0";
      return false;
    }
  }
  bigint imf = image_order(a, b, f, degree);
  bigint kerg = kernel_order(b, c, g, degree);
  if (imf != kerg) {
    if (why) *why = "im(f) order " + imf.str() + " != ker(g) order " + kerg.str();
    return false;
  }
  if (opt.require_injective_f && kernel_order(a, b, f, degree) != 1) {
    if (why) *why = "f not injective";
    return false;
  }
  if (opt.require_surjective_g && image_order(b, c, g, degree) != c.group_order(degree)) {
    if (why) *why = "g not surjective";
    return false;
  }
  return true;
}

Mat connecting_on_homology(const PresentedComplex& a, const PresentedComplex& b,
                           const PresentedComplex& c, const ChainMap& f, const ChainMap& g,
                           int degree, const HomologyGroup& hc, const HomologyGroup& ha) {
  Mat out(ha.rank(), hc.rank());
  int ib = b.idx(degree), ic = c.idx(degree);
  int ia1 = a.idx(degree + 1);
  for (int j = 0; j < hc.rank(); ++j) {
    Mat xc = hc.representative(j);
    // Lift through g: solve g * xb = xc mod rel_C.
    Mat lifted;
    Mat sys = Mat::hconcat(g.at_degree(degree), c.rel[ic]);
    if (!solve_integer(sys, xc, lifted))
      throw std::runtime_error("connecting: surjection lift failed");
    Mat xb(b.gens[ib], 1);
    for (int i = 0; i < b.gens[ib]; ++i) xb.at(i, 0) = lifted.at(i, 0);
    Mat dxb = b.bnd[ib] * xb;
    // Pull back through f: solve f * xa = dxb mod rel_B.
    Mat sys2 = Mat::hconcat(f.at_degree(degree + 1), b.rel[b.idx(degree + 1)]);
    Mat sol;
    if (!solve_integer(sys2, dxb, sol))
      throw std::runtime_error("connecting: preimage under injection failed");
    Mat xa(a.gens[ia1], 1);
    for (int i = 0; i < a.gens[ia1]; ++i) xa.at(i, 0) = sol.at(i, 0);
    auto cls = ha.classify(xa);
    for (int i = 0; i < ha.rank(); ++i) out.at(i, j) = cls[i];
  }
  return out;
}

}  // namespace logdrw
