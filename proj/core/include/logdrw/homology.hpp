#ifndef LOGDRW_HOMOLOGY_HPP
#define LOGDRW_HOMOLOGY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logdrw/matrix.hpp"

namespace logdrw {

// A bounded cochain complex of finite abelian p-groups.  Degree i has
// generators g_1..g_{r_i}; the group is Z^{r_i} / (columns of rel[i]).
// rel always contains the cyclic orders (p-powers) and may contain extra
// relation columns (used for quotient complexes).  bnd[i] maps degree i
// to degree i+1.
struct PresentedComplex {
  int lo = 0;
  std::vector<int> gens;
  std::vector<Mat> rel;
  std::vector<Mat> bnd;  // size = gens.size()-1 when nonempty

  int hi() const { return lo + (int)gens.size() - 1; }
  int degrees() const { return (int)gens.size(); }
  int idx(int degree) const { return degree - lo; }
  bool has_degree(int degree) const { return degree >= lo && degree <= hi(); }

  static PresentedComplex from_orders(int lo, const std::vector<std::vector<bigint>>& orders,
                                      const std::vector<Mat>& bnd);

  // Boundary composites vanish and boundaries respect relations.
  void check_well_formed() const;

  // Order of the degree-i group (product of the cyclic orders after SNF).
  bigint group_order(int degree) const;
};

struct HomologyReport {
  // Per degree: sorted ascending list of elementary divisors > 1.
  std::map<int, std::vector<bigint>> divisors;
  std::map<int, int> free_rank;

  bool trivial() const;
  bigint total_length_at(int degree, i64 p) const;  // sum of exponents
  bool operator==(const HomologyReport& o) const = default;
  std::string str() const;
};

// Homology at one degree, with enough structure to classify cycles and
// push chain maps to homology.
class HomologyGroup {
public:
  HomologyGroup() = default;
  // cyc: columns generate the cycle lattice in Z^r; bdry: columns generate
  // boundaries + relations.
  HomologyGroup(int r, const Mat& cyc, const Mat& bdry);

  const std::vector<bigint>& divisors() const { return div_; }
  int rank() const { return (int)div_.size(); }
  int free_rank() const { return free_rank_; }

  // Chain representative of the j-th homology generator (column vector).
  Mat representative(int j) const;

  // Coordinates of a cycle in ⊕ Z/div_j; throws if x is not a cycle.
  std::vector<bigint> classify(const Mat& x) const;
  bool is_boundary(const Mat& x) const;

private:
  int r_ = 0;
  Mat basis_;       // basis of the cycle lattice, r x z
  Snf wsnf_;        // SNF of boundaries expressed in cycle coordinates
  std::vector<bigint> div_;
  std::vector<int> div_pos_;  // positions of nontrivial divisors in the SNF
  int free_rank_ = 0;
  int z_ = 0;
};

HomologyGroup homology_at(const PresentedComplex& c, int degree);
HomologyReport homology_of(const PresentedComplex& c);

// A degree-preserving chain map between presented complexes (one matrix
// per shared degree, in generator coordinates).
struct ChainMap {
  int lo = 0;
  std::vector<Mat> maps;
  const Mat& at_degree(int degree) const { return maps.at(degree - lo); }
  bool has_degree(int degree) const {
    return degree >= lo && degree < lo + (int)maps.size();
  }
};

// Matrix of the induced map H^deg(src) -> H^deg(dst) in the classify
// coordinates of both sides.
Mat induced_on_homology(const PresentedComplex& src, const HomologyGroup& hsrc,
                        const PresentedComplex& dst, const HomologyGroup& hdst, int degree,
                        const ChainMap& f);

// Exactness of  A --f--> B --g--> C  at B in every shared degree, where the
// three are complexes viewed as graded groups (no differentials involved):
// checks im(f) = ker(g) degreewise, plus optional injectivity/surjectivity.
struct ExactnessOptions {
  bool require_injective_f = false;
  bool require_surjective_g = false;
};
bool exact_at_middle(const PresentedComplex& a, const PresentedComplex& b,
                     const PresentedComplex& c, const ChainMap& f, const ChainMap& g, int degree,
                     const ExactnessOptions& opt, std::string* why = nullptr);

// Kernel size |{x in B_deg : g(x) = 0 in C_deg}|.
bigint kernel_order(const PresentedComplex& b, const PresentedComplex& c, const ChainMap& g,
                    int degree);
bigint image_order(const PresentedComplex& b, const PresentedComplex& c, const ChainMap& g,
                   int degree);

// Connecting homomorphism of a degreewise-short-exact sequence of
// complexes 0 -> A -> B -> C -> 0: the matrix of
// H^deg(C) -> H^{deg+1}(A) in classify coordinates.
Mat connecting_on_homology(const PresentedComplex& a, const PresentedComplex& b,
                           const PresentedComplex& c, const ChainMap& f, const ChainMap& g,
                           int degree, const HomologyGroup& hc, const HomologyGroup& ha);

}  // namespace logdrw

#endif
