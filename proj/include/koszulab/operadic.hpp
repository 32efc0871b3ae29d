#pragma once

#include <tuple>

#include "koszulab/basecat.hpp"
#include "koszulab/words.hpp"

namespace koszulab {

struct HypothesisViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weight/arity bound together with the degree window it certifies and the
// estimate justifying the discarded summands.
struct CutoffPolicy {
  int max_weight = 0;  // 0: derive the minimal feasible bound from the window
  Window window{0, 0, 2};
  std::string justification;
};

// Structure maps on flat bases. A contraction sends a pair of basis elements
// to a sparse vector; an expansion sends a basis element to pair terms.
using ContractMap = std::map<std::pair<int, int>, SparseVec>;
using ExpandMap = std::vector<std::vector<std::tuple<int, int, Rational>>>;

// Pair terms of the Koszul differential d(x_i (x) x_j) = dx_i (x) x_j +
// (-1)^{|x_i|} x_i (x) dx_j, without materializing the tensor square.
std::vector<std::tuple<int, int, Rational>> tensor_square_d(const FlatComplex& a, int i, int j);

struct StrictLieAlgebra {
  BaseObject carrier;
  FlatComplex flat;  // flatten(carrier.big)
  ContractMap bracket;
  CutoffPolicy cutoff;
  std::vector<int> weight;  // optional weight grading, parallel to flat basis

  SparseVec bracket_of(int i, int j) const {
    auto it = bracket.find({i, j});
    return it == bracket.end() ? SparseVec{} : it->second;
  }
  // antisymmetry, Jacobi, Leibniz and stratum compatibility; nullopt when ok
  std::optional<std::string> check_axioms() const;
  void validate() const;
};

struct StrictCoLie {
  BaseObject carrier;
  FlatComplex flat;
  ExpandMap cobracket;
  CutoffPolicy cutoff;

  std::optional<std::string> check_axioms() const;
  void validate() const;
};

struct StrictComCoalgebra {
  BaseObject carrier;
  FlatComplex flat;
  ExpandMap comul;
  CutoffPolicy cutoff;
  std::vector<int> weight;

  std::optional<std::string> check_axioms() const;
  void validate() const;
  // certified by the degree bounds when possible, probed directly otherwise
  bool conilpotent() const;
};

struct StrictComAlgebra {
  BaseObject carrier;
  FlatComplex flat;
  ContractMap mul;
  CutoffPolicy cutoff;
  std::vector<int> weight;

  SparseVec product_of(int i, int j) const {
    auto it = mul.find({i, j});
    return it == mul.end() ? SparseVec{} : it->second;
  }
  std::optional<std::string> check_axioms() const;
  void validate() const;
};

// --- constructions ----------------------------------------------------------

// m-th symmetric power with Koszul signs; over finran the underlying tensor
// is the (x)*-convolution. Exact, no truncation.
BaseObject sym_power(const BaseObject& v, int m);

StrictLieAlgebra trivial_lie(const BaseObject& v);
StrictCoLie trivial_colie(const BaseObject& v);
StrictComCoalgebra trivial_comcoalg(const BaseObject& v);

// Linear duality carrying a Lie structure to the transposed coLie structure
// (and a coLie structure back to a Lie structure on the dual), and likewise
// for commutative (co)algebras.
StrictCoLie dualize(const StrictLieAlgebra& g);
StrictLieAlgebra dualize(const StrictCoLie& h);
StrictComAlgebra dualize(const StrictComCoalgebra& a);
StrictComCoalgebra dualize(const StrictComAlgebra& b);

// Reduced Chevalley-Eilenberg coalgebra Sym^{>0}(g[1]) with d = d_I + d_II,
// comultiplication the unshuffle into nonempty parts, truncated to the
// weights certifying the window.
StrictComCoalgebra chevalley(const StrictLieAlgebra& g, CutoffPolicy cutoff);

// Weight-truncated Sym^{>0}(h[-1]) with the cobracket-expansion differential;
// carrier must sit in degrees >= 1.
StrictComAlgebra cochevalley(const StrictCoLie& h, CutoffPolicy cutoff);

// Quotient of cochevalley onto weights <= i (the i-th cofiltration stage),
// with the projection maps forming the tower.
StrictComAlgebra cochev_stage(const StrictCoLie& h, int i, CutoffPolicy cutoff);

// Projection stage i -> stage i-1 of the coChev cofiltration.
ComplexMap cochev_stage_map(const StrictCoLie& h, int i, CutoffPolicy cutoff);

// Smallest m with 2^{m+1} - m - 1 >= |window_lo|.
int stabilization_bound(int window_lo);

// The weight-w summand of chevalley(g) for g concentrated in degrees <= -1
// lies in degrees <= -w; dual statement for cochevalley. Checked on every
// construction; exposed for the test suites.
bool weight_degree_estimate_holds(const FlatComplex& carrier, const std::vector<int>& weight,
                                  bool connective);

}  // namespace koszulab
