#pragma once

#include "koszulab/operadic.hpp"

namespace koszulab {

struct EmptyOpenSetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Family of Lie algebras over the diagonal of a finite Ran model; entries
// live over vect and are assembled into a single Lie object whose support is
// the singletons.
struct DiagonalLieFamily {
  BaseCategory base;  // finran
  std::vector<std::pair<std::string, StrictLieAlgebra>> entries;
};

struct DiagonalCoLieFamily {
  BaseCategory base;
  std::vector<std::pair<std::string, StrictCoLie>> entries;
};

StrictLieAlgebra assemble(const DiagonalLieFamily& fam);
StrictCoLie assemble(const DiagonalCoLieFamily& fam);

struct FactorizationWitness {
  std::vector<std::string> s1, s2;
  int degree = 0;
  int dim_source = 0, dim_target = 0;
};

// The pairwise factorization check at d = 0: for all disjoint nonempty
// S1, S2 the multiplication component b(S1) (x) b(S2) -> b(S1 u S2) must be
// a quasi-isomorphism on the window. Returns the first failure.
std::optional<FactorizationWitness> is_factorization_algebra(const StrictComAlgebra& b,
                                                             const Window& w);

// Dual check: a(S1 u S2) -> a(S1) (x) a(S2) through the comultiplication.
std::optional<FactorizationWitness> is_factorization_coalgebra(const StrictComCoalgebra& a,
                                                               const Window& w);

// Validation of the pairwise reduction: the threefold multiplication
// component over three pairwise disjoint subsets, checked directly.
std::optional<FactorizationWitness> factorization_triple_check(const StrictComAlgebra& b,
                                                               const Window& w);

// Open embeddings of the finite model: open = any nonempty subset of points.
BaseObject restrict_to_open(const BaseObject& f, const std::vector<std::string>& subset);
BaseObject extend_by_zero(const BaseObject& f, const BaseCategory& larger);

StrictCoLie extend_by_zero(const StrictCoLie& h, const BaseCategory& larger);

}  // namespace koszulab
