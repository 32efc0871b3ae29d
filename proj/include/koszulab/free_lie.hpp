#pragma once

#include "koszulab/operadic.hpp"

namespace koszulab {

// Free graded Lie algebra on the basis of v, truncated to bracket words of
// weight <= max_weight. Basis: Lyndon words on the generator alphabet,
// together with [b(l), b(l)] for Lyndon words l of odd total degree.
// Exact in each retained weight; brackets landing above max_weight are zero.
StrictLieAlgebra free_lie(const BaseObject& v, int max_weight);

// The free-Lie-with-twisted-differential chain model of Prim[-1]: the free
// Lie algebra on carrier[-1], with the differential sending a generator to
// the internal differential plus the bracket expansion of the reduced
// comultiplication. Cohomology inside the window computes Prim[-1](c).
StrictLieAlgebra prim_lie(const StrictComCoalgebra& c, CutoffPolicy cutoff);

// The canonical map g -> prim_lie(chevalley(g)) picking out weight-one
// generators; a quasi-isomorphism on the certified window when g sits in
// degrees <= -1. `prim` must be prim_lie of chevalley(g).
ComplexMap koszul_unit(const StrictLieAlgebra& g, const StrictLieAlgebra& prim);

}  // namespace koszulab
