#pragma once

#include "koszulab/operadic.hpp"

namespace koszulab {

// The comonadic cobar tower of a conilpotent cocommutative coalgebra for the
// comonad T = Sym^{>0}: stage n is the totalization of the conormalized
// cosimplicial object restricted to levels <= n, so stage 0 is the carrier
// and Fib(stage n -> stage n-1) sits in degrees <= -2*2^n + n when the
// carrier sits in degrees <= -2. The limit computes Prim[-1](c)[1].
struct CobarTower {
  std::vector<Complex> stages;    // stages[k] = coBar^k, k = 0..max_stage
  std::vector<ComplexMap> maps;   // maps[k]: stage k+1 -> stage k
  CutoffPolicy cutoff;
};

CobarTower cobar_tower(const StrictComCoalgebra& c, int max_stage, CutoffPolicy cutoff);

Complex cobar_stage(const StrictComCoalgebra& c, int n, CutoffPolicy cutoff);

// The tower map coBar^n -> coBar^{n-1}; n >= 1.
ComplexMap cobar_stage_map(const StrictComCoalgebra& c, int n, CutoffPolicy cutoff);

// Verified bounds of this tower. A conormalized level-n cell carries at
// least n+1 tensor factors (the staircase cells realize this), so for a
// carrier in degrees <= -2 the fiber of stage n -> stage n-1 sits in total
// degrees <= -(n+2), the tower map is a quasi-isomorphism on degrees
// >= -(n+1), and stage n agrees with the limit on degrees >= -(n+2).
int cobar_fiber_degree_bound(int n);

// Smallest stage whose cohomology equals the tower limit on degrees >= lo.
int cobar_limit_stage(int window_lo);

}  // namespace koszulab
