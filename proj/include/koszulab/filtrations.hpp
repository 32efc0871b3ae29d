#pragma once

#include "koszulab/operadic.hpp"

namespace koszulab {

struct NonStabilizingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Positive-indexed filtered/cofiltered/graded objects over a base. Only a
// finite prefix of stages is stored; a filtered object is constant beyond the
// last stored stage, a cofiltered tower must stabilize inside the window for
// its limit to be evaluated.
struct FilteredObject {
  BaseCategory base;
  std::vector<Complex> stages;     // stages[i] = stage i+1
  std::vector<ComplexMap> maps;    // maps[i]: stage i+1 -> stage i+2
};

struct CoFilteredObject {
  BaseCategory base;
  std::vector<Complex> stages;     // stages[i] = stage i+1
  std::vector<ComplexMap> maps;    // maps[i]: stage i+2 -> stage i+1
};

struct GradedObject {
  BaseCategory base;
  std::vector<Complex> pieces;     // pieces[i] = piece i+1
};

FilteredObject add_fil(const BaseObject& v, int stages = 3);
CoFilteredObject add_cofil(const BaseObject& v, int stages = 3);

// assgr(V)_n = coFib(V_{n-1} -> V_n) for filtrations,
// assgr(V)_n = Fib(V_n -> V_{n-1}) for cofiltrations.
GradedObject assgr(const FilteredObject& f);
GradedObject assgr(const CoFilteredObject& f);

// oblv_Fil = colim (the eventual stage); oblv_coFil = lim, evaluated through
// the window via the stabilization threshold.
BaseObject oblv(const FilteredObject& f);
BaseObject oblv(const CoFilteredObject& f, const Window& w);

bool is_stabilizing(const CoFilteredObject& f, const Window& w, int* threshold = nullptr);
bool is_decaying(const GradedObject& g, const Window& w);

// The weight filtration of a Chevalley-Eilenberg coalgebra: stage i is the
// subcomplex of Sym-weights <= i; this realizes chev_Fil . addFil at the
// chain level.
FilteredObject chevalley_weight_filtration(const StrictComCoalgebra& chev);

// The weight cofiltration of cochevalley: stage i is the quotient onto
// weights <= i (the cochev_stage tower).
CoFilteredObject cochevalley_weight_cofiltration(const StrictCoLie& h, CutoffPolicy cutoff);

struct DiagramCheck {
  bool oblv_ok = false;      // oblv . functor_Fil . addFil ~ functor
  bool assgr_ok = false;     // assgr pieces ~ functor of the trivialized input
  bool sum_prod_ok = false;  // (+) ~ prod on the decaying pieces
  std::string detail;
  bool ok() const { return oblv_ok && assgr_ok && sum_prod_ok; }
};

DiagramCheck check_fundamental_diagram(const StrictLieAlgebra& g, CutoffPolicy cutoff);
DiagramCheck check_fundamental_diagram(const StrictCoLie& h, CutoffPolicy cutoff);

}  // namespace koszulab
