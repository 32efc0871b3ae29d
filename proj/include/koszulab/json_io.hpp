#pragma once

#include <json.hpp>

#include "koszulab/filtrations.hpp"
#include "koszulab/ranmodel.hpp"

namespace koszulab {

using nlohmann::json;

struct InvalidInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const Complex& c);
Complex complex_from_json(const json& j);

json to_json(const BaseObject& v);
BaseObject baseobject_from_json(const json& j);

json to_json(const Window& w);
Window window_from_json(const json& j);

json to_json(const CutoffPolicy& p);
CutoffPolicy cutoff_from_json(const json& j);

json to_json(const FactorizationWitness& w);

// Structures are tagged unions: {"type": "lie"|"colie"|"comcoalg"|"comalg",
// "base": ..., "carrier": ..., "<structure map>": [[labels..., coeff]], ...}.
json to_json(const StrictLieAlgebra& g);
json to_json(const StrictCoLie& h);
json to_json(const StrictComCoalgebra& a);
json to_json(const StrictComAlgebra& b);

StrictLieAlgebra lie_from_json(const json& j);
StrictCoLie colie_from_json(const json& j);
StrictComCoalgebra comcoalg_from_json(const json& j);
StrictComAlgebra comalg_from_json(const json& j);

std::string structure_type(const json& j);

}  // namespace koszulab
