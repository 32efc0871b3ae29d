#include "koszulab/json_io.hpp"

namespace koszulab {

json to_json(const Complex& c) {
  json degrees = json::object();
  for (const auto& [n, basis] : c.space.components) {
    json labels = json::array();
    for (const auto& e : basis) labels.push_back(e.label);
    degrees[std::to_string(n)] = labels;
  }
  json diffs = json::array();
  for (const auto& [n, m] : c.d) {
    json entries = json::array();
    const auto& src = c.space.components.at(n);
    const auto& tgt = c.space.components.at(n + 1);
    for (int r = 0; r < m.rows; ++r)
      for (const auto& [col, v] : m.row[r])
        entries.push_back(json::array({tgt[r].label, src[col].label, to_string(v)}));
    diffs.push_back({{"from", n}, {"entries", entries}});
  }
  return {{"degrees", degrees}, {"d", diffs}};
}

Complex complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("degrees"))
    throw InvalidInputError("complex JSON needs a 'degrees' object");
  Complex c;
  std::map<int, std::map<std::string, int>> index;
  for (const auto& [key, labels] : j.at("degrees").items()) {
    int n = 0;
    try {
      n = std::stoi(key);
    } catch (...) {
      throw InvalidInputError("bad degree key '" + key + "'");
    }
    for (const auto& l : labels) {
      std::string lbl = l.get<std::string>();
      if (index[n].count(lbl)) throw InvalidInputError("duplicate label '" + lbl + "'");
      index[n][lbl] = static_cast<int>(c.space.components[n].size());
      c.space.components[n].push_back({lbl, 0});
    }
  }
  for (const auto& block : j.value("d", json::array())) {
    int n = block.at("from").get<int>();
    if (c.dim(n) == 0) throw InvalidInputError("differential from empty degree");
    SparseMatrix m(c.dim(n + 1), c.dim(n));
    for (const auto& e : block.at("entries")) {
      std::string row = e.at(0).get<std::string>();
      std::string col = e.at(1).get<std::string>();
      auto ri = index.count(n + 1) ? index[n + 1].find(row) : index[n + 1].end();
      auto ci = index[n].find(col);
      if (!index.count(n + 1) || ri == index[n + 1].end() || ci == index[n].end())
        throw InvalidInputError("differential entry references unknown label");
      m.add_to(ri->second, ci->second, parse_rational(e.at(2).get<std::string>()));
    }
    c.set_diff(n, std::move(m));
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw InvalidInputError(std::string("invalid complex: ") + e.what());
  }
  return c;
}

json to_json(const BaseObject& v) {
  if (v.base.kind != BaseCategory::Kind::FinRan)
    return {{"points", json::array()}, {"stalks", {{"", to_json(v.big)}}}};
  json points = json::array();
  for (const auto& p : v.base.points) points.push_back(p);
  json stalks = json::object();
  for (uint32_t s : v.strata()) stalks[v.base.stratum_label(s)] = to_json(v.stalk(s));
  return {{"points", points}, {"stalks", stalks}};
}

BaseObject baseobject_from_json(const json& j) {
  std::vector<std::string> points;
  for (const auto& p : j.value("points", json::array())) points.push_back(p.get<std::string>());
  BaseCategory base = points.empty() ? BaseCategory::vect() : BaseCategory::finran(points);
  std::vector<Complex> parts;
  std::vector<std::string> tags;
  for (const auto& [key, stalk] : j.at("stalks").items()) {
    Complex cx = complex_from_json(stalk);
    uint32_t mask = 0;
    if (!key.empty()) {
      std::vector<std::string> names;
      std::string cur;
      for (char ch : key) {
        if (ch == ',') {
          names.push_back(cur);
          cur.clear();
        } else
          cur += ch;
      }
      names.push_back(cur);
      mask = base.mask_of(names);
    } else if (base.kind == BaseCategory::Kind::FinRan) {
      throw InvalidInputError("finran stalk key must name a nonempty subset");
    }
    for (auto& [n, basis] : cx.space.components)
      for (auto& e : basis) e.stratum = mask;
    parts.push_back(std::move(cx));
    tags.emplace_back("");
  }
  BaseObject out{base, direct_sum(parts, tags)};
  try {
    out.validate();
  } catch (const std::exception& e) {
    throw InvalidInputError(std::string("invalid base object: ") + e.what());
  }
  return out;
}

json to_json(const Window& w) { return {{"lo", w.lo}, {"hi", w.hi}, {"guard", w.guard}}; }

Window window_from_json(const json& j) {
  return Window(j.at("lo").get<int>(), j.at("hi").get<int>(), j.value("guard", 0));
}

json to_json(const CutoffPolicy& p) {
  return {{"max_weight", p.max_weight},
          {"window", to_json(p.window)},
          {"justification", p.justification}};
}

CutoffPolicy cutoff_from_json(const json& j) {
  CutoffPolicy p;
  p.max_weight = j.value("max_weight", 0);
  if (j.contains("window")) p.window = window_from_json(j.at("window"));
  p.justification = j.value("justification", "");
  return p;
}

json to_json(const FactorizationWitness& w) {
  return {{"s1", w.s1},
          {"s2", w.s2},
          {"degree", w.degree},
          {"dims", json::array({w.dim_source, w.dim_target})}};
}

namespace {

json carrier_json(const BaseObject& v) {
  if (v.base.kind == BaseCategory::Kind::FinRan) return to_json(v);
  return to_json(v.big);
}

json base_json(const BaseCategory& b) {
  if (b.kind == BaseCategory::Kind::FinRan) return {{"kind", "finran"}, {"points", b.points}};
  return {{"kind", "vect"}};
}

BaseObject carrier_from_json(const json& j, const json& carrier) {
  json b = j.value("base", json{{"kind", "vect"}});
  if (b.at("kind") == "finran") {
    json bo = carrier;
    if (!bo.contains("stalks")) bo = {{"points", b.at("points")}, {"stalks", carrier}};
    return baseobject_from_json(bo);
  }
  return {BaseCategory::vect(), complex_from_json(carrier)};
}

std::map<std::string, int> label_index(const FlatComplex& flat) {
  std::map<std::string, int> out;
  for (int i = 0; i < flat.size(); ++i) {
    if (out.count(flat.basis[i].label))
      throw InvalidInputError("structure constants need globally unique labels; '" +
                              flat.basis[i].label + "' repeats");
    out[flat.basis[i].label] = i;
  }
  return out;
}

json contract_json(const FlatComplex& flat, const ContractMap& m) {
  json out = json::array();
  for (const auto& [key, val] : m) {
    auto [i, j] = key;
    for (const auto& [k, v] : val)
      out.push_back(json::array(
          {flat.basis[i].label, flat.basis[j].label, flat.basis[k].label, to_string(v)}));
  }
  return out;
}

json expand_json(const FlatComplex& flat, const ExpandMap& m) {
  json out = json::array();
  for (int src = 0; src < static_cast<int>(m.size()); ++src)
    for (const auto& [a, b, v] : m[src])
      out.push_back(json::array(
          {flat.basis[src].label, flat.basis[a].label, flat.basis[b].label, to_string(v)}));
  return out;
}

ContractMap contract_from_json(const FlatComplex& flat, const json& arr) {
  std::map<std::string, int> idx = label_index(flat);
  ContractMap m;
  for (const auto& t : arr) {
    if (!t.is_array() || t.size() != 4) throw InvalidInputError("structure triple malformed");
    auto find = [&](const std::string& l) {
      auto it = idx.find(l);
      if (it == idx.end()) throw InvalidInputError("unknown label '" + l + "'");
      return it->second;
    };
    int i = find(t.at(0)), j = find(t.at(1)), k = find(t.at(2));
    vec_add_term(m[{i, j}], k, parse_rational(t.at(3).get<std::string>()));
  }
  for (auto it = m.begin(); it != m.end();)
    it = it->second.empty() ? m.erase(it) : std::next(it);
  return m;
}

ExpandMap expand_from_json(const FlatComplex& flat, const json& arr) {
  std::map<std::string, int> idx = label_index(flat);
  ExpandMap m(flat.size());
  for (const auto& t : arr) {
    if (!t.is_array() || t.size() != 4) throw InvalidInputError("structure triple malformed");
    auto find = [&](const std::string& l) {
      auto it = idx.find(l);
      if (it == idx.end()) throw InvalidInputError("unknown label '" + l + "'");
      return it->second;
    };
    m[find(t.at(0))].emplace_back(find(t.at(1)), find(t.at(2)),
                                  parse_rational(t.at(3).get<std::string>()));
  }
  return m;
}

}  // namespace

json to_json(const StrictLieAlgebra& g) {
  return {{"type", "lie"},
          {"base", base_json(g.carrier.base)},
          {"carrier", carrier_json(g.carrier)},
          {"bracket", contract_json(g.flat, g.bracket)},
          {"cutoff", to_json(g.cutoff)}};
}

json to_json(const StrictCoLie& h) {
  return {{"type", "colie"},
          {"base", base_json(h.carrier.base)},
          {"carrier", carrier_json(h.carrier)},
          {"cobracket", expand_json(h.flat, h.cobracket)},
          {"cutoff", to_json(h.cutoff)}};
}

json to_json(const StrictComCoalgebra& a) {
  return {{"type", "comcoalg"},
          {"base", base_json(a.carrier.base)},
          {"carrier", carrier_json(a.carrier)},
          {"comultiplication", expand_json(a.flat, a.comul)},
          {"cutoff", to_json(a.cutoff)}};
}

json to_json(const StrictComAlgebra& b) {
  return {{"type", "comalg"},
          {"base", base_json(b.carrier.base)},
          {"carrier", carrier_json(b.carrier)},
          {"multiplication", contract_json(b.flat, b.mul)},
          {"cutoff", to_json(b.cutoff)}};
}

std::string structure_type(const json& j) { return j.value("type", ""); }

StrictLieAlgebra lie_from_json(const json& j) {
  StrictLieAlgebra g;
  g.carrier = carrier_from_json(j, j.at("carrier"));
  g.flat = flatten(g.carrier.big);
  g.bracket = contract_from_json(g.flat, j.value("bracket", json::array()));
  if (j.contains("cutoff")) g.cutoff = cutoff_from_json(j.at("cutoff"));
  return g;
}

StrictCoLie colie_from_json(const json& j) {
  StrictCoLie h;
  h.carrier = carrier_from_json(j, j.at("carrier"));
  h.flat = flatten(h.carrier.big);
  h.cobracket = expand_from_json(h.flat, j.value("cobracket", json::array()));
  if (j.contains("cutoff")) h.cutoff = cutoff_from_json(j.at("cutoff"));
  return h;
}

StrictComCoalgebra comcoalg_from_json(const json& j) {
  StrictComCoalgebra a;
  a.carrier = carrier_from_json(j, j.at("carrier"));
  a.flat = flatten(a.carrier.big);
  a.comul = expand_from_json(a.flat, j.value("comultiplication", json::array()));
  a.weight.assign(a.flat.size(), 1);
  if (j.contains("cutoff")) a.cutoff = cutoff_from_json(j.at("cutoff"));
  return a;
}

StrictComAlgebra comalg_from_json(const json& j) {
  StrictComAlgebra b;
  b.carrier = carrier_from_json(j, j.at("carrier"));
  b.flat = flatten(b.carrier.big);
  b.mul = contract_from_json(b.flat, j.value("multiplication", json::array()));
  b.weight.assign(b.flat.size(), 1);
  if (j.contains("cutoff")) b.cutoff = cutoff_from_json(j.at("cutoff"));
  return b;
}

}  // namespace koszulab
