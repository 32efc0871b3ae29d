#include "koszulab/ranmodel.hpp"

namespace koszulab {

namespace {

// index of every flat basis element of `from` inside `to`, matching on
// (degree, label, stratum)
std::vector<int> reindex(const FlatComplex& from, const FlatComplex& to) {
  std::map<std::tuple<int, std::string, uint32_t>, int> lookup;
  for (int i = 0; i < to.size(); ++i)
    lookup[{to.basis[i].degree, to.basis[i].label, to.basis[i].stratum}] = i;
  std::vector<int> out(from.size());
  for (int i = 0; i < from.size(); ++i) {
    auto it = lookup.find({from.basis[i].degree, from.basis[i].label, from.basis[i].stratum});
    if (it == lookup.end()) throw std::logic_error("ranmodel: basis reindex failed");
    out[i] = it->second;
  }
  return out;
}

}  // namespace

StrictLieAlgebra assemble(const DiagonalLieFamily& fam) {
  std::vector<std::pair<std::string, Complex>> carriers;
  for (const auto& [pt, g] : fam.entries) carriers.emplace_back(pt, g.carrier.big);
  StrictLieAlgebra out;
  out.carrier = diagonal_embed(fam.base, carriers);
  out.flat = flatten(out.carrier.big);
  out.cutoff = fam.entries.empty() ? CutoffPolicy{} : fam.entries.front().second.cutoff;
  for (const auto& [pt, g] : fam.entries) {
    uint32_t mask = fam.base.mask_of({pt});
    FlatComplex tagged = g.flat;
    for (auto& e : tagged.basis) {
      e.label += "@" + pt;
      e.stratum = mask;
    }
    std::vector<int> rm = reindex(tagged, out.flat);
    for (const auto& [key, val] : g.bracket) {
      auto [i, j] = key;
      for (const auto& [k, v] : val) vec_add_term(out.bracket[{rm[i], rm[j]}], rm[k], v);
    }
  }
  return out;
}

StrictCoLie assemble(const DiagonalCoLieFamily& fam) {
  std::vector<std::pair<std::string, Complex>> carriers;
  for (const auto& [pt, h] : fam.entries) carriers.emplace_back(pt, h.carrier.big);
  StrictCoLie out;
  out.carrier = diagonal_embed(fam.base, carriers);
  out.flat = flatten(out.carrier.big);
  out.cobracket.assign(out.flat.size(), {});
  out.cutoff = fam.entries.empty() ? CutoffPolicy{} : fam.entries.front().second.cutoff;
  for (const auto& [pt, h] : fam.entries) {
    uint32_t mask = fam.base.mask_of({pt});
    FlatComplex tagged = h.flat;
    for (auto& e : tagged.basis) {
      e.label += "@" + pt;
      e.stratum = mask;
    }
    std::vector<int> rm = reindex(tagged, out.flat);
    for (int src = 0; src < static_cast<int>(h.cobracket.size()); ++src)
      for (const auto& [a, b, v] : h.cobracket[src])
        out.cobracket[rm[src]].emplace_back(rm[a], rm[b], v);
  }
  return out;
}

namespace {

// The stalk of a carrier as a flat complex, keeping flat indices.
struct StalkView {
  FlatComplex cx;
  std::vector<int> flat_index;  // local -> carrier flat index
};

StalkView stalk_view(const FlatComplex& flat, uint32_t mask) {
  StalkView v;
  std::vector<int> local(flat.size(), -1);
  for (int i = 0; i < flat.size(); ++i)
    if (flat.basis[i].stratum == mask) {
      local[i] = v.cx.size();
      v.cx.basis.push_back(flat.basis[i]);
      v.flat_index.push_back(i);
    }
  v.cx.d = SparseMatrix(v.cx.size(), v.cx.size());
  for (int j = 0; j < flat.size(); ++j) {
    if (local[j] < 0) continue;
    for (const auto& [i, val] : flat.d.column(j))
      if (local[i] >= 0) v.cx.d.add_to(local[i], local[j], val);
  }
  return v;
}

// Tensor product of two stalk views as a flat complex, with the pair list.
struct PairView {
  FlatComplex cx;
  std::vector<std::pair<int, int>> pairs;  // local -> (carrier flat, carrier flat)
  std::map<std::pair<int, int>, int> index;
};

PairView pair_view(const FlatComplex& flat, const StalkView& a, const StalkView& b) {
  PairView v;
  for (int i = 0; i < a.cx.size(); ++i)
    for (int j = 0; j < b.cx.size(); ++j) {
      int gi = a.flat_index[i], gj = b.flat_index[j];
      v.index[{gi, gj}] = v.cx.size();
      v.pairs.emplace_back(gi, gj);
      v.cx.basis.push_back({pair_label(flat.basis[gi].label, flat.basis[gj].label),
                            flat.basis[gi].degree + flat.basis[gj].degree,
                            flat.basis[gi].stratum | flat.basis[gj].stratum});
    }
  v.cx.d = SparseMatrix(v.cx.size(), v.cx.size());
  for (int p = 0; p < v.cx.size(); ++p) {
    auto [gi, gj] = v.pairs[p];
    for (const auto& [x, y, val] : tensor_square_d(flat, gi, gj)) {
      auto it = v.index.find({x, y});
      if (it == v.index.end()) throw std::logic_error("pair_view: differential leaves block");
      v.cx.d.add_to(it->second, p, val);
    }
  }
  return v;
}

ComplexMap flat_map_to_complexmap(const FlatComplex& src, const FlatComplex& tgt,
                                  const std::map<std::pair<int, int>, Rational>& entries,
                                  std::optional<Window> cert) {
  ComplexMap f;
  f.source = unflatten(src, cert);
  f.target = unflatten(tgt, cert);
  std::vector<int> src_local(src.size()), tgt_local(tgt.size());
  std::map<int, int> sc, tc;
  for (int i = 0; i < src.size(); ++i) src_local[i] = sc[src.basis[i].degree]++;
  for (int i = 0; i < tgt.size(); ++i) tgt_local[i] = tc[tgt.basis[i].degree]++;
  std::map<int, SparseMatrix> comps;
  for (const auto& [key, v] : entries) {
    auto [t, s] = key;  // (target flat, source flat)
    int deg = src.basis[s].degree;
    if (tgt.basis[t].degree != deg) throw std::logic_error("comparison map not degree zero");
    auto it = comps.find(deg);
    if (it == comps.end())
      it = comps.emplace(deg, SparseMatrix(f.target.dim(deg), f.source.dim(deg))).first;
    it->second.add_to(tgt_local[t], src_local[s], v);
  }
  for (auto& [deg, m] : comps)
    if (!m.is_zero()) f.comp[deg] = std::move(m);
  return f;
}

std::vector<std::string> mask_names(const BaseCategory& base, uint32_t mask) {
  std::vector<std::string> out;
  for (size_t i = 0; i < base.points.size(); ++i)
    if (mask & (1u << i)) out.push_back(base.points[i]);
  return out;
}

std::optional<FactorizationWitness> check_pair_algebra(const StrictComAlgebra& b, uint32_t s1,
                                                       uint32_t s2, const Window& w) {
  StalkView a = stalk_view(b.flat, s1);
  StalkView c = stalk_view(b.flat, s2);
  StalkView target = stalk_view(b.flat, s1 | s2);
  PairView pv = pair_view(b.flat, a, c);
  std::vector<int> tgt_local(b.flat.size(), -1);
  for (int i = 0; i < target.cx.size(); ++i) tgt_local[target.flat_index[i]] = i;
  std::map<std::pair<int, int>, Rational> entries;
  for (int p = 0; p < pv.cx.size(); ++p) {
    auto [gi, gj] = pv.pairs[p];
    for (const auto& [k, v] : b.product_of(gi, gj)) {
      if (tgt_local[k] < 0) throw std::logic_error("product leaves the union stalk");
      entries[{tgt_local[k], p}] += v;
    }
  }
  ComplexMap f = flat_map_to_complexmap(pv.cx, target.cx, entries, b.carrier.big.certified);
  int fail = 0;
  if (is_quasi_iso(f, w, &fail)) return std::nullopt;
  FactorizationWitness wit;
  wit.s1 = mask_names(b.carrier.base, s1);
  wit.s2 = mask_names(b.carrier.base, s2);
  wit.degree = fail;
  wit.dim_source = cohomology(f.source, fail).dim;
  wit.dim_target = cohomology(f.target, fail).dim;
  return wit;
}

std::optional<FactorizationWitness> check_pair_coalgebra(const StrictComCoalgebra& a, uint32_t s1,
                                                         uint32_t s2, const Window& w) {
  StalkView x = stalk_view(a.flat, s1);
  StalkView y = stalk_view(a.flat, s2);
  StalkView source = stalk_view(a.flat, s1 | s2);
  PairView pv = pair_view(a.flat, x, y);
  std::map<std::pair<int, int>, Rational> entries;
  for (int i = 0; i < source.cx.size(); ++i) {
    int g = source.flat_index[i];
    for (const auto& [p, q, v] : a.comul[g]) {
      auto it = pv.index.find({p, q});
      if (it != pv.index.end()) entries[{it->second, i}] += v;
    }
  }
  ComplexMap f = flat_map_to_complexmap(source.cx, pv.cx, entries, a.carrier.big.certified);
  int fail = 0;
  if (is_quasi_iso(f, w, &fail)) return std::nullopt;
  FactorizationWitness wit;
  wit.s1 = mask_names(a.carrier.base, s1);
  wit.s2 = mask_names(a.carrier.base, s2);
  wit.degree = fail;
  wit.dim_source = cohomology(f.source, fail).dim;
  wit.dim_target = cohomology(f.target, fail).dim;
  return wit;
}

}  // namespace

std::optional<FactorizationWitness> is_factorization_algebra(const StrictComAlgebra& b,
                                                             const Window& w) {
  if (b.carrier.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("factorization check requires a finran base");
  uint32_t full = b.carrier.base.full_mask();
  for (uint32_t s1 = 1; s1 <= full; ++s1) {
    if ((s1 & ~full)) continue;
    for (uint32_t s2 = s1 + 1; s2 <= full; ++s2) {
      if ((s2 & ~full) || (s1 & s2)) continue;
      if (auto wit = check_pair_algebra(b, s1, s2, w)) return wit;
    }
  }
  return std::nullopt;
}

std::optional<FactorizationWitness> is_factorization_coalgebra(const StrictComCoalgebra& a,
                                                               const Window& w) {
  if (a.carrier.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("factorization check requires a finran base");
  uint32_t full = a.carrier.base.full_mask();
  for (uint32_t s1 = 1; s1 <= full; ++s1) {
    if ((s1 & ~full)) continue;
    for (uint32_t s2 = s1 + 1; s2 <= full; ++s2) {
      if ((s2 & ~full) || (s1 & s2)) continue;
      if (auto wit = check_pair_coalgebra(a, s1, s2, w)) return wit;
    }
  }
  return std::nullopt;
}

std::optional<FactorizationWitness> factorization_triple_check(const StrictComAlgebra& b,
                                                               const Window& w) {
  if (b.carrier.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("factorization check requires a finran base");
  uint32_t full = b.carrier.base.full_mask();
  for (uint32_t s1 = 1; s1 <= full; ++s1)
    for (uint32_t s2 = 1; s2 <= full; ++s2)
      for (uint32_t s3 = 1; s3 <= full; ++s3) {
        if (s1 >= s2 || s2 >= s3) continue;
        if ((s1 | s2 | s3) & ~full) continue;
        if ((s1 & s2) || (s1 & s3) || (s2 & s3)) continue;
        // threefold component via mu . (mu (x) id), checked against the stalk
        StalkView va = stalk_view(b.flat, s1);
        StalkView vb = stalk_view(b.flat, s2);
        StalkView vc = stalk_view(b.flat, s3);
        StalkView target = stalk_view(b.flat, s1 | s2 | s3);
        // triple tensor as (pair (x) single)
        PairView ab = pair_view(b.flat, va, vb);
        // build flat triple complex
        FlatComplex triple;
        std::map<std::tuple<int, int, int>, int> tindex;
        for (int p = 0; p < ab.cx.size(); ++p)
          for (int k = 0; k < vc.cx.size(); ++k) {
            auto [gi, gj] = ab.pairs[p];
            int gk = vc.flat_index[k];
            tindex[{gi, gj, gk}] = triple.size();
            triple.basis.push_back(
                {pair_label(ab.cx.basis[p].label, vc.cx.basis[k].label),
                 ab.cx.basis[p].degree + vc.cx.basis[k].degree,
                 ab.cx.basis[p].stratum | vc.cx.basis[k].stratum});
          }
        triple.d = SparseMatrix(triple.size(), triple.size());
        for (const auto& [key, idx] : tindex) {
          auto [gi, gj, gk] = key;
          // d(x (x) y (x) z) with Koszul signs
          for (const auto& [t, v] : b.flat.d.column(gi)) triple.d.add_to(tindex.at({t, gj, gk}), idx, v);
          Rational si = (b.flat.basis[gi].degree & 1) ? Rational(-1) : Rational(1);
          for (const auto& [t, v] : b.flat.d.column(gj)) triple.d.add_to(tindex.at({gi, t, gk}), idx, si * v);
          Rational sij = ((b.flat.basis[gi].degree + b.flat.basis[gj].degree) & 1) ? Rational(-1) : Rational(1);
          for (const auto& [t, v] : b.flat.d.column(gk)) triple.d.add_to(tindex.at({gi, gj, t}), idx, sij * v);
        }
        std::vector<int> tgt_local(b.flat.size(), -1);
        for (int i = 0; i < target.cx.size(); ++i) tgt_local[target.flat_index[i]] = i;
        std::map<std::pair<int, int>, Rational> entries;
        for (const auto& [key, idx] : tindex) {
          auto [gi, gj, gk] = key;
          for (const auto& [m, v] : b.product_of(gi, gj))
            for (const auto& [t, v2] : b.product_of(m, gk)) {
              if (tgt_local[t] < 0) throw std::logic_error("triple product leaves the union stalk");
              entries[{tgt_local[t], idx}] += v * v2;
            }
        }
        ComplexMap f = flat_map_to_complexmap(triple, target.cx, entries, b.carrier.big.certified);
        int fail = 0;
        if (!is_quasi_iso(f, w, &fail)) {
          FactorizationWitness wit;
          wit.s1 = mask_names(b.carrier.base, s1);
          wit.s2 = mask_names(b.carrier.base, s2 | s3);
          wit.degree = fail;
          wit.dim_source = cohomology(f.source, fail).dim;
          wit.dim_target = cohomology(f.target, fail).dim;
          return wit;
        }
      }
  return std::nullopt;
}

BaseObject restrict_to_open(const BaseObject& f, const std::vector<std::string>& subset) {
  if (f.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("restrict_to_open requires a finran base");
  if (subset.empty()) throw EmptyOpenSetError("open subset must be nonempty");
  uint32_t keep = f.base.mask_of(subset);
  BaseCategory smaller = BaseCategory::finran(subset);
  // old point index -> new point index
  std::vector<int> newbit(f.base.points.size(), -1);
  for (size_t i = 0; i < f.base.points.size(); ++i) {
    auto it = std::find(subset.begin(), subset.end(), f.base.points[i]);
    if (it != subset.end()) newbit[i] = static_cast<int>(it - subset.begin());
  }
  FlatComplex flat = flatten(f.big);
  FlatComplex out;
  std::vector<int> local(flat.size(), -1);
  for (int i = 0; i < flat.size(); ++i) {
    uint32_t s = flat.basis[i].stratum;
    if (s & ~keep) continue;
    uint32_t ns = 0;
    for (size_t bit = 0; bit < f.base.points.size(); ++bit)
      if (s & (1u << bit)) ns |= 1u << newbit[bit];
    local[i] = out.size();
    out.basis.push_back({flat.basis[i].label, flat.basis[i].degree, ns});
  }
  out.d = SparseMatrix(out.size(), out.size());
  for (int j = 0; j < flat.size(); ++j) {
    if (local[j] < 0) continue;
    for (const auto& [i, v] : flat.d.column(j))
      if (local[i] >= 0) out.d.add_to(local[i], local[j], v);
  }
  return {smaller, unflatten(out, f.big.certified)};
}

BaseObject extend_by_zero(const BaseObject& f, const BaseCategory& larger) {
  if (f.base.kind != BaseCategory::Kind::FinRan || larger.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("extend_by_zero requires finran bases");
  std::vector<int> newbit(f.base.points.size(), -1);
  for (size_t i = 0; i < f.base.points.size(); ++i) {
    auto it = std::find(larger.points.begin(), larger.points.end(), f.base.points[i]);
    if (it == larger.points.end())
      throw BaseMismatchError("extend_by_zero: point '" + f.base.points[i] +
                              "' missing from the larger base");
    newbit[i] = static_cast<int>(it - larger.points.begin());
  }
  FlatComplex flat = flatten(f.big);
  for (auto& e : flat.basis) {
    uint32_t ns = 0;
    for (size_t bit = 0; bit < f.base.points.size(); ++bit)
      if (e.stratum & (1u << bit)) ns |= 1u << newbit[bit];
    e.stratum = ns;
  }
  return {larger, unflatten(flat, f.big.certified)};
}

StrictCoLie extend_by_zero(const StrictCoLie& h, const BaseCategory& larger) {
  StrictCoLie out;
  out.carrier = extend_by_zero(h.carrier, larger);
  out.flat = flatten(out.carrier.big);
  out.cobracket = h.cobracket;  // indices unchanged: only stratum tags move
  out.cutoff = h.cutoff;
  return out;
}

}  // namespace koszulab
