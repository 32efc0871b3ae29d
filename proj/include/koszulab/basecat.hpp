#pragma once

#include <bit>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "koszulab/complex.hpp"

namespace koszulab {

struct BaseMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Descriptor of the symmetric-monoidal base over which a construction runs:
// plain complexes, the finite Ran model of a discrete point set, or a
// graded/filtered layer over another base.
struct BaseCategory {
  enum class Kind { Vect, FinRan, Graded, Filtered };
  Kind kind = Kind::Vect;
  std::vector<std::string> points;        // FinRan only, at most 31 points
  std::shared_ptr<BaseCategory> inner;    // Graded/Filtered only

  static BaseCategory vect() { return {}; }
  static BaseCategory finran(std::vector<std::string> pts) {
    if (pts.empty()) throw std::invalid_argument("finran base needs a nonempty point set");
    if (pts.size() > 31) throw std::invalid_argument("finran base limited to 31 points");
    BaseCategory b;
    b.kind = Kind::FinRan;
    b.points = std::move(pts);
    return b;
  }
  static BaseCategory graded(BaseCategory base) {
    BaseCategory b;
    b.kind = Kind::Graded;
    b.inner = std::make_shared<BaseCategory>(std::move(base));
    return b;
  }
  static BaseCategory filtered(BaseCategory base) {
    BaseCategory b;
    b.kind = Kind::Filtered;
    b.inner = std::make_shared<BaseCategory>(std::move(base));
    return b;
  }

  bool operator==(const BaseCategory& o) const {
    if (kind != o.kind || points != o.points) return false;
    if (!inner != !o.inner) return false;
    return !inner || *inner == *o.inner;
  }

  uint32_t full_mask() const { return points.empty() ? 0 : ((1u << points.size()) - 1); }

  uint32_t mask_of(const std::vector<std::string>& subset) const {
    uint32_t m = 0;
    for (const auto& p : subset) {
      auto it = std::find(points.begin(), points.end(), p);
      if (it == points.end()) throw std::invalid_argument("unknown point '" + p + "'");
      m |= 1u << (it - points.begin());
    }
    return m;
  }

  // Sorted comma-joined labels, e.g. "a,b".
  std::string stratum_label(uint32_t mask) const {
    std::string out;
    for (size_t i = 0; i < points.size(); ++i)
      if (mask & (1u << i)) {
        if (!out.empty()) out += ",";
        out += points[i];
      }
    return out;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Vect: return "vect";
      case Kind::FinRan: return "finran(" + stratum_label(full_mask()) + ")";
      case Kind::Graded: return "graded(" + inner->describe() + ")";
      case Kind::Filtered: return "filtered(" + inner->describe() + ")";
    }
    return "?";
  }
};

inline int stratum_size(uint32_t mask) { return std::popcount(mask); }

// A stratum-indexed family of complexes, stored as one complex whose basis
// elements carry stratum tags. Stalks are the stratum slices; the
// differential never mixes strata.
struct BaseObject {
  BaseCategory base;
  Complex big;

  void validate() const {
    big.validate();
    if (base.kind == BaseCategory::Kind::FinRan) {
      uint32_t full = base.full_mask();
      for (const auto& [n, basis] : big.space.components)
        for (const auto& e : basis)
          if (e.stratum == 0 || (e.stratum & ~full))
            throw std::logic_error("stratum of '" + e.label + "' not a nonempty subset");
    } else {
      for (const auto& [n, basis] : big.space.components)
        for (const auto& e : basis)
          if (e.stratum != 0) throw std::logic_error("vect object with nontrivial stratum");
    }
    // strata are preserved by the differential
    FlatComplex f = flatten(big);
    for (int j = 0; j < f.size(); ++j)
      for (const auto& [i, v] : f.d.column(j))
        if (f.basis[i].stratum != f.basis[j].stratum)
          throw std::logic_error("differential mixes strata");
  }

  std::vector<uint32_t> strata() const {
    std::set<uint32_t> s;
    for (const auto& [n, basis] : big.space.components)
      for (const auto& e : basis) s.insert(e.stratum);
    return {s.begin(), s.end()};
  }

  // The stalk over one stratum, as a plain complex (stratum tags kept).
  Complex stalk(uint32_t mask) const {
    Complex out;
    out.certified = big.certified;
    std::map<std::pair<int, int>, int> keep;  // (degree, old idx) -> new idx
    for (const auto& [n, basis] : big.space.components) {
      for (int i = 0; i < static_cast<int>(basis.size()); ++i)
        if (basis[i].stratum == mask) {
          keep[{n, i}] = static_cast<int>(out.space.components[n].size());
          out.space.components[n].push_back(basis[i]);
        }
      if (out.space.components.count(n) && out.space.components[n].empty())
        out.space.components.erase(n);
    }
    for (const auto& [n, m] : big.d) {
      if (out.dim(n) == 0 || out.dim(n + 1) == 0) continue;
      SparseMatrix sm(out.dim(n + 1), out.dim(n));
      for (int r = 0; r < m.rows; ++r) {
        auto ri = keep.find({n + 1, r});
        if (ri == keep.end()) continue;
        for (const auto& [c, v] : m.row[r]) {
          auto ci = keep.find({n, c});
          if (ci != keep.end()) sm.add_to(ri->second, ci->second, v);
        }
      }
      if (!sm.is_zero()) out.d[n] = std::move(sm);
    }
    return out;
  }

  bool is_zero() const { return big.space.empty(); }
};

inline void require_same_base(const BaseObject& a, const BaseObject& b) {
  if (!(a.base == b.base))
    throw BaseMismatchError("objects live over different bases: " + a.base.describe() +
                            " vs " + b.base.describe());
}

inline BaseObject zero_object(BaseCategory base) { return {std::move(base), Complex{}}; }

// f (x)* g. Over finran the stalk at S is the sum over union decompositions
// S1 u S2 = S with nonempty parts; over vect this is the ordinary tensor.
// Both come out of the same stratified tensor product.
inline BaseObject convolve(const BaseObject& f, const BaseObject& g) {
  require_same_base(f, g);
  return {f.base, tensor(f.big, g.big)};
}

// Stalkwise linear duality.
inline BaseObject verdier_dual(const BaseObject& f) {
  if (f.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("verdier_dual requires a finran base");
  return {f.base, dual(f.big)};
}

// Direct sum over subsets S (with |S| <= cutoff when given), returned as a
// plain complex; labels are prefixed by the stratum to stay unique.
inline Complex compactly_supported_cohomology(const BaseObject& f,
                                              std::optional<int> max_cardinality = std::nullopt) {
  if (f.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("C*_c requires a finran base");
  Complex out;
  out.certified = f.big.certified;
  std::map<std::pair<int, int>, int> keep;
  for (const auto& [n, basis] : f.big.space.components) {
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
      if (max_cardinality && stratum_size(basis[i].stratum) > *max_cardinality) continue;
      keep[{n, i}] = static_cast<int>(out.space.components[n].size());
      out.space.components[n].push_back(
          {"[" + f.base.stratum_label(basis[i].stratum) + "]" + basis[i].label, 0});
    }
    if (out.space.components.count(n) && out.space.components[n].empty())
      out.space.components.erase(n);
  }
  for (const auto& [n, m] : f.big.d) {
    if (out.dim(n) == 0 || out.dim(n + 1) == 0) continue;
    SparseMatrix sm(out.dim(n + 1), out.dim(n));
    for (int r = 0; r < m.rows; ++r) {
      auto ri = keep.find({n + 1, r});
      if (ri == keep.end()) continue;
      for (const auto& [c, v] : m.row[r]) {
        auto ci = keep.find({n, c});
        if (ci != keep.end()) sm.add_to(ri->second, ci->second, v);
      }
    }
    if (!sm.is_zero()) out.d[n] = std::move(sm);
  }
  return out;
}

enum class ConnectivityMode { cL, ccA, AtLeast };

struct ConnectivityWitness {
  uint32_t stratum = 0;
  int degree = 0;
};

// Cohomological stalk bounds of the finite model (d = 0): c_L means the stalk
// at S is concentrated in degrees <= -|S|, c_cA in degrees <= -|S| - 1.
inline std::optional<ConnectivityWitness> connectivity_check(const BaseObject& f,
                                                             ConnectivityMode mode,
                                                             int at_least_bound = 0) {
  if (f.base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("connectivity_check requires a finran base");
  for (uint32_t s : f.strata()) {
    Complex st = f.stalk(s);
    for (const auto& [n, h] : cohomology_dims(st)) {
      bool ok = true;
      switch (mode) {
        case ConnectivityMode::cL: ok = n <= -stratum_size(s); break;
        case ConnectivityMode::ccA: ok = n <= -stratum_size(s) - 1; break;
        case ConnectivityMode::AtLeast: ok = n >= at_least_bound; break;
      }
      if (!ok) return ConnectivityWitness{s, n};
    }
  }
  return std::nullopt;
}

// Family over the diagonal: stalk at {x} is family(x), larger subsets zero.
// Labels are suffixed with "@x" to stay unique across points.
inline BaseObject diagonal_embed(const BaseCategory& base,
                                 const std::vector<std::pair<std::string, Complex>>& family) {
  if (base.kind != BaseCategory::Kind::FinRan)
    throw BaseMismatchError("diagonal_embed requires a finran base");
  std::vector<Complex> parts;
  std::vector<std::string> tags;
  for (const auto& [pt, cx] : family) {
    uint32_t mask = base.mask_of({pt});
    Complex tagged = cx;
    for (auto& [n, basis] : tagged.space.components)
      for (auto& e : basis) {
        e.label += "@" + pt;
        e.stratum = mask;
      }
    parts.push_back(std::move(tagged));
    tags.emplace_back("");
  }
  BaseObject out{base, direct_sum(parts, tags)};
  return out;
}

}  // namespace koszulab
