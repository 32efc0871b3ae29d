#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "koszulab/sparse_matrix.hpp"

namespace koszulab {

struct WindowNotCertifiedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Degree window on which a computed object promises exact cohomology.
struct Window {
  int lo = 0, hi = 0;
  int guard = 0;

  Window() = default;
  Window(int l, int h, int g = 0) : lo(l), hi(h), guard(g) {
    if (lo > hi) throw std::invalid_argument("window lo > hi");
    if (guard < 0) throw std::invalid_argument("negative window guard");
  }
  bool contains(int n) const { return lo <= n && n <= hi; }
  bool contains(const Window& w) const { return lo <= w.lo && w.hi <= hi; }
};

// Basis element of one graded component. The stratum is a bitmask over the
// points of a finite Ran model; 0 denotes the unique stratum of Vect.
struct BasisElement {
  std::string label;
  uint32_t stratum = 0;

  bool operator==(const BasisElement& o) const {
    return label == o.label && stratum == o.stratum;
  }
};

struct GradedSpace {
  // degree -> ordered basis; only nonzero components stored
  std::map<int, std::vector<BasisElement>> components;

  int dim(int n) const {
    auto it = components.find(n);
    return it == components.end() ? 0 : static_cast<int>(it->second.size());
  }
  int total_dim() const {
    int t = 0;
    for (const auto& [n, b] : components) t += static_cast<int>(b.size());
    return t;
  }
  bool empty() const { return total_dim() == 0; }
  int min_degree() const { return components.empty() ? 0 : components.begin()->first; }
  int max_degree() const { return components.empty() ? 0 : components.rbegin()->first; }

  void push(int degree, BasisElement e) { components[degree].push_back(std::move(e)); }

  void validate() const {
    for (const auto& [n, basis] : components) {
      std::set<std::string> seen;
      for (const auto& e : basis)
        if (!seen.insert(e.label).second)
          throw std::invalid_argument("duplicate basis label '" + e.label + "' in degree " +
                                      std::to_string(n));
    }
  }
};

// Bounded cochain complex of finite-dimensional rational vector spaces.
// d[n] is the matrix of d^n : component(n) -> component(n+1), rows indexed by
// the target basis, columns by the source basis.
struct Complex {
  GradedSpace space;
  std::map<int, SparseMatrix> d;
  std::optional<Window> certified;  // nullopt: exact in all degrees

  int dim(int n) const { return space.dim(n); }

  const SparseMatrix& diff(int n) const {
    static const SparseMatrix empty_mat;
    auto it = d.find(n);
    if (it != d.end()) return it->second;
    return empty_mat;
  }

  SparseMatrix diff_or_zero(int n) const {
    auto it = d.find(n);
    if (it != d.end()) return it->second;
    return SparseMatrix(dim(n + 1), dim(n));
  }

  void set_diff(int n, SparseMatrix m) {
    if (m.rows != dim(n + 1) || m.cols != dim(n))
      throw std::invalid_argument("differential shape mismatch in degree " + std::to_string(n));
    if (m.is_zero()) d.erase(n); else d[n] = std::move(m);
  }

  bool certifies(const Window& w) const { return !certified || certified->contains(w); }
  void require_certified(const Window& w) const {
    if (!certifies(w))
      throw WindowNotCertifiedError("window [" + std::to_string(w.lo) + ", " +
                                    std::to_string(w.hi) + "] is not certified");
  }

  // d must land in the adjacent component and square to zero, exactly.
  void validate() const {
    space.validate();
    for (const auto& [n, m] : d) {
      if (m.rows != dim(n + 1) || m.cols != dim(n))
        throw std::logic_error("differential shape mismatch in degree " + std::to_string(n));
      auto next = d.find(n + 1);
      if (next != d.end() && !(next->second * m).is_zero())
        throw std::logic_error("d^2 != 0 at degree " + std::to_string(n));
    }
  }
};

struct ComplexMap {
  Complex source, target;
  std::map<int, SparseMatrix> comp;  // degree -> dim_target(n) x dim_source(n)

  const SparseMatrix& component(int n) const {
    static const SparseMatrix empty_mat;
    auto it = comp.find(n);
    if (it != comp.end()) return it->second;
    return empty_mat;
  }

  SparseMatrix component_or_zero(int n) const {
    auto it = comp.find(n);
    if (it != comp.end()) return it->second;
    return SparseMatrix(target.dim(n), source.dim(n));
  }

  void set_component(int n, SparseMatrix m) {
    if (m.rows != target.dim(n) || m.cols != source.dim(n))
      throw std::invalid_argument("map component shape mismatch in degree " + std::to_string(n));
    if (m.is_zero()) comp.erase(n); else comp[n] = std::move(m);
  }

  // d_target . f = f . d_source, degreewise, as exact matrix identities.
  void validate() const {
    std::set<int> degs;
    for (const auto& [n, _] : source.space.components) { degs.insert(n); }
    for (const auto& [n, _] : target.space.components) { degs.insert(n); }
    for (int n : degs) {
      SparseMatrix lhs = target.diff_or_zero(n) * component_or_zero(n);
      SparseMatrix rhs = component_or_zero(n + 1) * source.diff_or_zero(n);
      if (!(lhs == rhs))
        throw std::logic_error("map does not commute with differentials at degree " +
                               std::to_string(n));
    }
  }
};

struct Cohomology {
  int dim = 0;
  std::vector<SparseVec> representatives;  // cycles in component(n) coordinates
};

// dim H^n = dim ker d^n - rank d^{n-1}; representatives are cycles spanning a
// complement of the boundaries.
inline Cohomology cohomology(const Complex& c, int n) {
  Cohomology h;
  int dn = c.dim(n);
  if (dn == 0) return h;
  std::vector<SparseVec> cycles = kernel_basis(c.diff_or_zero(n));
  SparseMatrix k(dn, static_cast<int>(cycles.size()));
  for (int j = 0; j < static_cast<int>(cycles.size()); ++j)
    for (const auto& [i, v] : cycles[j]) k.add_to(i, j, v);
  SparseMatrix b = c.diff_or_zero(n - 1);
  std::vector<int> chosen = extend_column_basis(b, k);
  h.dim = static_cast<int>(chosen.size());
  for (int j : chosen) h.representatives.push_back(cycles[j]);
  return h;
}

inline std::map<int, int> cohomology_dims(const Complex& c) {
  std::map<int, int> out;
  if (c.space.components.empty()) return out;
  int lo = c.space.min_degree(), hi = c.space.max_degree();
  for (int n = lo; n <= hi; ++n) {
    int h = cohomology(c, n).dim;
    if (h != 0) out[n] = h;
  }
  return out;
}

// (c[k])^n = c^{n+k}; the differential picks up (-1)^k. A class in degree -1
// lands in degree -2 under [1].
inline Complex shift(const Complex& c, int k) {
  Complex out;
  out.certified = c.certified;
  if (out.certified) { out.certified->lo -= k; out.certified->hi -= k; }
  for (const auto& [n, basis] : c.space.components) out.space.components[n - k] = basis;
  Rational sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
  for (const auto& [n, m] : c.d) out.d[n - k] = m.scaled(sign);
  return out;
}

inline std::string pair_label(const std::string& a, const std::string& b) {
  return "(" + a + ")⊗(" + b + ")";
}

// Graded tensor product with the Koszul differential
// d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy. Strata are merged by union.
inline Complex tensor(const Complex& a, const Complex& b) {
  Complex out;
  // index bookkeeping: per output degree, list of (p, i, q, j)
  struct Slot { int p, i, q, j; };
  std::map<int, std::vector<Slot>> slots;
  for (const auto& [p, ba] : a.space.components)
    for (const auto& [q, bb] : b.space.components) {
      auto& s = slots[p + q];
      for (int i = 0; i < static_cast<int>(ba.size()); ++i)
        for (int j = 0; j < static_cast<int>(bb.size()); ++j) s.push_back({p, i, q, j});
    }
  std::map<int, std::map<std::tuple<int, int, int, int>, int>> index;
  for (const auto& [n, s] : slots) {
    auto& basis = out.space.components[n];
    for (const auto& sl : s) {
      const auto& ea = a.space.components.at(sl.p)[sl.i];
      const auto& eb = b.space.components.at(sl.q)[sl.j];
      index[n][{sl.p, sl.i, sl.q, sl.j}] = static_cast<int>(basis.size());
      basis.push_back({pair_label(ea.label, eb.label), ea.stratum | eb.stratum});
    }
  }
  for (const auto& [n, s] : slots) {
    if (slots.find(n + 1) == slots.end()) continue;
    SparseMatrix m(static_cast<int>(slots.at(n + 1).size()), static_cast<int>(s.size()));
    for (int col = 0; col < static_cast<int>(s.size()); ++col) {
      const auto& sl = s[col];
      const SparseMatrix& da = a.diff(sl.p);
      if (da.rows > 0)
        for (const auto& [r, v] : da.column(sl.i))
          m.add_to(index.at(n + 1).at({sl.p + 1, r, sl.q, sl.j}), col, v);
      const SparseMatrix& db = b.diff(sl.q);
      if (db.rows > 0) {
        Rational sign = (sl.p % 2 == 0) ? Rational(1) : Rational(-1);
        for (const auto& [r, v] : db.column(sl.j))
          m.add_to(index.at(n + 1).at({sl.p, sl.i, sl.q + 1, r}), col, sign * v);
      }
    }
    if (!m.is_zero()) out.d[n] = std::move(m);
  }
  if (a.certified || b.certified) {
    // conservative: intersect certificates degreewise after addition
    Window wa = a.certified.value_or(Window(-1 << 20, 1 << 20));
    Window wb = b.certified.value_or(Window(-1 << 20, 1 << 20));
    out.certified = Window(std::max(wa.lo, wb.lo), std::min(wa.hi, wb.hi),
                           std::max(wa.guard, wb.guard));
  }
  return out;
}

// (c^dual)^n = (c^{-n})^*, differential the transpose. Labels and strata kept.
inline Complex dual(const Complex& c) {
  Complex out;
  for (const auto& [n, basis] : c.space.components) out.space.components[-n] = basis;
  for (const auto& [n, m] : c.d) out.d[-n - 1] = m.transpose();
  if (c.certified)
    out.certified = Window(-c.certified->hi, -c.certified->lo, c.certified->guard);
  return out;
}

enum class TruncateMode { AtMost, AtLeast };

// Smart truncation: tau_{<=n} replaces component n by ker d^n and zeroes
// above; tau_{>=n} replaces component n by coker d^{n-1} and zeroes below.
inline Complex truncate(const Complex& c, TruncateMode mode, int n) {
  Complex out;
  out.certified = c.certified;
  if (mode == TruncateMode::AtMost) {
    for (const auto& [m, basis] : c.space.components)
      if (m < n) out.space.components[m] = basis;
    for (const auto& [m, mat] : c.d)
      if (m < n - 1) out.d[m] = mat;
    std::vector<SparseVec> ker = kernel_basis(c.diff_or_zero(n));
    if (!ker.empty()) {
      auto& basis = out.space.components[n];
      SparseMatrix k(c.dim(n), static_cast<int>(ker.size()));
      for (int j = 0; j < static_cast<int>(ker.size()); ++j) {
        for (const auto& [i, v] : ker[j]) k.add_to(i, j, v);
        basis.push_back({"τ≤" + std::to_string(n) + "_" + std::to_string(j), 0});
      }
      SparseMatrix into = c.diff_or_zero(n - 1);
      if (c.dim(n - 1) > 0 && !into.is_zero()) out.set_diff(n - 1, solve(k, into));
    }
  } else {
    for (const auto& [m, basis] : c.space.components)
      if (m > n) out.space.components[m] = basis;
    for (const auto& [m, mat] : c.d)
      if (m > n) out.d[m] = mat;
    int dn = c.dim(n);
    if (dn > 0) {
      SparseMatrix b = c.diff_or_zero(n - 1);
      std::vector<int> reps = extend_column_basis(b, SparseMatrix::identity(dn));
      if (!reps.empty()) {
        auto& basis = out.space.components[n];
        SparseMatrix r(dn, static_cast<int>(reps.size()));
        for (int j = 0; j < static_cast<int>(reps.size()); ++j) {
          r.add_to(reps[j], j, Rational(1));
          basis.push_back({"τ≥" + std::to_string(n) + "_" + std::to_string(j), 0});
        }
        SparseMatrix dn_mat = c.diff_or_zero(n) * r;
        if (c.dim(n + 1) > 0 && !dn_mat.is_zero()) out.set_diff(n, std::move(dn_mat));
      }
    }
  }
  return out;
}

// cone(f)^n = a^{n+1} (+) b^n with d(x, y) = (-d_a x, f x + d_b y).
inline Complex cone(const ComplexMap& f) {
  const Complex& a = f.source;
  const Complex& b = f.target;
  Complex out;
  std::map<int, int> a_dim, b_dim;
  std::set<int> degs;
  for (const auto& [n, basis] : a.space.components) degs.insert(n - 1);
  for (const auto& [n, basis] : b.space.components) degs.insert(n);
  for (int n : degs) {
    auto& basis = out.space.components[n];
    a_dim[n] = a.dim(n + 1);
    b_dim[n] = b.dim(n);
    if (a_dim[n] > 0)
      for (const auto& e : a.space.components.at(n + 1))
        basis.push_back({"A:" + e.label, e.stratum});
    if (b_dim[n] > 0)
      for (const auto& e : b.space.components.at(n))
        basis.push_back({"B:" + e.label, e.stratum});
    if (basis.empty()) out.space.components.erase(n);
  }
  for (int n : degs) {
    if (out.dim(n) == 0 || out.dim(n + 1) == 0) continue;
    SparseMatrix m(out.dim(n + 1), out.dim(n));
    int ta = a.dim(n + 2);  // a-part offset in target is 0
    const SparseMatrix da = a.diff_or_zero(n + 1);
    for (int c = 0; c < a.dim(n + 1); ++c) {
      for (const auto& [r, v] : da.column(c)) m.add_to(r, c, -v);
      for (const auto& [r, v] : f.component_or_zero(n + 1).column(c)) m.add_to(ta + r, c, v);
    }
    const SparseMatrix db = b.diff_or_zero(n);
    for (int c = 0; c < b.dim(n); ++c)
      for (const auto& [r, v] : db.column(c)) m.add_to(ta + r, a.dim(n + 1) + c, v);
    if (!m.is_zero()) out.d[n] = std::move(m);
  }
  if (a.certified || b.certified) {
    Window wa = a.certified.value_or(Window(-1 << 20, 1 << 20));
    Window wb = b.certified.value_or(Window(-1 << 20, 1 << 20));
    out.certified = Window(std::max(wa.lo, wb.lo), std::min(wa.hi, wb.hi),
                           std::max(wa.guard, wb.guard));
  }
  return out;
}

inline Complex fiber(const ComplexMap& f) { return shift(cone(f), -1); }

// Direct sum with label tags to keep basis labels unique.
inline Complex direct_sum(const std::vector<Complex>& parts,
                          const std::vector<std::string>& tags) {
  if (parts.size() != tags.size()) throw std::invalid_argument("direct_sum: tags mismatch");
  Complex out;
  std::map<int, std::vector<int>> offsets;  // degree -> per-part offset
  for (size_t p = 0; p < parts.size(); ++p)
    for (const auto& [n, basis] : parts[p].space.components) {
      auto& dst = out.space.components[n];
      auto& off = offsets[n];
      off.resize(parts.size() + 1, -1);
      off[p] = static_cast<int>(dst.size());
      for (const auto& e : basis) dst.push_back({tags[p] + e.label, e.stratum});
    }
  for (const auto& [n, basis] : out.space.components) {
    if (out.space.dim(n + 1) == 0) continue;
    SparseMatrix m(out.space.dim(n + 1), out.space.dim(n));
    for (size_t p = 0; p < parts.size(); ++p) {
      const SparseMatrix& dp = parts[p].diff(n);
      if (dp.rows == 0) continue;
      int co = offsets.at(n)[p], ro = offsets.at(n + 1)[p];
      for (int r = 0; r < dp.rows; ++r)
        for (const auto& [c, v] : dp.row[r]) m.add_to(ro + r, co + c, v);
    }
    if (!m.is_zero()) out.d[n] = std::move(m);
  }
  return out;
}

// True iff H^n(f) is bijective for every n in the window. Requires the
// certificates of both sides to contain the window.
inline bool is_quasi_iso(const ComplexMap& f, const Window& w, int* failing_degree = nullptr) {
  f.source.require_certified(w);
  f.target.require_certified(w);
  int lo = w.lo, hi = w.hi;
  if (!f.source.space.components.empty() || !f.target.space.components.empty()) {
    int mn = std::min(f.source.space.components.empty() ? w.hi : f.source.space.min_degree(),
                      f.target.space.components.empty() ? w.hi : f.target.space.min_degree());
    int mx = std::max(f.source.space.components.empty() ? w.lo : f.source.space.max_degree(),
                      f.target.space.components.empty() ? w.lo : f.target.space.max_degree());
    lo = std::max(lo, mn);
    hi = std::min(hi, mx);
  }
  for (int n = lo; n <= hi; ++n) {
    Cohomology hs = cohomology(f.source, n);
    Cohomology ht = cohomology(f.target, n);
    if (hs.dim != ht.dim) {
      if (failing_degree) *failing_degree = n;
      return false;
    }
    if (hs.dim == 0) continue;
    const SparseMatrix& fn = f.component_or_zero(n);
    SparseMatrix mapped(f.target.dim(n), hs.dim);
    for (int j = 0; j < hs.dim; ++j)
      for (const auto& [r, v] : fn.apply(hs.representatives[j])) mapped.add_to(r, j, v);
    SparseMatrix b = f.target.diff_or_zero(n - 1);
    int induced_rank = static_cast<int>(extend_column_basis(b, mapped).size());
    if (induced_rank != hs.dim) {
      if (failing_degree) *failing_degree = n;
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Flat view: one global index over all degrees, used by the word machinery.

struct FlatEntry {
  std::string label;
  int degree = 0;
  uint32_t stratum = 0;
};

struct FlatComplex {
  std::vector<FlatEntry> basis;
  SparseMatrix d;  // n x n, column j = d(e_j), raising degree by one

  int size() const { return static_cast<int>(basis.size()); }
};

inline FlatComplex flatten(const Complex& c) {
  FlatComplex f;
  std::map<std::pair<int, int>, int> pos;  // (degree, local index) -> global
  for (const auto& [n, basis] : c.space.components)
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
      pos[{n, i}] = f.size();
      f.basis.push_back({basis[i].label, n, basis[i].stratum});
    }
  f.d = SparseMatrix(f.size(), f.size());
  for (const auto& [n, m] : c.d)
    for (int r = 0; r < m.rows; ++r)
      for (const auto& [col, v] : m.row[r]) f.d.add_to(pos.at({n + 1, r}), pos.at({n, col}), v);
  return f;
}

inline Complex unflatten(const FlatComplex& f,
                         std::optional<Window> certified = std::nullopt) {
  Complex c;
  c.certified = certified;
  std::vector<int> local(f.size());
  for (int i = 0; i < f.size(); ++i) {
    auto& comp = c.space.components[f.basis[i].degree];
    local[i] = static_cast<int>(comp.size());
    comp.push_back({f.basis[i].label, f.basis[i].stratum});
  }
  std::map<int, SparseMatrix> mats;
  for (int j = 0; j < f.size(); ++j) {
    int n = f.basis[j].degree;
    for (const auto& [i, v] : f.d.column(j)) {
      if (f.basis[i].degree != n + 1)
        throw std::logic_error("flat differential does not raise degree by one");
      auto it = mats.find(n);
      if (it == mats.end())
        it = mats.emplace(n, SparseMatrix(c.dim(n + 1), c.dim(n))).first;
      it->second.add_to(local[i], local[j], v);
    }
  }
  for (auto& [n, m] : mats)
    if (!m.is_zero()) c.d[n] = std::move(m);
  return c;
}

}  // namespace koszulab
