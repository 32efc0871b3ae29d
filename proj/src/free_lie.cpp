#include "koszulab/free_lie.hpp"

#include <functional>

namespace koszulab {

namespace {

using NcWord = std::vector<int>;
using NcPoly = std::map<NcWord, Rational>;  // lexicographic word order

void poly_add(NcPoly& p, const NcWord& w, const Rational& v) {
  if (v == 0) return;
  auto [it, fresh] = p.emplace(w, v);
  if (!fresh) {
    it->second += v;
    if (it->second == 0) p.erase(it);
  }
}

NcPoly concat(const NcPoly& a, const NcPoly& b) {
  NcPoly out;
  for (const auto& [wa, va] : a)
    for (const auto& [wb, vb] : b) {
      NcWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      poly_add(out, w, va * vb);
    }
  return out;
}

// Graded commutator a b - (-1)^{|a||b|} b a in the tensor algebra.
NcPoly comm(const NcPoly& a, int deg_a, const NcPoly& b, int deg_b) {
  NcPoly out = concat(a, b);
  Rational s = ((deg_a & 1) && (deg_b & 1)) ? Rational(1) : Rational(-1);
  for (auto& [w, v] : concat(b, a)) poly_add(out, w, s * v);
  return out;
}

bool is_lyndon(const NcWord& w) {
  for (size_t s = 1; s < w.size(); ++s)
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + s, w.end())) return false;
  return true;
}

// Standard factorization w = u v with v the lexicographically least proper
// suffix; then b(w) = [b(u), b(v)].
size_t standard_split(const NcWord& w) {
  size_t best = 1;
  for (size_t s = 2; s < w.size(); ++s)
    if (std::lexicographical_compare(w.begin() + s, w.end(), w.begin() + best, w.end())) best = s;
  return best;
}

struct LieBasisElt {
  NcWord word;  // the Lyndon word; for squares, the squared Lyndon word
  bool square = false;
  int degree = 0;
  int weight = 0;
  uint32_t stratum = 0;
};

struct FreeLieBuilder {
  FlatComplex letters;  // alphabet, with its differential
  int max_weight = 1;
  bool bounded = false;
  int degree_floor = 0;

  std::vector<LieBasisElt> basis;
  std::map<std::pair<NcWord, bool>, int> basis_index;
  std::map<NcWord, NcPoly> expansion_cache;

  // extra differential on generators (index into basis), e.g. the
  // comultiplication twist of the Prim[-1] model
  std::vector<SparseVec> generator_twist;

  std::map<std::pair<int, int>, SparseVec> bracket_cache;
  std::vector<SparseVec> d_cache;
  std::vector<bool> d_done;

  int letter_degree(const NcWord& w) const {
    int d = 0;
    for (int l : w) d += letters.basis[l].degree;
    return d;
  }
  uint32_t letter_stratum(const NcWord& w) const {
    uint32_t s = 0;
    for (int l : w) s |= letters.basis[l].stratum;
    return s;
  }

  void enumerate_basis() {
    int k = letters.size();
    if (k == 0) return;
    std::vector<int> a(max_weight + 1, 0);
    std::vector<NcWord> lyndon;
    // pre-necklace DFS (FKM); every prefix with period == length is Lyndon
    std::function<void(int, int, int)> rec = [&](int t, int p, int deg) {
      if (t > max_weight) return;
      int start = (t == 1) ? 0 : a[t - p];
      for (int c = start; c < k; ++c) {
        a[t] = c;
        int nd = deg + letters.basis[c].degree;
        if (bounded && nd < degree_floor) continue;  // letters are <= -1: only drops further
        int np = (t > 1 && c == a[t - p]) ? p : t;
        if (np == t) lyndon.emplace_back(a.begin() + 1, a.begin() + t + 1);
        rec(t + 1, np, nd);
      }
    };
    rec(1, 1, 0);

    for (const auto& w : lyndon) {
      LieBasisElt e{w, false, letter_degree(w), static_cast<int>(w.size()), letter_stratum(w)};
      basis.push_back(std::move(e));
    }
    for (const auto& w : lyndon) {
      int d = letter_degree(w);
      if (!(d & 1)) continue;
      if (2 * static_cast<int>(w.size()) > max_weight) continue;
      if (bounded && 2 * d < degree_floor) continue;
      NcWord ww = w;
      ww.insert(ww.end(), w.begin(), w.end());
      basis.push_back({ww, true, 2 * d, 2 * static_cast<int>(w.size()), letter_stratum(w)});
    }
    std::sort(basis.begin(), basis.end(), [](const LieBasisElt& x, const LieBasisElt& y) {
      return std::tie(x.degree, x.weight, x.square, x.word) <
             std::tie(y.degree, y.weight, y.square, y.word);
    });
    for (int i = 0; i < static_cast<int>(basis.size()); ++i)
      basis_index[{basis[i].word, basis[i].square}] = i;
    generator_twist.assign(basis.size(), {});
    d_cache.assign(basis.size(), {});
    d_done.assign(basis.size(), false);
  }

  const NcPoly& expand_lyndon(const NcWord& w) {
    auto it = expansion_cache.find(w);
    if (it != expansion_cache.end()) return it->second;
    NcPoly p;
    if (w.size() == 1) {
      poly_add(p, w, Rational(1));
    } else {
      size_t s = standard_split(w);
      NcWord u(w.begin(), w.begin() + s), v(w.begin() + s, w.end());
      p = comm(expand_lyndon(u), letter_degree(u), expand_lyndon(v), letter_degree(v));
    }
    return expansion_cache.emplace(w, std::move(p)).first->second;
  }

  NcPoly expand(int i) {
    const LieBasisElt& e = basis[i];
    if (!e.square) return expand_lyndon(e.word);
    NcWord half(e.word.begin(), e.word.begin() + e.word.size() / 2);
    const NcPoly& p = expand_lyndon(half);
    return comm(p, e.degree / 2, p, e.degree / 2);
  }

  // Express a Lie element given as an nc-polynomial in the basis. Terms in
  // weights above max_weight (or pruned degrees) are truncated away.
  SparseVec rewrite(NcPoly p) {
    SparseVec out;
    // drop truncated weight/degree components wholesale
    for (auto it = p.begin(); it != p.end();) {
      bool drop = static_cast<int>(it->first.size()) > max_weight ||
                  (bounded && letter_degree(it->first) < degree_floor);
      it = drop ? p.erase(it) : std::next(it);
    }
    while (!p.empty()) {
      auto it = p.begin();  // lexicographically least word
      NcWord w = it->first;
      Rational c = it->second;
      int idx = -1;
      Rational lead(1);
      if (is_lyndon(w)) {
        auto bi = basis_index.find({w, false});
        if (bi != basis_index.end()) idx = bi->second;
      } else if (w.size() % 2 == 0) {
        NcWord half(w.begin(), w.begin() + w.size() / 2);
        if (std::equal(w.begin() + w.size() / 2, w.end(), half.begin()) && is_lyndon(half) &&
            (letter_degree(half) & 1)) {
          auto bi = basis_index.find({w, true});
          if (bi != basis_index.end()) { idx = bi->second; lead = 2; }
        }
      }
      if (idx < 0)
        throw std::logic_error("free Lie rewriting: element outside the Lyndon span");
      Rational coeff = c / lead;
      vec_add_term(out, idx, coeff);
      for (const auto& [ww, vv] : expand(idx)) poly_add(p, ww, -coeff * vv);
    }
    return out;
  }

  bool pair_kept(int i, int j) const {
    const LieBasisElt& a = basis[i];
    const LieBasisElt& b = basis[j];
    return a.weight + b.weight <= max_weight &&
           (!bounded || a.degree + b.degree >= degree_floor);
  }

  const SparseVec& bracket_of(int i, int j) {
    static const SparseVec zero;
    if (!pair_kept(i, j)) return zero;  // truncated away, nothing to cache
    auto it = bracket_cache.find({i, j});
    if (it != bracket_cache.end()) return it->second;
    SparseVec out = rewrite(comm(expand(i), basis[i].degree, expand(j), basis[j].degree));
    return bracket_cache.emplace(std::make_pair(i, j), std::move(out)).first->second;
  }

  SparseVec bracket_lincomb(const SparseVec& x, const SparseVec& y) {
    SparseVec out;
    for (const auto& [i, vi] : x)
      for (const auto& [j, vj] : y) out = axpy(out, vi * vj, bracket_of(i, j));
    return out;
  }

  const SparseVec& differential(int i) {
    if (d_done[i]) return d_cache[i];
    d_done[i] = true;
    const LieBasisElt& e = basis[i];
    SparseVec out;
    if (e.weight == 1) {
      for (const auto& [t, v] : letters.d.column(e.word[0])) {
        auto bi = basis_index.find({NcWord{t}, false});
        if (bi != basis_index.end()) vec_add_term(out, bi->second, v);
      }
      out = axpy(out, Rational(1), generator_twist[i]);
    } else {
      NcWord u, v;
      bool usquare = false, vsquare = false;
      int udeg;
      if (e.square) {
        u.assign(e.word.begin(), e.word.begin() + e.word.size() / 2);
        v = u;
        udeg = e.degree / 2;
      } else {
        size_t s = standard_split(e.word);
        u.assign(e.word.begin(), e.word.begin() + s);
        v.assign(e.word.begin() + s, e.word.end());
        udeg = letter_degree(u);
      }
      int iu = basis_index.at({u, usquare});
      int iv = basis_index.at({v, vsquare});
      SparseVec du = differential(iu), dv = differential(iv);
      SparseVec eu, ev;
      vec_add_term(eu, iu, Rational(1));
      vec_add_term(ev, iv, Rational(1));
      // d[u,v] = [du, v] + (-1)^{|u|}[u, dv]
      out = bracket_lincomb(du, ev);
      Rational s = (udeg & 1) ? Rational(-1) : Rational(1);
      out = axpy(out, s, bracket_lincomb(eu, dv));
    }
    d_cache[i] = std::move(out);
    return d_cache[i];
  }

  FlatComplex build_flat(const std::string& label_prefix) const {
    FlatComplex f;
    f.basis.resize(basis.size());
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
      std::string lbl = label_prefix + bracket_label(i);
      f.basis[i] = {lbl, basis[i].degree, basis[i].stratum};
    }
    return f;
  }

  std::string bracket_label(int i) const {
    std::function<std::string(const NcWord&)> lab = [&](const NcWord& w) -> std::string {
      if (w.size() == 1) return letters.basis[w[0]].label;
      size_t s = standard_split(w);
      NcWord u(w.begin(), w.begin() + s), v(w.begin() + s, w.end());
      return "[" + lab(u) + "," + lab(v) + "]";
    };
    const LieBasisElt& e = basis[i];
    if (!e.square) return lab(e.word);
    NcWord half(e.word.begin(), e.word.begin() + e.word.size() / 2);
    return "[" + lab(half) + "," + lab(half) + "]";
  }
};

StrictLieAlgebra finish(FreeLieBuilder& fb, const BaseCategory& base, CutoffPolicy cutoff) {
  FlatComplex flat = fb.build_flat("");
  flat.d = SparseMatrix(flat.size(), flat.size());
  for (int i = 0; i < flat.size(); ++i)
    for (const auto& [k, v] : fb.differential(i)) flat.d.add_to(k, i, v);
  SparseMatrix sq = flat.d * flat.d;
  if (!sq.is_zero()) {
    for (int r = 0; r < sq.rows; ++r)
      for (const auto& [col, v] : sq.row[r])
        throw std::logic_error("free Lie model: d^2 != 0 at " + flat.basis[col].label +
                               " -> " + flat.basis[r].label + " (" + to_string(v) + ")");
  }

  StrictLieAlgebra g;
  g.carrier = {base, unflatten(flat, cutoff.window)};
  g.flat = std::move(flat);
  g.cutoff = std::move(cutoff);
  g.weight.resize(fb.basis.size());
  for (int i = 0; i < static_cast<int>(fb.basis.size()); ++i) g.weight[i] = fb.basis[i].weight;
  for (int i = 0; i < static_cast<int>(fb.basis.size()); ++i)
    for (int j = 0; j < static_cast<int>(fb.basis.size()); ++j) {
      if (!fb.pair_kept(i, j)) continue;
      const SparseVec& br = fb.bracket_of(i, j);
      if (!br.empty()) g.bracket[{i, j}] = br;
    }
  return g;
}

}  // namespace

StrictLieAlgebra free_lie(const BaseObject& v, int max_weight) {
  if (max_weight < 1) throw std::invalid_argument("free_lie needs max_weight >= 1");
  FreeLieBuilder fb;
  fb.letters = flatten(v.big);
  fb.max_weight = max_weight;
  fb.bounded = false;
  fb.enumerate_basis();
  CutoffPolicy policy;
  policy.max_weight = max_weight;
  policy.window = Window(-(1 << 20), 1 << 20, 0);
  policy.justification = "free Lie algebra exact in weights <= " + std::to_string(max_weight) +
                         "; brackets landing above are truncated to zero";
  return finish(fb, v.base, std::move(policy));
}

StrictLieAlgebra prim_lie(const StrictComCoalgebra& c, CutoffPolicy cutoff) {
  c.carrier.big.require_certified(Window(cutoff.window.lo, cutoff.window.hi));
  for (int i = 0; i < c.flat.size(); ++i) {
    const auto& e = c.flat.basis[i];
    int bound = e.stratum ? -stratum_size(e.stratum) - 1 : -2;
    if (e.degree > bound)
      throw HypothesisViolationError(
          "prim_lie needs the stabilization hypothesis (degrees <= -2, stalkwise c_cA); '" +
          e.label + "' sits in degree " + std::to_string(e.degree));
  }
  FreeLieBuilder fb;
  fb.letters = flatten(shift(c.carrier.big, -1));
  int floor = cutoff.window.lo - cutoff.window.guard;
  {
    int maxdeg = -(1 << 20);
    for (const auto& e : fb.letters.basis) maxdeg = std::max(maxdeg, e.degree);
    int w = 0;
    if (fb.letters.size() > 0)
      while ((w + 1) * maxdeg >= floor) ++w;
    w = std::max(w, 1);
    if (cutoff.max_weight == 0) cutoff.max_weight = w;
    else if (cutoff.max_weight < w)
      throw CutoffInfeasibleError("prim_lie: requested max_weight " +
                                  std::to_string(cutoff.max_weight) +
                                  " cannot certify the window (needs " + std::to_string(w) + ")");
  }
  fb.max_weight = cutoff.max_weight;
  fb.bounded = true;
  fb.degree_floor = floor;
  fb.enumerate_basis();

  // d_Delta: a generator maps to half the signed bracket expansion of its
  // reduced comultiplication, (s^{-1} (x) s^{-1}) carrying (-1)^{|x'|}.
  for (int i = 0; i < static_cast<int>(fb.basis.size()); ++i) {
    if (fb.basis[i].weight != 1) continue;
    int letter = fb.basis[i].word[0];
    SparseVec acc;
    for (const auto& [a, b, v] : c.comul[letter]) {
      auto ia = fb.basis_index.find({NcWord{a}, false});
      auto ib = fb.basis_index.find({NcWord{b}, false});
      if (ia == fb.basis_index.end() || ib == fb.basis_index.end())
        throw std::logic_error("prim_lie: comultiplication letter missing");
      int unshifted = fb.letters.basis[a].degree - 1;
      Rational s = (unshifted & 1) ? Rational(-1) : Rational(1);
      acc = axpy(acc, s * v / 2, fb.bracket_of(ia->second, ib->second));
    }
    fb.generator_twist[i] = std::move(acc);
  }

  cutoff.justification = "weight w > " + std::to_string(cutoff.max_weight) +
                         " lies in degrees <= -w < " + std::to_string(floor) +
                         " = window.lo - guard";
  return finish(fb, c.carrier.base, std::move(cutoff));
}

ComplexMap koszul_unit(const StrictLieAlgebra& g, const StrictLieAlgebra& prim) {
  ComplexMap f;
  f.source = g.carrier.big;
  f.target = prim.carrier.big;
  // locate, per degree, the weight-one generator matching each carrier label
  std::map<std::pair<int, std::string>, int> prim_local;
  std::map<int, int> counts;
  for (int i = 0; i < prim.flat.size(); ++i) {
    int deg = prim.flat.basis[i].degree;
    int local = counts[deg]++;
    prim_local[{deg, prim.flat.basis[i].label}] = local;
  }
  std::map<int, SparseMatrix> comps;
  std::map<int, int> src_local;
  for (int i = 0; i < g.flat.size(); ++i) {
    int deg = g.flat.basis[i].degree;
    int col = src_local[deg]++;
    std::string lbl = "⟨" + g.flat.basis[i].label + "⟩";  // weight-one Chev word
    auto it = prim_local.find({deg, lbl});
    if (it == prim_local.end())
      throw std::logic_error("koszul_unit: weight-one generator for '" +
                             g.flat.basis[i].label + "' not found");
    auto ins = comps.find(deg);
    if (ins == comps.end())
      ins = comps.emplace(deg, SparseMatrix(f.target.dim(deg), f.source.dim(deg))).first;
    ins->second.add_to(it->second, col, Rational(1));
  }
  for (auto& [deg, m] : comps)
    if (!m.is_zero()) f.comp[deg] = std::move(m);
  return f;
}

}  // namespace koszulab
