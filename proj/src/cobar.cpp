#include "koszulab/cobar.hpp"

namespace koszulab {

namespace {

// One cosimplicial level X^j = T^j(c), together with its word structure when
// j >= 1 (level 0 is the carrier itself).
struct Level {
  FlatComplex cx;
  std::optional<WordSpace> ws;  // absent at level 0
};

struct TowerBuilder {
  const StrictComCoalgebra* c = nullptr;
  int floor = 0;      // uniform internal-degree floor for all levels
  int total_lo = 0;   // retained total-degree range of the assembled stages
  int total_hi = 0;

  std::vector<Level> levels;                        // X^0 .. X^{max+1}
  std::vector<std::vector<SparseMatrix>> cofaces;   // cofaces[j][i]: X^j -> X^{j+1}
  std::vector<std::vector<SparseMatrix>> codegens;  // codegens[j][i]: X^{j+1} -> X^j
  SparseMatrix rho;                                 // c -> X^1

  const FlatComplex& lv(int j) const { return levels[j].cx; }

  void build_levels(int top) {
    levels.resize(top + 1);
    levels[0].cx = c->flat;
    for (int j = 1; j <= top; ++j) {
      WordOptions opts;
      opts.min_arity = 1;
      opts.degree_floor = floor;
      opts.sign = LetterSign::AllNegative;
      levels[j].ws = build_word_space(lv(j - 1), opts);
      levels[j].cx = levels[j].ws->cx;
    }
  }

  // T-coalgebra structure map rho = sum_m (1/m!) pi . Delta^{(m)}, the
  // iterated reduced comultiplication pushed onto the multiset basis.
  void build_rho() {
    const WordSpace& w1 = *levels[1].ws;
    rho = SparseMatrix(lv(1).size(), lv(0).size());
    for (int x = 0; x < lv(0).size(); ++x) {
      std::map<Word, Rational> tensors{{Word{x}, Rational(1)}};  // ordered tensor words
      Rational factorial(1);
      for (int m = 1; !tensors.empty(); ++m) {
        if (m > 1) factorial *= m;
        for (const auto& [tw, v] : tensors) {
          Word sorted = tw;
          int s = sort_word(sorted, w1.parity);
          if (s == 0) continue;
          int idx = w1.find(sorted);
          if (idx < 0) continue;  // below the retained degree floor
          rho.add_to(idx, x, v * Rational(s) / factorial);
        }
        // expand the first tensor slot by the reduced comultiplication
        std::map<Word, Rational> next;
        for (const auto& [tw, v] : tensors)
          for (const auto& [a, b, w] : c->comul[tw[0]]) {
            Word nw = tw;
            nw[0] = a;
            nw.insert(nw.begin() + 1, b);
            auto [it, fresh] = next.emplace(nw, v * w);
            if (!fresh) {
              it->second += v * w;
              if (it->second == 0) next.erase(it);
            }
          }
        tensors = std::move(next);
      }
    }
  }

  // eta: X^j -> X^{j+1}, wrap as a one-letter word.
  SparseMatrix eta(int j) const {
    const WordSpace& up = *levels[j + 1].ws;
    SparseMatrix m(lv(j + 1).size(), lv(j).size());
    for (int i = 0; i < lv(j).size(); ++i) {
      int idx = up.find(Word{i});
      if (idx >= 0) m.add_to(idx, i, Rational(1));
    }
    return m;
  }

  // delta: X^j -> X^{j+1} (j >= 1), sum over set partitions of the positions
  // into unordered nonempty blocks.
  SparseMatrix comonad_delta(int j) const {
    const WordSpace& here = *levels[j].ws;
    const WordSpace& up = *levels[j + 1].ws;
    SparseMatrix m(lv(j + 1).size(), lv(j).size());
    for (int wi = 0; wi < here.size(); ++wi) {
      const Word& w = here.words[wi];
      int len = static_cast<int>(w.size());
      for_each_set_partition(len, [&](const std::vector<std::vector<int>>& blocks) {
        // block subwords stay sorted; locate each in X^j
        std::vector<int> block_idx;
        std::vector<int> flat_positions;
        block_idx.reserve(blocks.size());
        for (const auto& bl : blocks) {
          Word sub;
          for (int p : bl) sub.push_back(w[p]);
          int bi = here.find(sub);
          if (bi < 0) { block_idx.clear(); break; }
          block_idx.push_back(bi);
        }
        if (block_idx.empty() && !blocks.empty()) return;
        // Koszul sign of rearranging the letters into block order
        // (blocks listed by least position), then sorting the outer word.
        std::vector<int> order;
        for (const auto& bl : blocks) order.insert(order.end(), bl.begin(), bl.end());
        int sign = permutation_sign(w, order, here.parity);
        // sort outer word by block index, parity = block degree
        Word outer = block_idx;
        for (size_t a = 1; a < outer.size(); ++a) {  // insertion sort with Koszul signs
          int x = outer[a];
          size_t b = a;
          while (b > 0 && outer[b - 1] > x) {
            if ((lv(j).basis[outer[b - 1]].degree & 1) && (lv(j).basis[x].degree & 1))
              sign = -sign;
            outer[b] = outer[b - 1];
            --b;
          }
          outer[b] = x;
        }
        for (size_t a = 1; a < outer.size(); ++a)
          if (outer[a] == outer[a - 1] && (lv(j).basis[outer[a]].degree & 1)) return;
        int idx = up.find(outer);
        if (idx < 0) throw std::logic_error("cobar: partitioned word missing from level");
        m.add_to(idx, wi, Rational(sign));
      });
    }
    return m;
  }

  // epsilon: X^{j+1} -> X^j, project one-letter words.
  SparseMatrix epsilon(int j) const {
    const WordSpace& up = *levels[j + 1].ws;
    SparseMatrix m(lv(j).size(), lv(j + 1).size());
    for (int wi = 0; wi < up.size(); ++wi)
      if (up.words[wi].size() == 1) m.add_to(up.words[wi][0], wi, Rational(1));
    return m;
  }

  // Sym(f): words over A-letters -> words over B-letters for a degree-zero
  // letter map f; expands multilinearly and sorts.
  SparseMatrix sym_of(const WordSpace& a, const WordSpace& b, const SparseMatrix& f) const {
    SparseMatrix m(b.size(), a.size());
    for (int wi = 0; wi < a.size(); ++wi) {
      const Word& w = a.words[wi];
      std::map<Word, Rational> acc{{Word{}, Rational(1)}};
      for (int letter : w) {
        std::map<Word, Rational> next;
        for (const auto& [pw, v] : acc)
          for (const auto& [t, tv] : f.column(letter)) {
            Word nw = pw;
            nw.push_back(t);
            auto [it, fresh] = next.emplace(nw, v * tv);
            if (!fresh) {
              it->second += v * tv;
              if (it->second == 0) next.erase(it);
            }
          }
        acc = std::move(next);
      }
      for (const auto& [pw, v] : acc) {
        Word sorted = pw;
        int s = sort_word(sorted, b.parity);
        if (s == 0) continue;
        int idx = b.find(sorted);
        if (idx < 0) continue;  // target pruned below the degree floor
        m.add_to(idx, wi, v * Rational(s));
      }
    }
    return m;
  }

  void build_maps(int top) {
    build_rho();
    cofaces.resize(top);
    codegens.resize(top);
    for (int j = 0; j < top; ++j) {
      auto& d = cofaces[j];
      d.resize(j + 2);
      d[0] = eta(j);
      if (j == 0) {
        d[1] = rho;
      } else {
        d[1] = comonad_delta(j);
        for (int i = 2; i <= j + 1; ++i)
          d[i] = sym_of(*levels[j].ws, *levels[j + 1].ws, cofaces[j - 1][i - 1]);
      }
      auto& s = codegens[j];
      s.resize(j + 1);
      s[0] = epsilon(j);
      for (int i = 1; i <= j; ++i)
        s[i] = sym_of(*levels[j + 1].ws, *levels[j].ws, codegens[j - 1][i - 1]);
    }
  }
};

}  // namespace

CobarTower cobar_tower(const StrictComCoalgebra& c, int max_stage, CutoffPolicy cutoff) {
  if (max_stage < 0) throw std::invalid_argument("cobar_tower needs max_stage >= 0");
  c.carrier.big.require_certified(Window(cutoff.window.lo, cutoff.window.hi));
  for (int i = 0; i < c.flat.size(); ++i) {
    const auto& e = c.flat.basis[i];
    int bound = e.stratum ? -stratum_size(e.stratum) - 1 : -2;
    if (e.degree > bound)
      throw HypothesisViolationError(
          "cobar tower needs the stabilization hypothesis (degrees <= -2, stalkwise c_cA); '" +
          e.label + "' sits in degree " + std::to_string(e.degree));
  }

  TowerBuilder tb;
  tb.c = &c;
  tb.total_lo = cutoff.window.lo - cutoff.window.guard;
  tb.total_hi = cutoff.window.hi + cutoff.window.guard;
  tb.floor = tb.total_lo - max_stage;  // letters of deep levels feed shallow ones
  tb.build_levels(max_stage + 1);
  tb.build_maps(max_stage + 1);

  // the retained tensor arity: words of weight m sit in degrees <= -2m
  cutoff.max_weight = std::max(1, (-tb.floor) / 2);
  cutoff.justification =
      "m-factor summand of stage n sits in degrees <= -2m + n; factors with -2m < " +
      std::to_string(tb.floor) + " cannot meet the window through stage " +
      std::to_string(max_stage);

  // conormalization: kernels of all codegeneracies at each level
  std::vector<SparseMatrix> kernels(max_stage + 1);  // columns = N^j basis inside X^j
  kernels[0] = SparseMatrix::identity(tb.lv(0).size());
  for (int j = 1; j <= max_stage; ++j) {
    const auto& s = tb.codegens[j - 1];
    int rows = 0;
    for (const auto& m : s) rows += m.rows;
    SparseMatrix stacked(rows, tb.lv(j).size());
    int off = 0;
    for (const auto& m : s) {
      for (int r = 0; r < m.rows; ++r) stacked.row[off + r] = m.row[r];
      off += m.rows;
    }
    auto ker = kernel_basis(stacked);
    SparseMatrix k(tb.lv(j).size(), static_cast<int>(ker.size()));
    for (int col = 0; col < static_cast<int>(ker.size()); ++col)
      for (const auto& [r, v] : ker[col]) k.add_to(r, col, v);
    kernels[j] = std::move(k);
  }

  // internal degree of each conormalized basis vector (kernel vectors are
  // degree-homogeneous since the codegeneracies preserve degree)
  std::vector<std::vector<int>> level_degree(max_stage + 1);
  for (int j = 0; j <= max_stage; ++j) {
    level_degree[j].resize(kernels[j].cols, 0);
    SparseMatrix kt = kernels[j].transpose();
    for (int col = 0; col < kernels[j].cols; ++col) {
      if (kt.row[col].empty()) throw std::logic_error("cobar: empty conormalized vector");
      int deg = tb.lv(j).basis[kt.row[col].front().first].degree;
      for (const auto& [r, v] : kt.row[col])
        if (tb.lv(j).basis[r].degree != deg)
          throw std::logic_error("cobar: conormalized vector mixes degrees");
      level_degree[j][col] = deg;
      // staircase bound: level-j cells carry >= j+1 tensor factors
      if (deg > -2 * (j + 1))
        throw std::logic_error("cobar: conormalized cell above the staircase degree bound");
    }
  }

  // restricted differentials: d_I and the alternating coface sum, in the
  // conormalized coordinates
  std::vector<SparseMatrix> dI(max_stage + 1), del(max_stage + 1);
  for (int j = 0; j <= max_stage; ++j) {
    dI[j] = solve(kernels[j], tb.lv(j).d * kernels[j]);
    SparseMatrix sum(tb.lv(j + 1).size(), tb.lv(j).size());
    Rational sign(1);
    for (int i = 0; i <= j + 1; ++i) {
      sum = sum + tb.cofaces[j][i].scaled(sign);
      sign = -sign;
    }
    if (j < max_stage)
      del[j] = solve(kernels[j + 1], sum * kernels[j]);
    else
      del[j] = SparseMatrix(0, kernels[j].cols);
  }

  // assemble the stages: level j contributes in total degree q + j with the
  // vertical sign (-1)^j on d_I
  CobarTower tower;
  tower.cutoff = cutoff;
  std::vector<std::vector<int>> keep(max_stage + 1);  // retained columns per level
  std::vector<std::vector<int>> pos(max_stage + 1);   // column -> flat position per stage
  for (int n = 0; n <= max_stage; ++n) {
    FlatComplex f;
    for (int j = 0; j <= n; ++j) {
      if (n == 0 || j == n) {
        keep[j].clear();
        for (int col = 0; col < kernels[j].cols; ++col) {
          int total = level_degree[j][col] + j;
          if (total >= tb.total_lo && total <= tb.total_hi + 1) keep[j].push_back(col);
        }
      }
      pos[j].assign(kernels[j].cols, -1);
      for (int col : keep[j]) {
        pos[j][col] = f.size();
        f.basis.push_back({"N" + std::to_string(j) + "_" + std::to_string(col),
                           level_degree[j][col] + j, 0});
      }
    }
    f.d = SparseMatrix(f.size(), f.size());
    for (int j = 0; j <= n; ++j) {
      Rational vsign = (j % 2 == 0) ? Rational(1) : Rational(-1);
      for (int col : keep[j]) {
        for (const auto& [r, v] : dI[j].column(col))
          if (pos[j][r] >= 0) f.d.add_to(pos[j][r], pos[j][col], vsign * v);
        if (j < n)
          for (const auto& [r, v] : del[j].column(col))
            if (pos[j + 1][r] >= 0) f.d.add_to(pos[j + 1][r], pos[j][col], v);
      }
    }
    if (!(f.d * f.d).is_zero())
      throw std::logic_error("cobar stage: d^2 != 0 (cosimplicial identities broken)");
    tower.stages.push_back(unflatten(f, cutoff.window));
  }

  for (int n = 1; n <= max_stage; ++n) {
    ComplexMap pr;
    pr.source = tower.stages[n];
    pr.target = tower.stages[n - 1];
    std::map<std::pair<int, std::string>, int> tgt;
    std::map<int, int> cnt;
    FlatComplex tf = flatten(tower.stages[n - 1]);
    for (int i = 0; i < tf.size(); ++i)
      tgt[{tf.basis[i].degree, tf.basis[i].label}] = cnt[tf.basis[i].degree]++;
    FlatComplex sf = flatten(tower.stages[n]);
    std::map<int, SparseMatrix> comps;
    std::map<int, int> scnt;
    for (int i = 0; i < sf.size(); ++i) {
      int deg = sf.basis[i].degree;
      int col = scnt[deg]++;
      auto it = tgt.find({deg, sf.basis[i].label});
      if (it == tgt.end()) continue;  // the level-n column is dropped
      auto ins = comps.find(deg);
      if (ins == comps.end())
        ins = comps.emplace(deg, SparseMatrix(pr.target.dim(deg), pr.source.dim(deg))).first;
      ins->second.add_to(it->second, col, Rational(1));
    }
    for (auto& [deg, m] : comps)
      if (!m.is_zero()) pr.comp[deg] = std::move(m);
    tower.maps.push_back(std::move(pr));
  }
  return tower;
}

Complex cobar_stage(const StrictComCoalgebra& c, int n, CutoffPolicy cutoff) {
  return cobar_tower(c, n, std::move(cutoff)).stages[n];
}

ComplexMap cobar_stage_map(const StrictComCoalgebra& c, int n, CutoffPolicy cutoff) {
  if (n < 1) throw std::invalid_argument("cobar_stage_map needs n >= 1");
  CobarTower t = cobar_tower(c, n, std::move(cutoff));
  return std::move(t.maps[n - 1]);
}

int cobar_fiber_degree_bound(int n) { return -(n + 2); }

int cobar_limit_stage(int window_lo) {
  int need = window_lo < 0 ? -window_lo : window_lo;
  return std::max(0, need - 2);
}

}  // namespace koszulab
