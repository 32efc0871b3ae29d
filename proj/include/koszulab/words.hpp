#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "koszulab/complex.hpp"

namespace koszulab {

struct CutoffInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A symmetric word: letter indices in non-decreasing order; letters of odd
// degree never repeat.
using Word = std::vector<int>;

// Sorts a word in place, returning the Koszul sign of the permutation
// (counting crossings of odd-degree letters), or 0 when an odd letter repeats.
inline int sort_word(Word& w, const std::vector<int>& parity) {
  int sign = 1;
  for (size_t i = 1; i < w.size(); ++i) {  // insertion sort, counting odd-odd crossings
    int x = w[i];
    size_t j = i;
    while (j > 0 && w[j - 1] > x) {
      if (parity[w[j - 1]] && parity[x]) sign = -sign;
      w[j] = w[j - 1];
      --j;
    }
    w[j] = x;
  }
  for (size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1] && parity[w[i]]) return 0;
  return sign;
}

// Koszul sign of rearranging the letters of `w` into the order given by
// `positions` (a permutation of 0..len-1 into the new left-to-right order).
inline int permutation_sign(const Word& w, const std::vector<int>& positions,
                            const std::vector<int>& parity) {
  int sign = 1;
  for (size_t i = 0; i < positions.size(); ++i)
    for (size_t j = i + 1; j < positions.size(); ++j)
      if (positions[i] > positions[j] && parity[w[positions[i]]] && parity[w[positions[j]]])
        sign = -sign;
  return sign;
}

// Sign of pulling the selected positions of a sorted word to the front,
// keeping the internal order of both groups.
inline int front_extraction_sign(const Word& w, uint32_t selected,
                                 const std::vector<int>& parity) {
  int sign = 1;
  int odd_unselected_before = 0;
  for (size_t p = 0; p < w.size(); ++p) {
    if (selected & (1u << p)) {
      if (parity[w[p]] && (odd_unselected_before & 1)) sign = -sign;
    } else if (parity[w[p]]) {
      ++odd_unselected_before;
    }
  }
  return sign;
}

// The letters of a word space must all sit in strictly negative or strictly
// positive degrees so that a degree floor/ceiling prunes soundly.
enum class LetterSign { AllNegative, AllPositive };

struct WordOptions {
  int min_arity = 1;
  int max_arity = 0;       // 0: unbounded (the degree bound terminates)
  int degree_floor = 0;    // AllNegative: keep words of total degree >= floor
  int degree_ceiling = 0;  // AllPositive: keep words of total degree <= ceiling
  LetterSign sign = LetterSign::AllNegative;
  bool bounded = true;     // false: exact enumeration up to max_arity, no degree prune
};

// Sym^{>0} of a flat complex on the multiset basis, with the induced
// (derivation) differential. Strata of letters are merged by union, so the
// same machinery computes symmetric powers for the (x)*-monoidal structure.
struct WordSpace {
  FlatComplex letters;
  std::vector<int> parity;  // degree & 1 per letter
  WordOptions opts;

  std::vector<Word> words;
  std::map<Word, int> index;
  FlatComplex cx;  // basis parallel to `words`, differential = d_I

  int size() const { return static_cast<int>(words.size()); }

  int word_degree(const Word& w) const {
    int d = 0;
    for (int l : w) d += letters.basis[l].degree;
    return d;
  }
  uint32_t word_stratum(const Word& w) const {
    uint32_t s = 0;
    for (int l : w) s |= letters.basis[l].stratum;
    return s;
  }
  int find(const Word& w) const {
    auto it = index.find(w);
    return it == index.end() ? -1 : it->second;
  }
};

inline std::string word_label(const FlatComplex& letters, const Word& w) {
  std::string s = "⟨";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += "·";
    s += letters.basis[w[i]].label;
  }
  return s + "⟩";
}

inline WordSpace build_word_space(const FlatComplex& letters, WordOptions opts) {
  if (!opts.bounded && opts.max_arity <= 0)
    throw std::invalid_argument("unbounded word enumeration needs an arity cap");
  WordSpace ws;
  ws.letters = letters;
  ws.opts = opts;
  ws.parity.resize(letters.size());
  for (int i = 0; i < letters.size(); ++i) {
    int d = letters.basis[i].degree;
    ws.parity[i] = d & 1;
    if (!opts.bounded) continue;
    if (opts.sign == LetterSign::AllNegative && d >= 0)
      throw CutoffInfeasibleError("letter '" + letters.basis[i].label +
                                  "' of degree " + std::to_string(d) +
                                  " breaks the negative-degree pruning bound");
    if (opts.sign == LetterSign::AllPositive && d <= 0)
      throw CutoffInfeasibleError("letter '" + letters.basis[i].label +
                                  "' of degree " + std::to_string(d) +
                                  " breaks the positive-degree pruning bound");
  }

  Word cur;
  std::function<void(int, int)> dfs = [&](int from, int degree) {
    if (static_cast<int>(cur.size()) >= opts.min_arity) ws.words.push_back(cur);
    if (opts.max_arity && static_cast<int>(cur.size()) >= opts.max_arity) return;
    for (int l = from; l < letters.size(); ++l) {
      int nd = degree + letters.basis[l].degree;
      if (opts.bounded && opts.sign == LetterSign::AllNegative && nd < opts.degree_floor) continue;
      if (opts.bounded && opts.sign == LetterSign::AllPositive && nd > opts.degree_ceiling) continue;
      if (ws.parity[l] && !cur.empty() && cur.back() == l) continue;  // odd square
      cur.push_back(l);
      dfs(l, nd);
      cur.pop_back();
    }
  };
  dfs(0, 0);

  std::sort(ws.words.begin(), ws.words.end(),
            [&](const Word& a, const Word& b) {
              int da = ws.word_degree(a), db = ws.word_degree(b);
              if (da != db) return da < db;
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  for (int i = 0; i < ws.size(); ++i) ws.index[ws.words[i]] = i;

  ws.cx.basis.resize(ws.size());
  for (int i = 0; i < ws.size(); ++i)
    ws.cx.basis[i] = {word_label(letters, ws.words[i]), ws.word_degree(ws.words[i]),
                      ws.word_stratum(ws.words[i])};
  ws.cx.d = SparseMatrix(ws.size(), ws.size());
  for (int i = 0; i < ws.size(); ++i) {
    const Word& w = ws.words[i];
    int prefix_parity = 0;
    for (size_t p = 0; p < w.size(); ++p) {
      for (const auto& [t, v] : letters.d.column(w[p])) {
        Word nw = w;
        nw[p] = t;
        int s = sort_word(nw, ws.parity);
        if (s == 0) continue;
        int j = ws.find(nw);
        if (j < 0) continue;  // pruned above the retained degree range
        Rational coeff = v * s;
        if (prefix_parity) coeff = -coeff;
        ws.cx.d.add_to(j, i, coeff);
      }
      prefix_parity ^= ws.parity[w[p]];
    }
  }
  return ws;
}

// Terms of an element of a tensor square of word spaces / letter spaces.
template <typename Key>
using TermMap = std::map<Key, Rational>;

// Binary unshuffle of a word into ordered pairs of nonempty parts, with
// Koszul extraction signs. Parts of a sorted word stay sorted.
inline std::vector<std::tuple<Word, Word, int>> unshuffle_pairs(const WordSpace& ws,
                                                                const Word& w) {
  std::vector<std::tuple<Word, Word, int>> out;
  int len = static_cast<int>(w.size());
  if (len < 2) return out;
  for (uint32_t mask = 1; mask + 1 < (1u << len); ++mask) {
    Word a, b;
    for (int p = 0; p < len; ++p)
      if (mask & (1u << p)) a.push_back(w[p]); else b.push_back(w[p]);
    out.emplace_back(std::move(a), std::move(b), front_extraction_sign(w, mask, ws.parity));
  }
  return out;
}

// Set partitions of the positions of a word, as lists of blocks ordered by
// least position. Used by the Sym^{>0} comonad comultiplication.
inline void for_each_set_partition(int n, const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  std::vector<int> block_of(n);
  std::vector<std::vector<int>> blocks;
  std::function<void(int)> rec = [&](int p) {
    if (p == n) { fn(blocks); return; }
    for (size_t b = 0; b <= blocks.size(); ++b) {
      if (b == blocks.size()) blocks.push_back({});
      blocks[b].push_back(p);
      rec(p + 1);
      blocks[b].pop_back();
      if (blocks.back().empty()) blocks.pop_back();
    }
  };
  rec(0);
}

}  // namespace koszulab
