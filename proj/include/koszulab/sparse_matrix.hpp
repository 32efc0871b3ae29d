#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "koszulab/rational.hpp"

namespace koszulab {

// Sparse vector: (index, value) pairs, sorted by index, no zero values.
using SparseVec = std::vector<std::pair<int, Rational>>;

// x + a*y, merged.
inline SparseVec axpy(const SparseVec& x, const Rational& a, const SparseVec& y) {
  if (a == 0) return x;
  SparseVec out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, a * y[j].second);
      ++j;
    } else {
      Rational v = x[i].second + a * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, v);
      ++i, ++j;
    }
  }
  return out;
}

inline void vec_add_term(SparseVec& v, int idx, const Rational& val) {
  if (val == 0) return;
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const auto& p, int k) { return p.first < k; });
  if (it != v.end() && it->first == idx) {
    it->second += val;
    if (it->second == 0) v.erase(it);
  } else {
    v.insert(it, {idx, val});
  }
}

inline Rational vec_get(const SparseVec& v, int idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const auto& p, int k) { return p.first < k; });
  if (it != v.end() && it->first == idx) return it->second;
  return Rational(0);
}

// Sparse rational matrix, stored by rows. No zero entries are kept.
struct SparseMatrix {
  int rows = 0, cols = 0;
  std::vector<SparseVec> row;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), row(r) {}

  static SparseMatrix identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.row[i].emplace_back(i, Rational(1));
    return m;
  }

  Rational get(int r, int c) const { return vec_get(row[r], c); }
  void add_to(int r, int c, const Rational& v) { vec_add_term(row[r], c, v); }
  void set(int r, int c, const Rational& v) {
    auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != rw.end() && it->first == c) {
      if (v == 0) rw.erase(it); else it->second = v;
    } else if (v != 0) {
      rw.insert(it, {c, v});
    }
  }

  bool is_zero() const {
    for (const auto& r : row)
      if (!r.empty()) return false;
    return true;
  }

  long long nnz() const {
    long long n = 0;
    for (const auto& r : row) n += static_cast<long long>(r.size());
    return n;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (const auto& [c, v] : row[r]) t.row[c].emplace_back(r, v);
    return t;
  }

  SparseMatrix operator*(const SparseMatrix& b) const {
    if (cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
    SparseMatrix out(rows, b.cols);
    for (int r = 0; r < rows; ++r) {
      SparseVec acc;
      for (const auto& [k, v] : row[r]) acc = axpy(acc, v, b.row[k]);
      out.row[r] = std::move(acc);
    }
    return out;
  }

  SparseMatrix operator+(const SparseMatrix& b) const {
    if (rows != b.rows || cols != b.cols) throw std::invalid_argument("matrix sum shape mismatch");
    SparseMatrix out(rows, cols);
    for (int r = 0; r < rows; ++r) out.row[r] = axpy(row[r], Rational(1), b.row[r]);
    return out;
  }

  SparseMatrix operator-(const SparseMatrix& b) const {
    if (rows != b.rows || cols != b.cols) throw std::invalid_argument("matrix diff shape mismatch");
    SparseMatrix out(rows, cols);
    for (int r = 0; r < rows; ++r) out.row[r] = axpy(row[r], Rational(-1), b.row[r]);
    return out;
  }

  SparseMatrix scaled(const Rational& a) const {
    SparseMatrix out(rows, cols);
    if (a == 0) return out;
    for (int r = 0; r < rows; ++r) {
      out.row[r] = row[r];
      for (auto& [c, v] : out.row[r]) v *= a;
    }
    return out;
  }

  bool operator==(const SparseMatrix& b) const {
    return rows == b.rows && cols == b.cols && row == b.row;
  }

  // [this | b]
  SparseMatrix hcat(const SparseMatrix& b) const {
    if (rows != b.rows) throw std::invalid_argument("hcat shape mismatch");
    SparseMatrix out(rows, cols + b.cols);
    for (int r = 0; r < rows; ++r) {
      out.row[r] = row[r];
      for (const auto& [c, v] : b.row[r]) out.row[r].emplace_back(c + cols, v);
    }
    return out;
  }

  // A*x where x is indexed by columns.
  SparseVec apply(const SparseVec& x) const {
    SparseVec out;
    for (int r = 0; r < rows; ++r) {
      Rational s(0);
      size_t i = 0, j = 0;
      const auto& rw = row[r];
      while (i < rw.size() && j < x.size()) {
        if (rw[i].first < x[j].first) ++i;
        else if (x[j].first < rw[i].first) ++j;
        else { s += rw[i].second * x[j].second; ++i; ++j; }
      }
      if (s != 0) out.emplace_back(r, s);
    }
    return out;
  }

  SparseVec column(int c) const {
    SparseVec out;
    for (int r = 0; r < rows; ++r) {
      Rational v = get(r, c);
      if (v != 0) out.emplace_back(r, v);
    }
    return out;
  }
};

// Reduced row echelon form with pivot bookkeeping.
struct Echelon {
  SparseMatrix R;
  std::vector<int> pivot_row_of_col;  // -1 for free columns
  std::vector<int> pivot_cols;        // in elimination order
  int rank = 0;
};

inline Echelon rref(const SparseMatrix& a) {
  Echelon e;
  e.R = a;
  e.pivot_row_of_col.assign(a.cols, -1);
  std::vector<bool> used(a.rows, false);
  for (int c = 0; c < a.cols; ++c) {
    // pick the sparsest available row with a nonzero in this column
    int best = -1;
    size_t best_len = 0;
    for (int r = 0; r < a.rows; ++r) {
      if (used[r]) continue;
      if (vec_get(e.R.row[r], c) == 0) continue;
      if (best < 0 || e.R.row[r].size() < best_len) { best = r; best_len = e.R.row[r].size(); }
    }
    if (best < 0) continue;
    used[best] = true;
    e.pivot_row_of_col[c] = best;
    e.pivot_cols.push_back(c);
    ++e.rank;
    Rational p = vec_get(e.R.row[best], c);
    if (p != 1) {
      Rational inv = Rational(1) / p;
      for (auto& [cc, v] : e.R.row[best]) v *= inv;
    }
    for (int r = 0; r < a.rows; ++r) {
      if (r == best) continue;
      Rational v = vec_get(e.R.row[r], c);
      if (v != 0) e.R.row[r] = axpy(e.R.row[r], -v, e.R.row[best]);
    }
  }
  return e;
}

inline int rank(const SparseMatrix& a) { return rref(a).rank; }

// Basis of {x : A x = 0}, one sparse vector (length = cols) per free column.
inline std::vector<SparseVec> kernel_basis(const SparseMatrix& a) {
  Echelon e = rref(a);
  std::vector<SparseVec> out;
  for (int f = 0; f < a.cols; ++f) {
    if (e.pivot_row_of_col[f] >= 0) continue;
    SparseVec v;
    for (int c = 0; c < a.cols; ++c) {
      int r = e.pivot_row_of_col[c];
      if (r < 0) continue;
      Rational coeff = vec_get(e.R.row[r], f);
      if (coeff != 0) v.emplace_back(c, -coeff);
    }
    vec_add_term(v, f, Rational(1));
    out.push_back(std::move(v));
  }
  return out;
}

// Solve A X = B columnwise. Throws std::domain_error if inconsistent.
inline SparseMatrix solve(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("solve shape mismatch");
  Echelon e = rref(a.hcat(b));
  SparseMatrix x(a.cols, b.cols);
  for (int r = 0; r < a.rows; ++r) {
    const auto& rw = e.R.row[r];
    if (rw.empty()) continue;
    if (rw.front().first >= a.cols) throw std::domain_error("inconsistent linear system");
  }
  for (int c = 0; c < a.cols; ++c) {
    int r = e.pivot_row_of_col[c];
    if (r < 0) continue;
    for (const auto& [cc, v] : e.R.row[r])
      if (cc >= a.cols) x.add_to(c, cc - a.cols, v);
  }
  return x;
}

// Incremental row-span structure for membership and basis-extension tests.
struct IncrementalSpan {
  std::map<int, SparseVec> rows;  // leading index -> normalized row

  SparseVec reduce(SparseVec v) const {
    while (!v.empty()) {
      auto it = rows.find(v.front().first);
      if (it == rows.end()) break;
      v = axpy(v, -v.front().second, it->second);
    }
    return v;
  }

  // Returns true if v enlarged the span.
  bool insert(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Rational inv = Rational(1) / v.front().second;
    for (auto& [c, x] : v) x *= inv;
    rows[v.front().first] = std::move(v);
    return true;
  }

  int dim() const { return static_cast<int>(rows.size()); }
};

// Indices of columns of C that extend the span of the columns of B.
inline std::vector<int> extend_column_basis(const SparseMatrix& b, const SparseMatrix& c) {
  IncrementalSpan span;
  SparseMatrix bt = b.transpose();
  for (int r = 0; r < bt.rows; ++r) span.insert(bt.row[r]);
  SparseMatrix ct = c.transpose();
  std::vector<int> chosen;
  for (int r = 0; r < ct.rows; ++r)
    if (span.insert(ct.row[r])) chosen.push_back(r);
  return chosen;
}

}  // namespace koszulab
