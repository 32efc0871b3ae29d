#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "koszulab/sparse_matrix.hpp"

using namespace koszulab;

namespace {

// independent dense Gaussian elimination, used as the rank oracle
int dense_rank(std::vector<std::vector<Rational>> m) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][c] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (int k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

SparseMatrix from_dense(const std::vector<std::vector<int>>& d) {
  SparseMatrix m(static_cast<int>(d.size()), d.empty() ? 0 : static_cast<int>(d[0].size()));
  for (size_t r = 0; r < d.size(); ++r)
    for (size_t c = 0; c < d[r].size(); ++c)
      if (d[r][c]) m.set(static_cast<int>(r), static_cast<int>(c), Rational(d[r][c]));
  return m;
}

}  // namespace

TEST_CASE("rational parsing canonicalizes") {
  CHECK(parse_rational("3/6") == Rational(1) / 2);
  CHECK(parse_rational("-4/2") == Rational(-2));
  CHECK(to_string(parse_rational("3/6")) == "1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("rank on the stated examples") {
  CHECK(rank(SparseMatrix::identity(3)) == 3);
  CHECK(rank(SparseMatrix(2, 2)) == 0);
  CHECK(rank(from_dense({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel basis") {
  SparseMatrix row = from_dense({{1, 1}});
  auto k = kernel_basis(row);
  REQUIRE(k.size() == 1);
  CHECK(row.apply(k[0]).empty());

  CHECK(kernel_basis(SparseMatrix::identity(4)).empty());
}

TEST_CASE("random rank-3 matrix: kernel maps back to zero, rank + nullity = cols") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 5; ++trial) {
    // assemble a 4x6 matrix of rank <= 3 as a product
    std::vector<std::vector<Rational>> a(4, std::vector<Rational>(3)),
        b(3, std::vector<Rational>(6));
    for (auto& row : a)
      for (auto& v : row) v = Rational(static_cast<int>(rng() % 7) - 3);
    for (auto& row : b)
      for (auto& v : row) v = Rational(static_cast<int>(rng() % 7) - 3);
    SparseMatrix m(4, 6);
    std::vector<std::vector<Rational>> dense(4, std::vector<Rational>(6, Rational(0)));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 6; ++c) {
        Rational s(0);
        for (int k = 0; k < 3; ++k) s += a[r][k] * b[k][c];
        dense[r][c] = s;
        if (s != 0) m.set(r, c, s);
      }
    int rk = rank(m);
    CHECK(rk == dense_rank(dense));
    CHECK(rk <= 3);
    auto ker = kernel_basis(m);
    CHECK(static_cast<int>(ker.size()) + rk == 6);
    for (const auto& v : ker) CHECK(m.apply(v).empty());
  }
}

TEST_CASE("solve and column basis extension") {
  SparseMatrix a = from_dense({{1, 0}, {1, 1}, {0, 2}});
  SparseMatrix b = from_dense({{2}, {5}, {6}});
  SparseMatrix x = solve(a, b);
  CHECK(a * x == b);

  SparseMatrix bad = from_dense({{1}, {0}, {0}});
  SparseMatrix planes = from_dense({{1, 0}, {0, 0}, {0, 0}});
  CHECK_THROWS_AS(solve(from_dense({{0, 0}, {1, 0}, {0, 1}}), bad), std::domain_error);
  (void)planes;

  auto chosen = extend_column_basis(from_dense({{1}, {0}}), SparseMatrix::identity(2));
  REQUIRE(chosen.size() == 1);
  CHECK(chosen[0] == 1);
}
