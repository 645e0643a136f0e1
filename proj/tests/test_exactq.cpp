#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "sympres/matrix.hpp"
#include "sympres/rational.hpp"

using namespace sympres;

namespace {

std::vector<std::vector<Rat>> dense_of(const RationalMatrix& m) {
  std::vector<std::vector<Rat>> out;
  for (int i = 0; i < m.rows(); ++i) out.push_back(make_dense(m.row(i), m.cols()));
  return out;
}

Rat det_minor_expansion(const std::vector<std::vector<Rat>>& m,
                        std::vector<int> rows, std::vector<int> cols) {
  if (rows.empty()) return Rat(1);
  Rat acc(0);
  int sign = 1;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Rat entry = m[rows[0]][cols[k]];
    if (!is_zero(entry)) {
      std::vector<int> sub_rows(rows.begin() + 1, rows.end());
      std::vector<int> sub_cols;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (j != k) sub_cols.push_back(cols[j]);
      acc += Rat(sign) * entry * det_minor_expansion(m, sub_rows, sub_cols);
    }
    sign = -sign;
  }
  return acc;
}

// Independent rank oracle: largest k admitting a nonzero k x k minor.
int rank_by_minors(const std::vector<std::vector<Rat>>& m) {
  int r = static_cast<int>(m.size());
  int c = r == 0 ? 0 : static_cast<int>(m[0].size());
  for (int k = std::min(r, c); k >= 1; --k) {
    std::vector<int> rows(k), cols(k);
    std::function<bool(int, int)> pick_rows = [&](int idx, int start) -> bool {
      if (idx == k) {
        std::function<bool(int, int)> pick_cols = [&](int jdx, int cstart) -> bool {
          if (jdx == k)
            return !is_zero(det_minor_expansion(m, rows, cols));
          for (int j = cstart; j < c; ++j) {
            cols[jdx] = j;
            if (pick_cols(jdx + 1, j + 1)) return true;
          }
          return false;
        };
        return pick_cols(0, 0);
      }
      for (int i = start; i < r; ++i) {
        rows[idx] = i;
        if (pick_rows(idx + 1, i + 1)) return true;
      }
      return false;
    };
    if (pick_rows(0, 0)) return k;
  }
  return 0;
}

std::vector<Rat> mat_vec(const RationalMatrix& m, const std::vector<Rat>& x) {
  std::vector<Rat> y(m.rows(), Rat(0));
  for (int i = 0; i < m.rows(); ++i)
    for (const auto& [c, v] : m.row(i)) y[i] += v * x[c];
  return y;
}

}  // namespace

TEST_CASE("rref of the identity") {
  RationalMatrix m = RationalMatrix::identity(3);
  EchelonResult e = rref(m);
  CHECK(e.rank == 3);
  CHECK(e.kernel.empty());
  CHECK(e.pivot_cols == std::vector<int>{0, 1, 2});
  CHECK(e.reduced == m);
}

TEST_CASE("rref of proportional rows") {
  RationalMatrix m = RationalMatrix::from_dense({{rat(1), rat(2)},
                                                 {rat(2), rat(4)}});
  EchelonResult e = rref(m);
  CHECK(e.rank == 1);
  REQUIRE(e.kernel.size() == 1);
  CHECK(e.kernel[0] == std::vector<Rat>{rat(-2), rat(1)});
  CHECK(e.reduced.at(0, 0) == rat(1));
  CHECK(e.reduced.at(0, 1) == rat(2));
  CHECK(e.reduced.row(1).empty());
}

TEST_CASE("rref rank matches the minor-expansion oracle") {
  std::mt19937 rng(20260818);
  std::uniform_int_distribution<int> entry(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    RationalMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m.set(i, j, rat(entry(rng)));
    if (trial % 3 == 1) {
      // Force a dependency to exercise non-full rank.
      SparseRow sum = row_axpy(m.row(0), rat(2), m.row(1));
      m.set_row(3, sum);
    }
    if (trial % 5 == 2) m.set_row(2, {});
    EchelonResult e = rref(m);
    CHECK(e.rank == rank_by_minors(dense_of(m)));
  }
}

TEST_CASE("rref invariants on random sparse matrices") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 8);
    int cols = 1 + static_cast<int>(rng() % 8);
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (rng() % 3 == 0) m.set(i, j, rat(entry(rng), den(rng)));
    EchelonResult e = rref(m);
    CHECK(e.rank + static_cast<int>(e.kernel.size()) == cols);
    CHECK(rref(e.reduced).reduced == e.reduced);
    for (const auto& k : e.kernel) {
      std::vector<Rat> image = mat_vec(m, k);
      for (const auto& v : image) CHECK(is_zero(v));
    }
  }
}

TEST_CASE("quotient dimensions") {
  CHECK(quotient_dimension(5, RationalMatrix(0, 5)) == 5);

  RationalMatrix one(1, 3);
  one.set_row(0, {{0, rat(1)}, {1, rat(1)}, {2, rat(-1)}});
  CHECK(quotient_dimension(3, one) == 2);

  // Five rows spanning a 3-dimensional space of relations on 4 generators.
  RationalMatrix r(5, 4);
  r.set_row(0, {{0, rat(1)}, {1, rat(1)}});
  r.set_row(1, {{1, rat(1)}, {2, rat(1)}});
  r.set_row(2, {{2, rat(1)}, {3, rat(1)}});
  r.set_row(3, {{0, rat(1)}, {3, rat(1)}});  // row0 - row1 + row2
  r.set_row(4, {{0, rat(2)}, {1, rat(2)}});
  REQUIRE(rref(r).rank == 3);
  CHECK(quotient_dimension(4, r) == 1);
}

TEST_CASE("membership basics") {
  RationalMatrix span = RationalMatrix::from_dense({
      {rat(1), rat(0)},
      {rat(2), rat(1)},
      {rat(0), rat(3)},
  });

  auto first = membership({rat(1), rat(2), rat(0)}, span);
  REQUIRE(first.has_value());
  CHECK(*first == std::vector<Rat>{rat(1), rat(0)});

  auto zero = membership({rat(0), rat(0), rat(0)}, span);
  REQUIRE(zero.has_value());
  CHECK(*zero == std::vector<Rat>{rat(0), rat(0)});

  std::vector<Rat> outside = {rat(1), rat(0), rat(1)};
  CHECK(!membership(outside, span).has_value());
  // Rank-comparison oracle for absence.
  RationalMatrix aug(3, 3);
  for (int i = 0; i < 3; ++i) {
    SparseRow row = span.row(i);
    if (!is_zero(outside[i])) row.emplace_back(2, outside[i]);
    aug.set_row(i, row);
  }
  CHECK(rref(aug).rank == rref(span).rank + 1);
}

TEST_CASE("membership agrees with rank comparison on random data") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 2 + static_cast<int>(rng() % 5);
    int k = 1 + static_cast<int>(rng() % 4);
    RationalMatrix span(m, k);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j)
        if (rng() % 2) span.set(i, j, rat(entry(rng)));
    std::vector<Rat> target(m, Rat(0));
    if (trial % 2 == 0) {
      // Random combination: always a member.
      std::vector<Rat> c(k);
      for (int j = 0; j < k; ++j) c[j] = rat(entry(rng));
      for (int i = 0; i < m; ++i)
        for (const auto& [col, v] : span.row(i)) target[i] += v * c[col];
    } else {
      for (int i = 0; i < m; ++i) target[i] = rat(entry(rng));
    }

    RationalMatrix aug(m, k + 1);
    for (int i = 0; i < m; ++i) {
      SparseRow row = span.row(i);
      if (!is_zero(target[i])) row.emplace_back(k, target[i]);
      aug.set_row(i, row);
    }
    bool member_by_rank = rref(aug).rank == rref(span).rank;

    auto sol = membership(target, span);
    CHECK(sol.has_value() == member_by_rank);
    if (sol) {
      std::vector<Rat> reproduced(m, Rat(0));
      for (int i = 0; i < m; ++i)
        for (const auto& [col, v] : span.row(i)) reproduced[i] += v * (*sol)[col];
      CHECK(reproduced == target);
    }
  }
}

TEST_CASE("incremental rref matches batch rank and canonical reduction") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> entry(-6, 6);
  for (int trial = 0; trial < 30; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 10);
    int cols = 2 + static_cast<int>(rng() % 7);
    RationalMatrix m(rows, cols);
    IncrementalRref inc(cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j)
        if (rng() % 3 == 0) m.set(i, j, rat(entry(rng)));
      inc.add(m.row(i));
    }
    EchelonResult e = rref(m);
    CHECK(inc.rank() == e.rank);
    // Any row of the original matrix reduces to zero.
    for (int i = 0; i < rows; ++i) CHECK(inc.reduce(m.row(i)).empty());
    // Reduction is canonical: residuals are supported on free columns only.
    SparseRow probe;
    for (int j = 0; j < cols; ++j) probe.emplace_back(j, rat(entry(rng)));
    probe = integerize(probe);
    SparseRow res = inc.reduce(probe);
    for (const auto& [c, v] : res) CHECK(!inc.rows().count(c));
  }
}

TEST_CASE("span solver produces verifiable coefficients") {
  std::mt19937 rng(555);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    int width = 3 + static_cast<int>(rng() % 5);
    int count = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<Rat>> vecs;
    SpanSolver solver(width);
    for (int i = 0; i < count; ++i) {
      std::vector<Rat> v(width);
      for (int j = 0; j < width; ++j) v[j] = rat(entry(rng));
      vecs.push_back(v);
      solver.add(v);
    }
    // A random combination must solve, and the coefficients must reproduce it.
    std::vector<Rat> target(width, Rat(0));
    for (const auto& v : vecs) {
      Rat c = rat(entry(rng), 1 + static_cast<int>(rng() % 3));
      for (int j = 0; j < width; ++j) target[j] += c * v[j];
    }
    auto sol = solver.solve(target);
    REQUIRE(sol.has_value());
    std::vector<Rat> reproduced(width, Rat(0));
    for (const auto& [idx, c] : *sol) {
      REQUIRE(idx < count);
      for (int j = 0; j < width; ++j) reproduced[j] += c * vecs[idx][j];
    }
    CHECK(reproduced == target);
  }
}

TEST_CASE("mod-p forward rank is a lower bound attaining the exact rank") {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> entry(-20, 20);
  for (int trial = 0; trial < 30; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 10);
    int cols = 1 + static_cast<int>(rng() % 10);
    RationalMatrix m(rows, cols);
    FpForward fp;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (rng() % 2) m.set(i, j, rat(entry(rng), 1 + (j % 3)));
    for (int i = 0; i < rows; ++i) fp.add(m.row(i));
    int exact = rref(m).rank;
    CHECK(fp.rank() <= exact);
    CHECK(fp.rank() == exact);  // entries far below p: no accidental collapse
  }
}
