#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sympres/lattice.hpp"

using namespace sympres;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Int gcd_chain(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

IntMat random_int_matrix(std::mt19937& rng, int rows, int cols, int bound) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  IntMat m = int_mat(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m[i][j] = entry(rng);
  return m;
}

IntVec random_primitive(std::mt19937& rng, int len) {
  while (true) {
    std::uniform_int_distribution<int> entry(-3, 3);
    IntVec v(len);
    for (int j = 0; j < len; ++j) v[j] = entry(rng);
    if (!is_zero_vec(v) && is_primitive(v)) return v;
  }
}

// Random unimodular matrix: a short word of elementary row operations.
IntMat random_unimodular(std::mt19937& rng, int n) {
  IntMat u = identity_int(n);
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int step = 0; step < 3 * n; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Int q(coeff(rng));
    for (int c = 0; c < n; ++c) u[i][c] += q * u[j][c];
  }
  return u;
}

IntVec wedge_coords(const IntVec& u, const IntVec& v) {
  IntVec out;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      out.push_back(u[i] * v[j] - u[j] * v[i]);
  return out;
}

}  // namespace

TEST_CASE("primitivity") {
  CHECK(is_primitive(iv({1, 0, 0})));
  CHECK(!is_primitive(iv({2, 4})));
  CHECK(is_primitive(iv({6, 10, 15})));
  CHECK(gcd_chain(iv({6, 10, 15})) == 1);
  CHECK(!is_primitive(iv({0, 0})));
}

TEST_CASE("partial basis detection") {
  CHECK(is_partial_basis({iv({1, 0, 0}), iv({0, 1, 0})}));
  CHECK(!is_partial_basis({iv({1, 0}), iv({1, 2})}));
  CHECK(!is_partial_basis({iv({1, 0}), iv({2, 0})}));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    IntMat m = random_int_matrix(rng, 2, 2, 4);
    Int d = det_int(m);
    CHECK(is_partial_basis(m) == (d == 1 || d == -1));
  }
}

TEST_CASE("hermite form") {
  HermiteResult id = hermite(identity_int(3));
  CHECK(id.h == identity_int(3));
  CHECK(id.rank == 3);

  HermiteResult row = hermite({iv({2, 4})});
  CHECK(row.h == IntMat{iv({2, 4})});
  CHECK(row.rank == 1);

  std::mt19937 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + static_cast<int>(rng() % 5);
    int c = 1 + static_cast<int>(rng() % 5);
    IntMat m = random_int_matrix(rng, r, c, 6);
    HermiteResult h = hermite(m);
    CHECK(mat_mul_int(h.t, m) == h.h);
    CHECK(mat_mul_int(h.t, h.t_inv) == identity_int(r));
    Int dt = det_int(h.t);
    CHECK((dt == 1 || dt == -1));
    int prev_pivot = -1;
    for (int i = 0; i < h.rank; ++i) {
      int p = 0;
      while (h.h[i][p] == 0) ++p;
      CHECK(p > prev_pivot);
      CHECK(h.h[i][p] > 0);
      for (int above = 0; above < i; ++above) {
        CHECK(h.h[above][p] >= 0);
        CHECK(h.h[above][p] < h.h[i][p]);
      }
      prev_pivot = p;
    }
    for (int i = h.rank; i < r; ++i) CHECK(is_zero_vec(h.h[i]));
  }
}

TEST_CASE("smith form") {
  SmithResult id = smith(identity_int(3));
  CHECK(id.d == identity_int(3));

  SmithResult d23 = smith({iv({2, 0}), iv({0, 3})});
  CHECK(d23.diagonal() == IntVec{Int(1), Int(6)});

  SmithResult row = smith({iv({2, 4})});
  CHECK(row.diagonal() == IntVec{Int(2)});

  std::mt19937 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + static_cast<int>(rng() % 5);
    int c = 1 + static_cast<int>(rng() % 5);
    IntMat m = random_int_matrix(rng, r, c, 6);
    SmithResult s = smith(m);
    CHECK(mat_mul_int(mat_mul_int(s.u, m), s.v) == s.d);
    CHECK(mat_mul_int(s.u, s.u_inv) == identity_int(r));
    CHECK(mat_mul_int(s.v, s.v_inv) == identity_int(c));
    IntVec diag = s.diagonal();
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
      CHECK(diag[i] > 0);
      CHECK(diag[i + 1] % diag[i] == 0);
    }
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (i != j) CHECK(s.d[i][j] == 0);
  }
}

TEST_CASE("basis extension") {
  CHECK(extend_to_basis({iv({1, 0})}) == IntMat{iv({1, 0}), iv({0, 1})});
  CHECK(extend_to_basis({iv({1, 2})}) == IntMat{iv({1, 2}), iv({0, 1})});
  CHECK_THROWS_AS(extend_to_basis({iv({2, 4})}), std::invalid_argument);

  std::mt19937 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 2 + static_cast<int>(rng() % 5);
    int k = 1 + static_cast<int>(rng() % m);
    IntMat u = random_unimodular(rng, m);
    IntMat vs(u.begin(), u.begin() + k);
    IntMat b = extend_to_basis(vs);
    REQUIRE(static_cast<int>(b.size()) == m);
    for (int i = 0; i < k; ++i) CHECK(b[i] == vs[i]);
    Int d = det_int(b);
    if (k < m)
      CHECK(d == 1);
    else
      CHECK((d == 1 || d == -1));
  }
}

TEST_CASE("saturation") {
  SaturationResult single = saturation({iv({2, 0})});
  CHECK(single.basis == IntMat{iv({1, 0})});
  CHECK(single.index == 2);

  // Full-rank input: the saturation is the whole ambient lattice and the
  // index is the product of the invariant factors (here diag(2,4)).
  SaturationResult full = saturation({iv({2, 2}), iv({0, 4})});
  CHECK(full.basis == identity_int(2));
  CHECK(full.index == 8);
  CHECK(smith({iv({2, 2}), iv({0, 4})}).diagonal() == IntVec{Int(2), Int(4)});

  SaturationResult sat = saturation({iv({1, 1, 0}), iv({0, 2, 1})});
  CHECK(sat.index == 1);
  CHECK(same_lattice(sat.basis, {iv({1, 1, 0}), iv({0, 2, 1})}));

  std::mt19937 rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + static_cast<int>(rng() % 3);
    int c = r + static_cast<int>(rng() % 3);
    IntMat m = random_int_matrix(rng, r, c, 5);
    SaturationResult s = saturation(m);
    CHECK(is_partial_basis(s.basis));
    SaturationResult again = saturation(s.basis);
    CHECK(again.basis == s.basis);
    CHECK(again.index == 1);
    // Every generator lies in the saturation.
    for (const auto& row : m) {
      auto sol = integer_solve(transpose_int(s.basis), row);
      CHECK(sol.has_value());
    }
  }
}

TEST_CASE("symplectic form and orthogonal complements") {
  int g = 3;
  CHECK(omega(std_a(g, 1), std_b(g, 1)) == 1);
  CHECK(omega(std_a(g, 1), std_a(g, 2)) == 0);
  CHECK(omega(std_b(g, 1), std_a(g, 1)) == -1);

  IntMat perp = orthogonal_complement({std_a(g, 1)});
  IntMat expected = {std_a(g, 1), std_a(g, 2), std_b(g, 2), std_a(g, 3), std_b(g, 3)};
  CHECK(same_lattice(perp, expected));

  std::mt19937 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    int gg = 2 + static_cast<int>(rng() % 3);
    int r = 1 + static_cast<int>(rng() % gg);
    IntMat gens = random_int_matrix(rng, r, 2 * gg, 3);
    IntMat sat = saturation(gens).basis;
    if (sat.empty()) continue;
    IntMat comp = orthogonal_complement(sat);
    CHECK(static_cast<int>(comp.size()) == 2 * gg - static_cast<int>(sat.size()));
    CHECK(same_lattice(orthogonal_complement(comp), sat));
    for (const auto& u : sat)
      for (const auto& w : comp) CHECK(omega(u, w) == 0);
  }
}

TEST_CASE("symplectic completion") {
  int g = 3;
  SECTION("standard pair") {
    IntMat b = symplectic_complete({std_a(g, 1), std_b(g, 1)}, g);
    CHECK(is_standard_symplectic_gram(b));
    CHECK(b[0] == std_a(g, 1));
    CHECK(b[1] == std_b(g, 1));
  }
  SECTION("skew pair") {
    IntVec v = add_vec(std_a(g, 1), std_b(g, 2));
    IntMat b = symplectic_complete({v, std_b(g, 1)}, g);
    CHECK(is_standard_symplectic_gram(b));
    CHECK(b[0] == v);
    CHECK(b[1] == std_b(g, 1));
    Int d = det_int(b);
    CHECK((d == 1 || d == -1));
  }
  SECTION("strong isotropic pair occupies the a1 and a2 slots") {
    IntMat b = symplectic_complete({std_a(g, 1), std_a(g, 2)}, g);
    CHECK(is_standard_symplectic_gram(b));
    CHECK(b[0] == std_a(g, 1));
    CHECK(b[2] == std_a(g, 2));
  }
  SECTION("single primitive vector") {
    IntMat b = symplectic_complete({iv({1, 2, 3, 4, 5, 6})}, g);
    CHECK(is_standard_symplectic_gram(b));
    CHECK(b[0] == iv({1, 2, 3, 4, 5, 6}));
  }
  SECTION("rejections") {
    CHECK_THROWS_AS(symplectic_complete({scale_vec(Int(2), std_a(g, 1))}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(symplectic_complete({std_b(g, 1), std_a(g, 1)}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        symplectic_complete({std_a(g, 1), scale_vec(Int(2), std_a(g, 2))}, g),
        std::invalid_argument);
  }
  SECTION("random primitive prefixes") {
    std::mt19937 rng(66);
    for (int trial = 0; trial < 25; ++trial) {
      int gg = 1 + static_cast<int>(rng() % 4);
      IntVec v = random_primitive(rng, 2 * gg);
      IntMat b = symplectic_complete({v}, gg);
      CHECK(is_standard_symplectic_gram(b));
      CHECK(b[0] == v);
    }
  }
}

TEST_CASE("near symplectic structure") {
  int g = 3;
  auto one_one = near_symplectic_structure({std_a(g, 1), std_b(g, 1), std_a(g, 2)});
  REQUIRE(one_one.has_value());
  CHECK(one_one->genus == 1);
  CHECK(one_one->kernel_rank == 1);

  auto zero_two = near_symplectic_structure({std_a(g, 1), std_a(g, 2)});
  REQUIRE(zero_two.has_value());
  CHECK(zero_two->genus == 0);
  CHECK(zero_two->kernel_rank == 2);

  SECTION("adapted basis has the block form") {
    auto nss = near_symplectic_structure(
        {std_a(g, 1), add_vec(std_b(g, 1), std_a(g, 3)), std_a(g, 2)});
    REQUIRE(nss.has_value());
    const IntMat& ad = nss->adapted;
    int h = nss->genus;
    REQUIRE(static_cast<int>(ad.size()) == 2 * h + nss->kernel_rank);
    for (std::size_t i = 0; i < ad.size(); ++i)
      for (std::size_t j = 0; j < ad.size(); ++j) {
        Int expected = 0;
        if (i < 2 * static_cast<std::size_t>(h) && i % 2 == 0 && j == i + 1)
          expected = 1;
        if (i < 2 * static_cast<std::size_t>(h) && i % 2 == 1 && j == i - 1)
          expected = -1;
        CHECK(omega(ad[i], ad[j]) == expected);
      }
  }

  SECTION("non-summand input is rejected") {
    CHECK_THROWS_AS(near_symplectic_structure({scale_vec(Int(2), std_a(g, 1))}),
                    std::invalid_argument);
  }

  SECTION("non-unimodular induced form") {
    // span{a1, 2 b1 + a2} is a summand but the induced form has Gram [[0,2],[-2,0]].
    IntVec w = add_vec(scale_vec(Int(2), std_b(2, 1)), std_a(2, 2));
    auto nss = near_symplectic_structure({std_a(2, 1), w});
    CHECK(!nss.has_value());
  }

  SECTION("complement of an isotropic summand") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      int gg = 2 + static_cast<int>(rng() % 3);
      int k = 1 + static_cast<int>(rng() % gg);
      IntMat basis = symplectic_complete({random_primitive(rng, 2 * gg)}, gg);
      IntMat iso;
      for (int i = 0; i < k; ++i) iso.push_back(basis[2 * i]);
      auto nss = near_symplectic_structure(orthogonal_complement(iso));
      REQUIRE(nss.has_value());
      CHECK(nss->genus == gg - k);
      CHECK(nss->kernel_rank == k);
    }
  }
}

TEST_CASE("lagrangian-free summands and lagrangian construction") {
  int g = 4;
  IntMat lag;
  for (int i = 1; i <= g; ++i) lag.push_back(std_a(g, i));
  CHECK(!is_lagrangian_free(lag));
  CHECK(is_lagrangian_free({std_a(2, 1), std_b(2, 1)}));

  IntMat l = lagrangian_containing({std_a(g, 1), std_a(g, 2)},
                                   {std_a(g, 2), std_a(g, 3)}, g);
  CHECK(same_lattice(l, lag));
  REQUIRE(static_cast<int>(l.size()) == g);
  CHECK(is_partial_basis(l));
  for (const auto& u : l)
    for (const auto& w : l) CHECK(omega(u, w) == 0);

  CHECK_THROWS_AS(lagrangian_containing({std_a(g, 1)}, {std_b(g, 1)}, g),
                  std::invalid_argument);

  SECTION("random isotropic inputs") {
    std::mt19937 rng(88);
    for (int trial = 0; trial < 15; ++trial) {
      int gg = 2 + static_cast<int>(rng() % 3);
      IntMat basis = symplectic_complete({random_primitive(rng, 2 * gg)}, gg);
      IntMat i1 = {basis[0]};
      IntMat i2 = {basis[2]};
      IntMat out = lagrangian_containing(i1, i2, gg);
      REQUIRE(static_cast<int>(out.size()) == gg);
      CHECK(is_partial_basis(out));
      for (const auto& u : out)
        for (const auto& w : out) CHECK(omega(u, w) == 0);
      CHECK(in_q_span(basis[0], out));
      CHECK(in_q_span(basis[2], out));
    }
  }
}

TEST_CASE("strong isotropic factor") {
  int g = 3;
  auto unit = strong_isotropic_factor(std_a(g, 1), std_a(g, 2));
  CHECK(unit.n == 1);
  CHECK(same_lattice({unit.a0, unit.a0p}, {std_a(g, 1), std_a(g, 2)}));

  auto twice = strong_isotropic_factor(std_a(g, 1), scale_vec(Int(2), std_a(g, 2)));
  CHECK(twice.n == 2);
  CHECK(same_lattice({twice.a0, twice.a0p}, {std_a(g, 1), std_a(g, 2)}));

  auto four = strong_isotropic_factor(scale_vec(Int(2), std_a(g, 1)),
                                      scale_vec(Int(2), std_a(g, 2)));
  CHECK(four.n == 4);

  CHECK_THROWS_AS(strong_isotropic_factor(std_a(g, 1), std_b(g, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(strong_isotropic_factor(std_a(g, 1), scale_vec(Int(3), std_a(g, 1))),
                  std::invalid_argument);

  SECTION("wedge-coordinate comparison") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
      int gg = 2 + static_cast<int>(rng() % 3);
      IntVec a = random_primitive(rng, 2 * gg);
      std::uniform_int_distribution<int> entry(-3, 3);
      IntVec ap(2 * gg);
      for (auto& x : ap) x = entry(rng);
      if (omega(a, ap) != 0) continue;
      if (!in_q_span(ap, {a}) && !is_zero_vec(ap)) {
        auto f = strong_isotropic_factor(a, ap);
        CHECK(f.n > 0);
        CHECK(is_partial_basis({f.a0, f.a0p}));
        CHECK(wedge_coords(a, ap) == scale_vec(f.n, wedge_coords(f.a0, f.a0p)));
      }
    }
  }
}
