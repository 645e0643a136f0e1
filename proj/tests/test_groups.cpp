#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sympres/groups.hpp"

using namespace sympres;

namespace {

IntVec unit(int n, int i) {
  IntVec v(n, Int(0));
  v[i] = 1;
  return v;
}

SparseRow random_quotient_row(std::mt19937& rng, const GenusContext& ctx) {
  std::uniform_int_distribution<int> entry(-3, 3);
  SparseRow out;
  for (int q = 0; q < ctx.quotient_dim(); ++q)
    if (rng() % 3 == 0) {
      int e = entry(rng);
      if (e != 0) out.emplace_back(q, rat(e));
    }
  return out;
}

SparseRow omega_wedge_row(const GenusContext& ctx) {
  SparseRow out;
  for (int i = 0; i + 1 < ctx.n; i += 2)
    out.emplace_back(ctx.wedge_index[i][i + 1], rat(1));
  return out;
}

GroupElement random_sl2_in(std::mt19937& rng) {
  std::vector<GroupElement> gens = {elementary(2, 1, 2), elementary(2, 1, 2, -1),
                                    elementary(2, 2, 1), elementary(2, 2, 1, -1)};
  return random_word(gens, 4, rng);
}

}  // namespace

TEST_CASE("elementary matrices") {
  GroupElement e12 = elementary(3, 1, 2);
  CHECK(act(e12, unit(3, 1)) == add_vec(unit(3, 1), unit(3, 0)));
  CHECK(act(e12, unit(3, 2)) == unit(3, 2));
  CHECK(multiply(e12, elementary(3, 1, 2, -1)).m == identity_int(3));
  CHECK(group_inverse(e12).m == elementary(3, 1, 2, -1).m);
  CHECK_THROWS_AS(elementary(3, 2, 2), std::invalid_argument);

  CHECK(sl_element(e12.m).flavor == Flavor::SL);
  IntMat neg = identity_int(3);
  neg[0][0] = -1;
  CHECK_THROWS_AS(sl_element(neg), std::invalid_argument);
}

TEST_CASE("signed permutation subgroup") {
  auto g1 = symsp_members(1);
  CHECK(g1.size() == 4);
  auto g2 = symsp_members(2);
  CHECK(g2.size() == 32);

  std::vector<IntMat> mats;
  for (const auto& f : g2) {
    CHECK(preserves_omega(f.m));
    mats.push_back(f.m);
  }
  std::sort(mats.begin(), mats.end());
  CHECK(std::adjacent_find(mats.begin(), mats.end()) == mats.end());

  CHECK(std::find(mats.begin(), mats.end(), identity_int(4)) != mats.end());
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto& a = g2[rng() % g2.size()];
    const auto& b = g2[rng() % g2.size()];
    CHECK(std::binary_search(mats.begin(), mats.end(), multiply(a, b).m));
  }
}

TEST_CASE("shear generators") {
  int g = 2;
  GroupElement x1 = x_element(g, 1);
  CHECK(act(x1, std_a(g, 1)) == add_vec(std_a(g, 1), std_b(g, 1)));
  CHECK(act(x1, std_b(g, 1)) == std_b(g, 1));
  CHECK(act(x1, std_a(g, 2)) == std_a(g, 2));

  GroupElement y12 = y_element(g, 1, 2);
  CHECK(act(y12, std_a(g, 1)) == add_vec(std_a(g, 1), std_b(g, 2)));
  CHECK(act(y12, std_a(g, 2)) == add_vec(std_a(g, 2), std_b(g, 1)));
  CHECK(act(y12, std_b(g, 1)) == std_b(g, 1));
  CHECK(act(y12, std_b(g, 2)) == std_b(g, 2));

  GroupElement sigma = sigma_element(g);
  CHECK(group_inverse(y12).m ==
        multiply(multiply(sigma, y12), sigma).m);

  CHECK(preserves_omega(x1.m));
  CHECK(preserves_omega(y12.m));
  CHECK(preserves_omega(sigma.m));
}

TEST_CASE("generating set invariants") {
  GeneratorSet hr = hua_reiner(2);
  CHECK(hr.members.size() == 34);
  for (const auto& f : hr.members) {
    CHECK(preserves_omega(f.m));
    CHECK(det_int(f.m) == 1);
  }

  GeneratorSet mon = monoid_generators(2);
  CHECK(mon.members.size() == 35);
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    GroupElement w = random_word(mon.members, 1 + static_cast<int>(rng() % 6), rng);
    CHECK(preserves_omega(w.m));
    CHECK(det_int(w.m) == 1);
    CHECK(multiply(w, group_inverse(w)).m == identity_int(4));
  }
}

TEST_CASE("induced actions") {
  int g = 3;
  GenusContext ctx(g);
  GeneratorSet mon = monoid_generators(g);
  std::mt19937 rng(19);

  SECTION("wedge images of shears") {
    GenusContext c2(2);
    GroupElement x1 = x_element(2, 1);
    SparseRow lhs = act_wedge(c2, x1, wedge_of(c2, std_a(2, 1), std_a(2, 2)));
    SparseRow rhs = wedge_of(c2, add_vec(std_a(2, 1), std_b(2, 1)), std_a(2, 2));
    CHECK(lhs == rhs);
  }

  SECTION("omega row is fixed") {
    for (int t = 0; t < 10; ++t) {
      GroupElement w = random_word(mon.members, 3, rng);
      CHECK(act_wedge(ctx, w, omega_wedge_row(ctx)) == omega_wedge_row(ctx));
    }
  }

  SECTION("functoriality") {
    for (int t = 0; t < 10; ++t) {
      GroupElement f1 = random_word(mon.members, 3, rng);
      GroupElement f2 = random_word(mon.members, 3, rng);
      GroupElement f12 = multiply(f1, f2);

      IntVec v(2 * g);
      for (auto& e : v) e = static_cast<int>(rng() % 7) - 3;
      CHECK(act(f12, v) == act(f1, act(f2, v)));

      SparseRow k = random_quotient_row(rng, ctx);
      CHECK(act_class(ctx, f12, k) == act_class(ctx, f1, act_class(ctx, f2, k)));

      SparseRow w = class_lift(ctx, k);
      CHECK(act_class(ctx, f1, to_wedge_class(ctx, w)) ==
            to_wedge_class(ctx, act_wedge(ctx, f1, w)));

      SparseRow s = sym_product(ctx, v, act(f2, v));
      CHECK(act_sym(ctx, f12, s) == act_sym(ctx, f1, act_sym(ctx, f2, s)));
    }
  }

  SECTION("contraction is equivariant") {
    for (int t = 0; t < 10; ++t) {
      GroupElement f = random_word(mon.members, 4, rng);
      SparseRow k1 = random_quotient_row(rng, ctx);
      SparseRow k2 = random_quotient_row(rng, ctx);
      CHECK(contraction(ctx, act_class(ctx, f, k1), act_class(ctx, f, k2)) ==
            act_sym(ctx, f, contraction(ctx, k1, k2)));
    }
  }
}

TEST_CASE("stabilizer factorization") {
  int g = 3;
  IntMat iso1 = {std_a(g, 3)};
  IntMat x4 = {std_a(g, 1), std_b(g, 1), std_a(g, 2), std_b(g, 2)};

  SECTION("identity") {
    StabilizerFactor fac =
        stabilizer_factor(group_identity(Flavor::Sp, 2 * g), iso1, x4);
    CHECK(fac.s == identity_int(4));
    CHECK(fac.lambda == int_mat(1, 4));
  }

  SECTION("pure shear") {
    IntMat lambda = {{Int(1), Int(-2), Int(0), Int(3)}};
    GroupElement f = stabilizer_extend(iso1, x4, lambda, identity_int(4));
    for (const auto& row : iso1) CHECK(act(f, row) == row);
    for (int j = 0; j < 4; ++j)
      CHECK(act(f, x4[j]) ==
            add_vec(x4[j], scale_vec(lambda[0][j], iso1[0])));
    StabilizerFactor fac = stabilizer_factor(f, iso1, x4);
    CHECK(fac.lambda == lambda);
    CHECK(fac.s == identity_int(4));
  }

  SECTION("pure quotient action") {
    std::mt19937 rng(29);
    GeneratorSet mon = monoid_generators(2);
    for (int t = 0; t < 5; ++t) {
      GroupElement s = random_word(mon.members, 4, rng);
      GroupElement f = stabilizer_extend(iso1, x4, int_mat(1, 4), s.m);
      CHECK(act(f, std_b(g, 3)) == std_b(g, 3));
      StabilizerFactor fac = stabilizer_factor(f, iso1, x4);
      CHECK(fac.lambda == int_mat(1, 4));
      CHECK(fac.s == s.m);
    }
  }

  SECTION("rank-two isotropic part needs the pairing correction") {
    IntMat iso2 = {std_a(g, 2), std_a(g, 3)};
    IntMat x2 = {std_a(g, 1), std_b(g, 1)};
    IntMat lambda = {{Int(1), Int(0)}, {Int(0), Int(1)}};
    GroupElement f = stabilizer_extend(iso2, x2, lambda, identity_int(2));
    CHECK(preserves_omega(f.m));
    StabilizerFactor fac = stabilizer_factor(f, iso2, x2);
    CHECK(fac.lambda == lambda);
    CHECK(fac.s == identity_int(2));
  }

  SECTION("round trip in conjugated coordinates") {
    std::mt19937 rng(37);
    GeneratorSet mon3 = monoid_generators(3);
    IntMat iso2 = {std_a(g, 2), std_a(g, 3)};
    IntMat x2 = {std_a(g, 1), std_b(g, 1)};
    for (int t = 0; t < 5; ++t) {
      GroupElement h = random_word(mon3.members, 4, rng);
      IntMat iso_c, x_c;
      for (const auto& r : iso2) iso_c.push_back(act(h, r));
      for (const auto& r : x2) x_c.push_back(act(h, r));

      IntMat lambda = int_mat(2, 2);
      for (auto& row : lambda)
        for (auto& e : row) e = static_cast<int>(rng() % 7) - 3;
      GroupElement s = random_sl2_in(rng);

      GroupElement f = stabilizer_extend(iso_c, x_c, lambda, s.m);
      StabilizerFactor fac = stabilizer_factor(f, iso_c, x_c);
      CHECK(fac.lambda == lambda);
      CHECK(fac.s == s.m);
      GroupElement f2 = stabilizer_extend(iso_c, x_c, fac.lambda, fac.s);
      CHECK(f2.m == f.m);
      for (std::size_t j = 0; j < x_c.size(); ++j)
        CHECK(act(f, x_c[j]) ==
              stabilizer_apply(iso_c, x_c, fac, static_cast<int>(j)));
    }
  }

  SECTION("errors") {
    CHECK_THROWS_AS(stabilizer_factor(x_element(g, 3), iso1, x4),
                    std::invalid_argument);
    IntMat short_x = {std_a(g, 1), std_b(g, 1)};
    CHECK_THROWS_AS(
        stabilizer_factor(group_identity(Flavor::Sp, 2 * g), iso1, short_x),
        std::invalid_argument);
  }
}
