#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympres/lattice.hpp"
#include "sympres/normal_forms.hpp"
#include "sympres/wedge.hpp"

namespace sympres {

enum class Flavor { SL, Sp };

// Integer matrix acting on column vectors.
struct GroupElement {
  Flavor flavor = Flavor::SL;
  IntMat m;

  int dim() const { return static_cast<int>(m.size()); }
  int genus() const { return dim() / 2; }

  bool operator==(const GroupElement& o) const {
    return flavor == o.flavor && m == o.m;
  }
};

inline IntVec column_of(const IntMat& m, int j) {
  IntVec out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i][j];
  return out;
}

inline bool preserves_omega(const IntMat& m) {
  int n = static_cast<int>(m.size());
  if (n % 2 != 0) return false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Int expected = omega_sign(i, j);
      if (omega(column_of(m, i), column_of(m, j)) != expected) return false;
    }
  return true;
}

inline GroupElement sl_element(IntMat m) {
  if (det_int(m) != 1)
    throw std::invalid_argument("sl_element: determinant is not 1");
  return {Flavor::SL, std::move(m)};
}

inline GroupElement sp_element(IntMat m) {
  if (!preserves_omega(m))
    throw std::invalid_argument("sp_element: matrix does not preserve omega");
  return {Flavor::Sp, std::move(m)};
}

inline GroupElement group_identity(Flavor flavor, int n) {
  return {flavor, identity_int(n)};
}

// E_ij: identity plus sign at position (i, j), 1-indexed; sends e_j to
// e_j + sign * e_i and fixes the other basis vectors.
inline GroupElement elementary(int n, int i, int j, int sign = 1) {
  if (i == j) throw std::invalid_argument("elementary: equal indices");
  if (i < 1 || j < 1 || i > n || j > n)
    throw std::invalid_argument("elementary: index out of range");
  IntMat m = identity_int(n);
  m[i - 1][j - 1] = sign;
  return {Flavor::SL, std::move(m)};
}

inline GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  if (a.flavor != b.flavor || a.dim() != b.dim())
    throw std::invalid_argument("multiply: incompatible elements");
  return {a.flavor, mat_mul_int(a.m, b.m)};
}

inline GroupElement group_inverse(const GroupElement& a) {
  return {a.flavor, int_inverse(a.m)};
}

inline IntVec act(const GroupElement& f, const IntVec& v) {
  if (static_cast<int>(v.size()) != f.dim())
    throw std::invalid_argument("act: dimension mismatch");
  return mat_apply_int(f.m, v);
}

inline SparseRow act_wedge(const GenusContext& ctx, const GroupElement& f,
                           const SparseRow& w) {
  if (f.dim() != ctx.n) throw std::invalid_argument("act_wedge: dimension mismatch");
  SparseRow acc;
  for (const auto& [idx, c] : w) {
    const auto& [i, j] = ctx.wedge_pairs[idx];
    acc = row_axpy(acc, c, wedge_of(ctx, column_of(f.m, i), column_of(f.m, j)));
  }
  return acc;
}

inline SparseRow act_sym(const GenusContext& ctx, const GroupElement& f,
                         const SparseRow& s) {
  if (f.dim() != ctx.n) throw std::invalid_argument("act_sym: dimension mismatch");
  SparseRow acc;
  for (const auto& [idx, c] : s) {
    const auto& [i, j] = ctx.sym_pairs[idx];
    acc = row_axpy(acc, c, sym_product(ctx, column_of(f.m, i), column_of(f.m, j)));
  }
  return acc;
}

inline SparseRow act_class(const GenusContext& ctx, const GroupElement& f,
                           const SparseRow& klass) {
  return to_wedge_class(ctx, act_wedge(ctx, f, class_lift(ctx, klass)));
}

// X_i: a_i -> a_i + b_i, fixing the rest of the basis.
inline GroupElement x_element(int g, int i) {
  IntMat m = identity_int(2 * g);
  m[2 * i - 1][2 * i - 2] = 1;
  return {Flavor::Sp, std::move(m)};
}

// Y_ij: a_i -> a_i + b_j and a_j -> a_j + b_i, fixing the rest of the basis.
inline GroupElement y_element(int g, int i, int j) {
  if (i == j) throw std::invalid_argument("y_element: equal indices");
  IntMat m = identity_int(2 * g);
  m[2 * j - 1][2 * i - 2] = 1;
  m[2 * i - 1][2 * j - 2] = 1;
  return {Flavor::Sp, std::move(m)};
}

// Negates a_1 and b_1, fixing the rest of the basis.
inline GroupElement sigma_element(int g) {
  IntMat m = identity_int(2 * g);
  m[0][0] = -1;
  m[1][1] = -1;
  return {Flavor::Sp, std::move(m)};
}

// All f in Sp_2g(Z) sending every basis vector into the basis up to sign: a
// permutation p of the index pairs plus one of four signed options per pair.
// Enumerated for g <= 4, sampled with a fixed seed above that.
inline std::vector<GroupElement> symsp_members(int g) {
  if (g < 1) throw std::invalid_argument("symsp_members: genus must be positive");
  auto build = [&](const std::vector<int>& perm, long choice) {
    IntMat m = int_mat(2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
      int t = perm[i];
      int c = static_cast<int>(choice % 4);
      choice /= 4;
      switch (c) {
        case 0:
          m[2 * t][2 * i] = 1;
          m[2 * t + 1][2 * i + 1] = 1;
          break;
        case 1:
          m[2 * t][2 * i] = -1;
          m[2 * t + 1][2 * i + 1] = -1;
          break;
        case 2:
          m[2 * t + 1][2 * i] = 1;
          m[2 * t][2 * i + 1] = -1;
          break;
        default:
          m[2 * t + 1][2 * i] = -1;
          m[2 * t][2 * i + 1] = 1;
          break;
      }
    }
    return GroupElement{Flavor::Sp, std::move(m)};
  };

  std::vector<GroupElement> out;
  if (g <= 4) {
    std::vector<int> perm(g);
    std::iota(perm.begin(), perm.end(), 0);
    long options = 1;
    for (int i = 0; i < g; ++i) options *= 4;
    do {
      for (long choice = 0; choice < options; ++choice)
        out.push_back(build(perm, choice));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  std::mt19937 rng(12345);
  std::vector<int> perm(g);
  for (int t = 0; t < 512; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    long choice = 0;
    for (int i = 0; i < g; ++i) choice = choice * 4 + rng() % 4;
    out.push_back(build(perm, choice));
  }
  return out;
}

struct GeneratorSet {
  std::vector<std::string> labels;
  std::vector<GroupElement> members;

  void add(std::string label, GroupElement f) {
    labels.push_back(std::move(label));
    members.push_back(std::move(f));
  }
};

inline GeneratorSet hua_reiner(int g) {
  GeneratorSet out;
  std::vector<GroupElement> symsp = symsp_members(g);
  for (std::size_t i = 0; i < symsp.size(); ++i)
    out.add("symsp:" + std::to_string(i), std::move(symsp[i]));
  out.add("x1", x_element(g, 1));
  if (g >= 2) out.add("y12", y_element(g, 1, 2));
  return out;
}

// Monoid generating set: SymSp plus X1, X1^{-1}, Y12.
inline GeneratorSet monoid_generators(int g) {
  GeneratorSet out = hua_reiner(g);
  out.add("x1inv", group_inverse(x_element(g, 1)));
  return out;
}

inline GroupElement random_word(const std::vector<GroupElement>& gens, int len,
                                std::mt19937& rng) {
  if (gens.empty()) throw std::invalid_argument("random_word: empty generator set");
  GroupElement out = group_identity(gens[0].flavor, gens[0].dim());
  for (int i = 0; i < len; ++i)
    out = multiply(out, gens[rng() % gens.size()]);
  return out;
}

// Factorization of the restriction of f to the orthogonal complement of an
// isotropic summand: f acts there as s on the chosen symplectic complement x
// followed by the shear x -> x + lambda(x) into the isotropic part.  Columns
// of s hold coordinates over the rows of x; columns of lambda hold
// coordinates over the rows of iso.
struct StabilizerFactor {
  IntMat lambda;
  IntMat s;
};

namespace detail {

inline IntMat omega_gram(const IntMat& rows) {
  int r = static_cast<int>(rows.size());
  IntMat g = int_mat(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) g[i][j] = omega(rows[i], rows[j]);
  return g;
}

inline void check_stabilizer_setup(const IntMat& iso, const IntMat& x) {
  if (iso.empty() || x.empty())
    throw std::invalid_argument("stabilizer: empty summand");
  IntMat joined = x;
  joined.insert(joined.end(), iso.begin(), iso.end());
  if (!same_lattice(joined, orthogonal_complement(iso)))
    throw std::invalid_argument(
        "stabilizer: complement rows plus isotropic rows must span the "
        "orthogonal complement");
  auto nss = near_symplectic_structure(x);
  if (!nss || nss->kernel_rank != 0)
    throw std::invalid_argument("stabilizer: x is not a symplectic summand");
}

}  // namespace detail

inline StabilizerFactor stabilizer_factor(const GroupElement& f,
                                          const IntMat& iso, const IntMat& x) {
  if (f.flavor != Flavor::Sp)
    throw std::invalid_argument("stabilizer_factor: element is not symplectic");
  detail::check_stabilizer_setup(iso, x);
  for (const auto& row : iso)
    if (act(f, row) != row)
      throw std::invalid_argument(
          "stabilizer_factor: element does not fix the isotropic summand");

  int xr = static_cast<int>(x.size());
  int k = static_cast<int>(iso.size());
  IntMat joined = x;
  joined.insert(joined.end(), iso.begin(), iso.end());
  IntMat solve_in = transpose_int(joined);

  IntMat s = int_mat(xr, xr);
  IntMat ls = int_mat(k, xr);
  for (int j = 0; j < xr; ++j) {
    auto c = integer_solve(solve_in, act(f, x[j]));
    if (!c)
      throw std::invalid_argument(
          "stabilizer_factor: image leaves the orthogonal complement");
    for (int p = 0; p < xr; ++p) s[p][j] = (*c)[p];
    for (int q = 0; q < k; ++q) ls[q][j] = (*c)[xr + q];
  }

  IntMat gram = detail::omega_gram(x);
  if (mat_mul_int(mat_mul_int(transpose_int(s), gram), s) != gram)
    throw std::logic_error("stabilizer_factor: quotient action is not symplectic");
  return {mat_mul_int(ls, int_inverse(s)), std::move(s)};
}

// Builds the element of Sp_2g(Z) fixing iso pointwise whose restriction to
// the orthogonal complement factors as the given (lambda, s): s on x extended
// by the identity, then the shear determined by lambda extended symplectically
// through a dual basis of the isotropic part.
inline GroupElement stabilizer_extend(const IntMat& iso, const IntMat& x,
                                      const IntMat& lambda, const IntMat& s) {
  detail::check_stabilizer_setup(iso, x);
  int xr = static_cast<int>(x.size());
  int k = static_cast<int>(iso.size());
  int n = static_cast<int>(x[0].size());
  if (static_cast<int>(s.size()) != xr ||
      static_cast<int>(lambda.size()) != k ||
      (k > 0 && static_cast<int>(lambda[0].size()) != xr))
    throw std::invalid_argument("stabilizer_extend: shape mismatch");
  IntMat gram = detail::omega_gram(x);
  if (mat_mul_int(mat_mul_int(transpose_int(s), gram), s) != gram)
    throw std::invalid_argument("stabilizer_extend: s is not symplectic on x");

  IntMat xperp = orthogonal_complement(x);

  // s on x, identity on the complement of x.
  IntMat p_rows = x;
  p_rows.insert(p_rows.end(), xperp.begin(), xperp.end());
  IntMat p = transpose_int(p_rows);
  IntMat d = identity_int(n);
  for (int i = 0; i < xr; ++i)
    for (int j = 0; j < xr; ++j) d[i][j] = s[i][j];
  GroupElement fs = sp_element(mat_mul_int(mat_mul_int(p, d), int_inverse(p)));

  // Shear part, built per the dual-basis construction: express iso inside
  // x-perp, complete to a symplectic frame there, and push the correction
  // delta onto the dual vectors.
  auto nss = near_symplectic_structure(xperp);
  if (!nss || nss->kernel_rank != 0)
    throw std::invalid_argument("stabilizer_extend: x-perp is not symplectic");
  IntMat adapted = nss->adapted;
  IntMat adapted_t = transpose_int(adapted);
  IntMat iso_coords;
  for (const auto& row : iso) {
    auto c = integer_solve(adapted_t, row);
    if (!c)
      throw std::invalid_argument("stabilizer_extend: iso does not lie in x-perp");
    iso_coords.push_back(*c);
  }
  IntMat frame = mat_mul_int(symplectic_frame_of_lagrangian(iso_coords), adapted);

  IntMat basis = x;
  IntMat images;
  for (int j = 0; j < xr; ++j) {
    IntVec img = x[j];
    for (int q = 0; q < k; ++q)
      img = add_vec(img, scale_vec(lambda[q][j], iso[q]));
    images.push_back(std::move(img));
  }
  for (int q = 0; q < k; ++q) {
    basis.push_back(frame[2 * q]);  // the iso rows themselves
    images.push_back(frame[2 * q]);
  }
  IntMat deltas;
  for (int q = 0; q < k; ++q) {
    IntVec rhs(xr);
    for (int pidx = 0; pidx < xr; ++pidx) rhs[pidx] = -lambda[q][pidx];
    auto e = integer_solve(gram, rhs);
    if (!e)
      throw std::logic_error("stabilizer_extend: delta system has no solution");
    IntVec d0(n, Int(0));
    for (int u = 0; u < xr; ++u) d0 = add_vec(d0, scale_vec((*e)[u], x[u]));
    deltas.push_back(std::move(d0));
  }
  for (int q = 0; q < k; ++q) {
    IntVec img = add_vec(frame[2 * q + 1], deltas[q]);
    // The deltas need not pair to zero among themselves; push the defect onto
    // the isotropic rows, which leaves the restriction untouched.
    for (int r = q + 1; r < k; ++r)
      img = add_vec(img, scale_vec(-omega(deltas[q], deltas[r]), iso[r]));
    basis.push_back(frame[2 * q + 1]);
    images.push_back(std::move(img));
  }
  IntMat fl = mat_mul_int(transpose_int(images),
                          int_inverse(transpose_int(basis)));
  return multiply(sp_element(std::move(fl)), fs);
}

// Restriction semantics of a factored pair on the complement rows: x_j maps
// to s(x_j) + lambda(s(x_j)).
inline IntVec stabilizer_apply(const IntMat& iso, const IntMat& x,
                               const StabilizerFactor& fac, int j) {
  int xr = static_cast<int>(x.size());
  IntVec img(x[0].size(), Int(0));
  for (int p = 0; p < xr; ++p)
    if (fac.s[p][j] != 0) img = add_vec(img, scale_vec(fac.s[p][j], x[p]));
  IntVec sx_coords = column_of(fac.s, j);
  IntVec lam = mat_apply_int(fac.lambda, sx_coords);
  for (std::size_t q = 0; q < iso.size(); ++q)
    img = add_vec(img, scale_vec(lam[q], iso[q]));
  return img;
}

}  // namespace sympres
