#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympres/lattice.hpp"
#include "sympres/matrix.hpp"

namespace sympres {

// omega(e_i, e_j) for the standard basis a_1=e_0, b_1=e_1, a_2=e_2, ...
inline int omega_sign(int i, int j) {
  if (i % 2 == 0 && j == i + 1) return 1;
  if (j % 2 == 0 && i == j + 1) return -1;
  return 0;
}

// Index bookkeeping for wedge and symmetric squares of H = Q^{2g} and for the
// quotient (wedge^2 H)/Q, whose canonical basis drops the a_g^b_g slot.
struct GenusContext {
  int g = 0;
  int n = 0;  // 2g
  std::vector<std::pair<int, int>> wedge_pairs;  // i < j, lex order
  std::vector<std::vector<int>> wedge_index;
  std::vector<std::pair<int, int>> sym_pairs;  // i <= j, lex order
  std::vector<std::vector<int>> sym_index;
  int omega_slot = -1;                // wedge index of (2g-2, 2g-1)
  std::vector<int> quotient_of_wedge;  // -1 at the omega slot
  std::vector<int> wedge_of_quotient;

  explicit GenusContext(int genus) : g(genus), n(2 * genus) {
    wedge_index.assign(n, std::vector<int>(n, -1));
    sym_index.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        wedge_index[i][j] = static_cast<int>(wedge_pairs.size());
        wedge_index[j][i] = wedge_index[i][j];
        wedge_pairs.emplace_back(i, j);
      }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        sym_index[i][j] = static_cast<int>(sym_pairs.size());
        sym_index[j][i] = sym_index[i][j];
        sym_pairs.emplace_back(i, j);
      }
    omega_slot = wedge_index[n - 2][n - 1];
    quotient_of_wedge.assign(wedge_pairs.size(), -1);
    for (std::size_t w = 0; w < wedge_pairs.size(); ++w) {
      if (static_cast<int>(w) == omega_slot) continue;
      quotient_of_wedge[w] = static_cast<int>(wedge_of_quotient.size());
      wedge_of_quotient.push_back(static_cast<int>(w));
    }
  }

  int wedge_dim() const { return static_cast<int>(wedge_pairs.size()); }
  int quotient_dim() const { return wedge_dim() - 1; }
  int sym_dim() const { return static_cast<int>(sym_pairs.size()); }
};

// Coordinates of x ^ y on the wedge basis.
inline SparseRow wedge_of(const GenusContext& ctx, const IntVec& x,
                          const IntVec& y) {
  SparseRow out;
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i + 1; j < ctx.n; ++j) {
      Int c = x[i] * y[j] - x[j] * y[i];
      if (c != 0) out.emplace_back(ctx.wedge_index[i][j], Rat(c));
    }
  return out;
}

// Canonical quotient coordinates: subtract the multiple of omega that kills
// the a_g^b_g coefficient, then drop that slot.
inline SparseRow to_wedge_class(const GenusContext& ctx, const SparseRow& w) {
  Rat lambda(0);
  for (const auto& [idx, c] : w)
    if (idx == ctx.omega_slot) lambda = c;
  SparseRow out;
  for (const auto& [idx, c] : w) {
    if (idx == ctx.omega_slot) continue;
    const auto& [i, j] = ctx.wedge_pairs[idx];
    Rat v = c;
    if (i % 2 == 0 && j == i + 1) v -= lambda;
    if (!is_zero(v)) out.emplace_back(ctx.quotient_of_wedge[idx], v);
  }
  if (!is_zero(lambda)) {
    // a_i^b_i slots absent from w still receive -lambda.
    for (int i = 0; i + 1 < ctx.n - 2; i += 2) {
      int widx = ctx.wedge_index[i][i + 1];
      bool present = false;
      for (const auto& [idx, c] : w)
        if (idx == widx) present = true;
      if (!present) out.emplace_back(ctx.quotient_of_wedge[widx], -lambda);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return out;
}

inline SparseRow class_of_pair(const GenusContext& ctx, const IntVec& x,
                               const IntVec& y) {
  return to_wedge_class(ctx, wedge_of(ctx, x, y));
}

// Lift quotient coordinates to the canonical wedge representative.
inline SparseRow class_lift(const GenusContext& ctx, const SparseRow& klass) {
  SparseRow out;
  for (const auto& [q, c] : klass) out.emplace_back(ctx.wedge_of_quotient[q], c);
  return out;
}

// x . y in Sym^2 H.
inline SparseRow sym_product(const GenusContext& ctx, const IntVec& x,
                             const IntVec& y) {
  SparseRow out;
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i; j < ctx.n; ++j) {
      Int c = x[i] * y[j] + x[j] * y[i];
      if (i == j) c = x[i] * y[i];
      if (c != 0) out.emplace_back(ctx.sym_index[i][j], Rat(c));
    }
  return out;
}

// Contraction of two wedge basis elements, as a Sym^2 H row.
inline SparseRow contraction_basis(const GenusContext& ctx, int w1, int w2) {
  const auto& [x, y] = ctx.wedge_pairs[w1];
  const auto& [z, w] = ctx.wedge_pairs[w2];
  SparseRow out;
  auto add_term = [&](int sign, int p, int q) {
    if (sign == 0) return;
    out.emplace_back(ctx.sym_index[p][q], Rat(sign));
  };
  add_term(omega_sign(x, z), y, w);
  add_term(-omega_sign(x, w), y, z);
  add_term(-omega_sign(y, z), x, w);
  add_term(omega_sign(y, w), x, z);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow merged;
  for (const auto& [idx, c] : out) {
    if (!merged.empty() && merged.back().first == idx)
      merged.back().second += c;
    else
      merged.emplace_back(idx, c);
  }
  SparseRow clean;
  for (const auto& [idx, c] : merged)
    if (!is_zero(c)) clean.emplace_back(idx, c);
  return clean;
}

// Contraction of two quotient classes (well defined: the formula kills omega).
inline SparseRow contraction(const GenusContext& ctx, const SparseRow& k1,
                             const SparseRow& k2) {
  SparseRow acc;
  for (const auto& [q1, c1] : k1)
    for (const auto& [q2, c2] : k2) {
      SparseRow term = contraction_basis(ctx, ctx.wedge_of_quotient[q1],
                                         ctx.wedge_of_quotient[q2]);
      acc = row_axpy(acc, c1 * c2, term);
    }
  return acc;
}

enum class PairTag {
  Symplectic,
  AntiSymplectic,
  IsotropicStrong,
  IsotropicNonstrong,
  Zero,
  NotSpecial,
};

struct PairClass {
  PairTag tag = PairTag::Zero;
  Int n = 0;       // isotropic factor, when applicable
  IntMat saturated;  // saturation of the span, when applicable
};

inline PairClass classify_pair(const IntVec& x, const IntVec& y) {
  PairClass out;
  IntMat span = {x, y};
  if (saturation(span).basis.size() < 2) {
    out.tag = PairTag::Zero;
    return out;
  }
  Int w = omega(x, y);
  if (w == 1) {
    out.tag = PairTag::Symplectic;
    return out;
  }
  if (w == -1) {
    out.tag = PairTag::AntiSymplectic;
    return out;
  }
  if (w != 0) {
    out.tag = PairTag::NotSpecial;
    return out;
  }
  StrongIsotropicFactor f = strong_isotropic_factor(x, y);
  out.n = f.n;
  out.saturated = {f.a0, f.a0p};
  out.tag = f.n == 1 ? PairTag::IsotropicStrong : PairTag::IsotropicNonstrong;
  return out;
}

// Basis of the sym-orthogonal complement of a symplectic or isotropic pair:
// the image of wedge^2 of the omega-complement of the span.
inline std::vector<SparseRow> sym_orth_basis(const GenusContext& ctx,
                                             const IntVec& x, const IntVec& y) {
  PairClass cls = classify_pair(x, y);
  if (cls.tag == PairTag::Zero || cls.tag == PairTag::NotSpecial)
    throw std::invalid_argument("sym_orth_basis: pair is not symplectic or isotropic");
  IntMat comp = orthogonal_complement(saturation({x, y}).basis);
  std::vector<SparseRow> out;
  for (std::size_t p = 0; p < comp.size(); ++p)
    for (std::size_t q = p + 1; q < comp.size(); ++q)
      out.push_back(class_of_pair(ctx, comp[p], comp[q]));
  return out;
}

using SymplecticPairTerm = std::pair<Rat, std::pair<IntVec, IntVec>>;

// Rewrites a class in the wedge of a near-symplectic summand as a rational
// combination of symplectic pairs inside the summand. variant selects which
// slot is expanded first where both choices are available, giving an
// independent decomposition for cross-checks.
inline std::vector<SymplecticPairTerm> decompose_into_symplectic_pairs(
    const GenusContext& ctx, const SparseRow& klass,
    const NearSymplecticStructure& x, int variant = 0) {
  if (x.genus < 1)
    throw std::invalid_argument("decompose_into_symplectic_pairs: genus-0 summand");
  const IntMat& ad = x.adapted;
  int r = static_cast<int>(ad.size());
  int h2 = 2 * x.genus;

  std::vector<std::pair<int, int>> idx_pairs;
  for (int p = 0; p < r; ++p)
    for (int q = p + 1; q < r; ++q) idx_pairs.emplace_back(p, q);

  RationalMatrix span(ctx.quotient_dim(), static_cast<int>(idx_pairs.size()));
  for (std::size_t col = 0; col < idx_pairs.size(); ++col) {
    SparseRow cls = class_of_pair(ctx, ad[idx_pairs[col].first],
                                  ad[idx_pairs[col].second]);
    for (const auto& [row, c] : cls)
      span.set(row, static_cast<int>(col), span.at(row, static_cast<int>(col)) + c);
  }
  auto sol = membership(make_dense(klass, ctx.quotient_dim()), span);
  if (!sol)
    throw std::invalid_argument(
        "decompose_into_symplectic_pairs: class lies outside the summand's wedge");

  std::vector<SymplecticPairTerm> out;
  auto emit_half_anchor = [&](const Rat& c, int p, const IntVec& v) {
    // ad[p] is half of a symplectic pair of the adapted basis; v pairs to 0.
    int i = p / 2;
    IntVec partner = p % 2 == 0 ? ad[2 * i + 1] : scale_vec(Int(-1), ad[2 * i]);
    out.emplace_back(c, std::make_pair(ad[p], add_vec(partner, v)));
    out.emplace_back(-c, std::make_pair(ad[p], partner));
  };

  for (std::size_t col = 0; col < idx_pairs.size(); ++col) {
    Rat c = (*sol)[col];
    if (is_zero(c)) continue;
    auto [p, q] = idx_pairs[col];
    bool p_half = p < h2;
    bool q_half = q < h2;
    if (p_half && q_half && p / 2 == q / 2) {
      out.emplace_back(c, std::make_pair(ad[p], ad[q]));
    } else if (p_half && q_half) {
      if (variant == 0)
        emit_half_anchor(c, p, ad[q]);
      else
        emit_half_anchor(-c, q, ad[p]);
    } else if (p_half) {
      emit_half_anchor(c, p, ad[q]);
    } else if (q_half) {
      emit_half_anchor(-c, q, ad[p]);
    } else {
      const IntVec& u = variant == 0 ? ad[p] : ad[q];
      const IntVec& v = variant == 0 ? ad[q] : ad[p];
      Rat s = c;
      if (variant != 0) s = -s;
      const IntVec& a1 = ad[0];
      const IntVec& b1 = ad[1];
      out.emplace_back(s, std::make_pair(add_vec(a1, u), add_vec(b1, v)));
      out.emplace_back(-s, std::make_pair(a1, add_vec(b1, v)));
      out.emplace_back(-s, std::make_pair(add_vec(a1, u), b1));
      out.emplace_back(s, std::make_pair(a1, b1));
    }
  }
  return out;
}

// Matrix of the contraction on the alternating square of the quotient: row
// (p<q) holds c(q_p, q_q) in Sym^2 H coordinates.
inline RationalMatrix contraction_wedge_matrix(const GenusContext& ctx) {
  int qd = ctx.quotient_dim();
  RationalMatrix m(qd * (qd - 1) / 2, ctx.sym_dim());
  int row = 0;
  for (int p = 0; p < qd; ++p)
    for (int q = p + 1; q < qd; ++q) {
      m.set_row(row, contraction_basis(ctx, ctx.wedge_of_quotient[p],
                                       ctx.wedge_of_quotient[q]));
      ++row;
    }
  return m;
}

// Matrix of the contraction on ordered pairs (the tensor square).
inline RationalMatrix contraction_tensor_matrix(const GenusContext& ctx) {
  int qd = ctx.quotient_dim();
  RationalMatrix m(qd * qd, ctx.sym_dim());
  for (int p = 0; p < qd; ++p)
    for (int q = 0; q < qd; ++q)
      m.set_row(p * qd + q, contraction_basis(ctx, ctx.wedge_of_quotient[p],
                                              ctx.wedge_of_quotient[q]));
  return m;
}

inline int contraction_wedge_kernel_dim(const GenusContext& ctx) {
  RationalMatrix m = contraction_wedge_matrix(ctx);
  return m.rows() - rref(m).rank;
}

inline int contraction_tensor_kernel_dim(const GenusContext& ctx) {
  RationalMatrix m = contraction_tensor_matrix(ctx);
  return m.rows() - rref(m).rank;
}

// Index helpers for the square spaces over quotient coordinates.
inline int quotient_wedge_pair_index(const GenusContext& ctx, int p, int q) {
  // p < q, lex order over the quotient basis
  int qd = ctx.quotient_dim();
  return p * qd - p * (p + 1) / 2 + (q - p - 1);
}

inline int quotient_sym_pair_index(const GenusContext& ctx, int p, int q) {
  // p <= q
  int qd = ctx.quotient_dim();
  return p * qd - p * (p - 1) / 2 + (q - p);
}

inline SparseRow outer_wedge(const GenusContext& ctx, const SparseRow& k1,
                             const SparseRow& k2) {
  std::map<int, Rat> acc;
  for (const auto& [p, c1] : k1)
    for (const auto& [q, c2] : k2) {
      if (p == q) continue;
      if (p < q)
        acc[quotient_wedge_pair_index(ctx, p, q)] += c1 * c2;
      else
        acc[quotient_wedge_pair_index(ctx, q, p)] -= c1 * c2;
    }
  SparseRow out;
  for (const auto& [idx, c] : acc)
    if (!is_zero(c)) out.emplace_back(idx, c);
  return out;
}

inline SparseRow outer_sym(const GenusContext& ctx, const SparseRow& k1,
                           const SparseRow& k2) {
  std::map<int, Rat> acc;
  for (const auto& [p, c1] : k1)
    for (const auto& [q, c2] : k2)
      acc[quotient_sym_pair_index(ctx, std::min(p, q), std::max(p, q))] += c1 * c2;
  SparseRow out;
  for (const auto& [idx, c] : acc)
    if (!is_zero(c)) out.emplace_back(idx, c);
  return out;
}

inline SparseRow outer_tensor(const GenusContext& ctx, const SparseRow& k1,
                              const SparseRow& k2) {
  int qd = ctx.quotient_dim();
  std::map<int, Rat> acc;
  for (const auto& [p, c1] : k1)
    for (const auto& [q, c2] : k2) acc[p * qd + q] += c1 * c2;
  SparseRow out;
  for (const auto& [idx, c] : acc)
    if (!is_zero(c)) out.emplace_back(idx, c);
  return out;
}

}  // namespace sympres
