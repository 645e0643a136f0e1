#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "sympres/intvec.hpp"
#include "sympres/matrix.hpp"
#include "sympres/normal_forms.hpp"

namespace sympres {

inline bool is_primitive(const IntVec& v) { return content(v) == 1; }

inline bool is_partial_basis(const IntMat& vs) {
  if (vs.empty()) return true;
  SmithResult s = smith(vs);
  if (s.rank != static_cast<int>(vs.size())) return false;
  for (int i = 0; i < s.rank; ++i)
    if (s.d[i][i] != 1) return false;
  return true;
}

// Canonical basis (Hermite rows) of the subgroup generated by the rows.
inline IntMat lattice_basis(const IntMat& gens) {
  if (gens.empty()) return {};
  HermiteResult h = hermite(gens);
  return IntMat(h.h.begin(), h.h.begin() + h.rank);
}

inline bool same_lattice(const IntMat& a, const IntMat& b) {
  return lattice_basis(a) == lattice_basis(b);
}

struct SaturationResult {
  IntMat basis;
  Int index;  // index of the input subgroup inside its saturation
};

inline SaturationResult saturation(const IntMat& gens) {
  if (gens.empty()) return {{}, Int(1)};
  SmithResult s = smith(gens);
  IntMat raw;
  for (int i = 0; i < s.rank; ++i) raw.push_back(s.v_inv[i]);
  Int idx = 1;
  for (int i = 0; i < s.rank; ++i) idx *= s.d[i][i];
  return {lattice_basis(raw), idx};
}

inline IntMat extend_to_basis(const IntMat& vs) {
  if (vs.empty()) throw std::invalid_argument("extend_to_basis: empty input");
  if (!is_partial_basis(vs))
    throw std::invalid_argument("extend_to_basis: input is not a partial basis");
  int k = static_cast<int>(vs.size());
  int m = static_cast<int>(vs[0].size());
  SmithResult s = smith(vs);
  IntMat b = vs;
  for (int i = k; i < m; ++i) b.push_back(s.v_inv[i]);
  if (m > k && det_int(b) == -1)
    for (auto& c : b[m - 1]) c = -c;
  return b;
}

inline RationalMatrix rational_rows(const IntMat& rows, int cols) {
  RationalMatrix m(static_cast<int>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SparseRow r;
    for (int j = 0; j < cols; ++j)
      if (rows[i][j] != 0) r.emplace_back(j, Rat(rows[i][j]));
    m.set_row(static_cast<int>(i), r);
  }
  return m;
}

inline bool in_q_span(const IntVec& v, const IntMat& rows) {
  if (rows.empty()) return is_zero_vec(v);
  int cols = static_cast<int>(v.size());
  RationalMatrix base = rational_rows(rows, cols);
  IntMat joined = rows;
  joined.push_back(v);
  return rref(base).rank == rref(rational_rows(joined, cols)).rank;
}

// Standard alternating form on Z^{2g}: blocks (a_i, b_i) at coordinates (2i-2, 2i-1).
inline Int omega(const IntVec& u, const IntVec& v) {
  Int acc = 0;
  for (std::size_t i = 0; i + 1 < u.size(); i += 2)
    acc += u[i] * v[i + 1] - u[i + 1] * v[i];
  return acc;
}

inline IntVec std_a(int g, int i) {
  IntVec v(2 * g, Int(0));
  v[2 * (i - 1)] = 1;
  return v;
}

inline IntVec std_b(int g, int i) {
  IntVec v(2 * g, Int(0));
  v[2 * (i - 1) + 1] = 1;
  return v;
}

inline IntVec omega_dual(const IntVec& u) {
  IntVec out(u.size());
  for (std::size_t j = 0; j + 1 < u.size(); j += 2) {
    out[j] = -u[j + 1];
    out[j + 1] = u[j];
  }
  return out;
}

inline IntMat orthogonal_complement(const IntMat& gens) {
  if (gens.empty()) throw std::invalid_argument("orthogonal_complement: empty input");
  IntMat pairing;
  for (const auto& g : gens) pairing.push_back(omega_dual(g));
  return lattice_basis(integer_kernel(pairing));
}

struct NearSymplecticStructure {
  int genus = 0;
  int kernel_rank = 0;
  IntMat adapted;  // a_1, b_1, ..., a_h, b_h, then kernel vectors
};

inline std::optional<NearSymplecticStructure> near_symplectic_structure(
    const IntMat& x) {
  if (x.empty()) return NearSymplecticStructure{};
  if (!is_partial_basis(x))
    throw std::invalid_argument(
        "near_symplectic_structure: input is not a direct summand basis");
  int r = static_cast<int>(x.size());
  int m = static_cast<int>(x[0].size());
  IntMat gram = int_mat(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) gram[i][j] = omega(x[i], x[j]);

  auto expand = [&](const IntVec& coords) {
    IntVec v(m, Int(0));
    for (int i = 0; i < r; ++i)
      if (coords[i] != 0) v = add_vec(v, scale_vec(coords[i], x[i]));
    return v;
  };

  IntMat kernel_coords = integer_kernel(gram);
  int k = static_cast<int>(kernel_coords.size());
  IntMat kernel_vecs;
  for (const auto& c : kernel_coords) kernel_vecs.push_back(expand(c));
  kernel_vecs = lattice_basis(kernel_vecs);

  IntMat full = kernel_coords.empty() ? identity_int(r)
                                      : extend_to_basis(kernel_coords);
  IntMat work;
  for (int i = k; i < r; ++i) work.push_back(expand(full[i]));
  work = lattice_basis(work);

  IntMat pairs;
  while (!work.empty()) {
    IntVec a = work[0];
    IntVec pairings(work.size() - 1);
    for (std::size_t j = 1; j < work.size(); ++j) pairings[j - 1] = omega(a, work[j]);
    IntVec coeffs;
    if (ext_gcd_list(pairings, coeffs) != 1) return std::nullopt;
    IntVec b(m, Int(0));
    for (std::size_t j = 1; j < work.size(); ++j)
      if (coeffs[j - 1] != 0) b = add_vec(b, scale_vec(coeffs[j - 1], work[j]));
    pairs.push_back(a);
    pairs.push_back(b);
    IntMat next;
    for (const auto& u : work) {
      IntVec proj = add_vec(u, add_vec(scale_vec(-omega(u, b), a),
                                       scale_vec(omega(u, a), b)));
      if (!is_zero_vec(proj)) next.push_back(proj);
    }
    work = lattice_basis(next);
  }

  NearSymplecticStructure out;
  out.genus = static_cast<int>(pairs.size()) / 2;
  out.kernel_rank = k;
  out.adapted = pairs;
  for (const auto& v : kernel_vecs) out.adapted.push_back(v);
  return out;
}

inline bool is_lagrangian_free(const IntMat& x) {
  if (x.empty()) return true;
  int g = static_cast<int>(x[0].size()) / 2;
  auto nss = near_symplectic_structure(x);
  if (!nss)
    throw std::invalid_argument(
        "is_lagrangian_free: input has no adapted near-symplectic basis");
  return nss->genus + nss->kernel_rank < g;
}

inline IntMat lagrangian_containing(const IntMat& i1, const IntMat& i2, int g) {
  IntMat joint = i1;
  for (const auto& v : i2) joint.push_back(v);
  IntMat s = joint.empty() ? IntMat{} : saturation(joint).basis;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (omega(s[i], s[j]) != 0)
        throw std::invalid_argument(
            "lagrangian_containing: joint span is not isotropic");
  while (static_cast<int>(s.size()) < g) {
    IntMat candidates = s.empty() ? identity_int(2 * g) : orthogonal_complement(s);
    bool grew = false;
    for (const auto& v : candidates) {
      if (in_q_span(v, s)) continue;
      s.push_back(v);
      s = saturation(s).basis;
      grew = true;
      break;
    }
    if (!grew)
      throw std::logic_error("lagrangian_containing: no extension found");
  }
  return lattice_basis(s);
}

struct StrongIsotropicFactor {
  IntVec a0;
  IntVec a0p;
  Int n;
};

// a wedge a' = n * (a0 wedge a0'), span{a0, a0'} the saturation of span{a, a'}.
inline StrongIsotropicFactor strong_isotropic_factor(const IntVec& a,
                                                     const IntVec& ap) {
  if (omega(a, ap) != 0)
    throw std::invalid_argument("strong_isotropic_factor: pair is not orthogonal");
  IntMat pair = {a, ap};
  SaturationResult sat = saturation(pair);
  if (static_cast<int>(sat.basis.size()) != 2)
    throw std::invalid_argument("strong_isotropic_factor: vectors are dependent");
  IntMat tr = transpose_int(sat.basis);
  auto c1 = integer_solve(tr, a);
  auto c2 = integer_solve(tr, ap);
  if (!c1 || !c2)
    throw std::logic_error("strong_isotropic_factor: saturation solve failed");
  IntVec a0 = sat.basis[0], a0p = sat.basis[1];
  Int n = (*c1)[0] * (*c2)[1] - (*c1)[1] * (*c2)[0];
  if (n < 0) {
    std::swap(a0, a0p);
    n = -n;
  }
  return {a0, a0p, n};
}

inline bool is_standard_symplectic_gram(const IntMat& basis) {
  int m = static_cast<int>(basis.size());
  if (m % 2 != 0) return false;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Int expected = 0;
      if (i % 2 == 0 && j == i + 1) expected = 1;
      if (i % 2 == 1 && j == i - 1) expected = -1;
      if (omega(basis[i], basis[j]) != expected) return false;
    }
  return true;
}

namespace detail {

// Symplectic basis of the saturated sublattice spanned by w (restricted form
// unimodular); if first is set it becomes the leading basis vector.
inline IntMat complete_within(IntMat w, std::optional<IntVec> first) {
  if (w.empty()) return {};
  int m = static_cast<int>(w[0].size());
  IntVec v = first ? *first : w[0];
  IntVec pairings(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) pairings[j] = omega(v, w[j]);
  IntVec coeffs;
  if (ext_gcd_list(pairings, coeffs) != 1)
    throw std::logic_error("complete_within: restricted form is not unimodular");
  IntVec b(m, Int(0));
  for (std::size_t j = 0; j < w.size(); ++j)
    if (coeffs[j] != 0) b = add_vec(b, scale_vec(coeffs[j], w[j]));
  IntMat next;
  for (const auto& u : w) {
    IntVec proj = add_vec(u, add_vec(scale_vec(-omega(u, b), v),
                                     scale_vec(omega(u, v), b)));
    if (!is_zero_vec(proj)) next.push_back(proj);
  }
  IntMat out = {v, b};
  for (auto& row : complete_within(lattice_basis(next), std::nullopt))
    out.push_back(std::move(row));
  return out;
}

}  // namespace detail

// Supported prefixes: a single primitive vector; a symplectic pair; a strong
// isotropic pair (occupying the a1 and a2 slots).
inline IntMat symplectic_complete(const IntMat& prefix, int g) {
  int m = 2 * g;
  if (prefix.empty() || prefix.size() > 2)
    throw std::invalid_argument("symplectic_complete: unsupported prefix shape");
  for (const auto& v : prefix)
    if (static_cast<int>(v.size()) != m)
      throw std::invalid_argument("symplectic_complete: ambient rank mismatch");
  if (!is_partial_basis(prefix))
    throw std::invalid_argument("symplectic_complete: prefix is not a partial basis");

  IntMat out;
  if (prefix.size() == 1) {
    out = detail::complete_within(identity_int(m), prefix[0]);
  } else {
    Int p01 = omega(prefix[0], prefix[1]);
    if (p01 == 1) {
      const IntVec& v = prefix[0];
      const IntVec& b = prefix[1];
      IntMat next;
      for (const auto& u : identity_int(m)) {
        IntVec proj = add_vec(u, add_vec(scale_vec(-omega(u, b), v),
                                         scale_vec(omega(u, v), b)));
        if (!is_zero_vec(proj)) next.push_back(proj);
      }
      out = {v, b};
      for (auto& row : detail::complete_within(lattice_basis(next), std::nullopt))
        out.push_back(std::move(row));
    } else if (p01 == 0) {
      IntMat sys = {omega_dual(prefix[0]), omega_dual(prefix[1])};
      auto x = integer_solve(sys, {Int(1), Int(0)});
      if (!x)
        throw std::invalid_argument(
            "symplectic_complete: isotropic prefix spans no summand");
      const IntVec& v = prefix[0];
      const IntVec& b = *x;
      IntMat next;
      for (const auto& u : identity_int(m)) {
        IntVec proj = add_vec(u, add_vec(scale_vec(-omega(u, b), v),
                                         scale_vec(omega(u, v), b)));
        if (!is_zero_vec(proj)) next.push_back(proj);
      }
      out = {v, b};
      for (auto& row :
           detail::complete_within(lattice_basis(next), prefix[1]))
        out.push_back(std::move(row));
    } else {
      throw std::invalid_argument(
          "symplectic_complete: prefix pairings do not match the standard pattern");
    }
  }
  if (!is_standard_symplectic_gram(out))
    throw std::logic_error("symplectic_complete: completion failed");
  return out;
}

// Completes a rank-g Lagrangian summand of Z^{2g} to a symplectic basis whose
// a-vectors are exactly the given rows, interleaved a_1, b_1, ..., a_g, b_g.
inline IntMat symplectic_frame_of_lagrangian(const IntMat& lag) {
  int k = static_cast<int>(lag.size());
  if (k == 0) return {};
  if (static_cast<int>(lag[0].size()) != 2 * k)
    throw std::invalid_argument(
        "symplectic_frame_of_lagrangian: rank must be half the ambient rank");
  if (!is_partial_basis(lag))
    throw std::invalid_argument("symplectic_frame_of_lagrangian: not a summand");
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q)
      if (omega(lag[p], lag[q]) != 0)
        throw std::invalid_argument("symplectic_frame_of_lagrangian: not isotropic");

  IntMat pairing;
  for (const auto& row : lag) pairing.push_back(omega_dual(row));
  IntMat b0;
  for (int q = 0; q < k; ++q) {
    IntVec e(k, Int(0));
    e[q] = 1;
    auto sol = integer_solve(pairing, e);
    if (!sol)
      throw std::invalid_argument(
          "symplectic_frame_of_lagrangian: dual system has no integer solution");
    b0.push_back(*sol);
  }
  // Correct b-vectors to pair to zero with each other; adding multiples of the
  // isotropic rows leaves the dual pairings intact.
  IntMat out;
  for (int q = 0; q < k; ++q) {
    IntVec b = b0[q];
    for (int s = q + 1; s < k; ++s)
      b = add_vec(b, scale_vec(-omega(b0[q], b0[s]), lag[s]));
    out.push_back(lag[q]);
    out.push_back(std::move(b));
  }
  if (!is_standard_symplectic_gram(out))
    throw std::logic_error("symplectic_frame_of_lagrangian: completion failed");
  return out;
}

}  // namespace sympres
