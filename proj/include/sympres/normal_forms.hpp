#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "sympres/intvec.hpp"

namespace sympres {

struct HermiteResult {
  IntMat h;      // row-style Hermite form, pivots positive, entries above reduced
  IntMat t;      // unimodular, t * input = h
  IntMat t_inv;  // inverse of t
  int rank = 0;
};

inline HermiteResult hermite(IntMat m) {
  int rows = static_cast<int>(m.size());
  int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  HermiteResult res;
  res.t = identity_int(rows);
  res.t_inv = identity_int(rows);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    std::swap(m[i], m[j]);
    std::swap(res.t[i], res.t[j]);
    for (int r = 0; r < rows; ++r) std::swap(res.t_inv[r][i], res.t_inv[r][j]);
  };
  auto axpy_row = [&](int i, const Int& q, int j) {
    // row i -= q * row j
    for (int c = 0; c < cols; ++c) m[i][c] -= q * m[j][c];
    for (int c = 0; c < rows; ++c) res.t[i][c] -= q * res.t[j][c];
    for (int r = 0; r < rows; ++r) res.t_inv[r][j] += q * res.t_inv[r][i];
  };
  auto negate_row = [&](int i) {
    for (int c = 0; c < cols; ++c) m[i][c] = -m[i][c];
    for (int c = 0; c < rows; ++c) res.t[i][c] = -res.t[i][c];
    for (int r = 0; r < rows; ++r) res.t_inv[r][i] = -res.t_inv[r][i];
  };

  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    while (true) {
      int best = -1;
      Int best_abs = 0;
      for (int i = r; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        Int a = abs(m[i][c]);
        if (best < 0 || a < best_abs) {
          best = i;
          best_abs = a;
        }
      }
      if (best < 0) break;
      swap_rows(r, best);
      bool reduced_all = true;
      for (int i = r + 1; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
        axpy_row(i, q, r);
        if (m[i][c] != 0) reduced_all = false;
      }
      if (reduced_all) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0) negate_row(r);
    for (int i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
      if (q != 0) axpy_row(i, q, r);
    }
    ++r;
  }
  res.rank = r;
  res.h = std::move(m);
  return res;
}

struct SmithResult {
  IntMat d;      // diagonal, d1 | d2 | ..., nonnegative
  IntMat u;      // unimodular rows-side, u * input * v = d
  IntMat u_inv;
  IntMat v;      // unimodular cols-side
  IntMat v_inv;
  int rank = 0;
  IntVec diagonal() const {
    IntVec out;
    for (int i = 0; i < rank; ++i) out.push_back(d[i][i]);
    return out;
  }
};

inline SmithResult smith(IntMat m) {
  int rows = static_cast<int>(m.size());
  int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  SmithResult res;
  res.u = identity_int(rows);
  res.u_inv = identity_int(rows);
  res.v = identity_int(cols);
  res.v_inv = identity_int(cols);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    std::swap(m[i], m[j]);
    std::swap(res.u[i], res.u[j]);
    for (int r = 0; r < rows; ++r) std::swap(res.u_inv[r][i], res.u_inv[r][j]);
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int r = 0; r < rows; ++r) std::swap(m[r][i], m[r][j]);
    for (int r = 0; r < cols; ++r) std::swap(res.v[r][i], res.v[r][j]);
    std::swap(res.v_inv[i], res.v_inv[j]);
  };
  auto row_axpy = [&](int i, const Int& q, int j) {
    for (int c = 0; c < cols; ++c) m[i][c] -= q * m[j][c];
    for (int c = 0; c < rows; ++c) res.u[i][c] -= q * res.u[j][c];
    for (int r = 0; r < rows; ++r) res.u_inv[r][j] += q * res.u_inv[r][i];
  };
  auto col_axpy = [&](int i, const Int& q, int j) {
    // col i -= q * col j
    for (int r = 0; r < rows; ++r) m[r][i] -= q * m[r][j];
    for (int r = 0; r < cols; ++r) res.v[r][i] -= q * res.v[r][j];
    for (int c = 0; c < cols; ++c) res.v_inv[j][c] += q * res.v_inv[i][c];
  };
  auto negate_row = [&](int i) {
    for (int c = 0; c < cols; ++c) m[i][c] = -m[i][c];
    for (int c = 0; c < rows; ++c) res.u[i][c] = -res.u[i][c];
    for (int r = 0; r < rows; ++r) res.u_inv[r][i] = -res.u_inv[r][i];
  };

  int t = 0;
  int bound = std::min(rows, cols);
  while (t < bound) {
    int pi = -1, pj = -1;
    Int best_abs = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j) {
        if (m[i][j] == 0) continue;
        Int a = abs(m[i][j]);
        if (pi < 0 || a < best_abs) {
          pi = i;
          pj = j;
          best_abs = a;
        }
      }
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
        row_axpy(i, q, t);
        if (m[i][t] != 0) {
          swap_rows(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
        col_axpy(j, q, t);
        if (m[t][j] != 0) {
          swap_cols(t, j);
          clean = false;
        }
      }
    }

    bool divides_all = true;
    for (int i = t + 1; i < rows && divides_all; ++i)
      for (int j = t + 1; j < cols && divides_all; ++j)
        if (m[i][j] % m[t][t] != 0) {
          row_axpy(t, Int(-1), i);  // row t += row i, reintroduces column work
          divides_all = false;
        }
    if (!divides_all) continue;
    if (m[t][t] < 0) negate_row(t);
    ++t;
  }
  res.rank = t;
  res.d = std::move(m);
  return res;
}

// Rows of the result span {x : input * x = 0}; the span is saturated.
inline IntMat integer_kernel(const IntMat& m) {
  if (m.empty()) return {};
  int cols = static_cast<int>(m[0].size());
  SmithResult s = smith(m);
  IntMat out;
  for (int j = s.rank; j < cols; ++j) {
    IntVec k(cols);
    for (int i = 0; i < cols; ++i) k[i] = s.v[i][j];
    out.push_back(std::move(k));
  }
  return out;
}

// Inverse of a unimodular square matrix.
inline IntMat int_inverse(const IntMat& m) {
  HermiteResult h = hermite(m);
  if (h.h != identity_int(static_cast<int>(m.size())))
    throw std::invalid_argument("int_inverse: matrix is not unimodular");
  return h.t;
}

// Solves input * x = b over the integers.
inline std::optional<IntVec> integer_solve(const IntMat& m, const IntVec& b) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return IntVec{};
  int cols = static_cast<int>(m[0].size());
  if (static_cast<int>(b.size()) != rows)
    throw std::invalid_argument("integer_solve: size mismatch");
  SmithResult s = smith(m);
  IntVec ub = mat_apply_int(s.u, b);
  IntVec y(cols, Int(0));
  for (int i = 0; i < rows; ++i) {
    if (i < s.rank) {
      if (ub[i] % s.d[i][i] != 0) return std::nullopt;
      y[i] = ub[i] / s.d[i][i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return mat_apply_int(s.v, y);
}

}  // namespace sympres
