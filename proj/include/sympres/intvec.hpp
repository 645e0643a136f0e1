#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "sympres/rational.hpp"

namespace sympres {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

inline IntMat int_mat(int rows, int cols) {
  return IntMat(rows, IntVec(cols, Int(0)));
}

inline IntMat identity_int(int n) {
  IntMat m = int_mat(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline bool is_zero_vec(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline IntVec add_vec(const IntVec& u, const IntVec& v) {
  assert(u.size() == v.size());
  IntVec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
  return out;
}

inline IntVec scale_vec(const Int& c, const IntVec& v) {
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
  return out;
}

inline IntVec sub_vec(const IntVec& u, const IntVec& v) {
  assert(u.size() == v.size());
  IntVec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

inline Int dot_int(const IntVec& u, const IntVec& v) {
  assert(u.size() == v.size());
  Int acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

inline Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

inline IntMat transpose_int(const IntMat& m) {
  if (m.empty()) return {};
  IntMat out(m[0].size(), IntVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out[j][i] = m[i][j];
  return out;
}

inline IntMat mat_mul_int(const IntMat& a, const IntMat& b) {
  if (a.empty() || b.empty()) return {};
  IntMat out = int_mat(static_cast<int>(a.size()), static_cast<int>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[k].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline IntVec mat_apply_int(const IntMat& a, const IntVec& x) {
  IntVec out(a.size(), Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot_int(a[i], x);
  return out;
}

// Fraction-free elimination; exact determinant of a square matrix.
inline Int det_int(IntMat m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  Int sign = 1;
  Int prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Extended gcd over a list: returns g >= 0 and coefficients with sum c_i * v_i = g.
inline Int ext_gcd_list(const IntVec& v, IntVec& coeffs) {
  coeffs.assign(v.size(), Int(0));
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (g == 0) {
      g = abs(v[i]);
      coeffs[i] = v[i] > 0 ? 1 : -1;
      continue;
    }
    Int new_g, s, t;
    mpz_gcdext(new_g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(),
               v[i].get_mpz_t());
    for (std::size_t j = 0; j < i; ++j) coeffs[j] *= s;
    coeffs[i] = t;
    g = new_g;
    if (g == 1) break;
  }
  return g;
}

}  // namespace sympres
