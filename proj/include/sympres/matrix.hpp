#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sympres/rational.hpp"

namespace sympres {

// A sparse row: (column, value) pairs sorted by column, no zero values.
using SparseRow = std::vector<std::pair<int, Rat>>;

inline SparseRow make_sparse(const std::vector<Rat>& dense) {
  SparseRow r;
  for (int i = 0; i < static_cast<int>(dense.size()); ++i)
    if (!is_zero(dense[i])) r.emplace_back(i, dense[i]);
  return r;
}

inline std::vector<Rat> make_dense(const SparseRow& row, int cols) {
  std::vector<Rat> d(cols, Rat(0));
  for (const auto& [c, v] : row) d[c] = v;
  return d;
}

// dst += coeff * src, both sorted; result sorted, zero-free.
inline SparseRow row_axpy(const SparseRow& dst, const Rat& coeff,
                          const SparseRow& src) {
  SparseRow out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(dst[i++]);
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      Rat v = coeff * src[j].second;
      if (!is_zero(v)) out.emplace_back(src[j].first, v);
      ++j;
    } else {
      Rat v = dst[i].second + coeff * src[j].second;
      if (!is_zero(v)) out.emplace_back(dst[i].first, v);
      ++i, ++j;
    }
  }
  return out;
}

inline void row_scale(SparseRow& row, const Rat& c) {
  for (auto& [col, v] : row) v *= c;
}

inline SparseRow row_scaled(const Rat& c, SparseRow row) {
  if (is_zero(c)) return {};
  row_scale(row, c);
  return row;
}

// Clears denominators and divides by the integer content; first nonzero
// entry made positive when sign_normalize is set. Used for deterministic
// relation dumps and for the fraction-free elimination below.
inline SparseRow integerize(SparseRow row, bool sign_normalize = false) {
  if (row.empty()) return row;
  Int l = 1;
  for (const auto& [c, v] : row) l = lcm(l, denominator(v));
  Int g = 0;
  std::vector<Int> nums(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    nums[i] = numerator(row[i].second) * (l / denominator(row[i].second));
    g = gcd(g, nums[i]);
  }
  if (sgn(g) == 0) g = 1;
  if (sign_normalize && sgn(nums[0]) < 0) g = -g;
  for (std::size_t i = 0; i < row.size(); ++i)
    row[i].second = rat(nums[i], g);
  return row;
}

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

  static RationalMatrix from_dense(
      const std::vector<std::vector<Rat>>& rows) {
    int rc = static_cast<int>(rows.size());
    int cc = rc == 0 ? 0 : static_cast<int>(rows[0].size());
    RationalMatrix m(rc, cc);
    for (int i = 0; i < rc; ++i) {
      assert(static_cast<int>(rows[i].size()) == cc);
      m.data_[i] = make_sparse(rows[i]);
    }
    return m;
  }

  static RationalMatrix identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.data_[i] = {{i, Rat(1)}};
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const SparseRow& row(int i) const { return data_[i]; }

  void set_row(int i, SparseRow r) {
    assert(r.empty() || r.back().first < cols_);
    data_[i] = std::move(r);
  }

  int append_row(SparseRow r) {
    assert(r.empty() || r.back().first < cols_);
    data_.push_back(std::move(r));
    return rows_++;
  }

  Rat at(int r, int c) const {
    const SparseRow& row = data_[r];
    auto it = std::lower_bound(
        row.begin(), row.end(), c,
        [](const std::pair<int, Rat>& e, int col) { return e.first < col; });
    return (it != row.end() && it->first == c) ? it->second : Rat(0);
  }

  void set(int r, int c, const Rat& v) {
    SparseRow& row = data_[r];
    auto it = std::lower_bound(
        row.begin(), row.end(), c,
        [](const std::pair<int, Rat>& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c) {
      if (is_zero(v))
        row.erase(it);
      else
        it->second = v;
    } else if (!is_zero(v)) {
      row.insert(it, {c, v});
    }
  }

  std::size_t entry_count() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<SparseRow> data_;
};

struct EchelonResult {
  RationalMatrix reduced;       // unique RREF, zero rows trailing
  int rank = 0;
  std::vector<int> pivot_cols;  // increasing
  std::vector<std::vector<Rat>> kernel;  // basis of the right kernel
};

// Reduced row echelon form. Forward pass is fraction-free over integer
// rows (Bareiss-style cross multiplication, content division after each
// step) with the pivot chosen as the smallest-bit-length entry among the
// rows of minimal leading column; ties break on row order, so the result
// is deterministic. Back substitution is rational.
inline EchelonResult rref(const RationalMatrix& m) {
  std::vector<SparseRow> work;
  work.reserve(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    if (!m.row(i).empty()) work.push_back(integerize(m.row(i)));

  std::vector<SparseRow> pivot_rows;
  std::vector<int> pivot_cols;

  while (!work.empty()) {
    int best_col = m.cols();
    for (const auto& r : work) best_col = std::min(best_col, r[0].first);
    std::size_t best = work.size();
    std::size_t best_bits = 0;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i][0].first != best_col) continue;
      std::size_t bits = bit_length(work[i][0].second);
      if (best == work.size() || bits < best_bits) best = i, best_bits = bits;
    }
    SparseRow pivot = std::move(work[best]);
    work.erase(work.begin() + best);
    const Rat lead = pivot[0].second;

    std::vector<SparseRow> next;
    next.reserve(work.size());
    for (auto& r : work) {
      if (r[0].first == best_col) {
        // lead * r - r.lead * pivot, then content-normalized: stays integral.
        Rat rl = r[0].second;
        row_scale(r, lead);
        SparseRow combined = row_axpy(r, -rl, pivot);
        if (!combined.empty()) next.push_back(integerize(std::move(combined)));
      } else {
        next.push_back(std::move(r));
      }
    }
    work = std::move(next);
    pivot_cols.push_back(best_col);
    pivot_rows.push_back(std::move(pivot));
  }

  // Pivot rows are already ordered by increasing pivot column (each new
  // pivot column is the minimal remaining leading column, which only
  // grows). Back-substitute top-down targets from the bottom.
  int rank = static_cast<int>(pivot_rows.size());
  for (int i = rank - 1; i >= 0; --i) {
    Rat inv = 1 / pivot_rows[i][0].second;
    row_scale(pivot_rows[i], inv);
    for (int j = 0; j < i; ++j) {
      Rat coeff = Rat(0);
      for (const auto& [c, v] : pivot_rows[j])
        if (c == pivot_cols[i]) { coeff = v; break; }
      if (!is_zero(coeff))
        pivot_rows[j] = row_axpy(pivot_rows[j], -coeff, pivot_rows[i]);
    }
  }

  EchelonResult res;
  res.rank = rank;
  res.pivot_cols = pivot_cols;
  res.reduced = RationalMatrix(m.rows(), m.cols());
  for (int i = 0; i < rank; ++i) res.reduced.set_row(i, pivot_rows[i]);

  std::set<int> pivots(pivot_cols.begin(), pivot_cols.end());
  for (int f = 0; f < m.cols(); ++f) {
    if (pivots.count(f)) continue;
    std::vector<Rat> k(m.cols(), Rat(0));
    k[f] = Rat(1);
    for (int i = 0; i < rank; ++i) k[pivot_cols[i]] = -res.reduced.at(i, f);
    res.kernel.push_back(std::move(k));
  }
  return res;
}

// Dimension of Q^generatorCount modulo the row span of `relations`.
inline int quotient_dimension(int generator_count,
                              const RationalMatrix& relations) {
  assert(relations.cols() == generator_count);
  return generator_count - rref(relations).rank;
}

// Solves span * x = target exactly. `span` columns are the spanning
// vectors. Returns the coefficient vector, or nullopt when target is
// outside the column space.
inline std::optional<std::vector<Rat>> membership(
    const std::vector<Rat>& target, const RationalMatrix& span) {
  assert(static_cast<int>(target.size()) == span.rows());
  RationalMatrix aug(span.rows(), span.cols() + 1);
  for (int i = 0; i < span.rows(); ++i) {
    SparseRow r = span.row(i);
    if (!is_zero(target[i])) r.emplace_back(span.cols(), target[i]);
    aug.set_row(i, std::move(r));
  }
  EchelonResult e = rref(aug);
  std::vector<Rat> coeff(span.cols(), Rat(0));
  for (int i = 0; i < e.rank; ++i) {
    if (e.pivot_cols[i] == span.cols()) return std::nullopt;
    coeff[e.pivot_cols[i]] = e.reduced.at(i, span.cols());
  }
  return coeff;
}

// Streaming exact reduced-echelon accumulator. Pivot rows are kept fully
// reduced against each other (true RREF invariant), so reducing a vector
// against the current state yields its canonical representative modulo
// the accumulated row span.
class IncrementalRref {
 public:
  explicit IncrementalRref(int cols) : cols_(cols) {}

  int cols() const { return cols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::map<int, SparseRow>& rows() const { return rows_; }

  SparseRow reduce(SparseRow row) const {
    // Pivot rows vanish at every other pivot column, so each subtraction
    // removes one pivot-column entry and introduces only free columns.
    while (true) {
      const std::pair<int, Rat>* hit = nullptr;
      for (const auto& e : row)
        if (rows_.count(e.first)) { hit = &e; break; }
      if (!hit) return row;
      const SparseRow& prow = rows_.at(hit->first);
      row = row_axpy(row, -hit->second, prow);
    }
  }

  // Returns true when the row enlarged the span.
  bool add(SparseRow row) {
    row = reduce(std::move(row));
    if (row.empty()) return false;
    int pcol = row[0].first;
    Rat inv = 1 / row[0].second;
    row_scale(row, inv);
    for (auto user : users_of(pcol)) {
      SparseRow& u = rows_[user];
      Rat coeff = Rat(0);
      for (const auto& [c, v] : u)
        if (c == pcol) { coeff = v; break; }
      if (!is_zero(coeff)) {
        unindex_row(user, u);
        u = row_axpy(u, -coeff, row);
        index_row(user, u);
      }
    }
    index_row(pcol, row);
    rows_[pcol] = std::move(row);
    return true;
  }

 private:
  std::vector<int> users_of(int col) const {
    auto it = index_.find(col);
    if (it == index_.end()) return {};
    return std::vector<int>(it->second.begin(), it->second.end());
  }
  void index_row(int pivot, const SparseRow& r) {
    for (const auto& [c, v] : r)
      if (c != pivot) index_[c].insert(pivot);
  }
  void unindex_row(int pivot, const SparseRow& r) {
    for (const auto& [c, v] : r)
      if (c != pivot) {
        auto it = index_.find(c);
        if (it != index_.end()) it->second.erase(pivot);
      }
  }

  int cols_;
  std::map<int, SparseRow> rows_;           // pivot column -> row, pivot = 1
  std::map<int, std::set<int>> index_;      // column -> pivot rows touching it
};

// Dense streaming span with coefficient tracking over the subset of added
// vectors that actually enlarged the span. solve() returns coefficients
// (basis-vector add-index, value) reproducing the query exactly.
class SpanSolver {
 public:
  explicit SpanSolver(int width) : width_(width) {}

  int width() const { return width_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<int>& basis_members() const { return basis_members_; }

  bool add(const std::vector<Rat>& v) {
    assert(static_cast<int>(v.size()) == width_);
    int my_index = add_count_++;
    std::vector<Rat> w = v;
    Expr expr = {{my_index, Rat(1)}};
    reduce(w, &expr);
    int p = leading(w);
    if (p < 0) return false;
    Rat inv = 1 / w[p];
    for (auto& x : w) x *= inv;
    for (auto& [i, c] : expr) c *= inv;
    for (auto& r : rows_) {
      if (is_zero(r.v[p])) continue;
      Rat coeff = r.v[p];
      for (int j = 0; j < width_; ++j) r.v[j] -= coeff * w[j];
      r.expr = expr_axpy(r.expr, -coeff, expr);
    }
    rows_.push_back({std::move(w), std::move(expr), p});
    std::sort(rows_.begin(), rows_.end(),
              [](const Row& a, const Row& b) { return a.pivot < b.pivot; });
    basis_members_.push_back(my_index);
    return true;
  }

  bool contains(const std::vector<Rat>& v) const {
    std::vector<Rat> w = v;
    reduce(w, nullptr);
    return leading(w) < 0;
  }

  // Coefficients over basis_members() when v lies in the span.
  std::optional<std::vector<std::pair<int, Rat>>> solve(
      const std::vector<Rat>& v) const {
    std::vector<Rat> w = v;
    Expr used;  // v - sum(used_i * row_i) = residual
    for (const auto& r : rows_) {
      if (is_zero(w[r.pivot])) continue;
      Rat coeff = w[r.pivot];
      for (int j = 0; j < width_; ++j) w[j] -= coeff * r.v[j];
      used = expr_axpy(used, coeff, r.expr);
    }
    if (leading(w) >= 0) return std::nullopt;
    return used;
  }

 private:
  using Expr = std::vector<std::pair<int, Rat>>;  // sorted by index

  static Expr expr_axpy(const Expr& a, const Rat& c, const Expr& b) {
    Expr out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        Rat v = c * b[j].second;
        if (!is_zero(v)) out.emplace_back(b[j].first, v);
        ++j;
      } else {
        Rat v = a[i].second + c * b[j].second;
        if (!is_zero(v)) out.emplace_back(a[i].first, v);
        ++i, ++j;
      }
    }
    return out;
  }

  struct Row {
    std::vector<Rat> v;
    Expr expr;
    int pivot;
  };

  int leading(const std::vector<Rat>& v) const {
    for (int i = 0; i < width_; ++i)
      if (!is_zero(v[i])) return i;
    return -1;
  }

  void reduce(std::vector<Rat>& w, Expr* expr) const {
    for (const auto& r : rows_) {
      if (is_zero(w[r.pivot])) continue;
      Rat coeff = w[r.pivot];
      for (int j = 0; j < width_; ++j) w[j] -= coeff * r.v[j];
      if (expr) *expr = expr_axpy(*expr, -coeff, r.expr);
    }
  }

  int width_;
  std::vector<Row> rows_;
  std::vector<int> basis_members_;
  int add_count_ = 0;
};

// Forward echelon over the prime field F_p, p = 2^31 - 1. Any r x r minor
// that is nonsingular mod p is nonsingular over Q, so the rank computed
// here is an exact lower bound for the rational rank; the build engine
// pairs it with a matching exact upper bound before claiming a dimension.
class FpForward {
 public:
  static constexpr std::uint64_t P = 2147483647ull;

  using FpRow = std::vector<std::pair<int, std::uint32_t>>;

  int rank() const { return static_cast<int>(rows_.size()); }

  static std::uint32_t to_fp(const Rat& v) {
    Int n = numerator(v) % static_cast<long>(P);
    Int d = denominator(v) % static_cast<long>(P);
    std::uint64_t nn = mpz_get_ui(n.get_mpz_t());
    if (sgn(n) < 0) nn = P - nn;
    std::uint64_t dd = mpz_get_ui(d.get_mpz_t());
    assert(dd != 0);
    return static_cast<std::uint32_t>(mul(nn % P, inv(dd % P)));
  }

  static FpRow to_fp(const SparseRow& row) {
    FpRow r;
    r.reserve(row.size());
    for (const auto& [c, v] : row) {
      std::uint32_t x = to_fp(v);
      if (x) r.emplace_back(c, x);
    }
    return r;
  }

  bool add(const SparseRow& row) { return add_fp(to_fp(row)); }

  bool add_fp(FpRow row) {
    while (!row.empty()) {
      auto it = rows_.find(row[0].first);
      if (it == rows_.end()) {
        std::uint64_t iv = inv(row[0].second);
        for (auto& [c, v] : row)
          v = static_cast<std::uint32_t>(mul(v, iv));
        rows_.emplace(row[0].first, std::move(row));
        return true;
      }
      row = axpy(row, P - row[0].second, it->second);
    }
    return false;
  }

 private:
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    return (a * b) % P;
  }
  static std::uint64_t inv(std::uint64_t a) {
    // Fermat: a^(p-2) mod p.
    std::uint64_t e = P - 2, r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  static FpRow axpy(const FpRow& a, std::uint64_t c, const FpRow& b) {
    FpRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        std::uint32_t v = static_cast<std::uint32_t>(mul(c, b[j].second));
        if (v) out.emplace_back(b[j].first, v);
        ++j;
      } else {
        std::uint32_t v = static_cast<std::uint32_t>(
            (a[i].second + mul(c, b[j].second)) % P);
        if (v) out.emplace_back(a[i].first, v);
        ++i, ++j;
      }
    }
    return out;
  }

  std::map<int, FpRow> rows_;  // leading column -> row, leading entry 1
};

}  // namespace sympres
