#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sympres/presentation.hpp"

namespace sympres {

namespace fam {

// ---------------------------------------------------------------------------
// Pair-of-classes families. Slots are classes in (wedge^2 H)/Q omega; a pair
// of classes is admissible when its contraction vanishes, and every stored
// generator has a designated special class (a symplectic or isotropic pair)
// in at least one slot. The table is organized around a finite anchor pool:
// one block per anchor and side, with the varying slot as the block payload.
//
// Pool truncation: the anchor classes come from pairs of small vectors. The
// height knob selects the vector menu; each step adds a layer:
//   1  standard basis vectors and the mixed differences a_i - b_j, b_i - a_j
//   2  adds the same-letter sums a_i +/- a_j            (default)
//   3  adds a_i +/- b_i, the mixed sums a_i + b_j, and b_i +/- b_j
//   4  every vector of support <= 2 with entries in {-1,0,1}
// ---------------------------------------------------------------------------

inline std::string wkey(const SparseRow& klass) {
  std::ostringstream os;
  os << 'w';
  for (const auto& [q, c] : klass) os << ' ' << q << ':' << c;
  return os.str();
}

struct KPoolEntry {
  SparseRow klass;  // class of x ^ y, the anchor identity
  IntVec x, y;      // representative pair with class_of_pair(x, y) == klass
  PairTag tag = PairTag::Symplectic;
  std::vector<SparseRow> beta;  // class basis of the admissible-partner space
  IntMat comp;                  // lattice basis of the orthogonal complement
  int scaled_from = -1;         // pool index this anchor is a multiple of
};

struct KPool {
  std::vector<KPoolEntry> entries;
  std::map<std::string, int> index;  // wkey -> pool index
  int n_sym = 0;

  int find(const SparseRow& klass) const {
    auto it = index.find(wkey(klass));
    return it == index.end() ? -1 : it->second;
  }
};

inline std::vector<IntVec> pool_vector_menu(int g, int level) {
  const int n = 2 * g;
  std::vector<IntVec> out;
  auto unit = [&](int i, int s) {
    IntVec v(n, Int(0));
    v[i] = s;
    return v;
  };
  auto pair2 = [&](int i, int si, int j, int sj) {
    IntVec v(n, Int(0));
    v[i] = si;
    v[j] = sj;
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) out.push_back(unit(i, s));
  if (level >= 4) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1}) out.push_back(pair2(i, si, j, sj));
    return out;
  }
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      if (i == j) continue;
      for (int s : {1, -1}) {
        out.push_back(pair2(2 * i, s, 2 * j + 1, -s));
        out.push_back(pair2(2 * i + 1, s, 2 * j, -s));
      }
    }
  if (level >= 2)
    for (int i = 0; i < g; ++i)
      for (int j = i + 1; j < g; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1}) out.push_back(pair2(2 * i, si, 2 * j, sj));
  if (level >= 3)
    for (int i = 0; i < g; ++i)
      for (int si : {1, -1})
        for (int sj : {1, -1}) out.push_back(pair2(2 * i, si, 2 * i + 1, sj));
  return out;
}

inline void kpool_insert(const GenusContext& ctx, KPool& pool, const IntVec& x,
                         const IntVec& yin, PairTag tag) {
  IntVec y = yin;
  SparseRow k = class_of_pair(ctx, x, y);
  if (k.empty()) return;
  if (tag != PairTag::Symplectic && k.front().second < 0) {
    k = row_scaled(Rat(-1), k);
    for (auto& c : y) c = -c;
  }
  std::string key = wkey(k);
  if (pool.index.count(key)) return;
  pool.index.emplace(std::move(key), static_cast<int>(pool.entries.size()));
  KPoolEntry e;
  e.klass = std::move(k);
  e.x = x;
  e.y = y;
  e.tag = tag;
  e.beta = sym_orth_basis(ctx, x, y);
  e.comp = orthogonal_complement(saturation({x, y}).basis);
  pool.entries.push_back(std::move(e));
  if (tag == PairTag::Symplectic) ++pool.n_sym;
}

// Symplectic anchors first, then (optionally) strong isotropic anchors.
inline KPool build_kpool(const GenusContext& ctx, int level, bool with_iso) {
  std::vector<IntVec> vecs = pool_vector_menu(ctx.g, level);
  KPool pool;
  for (const IntVec& x : vecs)
    for (const IntVec& y : vecs)
      if (omega(x, y) == 1) kpool_insert(ctx, pool, x, y, PairTag::Symplectic);
  if (with_iso)
    for (const IntVec& x : vecs)
      for (const IntVec& y : vecs) {
        if (omega(x, y) != 0) continue;
        PairClass c = classify_pair(x, y);
        if (c.tag == PairTag::IsotropicStrong)
          kpool_insert(ctx, pool, x, y, PairTag::IsotropicStrong);
      }
  return pool;
}

// Doubled standard isotropic anchors; these instantiate the integer-scaling
// rows against their unscaled counterparts.
inline void add_scaled_anchors(const GenusContext& ctx, KPool& pool) {
  const int n = 2 * ctx.g;
  for (int i = 0; i < ctx.g; ++i)
    for (int j = i + 1; j < ctx.g; ++j) {
      IntVec x(n, Int(0)), y(n, Int(0));
      x[2 * i] = 2;
      y[2 * j] = 1;
      IntVec xs(n, Int(0));
      xs[2 * i] = 1;
      int base = pool.find(class_of_pair(ctx, xs, y));
      if (base < 0) continue;
      std::size_t before = pool.entries.size();
      kpool_insert(ctx, pool, x, y, PairTag::IsotropicNonstrong);
      if (pool.entries.size() > before) pool.entries.back().scaled_from = base;
    }
}

// Keeps only anchors whose pooled partners span their full admissible space,
// iterating since each removal shrinks the partner sets. With the surviving
// pool every block's payload basis consists of pooled partner classes, so
// every expansion lands on in-table symbols.
inline void curate_kpool(const GenusContext& ctx, KPool& pool) {
  const std::size_t n = pool.entries.size();
  if (n == 0) return;
  const int full = static_cast<int>(pool.entries[0].beta.size());
  std::vector<std::vector<int>> adj(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (contraction(ctx, pool.entries[p].klass, pool.entries[q].klass)
              .empty())
        adj[p].push_back(static_cast<int>(q));
  std::vector<bool> alive(n, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (!alive[p]) continue;
      SpanSolver ss(ctx.quotient_dim());
      for (int q : adj[p]) {
        if (!alive[q]) continue;
        ss.add(make_dense(pool.entries[q].klass, ctx.quotient_dim()));
        if (ss.rank() >= full) break;
      }
      if (ss.rank() < full) {
        alive[p] = false;
        changed = true;
      }
    }
  }
  KPool out;
  for (std::size_t p = 0; p < n; ++p) {
    if (!alive[p]) continue;
    out.index.emplace(wkey(pool.entries[p].klass),
                      static_cast<int>(out.entries.size()));
    if (pool.entries[p].tag == PairTag::Symplectic) ++out.n_sym;
    out.entries.push_back(std::move(pool.entries[p]));
  }
  pool = std::move(out);
}

// Per-anchor member list: pooled partner classes first (they carry the
// payload basis), then the complement-wedge classes as dependent members.
// Identical for an anchor and its scaled multiple.
struct KBlockPlan {
  std::vector<SparseRow> members;          // varying-slot class per member
  std::vector<int> partner_pool;           // pool index, or -1 for a beta row
  SpanSolver basis;                        // spans the admissible classes
  std::vector<std::vector<std::pair<int, Rat>>> coords;  // member -> basis
  std::vector<char> in_basis;              // member index -> carries the basis

  explicit KBlockPlan(int width) : basis(width) {}
};

inline KBlockPlan plan_block(const GenusContext& ctx, const KPool& pool,
                             int pid) {
  const KPoolEntry& e = pool.entries[pid];
  KBlockPlan plan(ctx.quotient_dim());
  std::set<std::string> seen;
  for (std::size_t q = 0; q < pool.entries.size(); ++q) {
    const SparseRow& k = pool.entries[q].klass;
    if (!contraction(ctx, e.klass, k).empty()) continue;
    if (!seen.insert(wkey(k)).second) continue;
    plan.members.push_back(k);
    plan.partner_pool.push_back(static_cast<int>(q));
  }
  for (const SparseRow& b : e.beta) {
    if (!seen.insert(wkey(b)).second) continue;
    plan.members.push_back(b);
    plan.partner_pool.push_back(-1);
  }
  for (const SparseRow& m : plan.members) {
    std::vector<Rat> dense = make_dense(m, ctx.quotient_dim());
    plan.basis.add(dense);
    auto sol = plan.basis.solve(dense);
    plan.coords.push_back(*sol);
  }
  plan.in_basis.assign(plan.members.size(), 0);
  for (int m : plan.basis.basis_members())
    plan.in_basis[static_cast<std::size_t>(m)] = 1;
  return plan;
}

struct KDriver {
  static constexpr bool kTwoSlot = true;
  enum Kind { Plain = 0, Sym = 1, Anti = 2 };
  int g = 4;
  int kind = Plain;
  GenusContext ctx;
  mutable KPool pool;
  mutable std::vector<KBlockPlan> plans;
  mutable bool ready = false;

  KDriver(int genus, int k) : g(genus), kind(k), ctx(genus) {}

  Flavor flavor() const { return Flavor::Sp; }
  int phi_width() const {
    const int q = ctx.quotient_dim();
    if (kind == Anti) return q * (q - 1) / 2;
    if (kind == Sym) return q * (q + 1) / 2;
    return q * q;
  }
  int phi_rank_cap() const {
    if (kind == Anti) return contraction_wedge_kernel_dim(ctx);
    if (kind == Sym) return phi_width();
    return contraction_tensor_kernel_dim(ctx);
  }

  void ensure(const Truncation& t) const {
    if (ready) return;
    pool = build_kpool(ctx, t.height, kind != Plain, kind != Plain);
    plans.reserve(pool.entries.size());
    for (std::size_t p = 0; p < pool.entries.size(); ++p)
      plans.push_back(plan_block(ctx, pool, static_cast<int>(p)));
    ready = true;
  }

  static std::string skey(const SparseRow& k1, const SparseRow& k2) {
    return '[' + wkey(k1) + '|' + wkey(k2) + ']';
  }

  template <class Sink>
  void enumerate_symbols(const Truncation& t, Sink sink) const {
    ensure(t);
    for (std::size_t p = 0; p < pool.entries.size(); ++p) {
      const SparseRow& anchor = pool.entries[p].klass;
      for (const SparseRow& m : plans[p].members) {
        GeneratorSymbol s;
        s.a = {Int(0), Int(static_cast<long>(p))};
        s.k1 = anchor;
        s.k2 = m;
        s.key = skey(s.k1, s.k2);
        sink(std::move(s));
      }
    }
    if (kind != Plain) return;
    // The unconstrained family keeps mirror symbols for the payload basis;
    // partner mirrors already live in the partner's own block.
    for (std::size_t p = 0; p < pool.entries.size(); ++p) {
      const SparseRow& anchor = pool.entries[p].klass;
      for (std::size_t i = 0; i < plans[p].members.size(); ++i) {
        if (plans[p].partner_pool[i] >= 0) continue;
        const SparseRow& m = plans[p].members[i];
        if (pool.find(m) >= 0 || pool.find(row_scaled(Rat(-1), m)) >= 0)
          continue;
        GeneratorSymbol s;
        s.a = {Int(1), Int(static_cast<long>(p))};
        s.k1 = m;
        s.k2 = anchor;
        s.key = skey(s.k1, s.k2);
        sink(std::move(s));
      }
    }
  }

  std::vector<Rat> payload_dense(const GeneratorSymbol& s) const {
    const SparseRow& k = s.a[0] == 0 ? s.k2 : s.k1;
    return make_dense(k, ctx.quotient_dim());
  }

  // Rewrites [k1|k2] as a signed in-table symbol, using the slot-sign and
  // (for the constrained kinds) slot-swap relations. Returns nullopt when
  // the class pair has no table representative.
  std::optional<std::pair<Rat, std::string>> resolve(
      const PresentedSpace& sp, const SparseRow& k1,
      const SparseRow& k2) const {
    auto direct = [&](const SparseRow& a, const SparseRow& b,
                      Rat sign) -> std::optional<std::pair<Rat, std::string>> {
      int p = pool.find(a);
      if (p >= 0) {
        std::string key = skey(a, b);
        if (sp.index.count(key)) return std::make_pair(sign, key);
      }
      SparseRow na = row_scaled(Rat(-1), a);
      p = pool.find(na);
      if (p >= 0) {
        // Slot scaling by -1 at a pooled anchor; for the unconstrained kind
        // this needs the other slot to be a pooled (symplectic) class.
        if (kind == Plain && pool.find(b) < 0) return std::nullopt;
        std::string key = skey(na, b);
        if (sp.index.count(key)) return std::make_pair(-sign, key);
      }
      return std::nullopt;
    };
    if (auto r = direct(k1, k2, Rat(1))) return r;
    if (kind == Plain) {
      std::string key = skey(k1, k2);
      if (sp.index.count(key)) return std::make_pair(Rat(1), key);
      return std::nullopt;
    }
    return direct(k2, k1, kind == Anti ? Rat(-1) : Rat(1));
  }

  template <class Keep, class Drop>
  void block_rows(const PresentedSpace& sp, int b0, int b1, Keep keep,
                  Drop) const {
    ensure(sp.trunc);
    if (sp.symbols[b0].a[0] != 0) return;  // mirror blocks carry no ties
    const int p = static_cast<int>(sp.symbols[b0].a[1].get_si());
    const KBlockPlan& plan = plans[p];
    const std::size_t nb = pool.entries[p].beta.size();
    // Anchor-slot linearity: every member is tied to the payload basis.
    std::map<int, int> add_local;  // solver add index -> local member
    for (std::size_t i = 0; i < nb; ++i)
      add_local[static_cast<int>(i)] = static_cast<int>(i);
    for (std::size_t i = nb; i < plan.members.size(); ++i) {
      SparseRow r{{b0 + static_cast<int>(i), Rat(1)}};
      for (const auto& [add, c] : plan.coords[i])
        r.emplace_back(b0 + add_local.at(add), -c);
      std::sort(r.begin(), r.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      keep(std::move(r));
    }
  }

  template <class Keep, class Drop>
  void cross_rows(const PresentedSpace& sp, Keep keep, Drop drop) const {
    ensure(sp.trunc);
    auto sym_index = [&](const std::string& key) {
      auto it = sp.index.find(key);
      return it == sp.index.end() ? -1 : it->second;
    };
    auto emit = [&](std::map<int, Rat>& acc) {
      SparseRow r;
      for (auto& [s, c] : acc)
        if (!is_zero(c)) r.emplace_back(s, c);
      if (!r.empty()) keep(std::move(r));
    };

    // Varying-slot linearity across blocks: a pooled pair [zp|za] is also a
    // combination of the anchor za's payload basis in the first slot.
    for (std::size_t p = 0; p < pool.entries.size(); ++p) {
      const KPoolEntry& anchor = pool.entries[p];
      const KBlockPlan& plan = plans[p];
      const std::size_t nb = anchor.beta.size();
      for (std::size_t i = nb; i < plan.members.size(); ++i) {
        if (plan.partner_pool[i] < 0) continue;
        int q = plan.partner_pool[i];
        int left = sym_index(skey(pool.entries[q].klass, anchor.klass));
        if (left < 0) {
          drop();
          continue;
        }
        std::map<int, Rat> acc;
        acc[left] += Rat(1);
        bool ok = true;
        for (const auto& [add, c] : plans[p].coords[i]) {
          const SparseRow& b = anchor.beta[static_cast<std::size_t>(add)];
          auto res = resolve(sp, b, anchor.klass);
          if (!res) {
            ok = false;
            break;
          }
          int s = sym_index(res->second);
          if (s < 0) {
            ok = false;
            break;
          }
          acc[s] -= c * res->first;
        }
        if (!ok) {
          drop();
          continue;
        }
        emit(acc);
      }
    }

    if (kind == Plain) return;

    // Slot-swap rows.
    const Rat eps = kind == Anti ? Rat(-1) : Rat(1);
    for (int i = 0; i < static_cast<int>(sp.symbols.size()); ++i) {
      const GeneratorSymbol& s = sp.symbols[i];
      auto res = resolve(sp, s.k2, s.k1);
      if (!res) {
        drop();
        continue;
      }
      int j = sym_index(res->second);
      if (j < 0 || j < i) continue;
      std::map<int, Rat> acc;
      acc[i] += Rat(1);
      acc[j] -= eps * res->first;
      emit(acc);
    }

    // Integer-scaling rows tying each doubled anchor to its base anchor.
    for (std::size_t p = 0; p < pool.entries.size(); ++p) {
      int base = pool.entries[p].scaled_from;
      if (base < 0) continue;
      const KBlockPlan& plan = plans[p];
      const KBlockPlan& bplan = plans[static_cast<std::size_t>(base)];
      if (plan.members.size() != bplan.members.size())
        throw std::logic_error("scaled anchor's member list diverged");
      for (std::size_t i = 0; i < plan.members.size(); ++i) {
        int hi = sym_index(skey(pool.entries[p].klass, plan.members[i]));
        int lo = sym_index(
            skey(pool.entries[static_cast<std::size_t>(base)].klass,
                 bplan.members[i]));
        if (hi < 0 || lo < 0) {
          drop();
          continue;
        }
        std::map<int, Rat> acc;
        acc[hi] += Rat(1);
        acc[lo] -= Rat(2);
        emit(acc);
      }
    }
  }

  std::vector<Rat> phi(const GeneratorSymbol& s) const {
    if (kind == Anti)
      return make_dense(outer_wedge(ctx, s.k1, s.k2), phi_width());
    if (kind == Sym)
      return make_dense(outer_sym(ctx, s.k1, s.k2), phi_width());
    return make_dense(outer_tensor(ctx, s.k1, s.k2), phi_width());
  }

  std::pair<Rat, std::string> transformed(const GroupElement& g_,
                                          const GroupElement&,
                                          const GeneratorSymbol& s) const {
    SparseRow k1 = act_class(ctx, g_, s.k1);
    SparseRow k2 = act_class(ctx, g_, s.k2);
    auto form = [&](const SparseRow& a, const SparseRow& b,
                    Rat sign) -> std::optional<std::pair<Rat, std::string>> {
      if (pool.find(a) >= 0) return std::make_pair(sign, skey(a, b));
      SparseRow na = row_scaled(Rat(-1), a);
      if (pool.find(na) >= 0 && !(kind == Plain && pool.find(b) < 0))
        return std::make_pair(-sign, skey(na, b));
      return std::nullopt;
    };
    if (auto r = form(k1, k2, Rat(1))) return *r;
    if (kind != Plain)
      if (auto r = form(k2, k1, kind == Anti ? Rat(-1) : Rat(1))) return *r;
    return {Rat(1), skey(k1, k2)};
  }
};

// ---------------------------------------------------------------------------
// Summand-anchored pair family. Anchors are rank-2 symplectic summands V
// (pooled by their wedge class); the varying slot is an integer wedge over
// the orthogonal complement of V, stored as coordinates over the complement's
// wedge basis. Both slot orders are kept as separate generators; the rows
// that glue [V, omega_W] to [omega_V, W] connect the two sides.
// ---------------------------------------------------------------------------

struct KpgDriver {
  static constexpr bool kTwoSlot = true;
  int g = 4;
  GenusContext ctx;
  struct Member {
    IntVec lift;      // coordinates over the anchor's complement-wedge basis
    SparseRow klass;  // class of the lifted wedge
  };
  mutable KPool pool;
  mutable std::vector<std::vector<Member>> mem;
  mutable bool ready = false;

  explicit KpgDriver(int genus) : g(genus), ctx(genus) {}

  Flavor flavor() const { return Flavor::Sp; }
  int phi_width() const {
    return ctx.quotient_dim() * ctx.quotient_dim();
  }
  int phi_rank_cap() const { return contraction_tensor_kernel_dim(ctx); }

  static std::string lift_key(const IntVec& v) {
    std::ostringstream os;
    for (const Int& c : v) os << c << ',';
    return os.str();
  }

  void ensure(const Truncation& t) const {
    if (ready) return;
    pool = build_kpool(ctx, t.height, false, false);
    SparseRow omega_row;
    for (int i = 1; i <= g; ++i)
      omega_row = row_axpy(omega_row, Rat(1),
                           wedge_of(ctx, std_a(g, i), std_b(g, i)));
    mem.resize(pool.entries.size());
    for (std::size_t p = 0; p < pool.entries.size(); ++p) {
      const KPoolEntry& e = pool.entries[p];
      const int m = static_cast<int>(e.comp.size());
      SpanSolver ws(ctx.wedge_dim());
      std::vector<Member>& ms = mem[p];
      std::set<std::string> seen;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          SparseRow w = wedge_of(ctx, e.comp[a], e.comp[b]);
          ws.add(make_dense(w, ctx.wedge_dim()));
          Member u;
          u.lift.assign(m * (m - 1) / 2, Int(0));
          u.lift[static_cast<std::size_t>(ms.size())] = 1;
          u.klass = to_wedge_class(ctx, w);
          seen.insert(lift_key(u.lift));
          ms.push_back(std::move(u));
        }
      auto lift_of = [&](const SparseRow& w) {
        auto sol = ws.solve(make_dense(w, ctx.wedge_dim()));
        if (!sol)
          throw std::logic_error("wedge escapes the complement of its anchor");
        IntVec lift(static_cast<std::size_t>(m * (m - 1) / 2), Int(0));
        for (const auto& [j, c] : *sol) {
          if (denominator(c) != 1)
            throw std::logic_error("non-integral complement-wedge coordinate");
          lift[static_cast<std::size_t>(j)] = numerator(c);
        }
        return lift;
      };
      for (std::size_t q = 0; q < pool.entries.size(); ++q) {
        const KPoolEntry& w = pool.entries[q];
        if (omega(e.x, w.x) != 0 || omega(e.x, w.y) != 0 ||
            omega(e.y, w.x) != 0 || omega(e.y, w.y) != 0)
          continue;
        Member pm;
        pm.lift = lift_of(wedge_of(ctx, w.x, w.y));
        if (!seen.insert(lift_key(pm.lift)).second) continue;
        pm.klass = w.klass;
        ms.push_back(std::move(pm));
      }
      SparseRow rest =
          row_axpy(omega_row, Rat(-1), wedge_of(ctx, e.x, e.y));
      Member rm;
      rm.lift = lift_of(rest);
      if (seen.insert(lift_key(rm.lift)).second) {
        rm.klass = to_wedge_class(ctx, rest);
        ms.push_back(std::move(rm));
      }
    }
    ready = true;
  }

  static std::string skey(const SparseRow& k1, const SparseRow& k2,
                          bool mirror) {
    std::string s = '[' + wkey(k1) + '|' + wkey(k2) + ']';
    if (mirror) s += '~';
    return s;
  }

  template <class Sink>
  void enumerate_symbols(const Truncation& t, Sink sink) const {
    ensure(t);
    for (int side = 0; side < 2; ++side)
      for (std::size_t p = 0; p < pool.entries.size(); ++p) {
        const SparseRow& anchor = pool.entries[p].klass;
        for (const Member& m : mem[p]) {
          GeneratorSymbol s;
          s.a = {Int(side), Int(static_cast<long>(p))};
          s.b = m.lift;
          s.k1 = side == 0 ? anchor : m.klass;
          s.k2 = side == 0 ? m.klass : anchor;
          s.key = side == 0 ? skey(anchor, m.klass, false)
                            : skey(m.klass, anchor, true);
          sink(std::move(s));
        }
      }
  }

  template <class Keep, class Drop>
  void block_rows(const PresentedSpace& sp, int b0, int b1, Keep keep,
                  Drop) const {
    ensure(sp.trunc);
    const auto p = static_cast<std::size_t>(sp.symbols[b0].a[1].get_si());
    const std::vector<Member>& ms = mem[p];
    const std::size_t units = pool.entries[p].comp.size() *
                              (pool.entries[p].comp.size() - 1) / 2;
    for (std::size_t i = units; i < ms.size(); ++i) {
      SparseRow r{{b0 + static_cast<int>(i), Rat(1)}};
      for (std::size_t j = 0; j < units; ++j)
        if (ms[i].lift[j] != 0)
          r.emplace_back(b0 + static_cast<int>(j), Rat(-ms[i].lift[j]));
      std::sort(r.begin(), r.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      keep(std::move(r));
    }
    (void)b1;
  }

  template <class Keep, class Drop>
  void cross_rows(const PresentedSpace& sp, Keep keep, Drop drop) const {
    ensure(sp.trunc);
    auto sym_index = [&](const std::string& key) {
      auto it = sp.index.find(key);
      return it == sp.index.end() ? -1 : it->second;
    };
    auto glue = [&](const std::string& lkey, const std::string& rkey) {
      int left = sym_index(lkey);
      int right = sym_index(rkey);
      if (left < 0 || right < 0) {
        drop();
        return;
      }
      keep(SparseRow{{std::min(left, right), Rat(1)},
                     {std::max(left, right), Rat(-1)}});
    };
    // [V, omega_W] agrees with [omega_V, W] for orthogonal anchors, and
    // [V, omega rest] with [omega rest, V] at every anchor.
    for (std::size_t p = 0; p < pool.entries.size(); ++p) {
      const KPoolEntry& e = pool.entries[p];
      for (std::size_t q = 0; q < pool.entries.size(); ++q) {
        const KPoolEntry& w = pool.entries[q];
        if (omega(e.x, w.x) != 0 || omega(e.x, w.y) != 0 ||
            omega(e.y, w.x) != 0 || omega(e.y, w.y) != 0)
          continue;
        glue(skey(e.klass, w.klass, false), skey(e.klass, w.klass, true));
      }
      SparseRow rest_klass = row_scaled(Rat(-1), e.klass);
      glue(skey(e.klass, rest_klass, false), skey(rest_klass, e.klass, true));
    }
  }

  std::vector<Rat> phi(const GeneratorSymbol& s) const {
    return make_dense(outer_tensor(ctx, s.k1, s.k2), phi_width());
  }

  std::pair<Rat, std::string> transformed(const GroupElement& g_,
                                          const GroupElement&,
                                          const GeneratorSymbol& s) const {
    SparseRow k1 = act_class(ctx, g_, s.k1);
    SparseRow k2 = act_class(ctx, g_, s.k2);
    return {Rat(1), skey(k1, k2, s.a[0] != 0)};
  }
};

}  // namespace fam

}  // namespace sympres
