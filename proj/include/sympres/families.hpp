#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sympres/families_k.hpp"
#include "sympres/presentation.hpp"

namespace sympres {

namespace fam {

using LVec = std::vector<long>;

inline long height_of(const LVec& v) {
  long h = 0;
  for (long x : v) h = std::max(h, std::labs(x));
  return h;
}

inline bool is_primitive_l(const LVec& v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, std::labs(x));
  return g == 1;
}

// {u, v} extends to a basis of the ambient lattice iff the gcd of the 2x2
// minors is 1.
inline bool pair_partial_basis(const LVec& u, const LVec& v) {
  long g = 0;
  const std::size_t n = u.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      g = std::gcd(g, std::labs(u[i] * v[j] - u[j] * v[i]));
      if (g == 1) return true;
    }
  return false;
}

inline long omega_l(const LVec& u, const LVec& v) {
  long s = 0;
  for (std::size_t i = 0; i + 1 < u.size(); i += 2)
    s += u[i] * v[i + 1] - u[i + 1] * v[i];
  return s;
}

inline LVec add_l(const LVec& u, const LVec& v) {
  LVec w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i];
  return w;
}

inline bool is_negation(const LVec& u, const LVec& v) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != -v[i]) return false;
  return true;
}

// Lexicographic enumeration of all vectors with coordinates in [-h, h], the
// first coordinate most significant.
template <class F>
void for_each_vec(int n, int h, F&& f) {
  LVec v(n, -h);
  for (;;) {
    f(const_cast<const LVec&>(v));
    int i = n - 1;
    while (i >= 0 && v[i] == h) v[i--] = -h;
    if (i < 0) return;
    ++v[i];
  }
}

inline IntVec iv(const LVec& v) {
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Int(v[i]);
  return out;
}

inline LVec lv(const IntVec& v) {
  LVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_si();
  return out;
}

inline std::string vkey(const LVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  s += ']';
  return s;
}

inline std::string pkey(const LVec& a, const LVec& b) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  s += '|';
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(b[i]);
  }
  s += ']';
  return s;
}

inline SparseRow row3(int i, int j, int k) {
  SparseRow r{{i, Rat(1)}, {j, Rat(1)}, {k, Rat(-1)}};
  std::sort(r.begin(), r.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return r;
}

inline std::vector<Rat> vec_to_rat(const IntVec& v) {
  std::vector<Rat> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// One-slot vector classes: [v] for primitive v, additive over partial bases.
// The primed variant restricts the first coordinate to {-1,0,1} and requires
// one member of each additive pair to have vanishing first coordinate.
// ---------------------------------------------------------------------------
struct QDriver {
  static constexpr bool kTwoSlot = false;
  int n = 2;
  bool primed = false;

  Flavor flavor() const { return Flavor::SL; }
  int phi_width() const { return n; }

  template <class Sink>
  void enumerate_symbols(const Truncation& t, Sink sink) const {
    for_each_vec(n, t.height, [&](const LVec& v) {
      if (!is_primitive_l(v)) return;
      if (primed && std::labs(v[0]) > 1) return;
      GeneratorSymbol s;
      s.a = iv(v);
      s.key = vkey(v);
      sink(std::move(s));
    });
  }

  template <class Keep, class Drop>
  void all_rows(const PresentedSpace& sp, Keep keep, Drop drop) const {
    const int s = static_cast<int>(sp.symbols.size());
    std::vector<LVec> tab(s);
    std::map<LVec, int> idx;
    for (int i = 0; i < s; ++i) {
      tab[i] = lv(sp.symbols[i].a);
      idx.emplace(tab[i], i);
    }
    const long h = sp.trunc.height;
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) {
        if (primed && std::labs(tab[i][0] + tab[j][0]) > 1) continue;
        if (!pair_partial_basis(tab[i], tab[j])) continue;
        LVec sum = add_l(tab[i], tab[j]);
        if (height_of(sum) > h) {
          drop();
          continue;
        }
        keep(row3(i, j, idx.at(sum)));
      }
  }

  std::vector<Rat> phi(const GeneratorSymbol& s) const {
    return vec_to_rat(s.a);
  }

  std::pair<Rat, std::string> transformed(const GroupElement& g,
                                          const GroupElement&,
                                          const GeneratorSymbol& s) const {
    return {Rat(1), vkey(lv(act(g, s.a)))};
  }
};

// ---------------------------------------------------------------------------
// One-slot symplectic classes: [v], additive over orthogonal partial bases.
// ---------------------------------------------------------------------------
struct HDriver {
  static constexpr bool kTwoSlot = false;
  int g = 2;

  Flavor flavor() const { return Flavor::Sp; }
  int phi_width() const { return 2 * g; }

  template <class Sink>
  void enumerate_symbols(const Truncation& t, Sink sink) const {
    for_each_vec(2 * g, t.height, [&](const LVec& v) {
      if (!is_primitive_l(v)) return;
      GeneratorSymbol s;
      s.a = iv(v);
      s.key = vkey(v);
      sink(std::move(s));
    });
  }

  template <class Keep, class Drop>
  void all_rows(const PresentedSpace& sp, Keep keep, Drop drop) const {
    const int s = static_cast<int>(sp.symbols.size());
    std::vector<LVec> tab(s);
    std::map<LVec, int> idx;
    for (int i = 0; i < s; ++i) {
      tab[i] = lv(sp.symbols[i].a);
      idx.emplace(tab[i], i);
    }
    const long h = sp.trunc.height;
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) {
        if (omega_l(tab[i], tab[j]) != 0) continue;
        if (!pair_partial_basis(tab[i], tab[j])) continue;
        LVec sum = add_l(tab[i], tab[j]);
        if (height_of(sum) > h) {
          drop();
          continue;
        }
        keep(row3(i, j, idx.at(sum)));
      }
  }

  std::vector<Rat> phi(const GeneratorSymbol& s) const {
    return vec_to_rat(s.a);
  }

  std::pair<Rat, std::string> transformed(const GroupElement& g_,
                                          const GroupElement&,
                                          const GeneratorSymbol& s) const {
    return {Rat(1), vkey(lv(act(g_, s.a)))};
  }
};

// ---------------------------------------------------------------------------
// Two-slot functional/vector classes: [f|v] with f(v) = 0, additive in each
// slot over partial bases of the kernel of the other. The primed variant
// restricts f to first-dual-coordinate in {-1,0,1} and v to second-coordinate
// in {-1,0,1}, with the matching vanishing requirement in each additive pair.
// ---------------------------------------------------------------------------
struct ADriver {
  static constexpr bool kTwoSlot = true;
  int n = 3;
  bool primed = false;

  Flavor flavor() const { return Flavor::SL; }
  int phi_width() const { return n * n; }

  template <class Sink>
  void enumerate_symbols(const Truncation& t, Sink sink) const {
    for_each_vec(n, t.height, [&](const LVec& f) {
      if (!is_primitive_l(f)) return;
      if (primed && std::labs(f[0]) > 1) return;
      for_each_vec(n, t.height, [&](const LVec& v) {
        if (!is_primitive_l(v)) return;
        if (primed && std::labs(v[1]) > 1) return;
        long dot = 0;
        for (int i = 0; i < n; ++i) dot += f[i] * v[i];
        if (dot != 0) return;
        GeneratorSymbol s;
        s.a = iv(f);
        s.b = iv(v);
        s.key = pkey(f, v);
        sink(std::move(s));
      });
    });
  }

  template <class Keep, class Drop>
  void block_rows(const PresentedSpace& sp, int b0, int b1, Keep keep,
                  Drop drop) const {
    const int w = b1 - b0;
    std::vector<LVec> tab(w);
    std::map<LVec, int> idx;
    for (int i = 0; i < w; ++i) {
      tab[i] = lv(sp.symbols[b0 + i].b);
      idx.emplace(tab[i], b0 + i);
    }
    const long h = sp.trunc.height;
    for (int i = 0; i < w; ++i)
      for (int j = i + 1; j < w; ++j) {
        if (primed && std::labs(tab[i][1] + tab[j][1]) > 1) continue;
        if (!pair_partial_basis(tab[i], tab[j])) continue;
        LVec sum = add_l(tab[i], tab[j]);
        if (height_of(sum) > h) {
          drop();
          continue;
        }
        keep(row3(b0 + i, b0 + j, idx.at(sum)));
      }
  }

  template <class Keep, class Drop>
  void cross_rows(const PresentedSpace& sp, Keep keep, Drop drop) const {
    const int s = static_cast<int>(sp.symbols.size());
    std::vector<LVec> fs(s), vs(s);
    std::map<LVec, std::vector<int>> by_v;
    std::map<std::pair<LVec, LVec>, int> idx;
    for (int i = 0; i < s; ++i) {
      fs[i] = lv(sp.symbols[i].a);
      vs[i] = lv(sp.symbols[i].b);
      by_v[vs[i]].push_back(i);
      idx.emplace(std::make_pair(fs[i], vs[i]), i);
    }
    const long h = sp.trunc.height;
    for (const auto& [v, members] : by_v) {
      const int w = static_cast<int>(members.size());
      for (int i = 0; i < w; ++i)
        for (int j = i + 1; j < w; ++j) {
          const LVec& fi = fs[members[i]];
          const LVec& fj = fs[members[j]];
          if (primed && std::labs(fi[0] + fj[0]) > 1) continue;
          if (!pair_partial_basis(fi, fj)) continue;
          LVec sum = add_l(fi, fj);
          if (height_of(sum) > h) {
            drop();
            continue;
          }
          keep(row3(members[i], members[j], idx.at({sum, v})));
        }
    }
  }

  // The endomorphism x -> f(x) v, row-major.
  std::vector<Rat> phi(const GeneratorSymbol& s) const {
    std::vector<Rat> out(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = Rat(s.b[i] * s.a[j]);
    return out;
  }

  std::pair<Rat, std::string> transformed(const GroupElement& g,
                                          const GroupElement& ginv,
                                          const GeneratorSymbol& s) const {
    LVec f = lv(s.a);
    LVec fp(n, 0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) fp[j] += f[i] * ginv.m[i][j].get_si();
    return {Rat(1), pkey(fp, lv(act(g, s.b)))};
  }
};

// ---------------------------------------------------------------------------
// Two-slot symplectic pair classes: [v1|v2] with v1, v2 primitive,
// orthogonal, and independent. Kind selects the extra relation: antisymmetry,
// symmetry, or first-slot additivity (the unconstrained pair family). All
// three share second-slot additivity over partial bases of the first slot's
// orthogonal complement.
// ---------------------------------------------------------------------------
struct ZDriver {
  static constexpr bool kTwoSlot = true;
  enum Kind { Anti = 0, Sym = 1, Full = 2 };
  int g = 2;
  int kind = Anti;
  GenusContext ctx;

  ZDriver(int genus, int k) : g(genus), kind(k), ctx(genus) {}

  Flavor flavor() const { return Flavor::Sp; }
  int phi_width() const {
    if (kind == Anti) return ctx.wedge_dim();
    if (kind == Sym) return ctx.sym_dim();
    return 4 * g * g;
  }

  template <class Sink>
  void enumerate_symbols(const Truncation& t, Sink sink) const {
    const int n = 2 * g;
    for_each_vec(n, t.height, [&](const LVec& v1) {
      if (!is_primitive_l(v1)) return;
      for_each_vec(n, t.height, [&](const LVec& v2) {
        if (!is_primitive_l(v2)) return;
        if (omega_l(v1, v2) != 0) return;
        if (v1 == v2 || is_negation(v1, v2)) return;
        GeneratorSymbol s;
        s.a = iv(v1);
        s.b = iv(v2);
        s.key = pkey(v1, v2);
        sink(std::move(s));
      });
    });
  }

  template <class Keep, class Drop>
  void block_rows(const PresentedSpace& sp, int b0, int b1, Keep keep,
                  Drop drop) const {
    const int w = b1 - b0;
    const LVec v1 = lv(sp.symbols[b0].a);
    std::vector<LVec> tab(w);
    std::map<LVec, int> idx;
    for (int i = 0; i < w; ++i) {
      tab[i] = lv(sp.symbols[b0 + i].b);
      idx.emplace(tab[i], b0 + i);
    }
    const long h = sp.trunc.height;
    for (int i = 0; i < w; ++i)
      for (int j = i + 1; j < w; ++j) {
        if (!pair_partial_basis(tab[i], tab[j])) continue;
        LVec sum = add_l(tab[i], tab[j]);
        if (height_of(sum) > h || sum == v1 || is_negation(sum, v1)) {
          drop();
          continue;
        }
        keep(row3(b0 + i, b0 + j, idx.at(sum)));
      }
  }

  template <class Keep, class Drop>
  void cross_rows(const PresentedSpace& sp, Keep keep, Drop drop) const {
    const int s = static_cast<int>(sp.symbols.size());
    if (kind != Full) {
      // One symmetry row per unordered pair of swapped symbols.
      for (int i = 0; i < s; ++i) {
        const auto it =
            sp.index.find(pkey(lv(sp.symbols[i].b), lv(sp.symbols[i].a)));
        if (it == sp.index.end() || it->second <= i) continue;
        SparseRow r{{i, Rat(1)},
                    {it->second, kind == Anti ? Rat(1) : Rat(-1)}};
        keep(std::move(r));
      }
      return;
    }
    std::vector<LVec> as(s), bs(s);
    std::map<LVec, std::vector<int>> by_b;
    std::map<std::pair<LVec, LVec>, int> idx;
    for (int i = 0; i < s; ++i) {
      as[i] = lv(sp.symbols[i].a);
      bs[i] = lv(sp.symbols[i].b);
      by_b[bs[i]].push_back(i);
      idx.emplace(std::make_pair(as[i], bs[i]), i);
    }
    const long h = sp.trunc.height;
    for (const auto& [v, members] : by_b) {
      const int w = static_cast<int>(members.size());
      for (int i = 0; i < w; ++i)
        for (int j = i + 1; j < w; ++j) {
          const LVec& wi = as[members[i]];
          const LVec& wj = as[members[j]];
          if (!pair_partial_basis(wi, wj)) continue;
          LVec sum = add_l(wi, wj);
          if (height_of(sum) > h || sum == v || is_negation(sum, v)) {
            drop();
            continue;
          }
          keep(row3(members[i], members[j], idx.at({sum, v})));
        }
    }
  }

  std::vector<Rat> phi(const GeneratorSymbol& s) const {
    if (kind == Anti) return make_dense(wedge_of(ctx, s.a, s.b), ctx.wedge_dim());
    if (kind == Sym) return make_dense(sym_product(ctx, s.a, s.b), ctx.sym_dim());
    const int n = 2 * g;
    std::vector<Rat> out(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = Rat(s.a[i] * s.b[j]);
    return out;
  }

  std::pair<Rat, std::string> transformed(const GroupElement& g_,
                                          const GroupElement&,
                                          const GeneratorSymbol& s) const {
    return {Rat(1), pkey(lv(act(g_, s.a)), lv(act(g_, s.b)))};
  }
};

template <class F>
auto dispatch(Family fam, int param, F&& f) {
  switch (fam) {
    case Family::Qn:
      return f(QDriver{param, false});
    case Family::Qpn:
      return f(QDriver{param, true});
    case Family::An:
      return f(ADriver{param, false});
    case Family::Apn:
      return f(ADriver{param, true});
    case Family::Hg:
      return f(HDriver{param});
    case Family::Zga:
      return f(ZDriver(param, ZDriver::Anti));
    case Family::Zgs:
      return f(ZDriver(param, ZDriver::Sym));
    case Family::Zg:
      return f(ZDriver(param, ZDriver::Full));
    case Family::Kgs:
      return f(KDriver(param, KDriver::Sym));
    case Family::Kga:
      return f(KDriver(param, KDriver::Anti));
    case Family::Kg:
      return f(KDriver(param, KDriver::Plain));
    case Family::Kpg:
      return f(KpgDriver(param));
    default:
      throw std::invalid_argument("family model not available");
  }
}

}  // namespace fam

inline int target_dim(Family f, int param) {
  const int n = family_param_is_genus(f) ? 2 * param : param;
  switch (f) {
    case Family::Qn:
    case Family::Qpn:
      return n;
    case Family::An:
    case Family::Apn:
      return n * n - 1;
    case Family::Hg:
      return n;
    case Family::Zga:
      return n * (n - 1) / 2 - 1;
    case Family::Zgs:
      return n * (n + 1) / 2;
    case Family::Zg:
      return n * n - 1;
    case Family::Kgs: {
      GenusContext ctx(param);
      const int qd = ctx.quotient_dim();
      return qd * (qd + 1) / 2;
    }
    case Family::Kga: {
      GenusContext ctx(param);
      return contraction_wedge_kernel_dim(ctx);
    }
    case Family::Kg:
    case Family::Kpg: {
      GenusContext ctx(param);
      return contraction_tensor_kernel_dim(ctx);
    }
  }
  return 0;
}

inline Truncation default_truncation(Family f, int param) {
  Truncation t;
  switch (f) {
    case Family::Hg:
    case Family::Zga:
    case Family::Zgs:
    case Family::Zg:
      t.height = param <= 2 ? 2 : 1;
      break;
    default:
      t.height = 2;
      break;
  }
  return t;
}

inline std::vector<GeneratorSymbol> enumerate_generators(Family f, int param,
                                                         const Truncation& t) {
  return fam::dispatch(f, param, [&](const auto& d) {
    PresentedSpace sp = detail::build_table(d, f, param, t);
    return std::move(sp.symbols);
  });
}

// Materializes the deduplicated relation rows over the truncated table. Meant
// for desk-scale tables; large builds stream rows instead (build_quotient).
inline RationalMatrix enumerate_relations(Family f, int param,
                                          const Truncation& t) {
  return fam::dispatch(f, param, [&](const auto& d) {
    PresentedSpace sp = detail::build_table(d, f, param, t);
    std::set<SparseRow> rows;
    detail::stream_rows(
        d, sp,
        [&](SparseRow r) {
          r = integerize(std::move(r), true);
          if (!r.empty()) rows.insert(std::move(r));
        },
        [] {});
    RationalMatrix m(0, static_cast<int>(sp.symbols.size()));
    for (const auto& r : rows) m.append_row(r);
    return m;
  });
}

inline PresentedSpace build_quotient(Family f, int param, const Truncation& t,
                                     BuildMode mode = BuildMode::Auto) {
  return fam::dispatch(f, param, [&](const auto& d) {
    return detail::engine_build(d, f, param, t, mode);
  });
}

inline LinearizationReport verify_isomorphism(Family f, int param,
                                              const Truncation& t,
                                              BuildMode mode = BuildMode::Auto) {
  const auto start = std::chrono::steady_clock::now();
  PresentedSpace sp = build_quotient(f, param, t, mode);
  LinearizationReport rep = detail::engine_verify(sp, target_dim(f, param));
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

// Image of a symbol under a group element: coefficient and target index, or
// nullopt when the image payload leaves the truncated table.
inline std::optional<std::pair<Rat, int>> act_symbol(const PresentedSpace& sp,
                                                     const GroupElement& g,
                                                     const GroupElement& ginv,
                                                     int symbol) {
  return fam::dispatch(
      sp.family, sp.param,
      [&](const auto& d) -> std::optional<std::pair<Rat, int>> {
        auto [coeff, key] = d.transformed(g, ginv, sp.symbols[symbol]);
        auto it = sp.index.find(key);
        if (it == sp.index.end()) return std::nullopt;
        return std::make_pair(coeff, it->second);
      });
}

inline std::optional<std::pair<Rat, int>> act_symbol(const PresentedSpace& sp,
                                                     const GroupElement& g,
                                                     int symbol) {
  return act_symbol(sp, g, group_inverse(g), symbol);
}

// Checks that the span of the given symbol-level combinations is invariant
// under every generator, producing one exactly re-verified certificate per
// (generator, element) pair.
inline ClosureOutcome closure_check(const PresentedSpace& sp,
                                    const std::vector<SparseRow>& spanning,
                                    const GeneratorSet& gens) {
  if (!sp.dim_exact)
    throw std::invalid_argument("closure requires a certified build");
  ClosureOutcome out;
  SpanSolver span(sp.coord_width());
  std::vector<std::vector<Rat>> span_coords;
  for (const auto& s : spanning) {
    span_coords.push_back(sp.map_combination(s));
    span.add(span_coords.back());
  }
  for (std::size_t gi = 0; gi < gens.members.size(); ++gi) {
    const GroupElement& g = gens.members[gi];
    const GroupElement ginv = group_inverse(g);
    for (std::size_t ei = 0; ei < spanning.size(); ++ei) {
      std::map<int, Rat> image;
      std::string missing;
      for (const auto& [sym, c] : spanning[ei]) {
        auto moved = act_symbol(sp, g, ginv, sym);
        if (!moved) {
          missing = sp.symbols[sym].key;
          break;
        }
        image[moved->second] += c * moved->first;
      }
      if (!missing.empty()) {
        out.closed = false;
        out.counterexample = "generator " + gens.labels[gi] + " maps element " +
                             std::to_string(ei) +
                             " outside the truncated table (symbol " + missing +
                             ")";
        return out;
      }
      SparseRow moved_row;
      for (auto& [s, c] : image)
        if (!is_zero(c)) moved_row.emplace_back(s, c);
      std::vector<Rat> target = sp.map_combination(moved_row);
      auto sol = span.solve(target);
      if (!sol) {
        out.closed = false;
        out.counterexample = "generator " + gens.labels[gi] + " moves element " +
                             std::to_string(ei) + " outside the span";
        return out;
      }
      std::vector<Rat> check(sp.coord_width(), Rat(0));
      for (const auto& [e, c] : *sol)
        for (int j = 0; j < sp.coord_width(); ++j)
          check[j] += c * span_coords[e][j];
      for (int j = 0; j < sp.coord_width(); ++j)
        if (check[j] != target[j])
          throw std::logic_error("closure certificate failed re-verification");
      ClosureCertificate cert;
      cert.generator = gens.labels[gi];
      cert.element = static_cast<int>(ei);
      cert.coefficients = *sol;
      out.certificates.push_back(std::move(cert));
    }
  }
  return out;
}

// Expresses a symbol's class over the classes of the named basis symbols.
inline std::optional<std::vector<Rat>> rewrite_in_basis(
    const PresentedSpace& sp, const std::vector<std::string>& basis,
    const std::string& symbol) {
  if (!sp.dim_exact)
    throw std::invalid_argument("rewrite requires a certified build");
  auto lookup = [&](const std::string& k) {
    auto it = sp.index.find(k);
    if (it == sp.index.end())
      throw std::out_of_range("symbol outside the truncated table: " + k);
    return it->second;
  };
  SpanSolver span(sp.coord_width());
  for (const auto& k : basis) span.add(sp.coordinates_of(lookup(k)));
  auto sol = span.solve(sp.coordinates_of(lookup(symbol)));
  if (!sol) return std::nullopt;
  std::vector<Rat> out(basis.size(), Rat(0));
  for (const auto& [i, c] : *sol) out[i] = c;
  return out;
}

// Splits a pair family with the slot-swap involution into its symmetric and
// antisymmetric parts.
inline InvolutionSplit involution_split(const PresentedSpace& sp) {
  if (sp.family != Family::Zg && sp.family != Family::Kg)
    throw std::invalid_argument("family carries no slot-swap involution");
  if (!sp.dim_exact)
    throw std::invalid_argument("involution requires a certified build");
  InvolutionSplit out;
  SpanSolver span(sp.coord_width());
  std::map<int, int> pos_of_add;  // solver add index -> basis position
  for (int i = 0;
       i < static_cast<int>(sp.symbols.size()) && span.rank() < sp.dim; ++i) {
    if (span.add(sp.coordinates_of(i))) {
      pos_of_add[span.basis_members().back()] =
          static_cast<int>(out.basis_symbols.size());
      out.basis_symbols.push_back(i);
    }
  }
  if (span.rank() != sp.dim)
    throw std::logic_error("symbol classes do not span the quotient");

  const int d = sp.dim;
  out.involution = RationalMatrix(d, d);
  for (int c = 0; c < d; ++c) {
    const GeneratorSymbol& s = sp.symbols[out.basis_symbols[c]];
    const std::string swapped = fam::pkey(fam::lv(s.b), fam::lv(s.a));
    auto it = sp.index.find(swapped);
    if (it == sp.index.end())
      throw std::logic_error("involution leaves the truncated table");
    auto sol = span.solve(sp.coordinates_of(it->second));
    if (!sol) throw std::logic_error("involuted class escapes the span");
    for (const auto& [add, v] : *sol) out.involution.set(pos_of_add.at(add), c, v);
  }

  RationalMatrix plus(d, d), minus(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      Rat v = out.involution.at(r, c);
      Rat e = r == c ? Rat(1) : Rat(0);
      plus.set(r, c, v - e);
      minus.set(r, c, v + e);
    }
  out.plus_dim = d - rref(plus).rank;
  out.minus_dim = d - rref(minus).rank;
  return out;
}

}  // namespace sympres
