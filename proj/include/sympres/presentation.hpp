#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sympres/groups.hpp"
#include "sympres/lattice.hpp"
#include "sympres/matrix.hpp"
#include "sympres/wedge.hpp"

namespace sympres {

enum class Family { Qn, An, Qpn, Apn, Hg, Zga, Zgs, Zg, Kgs, Kga, Kg, Kpg };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Qn: return "q";
    case Family::An: return "a";
    case Family::Qpn: return "qp";
    case Family::Apn: return "ap";
    case Family::Hg: return "h";
    case Family::Zga: return "za";
    case Family::Zgs: return "zs";
    case Family::Zg: return "z";
    case Family::Kgs: return "ks";
    case Family::Kga: return "ka";
    case Family::Kg: return "k";
    case Family::Kpg: return "kp";
  }
  return "?";
}

inline std::optional<Family> family_from_name(const std::string& s) {
  static const std::pair<const char*, Family> names[] = {
      {"q", Family::Qn},   {"a", Family::An},  {"qp", Family::Qpn},
      {"ap", Family::Apn}, {"h", Family::Hg},  {"za", Family::Zga},
      {"zs", Family::Zgs}, {"z", Family::Zg},  {"ks", Family::Kgs},
      {"ka", Family::Kga}, {"k", Family::Kg},  {"kp", Family::Kpg}};
  for (const auto& [n, f] : names)
    if (s == n) return f;
  return std::nullopt;
}

// Families whose parameter is a genus (payloads live in Z^{2g} and the
// symplectic group acts); the others are parameterized by the rank n.
inline bool family_param_is_genus(Family f) {
  switch (f) {
    case Family::Qn:
    case Family::An:
    case Family::Qpn:
    case Family::Apn:
      return false;
    default:
      return true;
  }
}

struct Truncation {
  // Max absolute coordinate of any lattice vector appearing in a payload.
  int height = 2;
  // Coefficient set for scaling-relation instantiation (kept at {1} for the
  // additive families; the pair families add integer scaling rows).
  std::vector<Int> coefficients{Int(1)};
  // 0 means uncapped. Exceeding the cap aborts the build with an error.
  std::size_t max_generators = 0;
};

struct GeneratorSymbol {
  IntVec a;          // first payload vector (v, or f for the pair families)
  IntVec b;          // second payload vector; empty for one-slot families
  SparseRow k1, k2;  // wedge-class payload slots (pair-of-classes families)
  std::string key;   // canonical printable payload, unique within a table
};

enum class CoordinateMode { Literal, Certified };
enum class BuildMode { Auto, Literal, Blocked };

// A finite height-truncated model of one presented space: symbol table,
// relation bookkeeping, and a coordinate map that kills exactly the span of
// the enumerated relations. Literal builds carry the relation matrix and a
// pivot-free quotient basis; certified builds use the linearization image as
// the coordinate map, justified by an exact rank certificate.
struct PresentedSpace {
  Family family = Family::Qn;
  int param = 0;
  Truncation trunc;

  std::vector<GeneratorSymbol> symbols;
  std::map<std::string, int> index;

  std::size_t relation_rows = 0;  // kept relation instances
  std::size_t dropped_rows = 0;   // instances referencing out-of-table symbols
  RationalMatrix relations;       // deduplicated rows; literal builds only

  CoordinateMode mode = CoordinateMode::Literal;
  bool dim_exact = true;  // false: dim is only an upper bound (uncertified)
  int dim = 0;
  int phi_rank = 0;  // exact rank of the symbol image span

  // symbols x coordinate-width; the width is dim for literal builds and the
  // linearization ambient width for certified builds.
  RationalMatrix coords;
  std::vector<int> basis_symbols;  // literal builds: pivot-free symbols
  std::string note;

  int coord_width() const { return coords.cols(); }

  std::vector<Rat> coordinates_of(int s) const {
    return make_dense(coords.row(s), coords.cols());
  }

  // Symbol-level combination -> coordinates.
  std::vector<Rat> map_combination(const SparseRow& c) const {
    std::vector<Rat> out(coords.cols(), Rat(0));
    for (const auto& [s, coeff] : c)
      for (const auto& [j, v] : coords.row(s)) out[j] += coeff * v;
    return out;
  }
};

enum class Verdict { Isomorphism, SurjectiveNotInjective, Failure };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Isomorphism:
      return "isomorphism";
    case Verdict::SurjectiveNotInjective:
      return "surjective-not-injective-at-this-truncation";
    case Verdict::Failure:
      return "failure";
  }
  return "?";
}

struct LinearizationReport {
  Family family = Family::Qn;
  int param = 0;
  Truncation trunc;
  std::size_t symbols = 0;
  std::size_t relation_rows = 0;
  std::size_t dropped_rows = 0;
  int quotient_dim = 0;
  bool dim_exact = true;
  int target_dim = 0;
  int phi_rank = 0;
  Verdict verdict = Verdict::Failure;
  std::string note;
  double seconds = 0;
  std::uint64_t seed = 0;
};

struct InvolutionSplit {
  int plus_dim = 0;
  int minus_dim = 0;
  // The involution on quotient coordinates relative to basis_symbols: column
  // j holds the coordinates of the involuted j-th basis symbol.
  RationalMatrix involution;
  std::vector<int> basis_symbols;
};

struct ClosureCertificate {
  std::string generator;
  int element = 0;  // index into the spanning list
  std::vector<std::pair<int, Rat>> coefficients;
};

struct ClosureOutcome {
  bool closed = true;
  std::vector<ClosureCertificate> certificates;
  std::string counterexample;
};

namespace detail {

inline void note_append(std::string& note, const std::string& s) {
  if (!note.empty()) note += "; ";
  note += s;
}

template <class Driver>
PresentedSpace build_table(const Driver& d, Family family, int param,
                           const Truncation& trunc) {
  if (trunc.height < 1) throw std::invalid_argument("height must be >= 1");
  PresentedSpace sp;
  sp.family = family;
  sp.param = param;
  sp.trunc = trunc;
  d.enumerate_symbols(trunc, [&](GeneratorSymbol sym) {
    if (trunc.max_generators && sp.symbols.size() >= trunc.max_generators)
      throw std::runtime_error("generator cap exceeded at " +
                               std::to_string(sp.symbols.size()) + " symbols");
    sp.index.emplace(sym.key, static_cast<int>(sp.symbols.size()));
    sp.symbols.push_back(std::move(sym));
  });
  return sp;
}

// Feed every relation instance of the table to keep/drop, blocks first.
template <class Driver, class Keep, class Drop>
void stream_rows(const Driver& d, const PresentedSpace& sp, Keep keep,
                 Drop drop) {
  const int s = static_cast<int>(sp.symbols.size());
  if constexpr (Driver::kTwoSlot) {
    int b0 = 0;
    while (b0 < s) {
      int b1 = b0;
      while (b1 < s && sp.symbols[b1].a == sp.symbols[b0].a) ++b1;
      d.block_rows(sp, b0, b1, keep, drop);
      b0 = b1;
    }
    d.cross_rows(sp, keep, drop);
  } else {
    d.all_rows(sp, keep, drop);
  }
}

// ---------------------------------------------------------------------------
// Literal path: materialize every relation row, run exact elimination, and
// read quotient coordinates off the reduced pivot rows.
// ---------------------------------------------------------------------------

template <class Driver>
void literal_build(const Driver& d, PresentedSpace& sp) {
  const int s = static_cast<int>(sp.symbols.size());
  std::set<SparseRow> rows;
  auto keep = [&](SparseRow r) {
    ++sp.relation_rows;
    r = integerize(std::move(r), true);
    if (!r.empty()) rows.insert(std::move(r));
  };
  auto drop = [&] { ++sp.dropped_rows; };
  stream_rows(d, sp, keep, drop);

  sp.relations = RationalMatrix(0, s);
  IncrementalRref rr(s);
  for (const auto& r : rows) {
    sp.relations.append_row(r);
    rr.add(r);
  }

  const int rank = rr.rank();
  sp.mode = CoordinateMode::Literal;
  sp.dim_exact = true;
  sp.dim = s - rank;

  std::vector<int> coord_of(s, -1);
  sp.basis_symbols.clear();
  for (int j = 0; j < s; ++j)
    if (!rr.rows().count(j)) {
      coord_of[j] = static_cast<int>(sp.basis_symbols.size());
      sp.basis_symbols.push_back(j);
    }
  sp.coords = RationalMatrix(s, sp.dim);
  for (int j = 0; j < s; ++j) {
    if (coord_of[j] >= 0) {
      sp.coords.set_row(j, {{coord_of[j], Rat(1)}});
      continue;
    }
    SparseRow c;
    for (const auto& [col, v] : rr.rows().at(j))
      if (col != j) c.emplace_back(coord_of[col], -v);
    std::sort(c.begin(), c.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    sp.coords.set_row(j, std::move(c));
  }
}

// Exact rank of the symbol image span, plus a check that every materialized
// relation row is killed by the symbol-level linearization.
template <class Driver>
int literal_phi_rank(const Driver& d, const PresentedSpace& sp) {
  IncrementalRref rr(d.phi_width());
  for (const auto& sym : sp.symbols) rr.add(make_sparse(d.phi(sym)));
  for (int i = 0; i < sp.relations.rows(); ++i) {
    std::vector<Rat> img(d.phi_width(), Rat(0));
    for (const auto& [s, c] : sp.relations.row(i)) {
      std::vector<Rat> p = d.phi(sp.symbols[s]);
      for (int j = 0; j < d.phi_width(); ++j) img[j] += c * p[j];
    }
    for (const auto& v : img)
      if (!is_zero(v))
        throw std::logic_error(
            "relation row not killed by the linearization map");
  }
  return rr.rank();
}

// ---------------------------------------------------------------------------
// Blocked path for two-slot families. Symbols sharing a first payload form a
// block; rows touching one block only are eliminated per block, rows coupling
// blocks are eliminated in the per-block quotient coordinates. Block
// dimensions are exact: either the mod-p row rank meets the structural bound
// |block| - rank(second-payload span), making the payload map the block
// quotient (the mod-p rank never exceeds the rational rank, so meeting the
// bound is a proof), or the block falls back to exact elimination. The global
// stage is exact for the same reason, with the linearization image supplying
// the structural bound.
// ---------------------------------------------------------------------------

struct BlockData {
  int begin = 0, end = 0;
  int dim = 0;          // exact block quotient dimension
  int offset = 0;       // first global stage-coordinate of this block
  bool payload_map = false;  // coordinates are second-payload coordinates
  // per symbol (local order): stage coordinates, width = dim
  std::vector<SparseRow> sym_coords;
  std::vector<int> basis_local;  // local indices of the coordinate basis
};

template <class Driver>
void blocked_build(const Driver& d, PresentedSpace& sp) {
  static_assert(Driver::kTwoSlot);
  const int s = static_cast<int>(sp.symbols.size());

  std::vector<BlockData> blocks;
  int b0 = 0;
  while (b0 < s) {
    int b1 = b0;
    while (b1 < s && sp.symbols[b1].a == sp.symbols[b0].a) ++b1;
    BlockData bd;
    bd.begin = b0;
    bd.end = b1;
    blocks.push_back(std::move(bd));
    b0 = b1;
  }

  auto payload_vec = [&](const GeneratorSymbol& sym) -> std::vector<Rat> {
    if constexpr (requires { d.payload_dense(sym); }) {
      return d.payload_dense(sym);
    } else {
      std::vector<Rat> dense(sym.b.size());
      for (std::size_t j = 0; j < sym.b.size(); ++j) dense[j] = Rat(sym.b[j]);
      return dense;
    }
  };

  int stage_cols = 0;
  for (BlockData& bd : blocks) {
    const int w = bd.end - bd.begin;
    std::vector<std::vector<std::pair<int, Rat>>> payload_coords(w);
    std::vector<Rat> first = payload_vec(sp.symbols[bd.begin]);
    SpanSolver payload(static_cast<int>(first.size()));
    for (int i = 0; i < w; ++i) {
      std::vector<Rat> dense =
          i == 0 ? std::move(first) : payload_vec(sp.symbols[bd.begin + i]);
      payload.add(dense);
      auto sol = payload.solve(dense);
      payload_coords[i] = *sol;
    }
    const int image_rank = payload.rank();
    const int goal = w - image_rank;

    FpForward fp;
    std::vector<SparseRow> collected;
    auto keep = [&](SparseRow r) {
      ++sp.relation_rows;
      if (fp.rank() >= goal) return;
      for (auto& [c, v] : r) c -= bd.begin;
      collected.push_back(r);
      fp.add(r);
    };
    auto drop = [&] { ++sp.dropped_rows; };
    d.block_rows(sp, bd.begin, bd.end, keep, drop);

    if (fp.rank() >= goal) {
      // Payload coordinates are the block quotient.
      bd.dim = image_rank;
      bd.payload_map = true;
      std::map<int, int> pos;  // add-index of a basis member -> coordinate
      for (std::size_t i = 0; i < payload.basis_members().size(); ++i) {
        pos[payload.basis_members()[i]] = static_cast<int>(i);
        bd.basis_local.push_back(payload.basis_members()[i]);
      }
      bd.sym_coords.resize(w);
      for (int i = 0; i < w; ++i) {
        SparseRow c;
        for (const auto& [m, v] : payload_coords[i])
          c.emplace_back(pos.at(m), v);
        std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) {
          return x.first < y.first;
        });
        bd.sym_coords[i] = std::move(c);
      }
    } else {
      // Exact fallback on the collected rows.
      IncrementalRref rr(w);
      for (const auto& r : collected) rr.add(r);
      bd.dim = w - rr.rank();
      std::vector<int> coord_of(w, -1);
      for (int j = 0; j < w; ++j)
        if (!rr.rows().count(j)) {
          coord_of[j] = static_cast<int>(bd.basis_local.size());
          bd.basis_local.push_back(j);
        }
      bd.sym_coords.resize(w);
      for (int j = 0; j < w; ++j) {
        if (coord_of[j] >= 0) {
          bd.sym_coords[j] = {{coord_of[j], Rat(1)}};
          continue;
        }
        SparseRow c;
        for (const auto& [col, v] : rr.rows().at(j))
          if (col != j) c.emplace_back(coord_of[col], -v);
        std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) {
          return x.first < y.first;
        });
        bd.sym_coords[j] = std::move(c);
      }
    }
    bd.offset = stage_cols;
    stage_cols += bd.dim;
  }

  // Exact linearization rank over the block coordinate bases. Every symbol
  // image is a combination of its block basis images, so this span equals the
  // span of all symbol images. A driver with a known image dimension may cap
  // this stage; stopping early can only lower the reported rank, which raises
  // the certification goal below, so a wrong cap can only leave the build
  // uncertified, never certify a wrong dimension.
  int phi_cap = std::numeric_limits<int>::max();
  if constexpr (requires { d.phi_rank_cap(); }) phi_cap = d.phi_rank_cap();
  IncrementalRref phi_rr(d.phi_width());
  for (const BlockData& bd : blocks) {
    if (phi_rr.rank() >= phi_cap) break;
    for (int loc : bd.basis_local) {
      if (phi_rr.rank() >= phi_cap) break;
      phi_rr.add(make_sparse(d.phi(sp.symbols[bd.begin + loc])));
    }
  }
  sp.phi_rank = phi_rr.rank();

  // Global stage: cross rows mapped through the block coordinates.
  std::vector<int> block_of(s);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int i = blocks[b].begin; i < blocks[b].end; ++i)
      block_of[i] = static_cast<int>(b);
  const int goal = stage_cols - sp.phi_rank;
  FpForward gfp;
  auto keep = [&](const SparseRow& r) {
    ++sp.relation_rows;
    if (gfp.rank() >= goal) return;
    std::map<int, Rat> acc;
    for (const auto& [sym, c] : r) {
      const BlockData& bd = blocks[block_of[sym]];
      for (const auto& [j, v] : bd.sym_coords[sym - bd.begin])
        acc[bd.offset + j] += c * v;
    }
    SparseRow mapped;
    for (auto& [j, v] : acc)
      if (!is_zero(v)) mapped.emplace_back(j, v);
    gfp.add(mapped);
  };
  auto drop = [&] { ++sp.dropped_rows; };
  d.cross_rows(sp, keep, drop);

  sp.mode = CoordinateMode::Certified;
  if (gfp.rank() >= goal) {
    sp.dim_exact = true;
    sp.dim = sp.phi_rank;
  } else {
    sp.dim_exact = false;
    sp.dim = stage_cols - gfp.rank();
    note_append(sp.note,
                "relations left the dimension uncertified (upper bound " +
                    std::to_string(sp.dim) + ", image rank " +
                    std::to_string(sp.phi_rank) + "); raise the truncation");
  }

  // Certified coordinates: the linearization image.
  sp.coords = RationalMatrix(s, d.phi_width());
  for (int i = 0; i < s; ++i)
    sp.coords.set_row(i, make_sparse(d.phi(sp.symbols[i])));
}

template <class Driver>
PresentedSpace engine_build(const Driver& d, Family family, int param,
                            const Truncation& trunc, BuildMode mode) {
  PresentedSpace sp = build_table(d, family, param, trunc);

  constexpr std::size_t kLiteralLimit = 3000;
  bool blocked = Driver::kTwoSlot;
  if (mode == BuildMode::Literal) blocked = false;
  if (mode == BuildMode::Auto && sp.symbols.size() <= kLiteralLimit)
    blocked = false;
  if (mode == BuildMode::Blocked && !Driver::kTwoSlot)
    throw std::invalid_argument("family has no block structure");

  if constexpr (Driver::kTwoSlot) {
    if (blocked) {
      blocked_build(d, sp);
      return sp;
    }
  }
  literal_build(d, sp);
  sp.phi_rank = literal_phi_rank(d, sp);
  return sp;
}

inline LinearizationReport engine_verify(const PresentedSpace& sp,
                                         int target) {
  LinearizationReport rep;
  rep.family = sp.family;
  rep.param = sp.param;
  rep.trunc = sp.trunc;
  rep.symbols = sp.symbols.size();
  rep.relation_rows = sp.relation_rows;
  rep.dropped_rows = sp.dropped_rows;
  rep.quotient_dim = sp.dim;
  rep.dim_exact = sp.dim_exact;
  rep.target_dim = target;
  rep.phi_rank = sp.phi_rank;
  rep.note = sp.note;
  if (sp.phi_rank < target) {
    rep.verdict = Verdict::Failure;
    note_append(rep.note, "linearization not surjective at this truncation");
  } else if (sp.dim_exact && sp.dim == target) {
    rep.verdict = Verdict::Isomorphism;
  } else {
    rep.verdict = Verdict::SurjectiveNotInjective;
  }
  return rep;
}

}  // namespace detail

// Further quotient by a set of vectors given in the space's coordinates.
// The subset must lie in the coordinate image of the space.
inline PresentedSpace quotient_by_span(const PresentedSpace& sp,
                                       const std::vector<std::vector<Rat>>& subset) {
  if (!sp.dim_exact)
    throw std::invalid_argument("space dimension is not certified");
  IncrementalRref span(sp.coord_width());
  for (const auto& v : subset) {
    if (static_cast<int>(v.size()) != sp.coord_width())
      throw std::invalid_argument("subset vector width mismatch");
    span.add(make_sparse(v));
  }
  std::vector<int> coord_of(sp.coord_width(), -1);
  int width = 0;
  for (int j = 0; j < sp.coord_width(); ++j)
    if (!span.rows().count(j)) coord_of[j] = width++;

  PresentedSpace out;
  out.family = sp.family;
  out.param = sp.param;
  out.trunc = sp.trunc;
  out.symbols = sp.symbols;
  out.index = sp.index;
  out.relation_rows = sp.relation_rows;
  out.dropped_rows = sp.dropped_rows;
  out.mode = sp.mode;
  out.dim_exact = true;
  out.note = sp.note;
  detail::note_append(out.note, "quotient by a span of rank " +
                                    std::to_string(span.rank()));
  out.coords = RationalMatrix(static_cast<int>(sp.symbols.size()), width);
  IncrementalRref image(width);
  for (int i = 0; i < static_cast<int>(sp.symbols.size()); ++i) {
    SparseRow reduced = span.reduce(sp.coords.row(i));
    SparseRow projected;
    for (const auto& [c, v] : reduced) projected.emplace_back(coord_of[c], v);
    image.add(projected);
    out.coords.set_row(i, std::move(projected));
  }
  out.dim = image.rank();
  out.phi_rank = out.dim;
  return out;
}

// Line-oriented presentation dump: SYMBOL lines always, REL lines when the
// build materialized the relation matrix.
inline void dump_presentation(const PresentedSpace& sp, std::ostream& os) {
  for (std::size_t i = 0; i < sp.symbols.size(); ++i)
    os << "SYMBOL " << i << ' ' << sp.symbols[i].key << '\n';
  for (int r = 0; r < sp.relations.rows(); ++r) {
    os << "REL";
    for (const auto& [s, c] : sp.relations.row(r)) {
      os << ' ' << numerator(c).get_str();
      if (denominator(c) != 1) os << '/' << denominator(c).get_str();
      os << '*' << s;
    }
    os << '\n';
  }
}

}  // namespace sympres
