#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace sympres {

// Exact arithmetic only. Int is an arbitrary-precision integer, Rat an
// arbitrary-precision rational kept in canonical form (gcd(|num|,den)=1,
// den>0). mpq_class canonicalizes on construction from mpz pairs; the
// helpers below keep that invariant when building from raw longs.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline Int numerator(const Rat& r) { return r.get_num(); }
inline Int denominator(const Rat& r) { return r.get_den(); }

// Combined bit length of numerator and denominator; used for pivot
// selection (prefer the arithmetically smallest entry).
inline std::size_t bit_length(const Rat& r) {
  if (is_zero(r)) return 0;
  return mpz_sizeinbase(r.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
}

inline std::size_t bit_length(const Int& z) {
  if (sgn(z) == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

// Exact decimal-free text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rat& r) { return r.get_str(); }
inline std::string to_string(const Int& z) { return z.get_str(); }

inline Rat rat_from_string(const std::string& s) {
  Rat r(s);
  r.canonicalize();
  return r;
}

}  // namespace sympres
