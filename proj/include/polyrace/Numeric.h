//===-- Numeric.h - Arbitrary-precision integer helpers --------*- C++ -*-===//
//
// Exact arithmetic used throughout the constraint engine. Fourier-Motzkin
// multiplies coefficients, so fixed-width integers would silently corrupt
// verdicts; cpp_int keeps every intermediate exact.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace polyrace {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int absInt(const Int &a) { return a < 0 ? Int(-a) : a; }

inline Int gcdInt(Int a, Int b) {
  a = absInt(a);
  b = absInt(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Floor division (rounds toward negative infinity).
inline Int floorDiv(const Int &a, const Int &b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0)))
    --q;
  return q;
}

/// Ceiling division (rounds toward positive infinity).
inline Int ceilDiv(const Int &a, const Int &b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) == (b < 0)))
    ++q;
  return q;
}

/// Symmetric residue of a modulo m, in (-m/2, m/2].
inline Int symMod(const Int &a, const Int &m) {
  Int r = a - m * floorDiv(a, m); // r in [0, m)
  if (2 * r > m)
    r -= m;
  return r;
}

inline int signInt(const Int &a) { return a < 0 ? -1 : (a > 0 ? 1 : 0); }

} // namespace polyrace
