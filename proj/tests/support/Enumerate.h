//===-- Enumerate.h - Brute-force point oracles for tests ------*- C++ -*-===//
//
// Test-side evaluation of constraint systems by direct enumeration. Kept
// deliberately independent of the elimination engine: constraints are
// checked by plain coefficient arithmetic over explicit points.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/IntSet.h"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

using polyrace::Int;
using polyrace::IntSet;

using Point = std::vector<long>; // values in variable order

/// Constraints lowered to machine integers for fast enumeration. Falls back
/// to exact arithmetic if any coefficient is too large for that.
struct CompiledSet {
  struct Row {
    bool eq;
    std::vector<long long> coeff;
    long long cst;
  };
  std::vector<std::vector<Row>> pieces;
  bool narrow = true;
  const IntSet *wide = nullptr;

  explicit CompiledSet(const IntSet &s) : wide(&s) {
    const long long limit = 1LL << 40;
    for (const auto &piece : s.pieces()) {
      std::vector<Row> rows;
      for (const auto &c : piece) {
        Row r;
        r.eq = c.kind == polyrace::CmpKind::Eq;
        if (c.cst < -Int(limit) || c.cst > Int(limit))
          narrow = false;
        r.cst = c.cst.convert_to<long long>();
        for (const auto &a : c.coeff) {
          if (a < -Int(limit) || a > Int(limit))
            narrow = false;
          r.coeff.push_back(a.convert_to<long long>());
        }
        rows.push_back(std::move(r));
      }
      pieces.push_back(std::move(rows));
    }
  }

  bool contains(const Point &vals) const {
    if (!narrow)
      return containsWide(vals);
    for (const auto &piece : pieces) {
      bool ok = true;
      for (const auto &r : piece) {
        long long v = r.cst;
        for (size_t i = 0; i < r.coeff.size(); ++i)
          if (r.coeff[i])
            v += r.coeff[i] * vals[i];
        if (r.eq ? (v != 0) : (v < 0)) {
          ok = false;
          break;
        }
      }
      if (ok)
        return true;
    }
    return false;
  }

  bool containsWide(const Point &vals) const {
    for (const auto &piece : wide->pieces()) {
      bool ok = true;
      for (const auto &c : piece) {
        Int v = c.cst;
        for (size_t i = 0; i < c.coeff.size(); ++i)
          if (c.coeff[i] != 0)
            v += c.coeff[i] * Int(vals[i]);
        if (c.kind == polyrace::CmpKind::Eq ? (v != 0) : (v < 0)) {
          ok = false;
          break;
        }
      }
      if (ok)
        return true;
    }
    return false;
  }
};

/// Visit all integer points of [lo, hi]^n.
template <typename F>
void forEachBoxPoint(size_t n, long lo, long hi, F &&f) {
  Point cur(n, lo);
  if (n == 0) {
    f(cur);
    return;
  }
  for (;;) {
    f(cur);
    size_t i = 0;
    while (i < n) {
      if (cur[i] < hi) {
        ++cur[i];
        break;
      }
      cur[i] = lo;
      ++i;
    }
    if (i == n)
      break;
  }
}

inline std::vector<Point> boxPoints(size_t n, long lo, long hi) {
  std::vector<Point> out;
  forEachBoxPoint(n, lo, hi, [&](const Point &p) { out.push_back(p); });
  return out;
}

/// Direct constraint evaluation; point values are positional over
/// dims ++ params.
inline bool satisfies(const IntSet &s, const Point &vals) {
  return CompiledSet(s).containsWide(vals);
}

/// Integer points of s within the box (positional over dims ++ params).
inline std::set<Point> pointsIn(const IntSet &s, long lo, long hi) {
  CompiledSet cs(s);
  std::set<Point> out;
  forEachBoxPoint(s.space().size(), lo, hi, [&](const Point &p) {
    if (cs.contains(p))
      out.insert(p);
  });
  return out;
}

/// True iff s has no integer point inside the box.
inline bool emptyIn(const IntSet &s, long lo, long hi) {
  CompiledSet cs(s);
  bool found = false;
  forEachBoxPoint(s.space().size(), lo, hi, [&](const Point &p) {
    if (!found && cs.contains(p))
      found = true;
  });
  return !found;
}

} // namespace testsupport
