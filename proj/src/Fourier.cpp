//===-- Fourier.cpp - Elimination engine and emptiness ---------------------===//
//
// Exact integer projection and emptiness over conjunctions of affine
// constraints. The steps that keep everything integer-exact:
//
//   tighten     divide a constraint by the gcd of its variable coefficients
//               and floor the constant; preserves the integer points.
//   equalities  substitute variables with unit coefficient; otherwise reduce
//               coefficients with a fresh existential variable until a unit
//               appears (GCD infeasibility detected along the way).
//   FM pairs    combining a lower bound a*x >= e with an upper b*x <= f is
//               exact when a == 1 or b == 1. Inexact pairs get the dark
//               shadow (a*f - b*e >= (a-1)(b-1)) plus finitely many
//               splinters a*x = e + i that pin x to an equality.
//   branching   emptiness enumerates the variable with the smallest
//               FM-derived range, pruning branches whose rational relaxation
//               is already empty.
//
//===----------------------------------------------------------------------===//

#include "polyrace/IntSet.h"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>

namespace polyrace {

namespace {

constexpr size_t kMaxUserVars = 12;
constexpr size_t kMaxUserConstraints = 64;
constexpr size_t kMaxCons = 512;
constexpr size_t kMaxPieces = 1024;
constexpr int kMaxSigmaSteps = 64;
constexpr int kMaxDepth = 96;
constexpr long kMaxEnumWidth = 64;

struct Tableau {
  size_t nCols = 0;
  std::vector<char> elim; // per column: may this variable be eliminated?
  std::vector<Constraint> cons;
  int sigmaBudget = kMaxSigmaSteps;

  void addColumn(bool eliminable) {
    ++nCols;
    elim.push_back(eliminable);
    for (Constraint &c : cons)
      c.coeff.push_back(Int(0));
  }
};

enum class Tri { Keep, Drop, Infeasible };

Tri tighten(Constraint &c) {
  Int g = 0;
  for (const Int &a : c.coeff)
    g = gcdInt(g, a);
  if (g == 0) {
    if (c.kind == CmpKind::Eq)
      return c.cst == 0 ? Tri::Drop : Tri::Infeasible;
    return c.cst >= 0 ? Tri::Drop : Tri::Infeasible;
  }
  if (g == 1)
    return Tri::Keep;
  if (c.kind == CmpKind::Eq) {
    if (c.cst % g != 0)
      return Tri::Infeasible;
    for (Int &a : c.coeff)
      a /= g;
    c.cst /= g;
  } else {
    for (Int &a : c.coeff)
      a /= g;
    c.cst = floorDiv(c.cst, g);
  }
  return Tri::Keep;
}

// Tighten, deduplicate parallel bounds, fold opposing bounds into
// equalities, and detect direct contradictions.
bool simplify(Tableau &t) {
  struct Rec {
    std::optional<Int> lo, hi, eq; // canonical expr E: lo <= E <= hi, E = eq
  };
  std::map<std::vector<Int>, Rec> recs;

  for (Constraint c : t.cons) {
    Tri r = tighten(c);
    if (r == Tri::Infeasible)
      return false;
    if (r == Tri::Drop)
      continue;
    // Canonical orientation: first nonzero coefficient positive.
    bool flip = false;
    for (const Int &a : c.coeff) {
      if (a != 0) {
        flip = a < 0;
        break;
      }
    }
    std::vector<Int> key = c.coeff;
    Int cst = c.cst;
    if (flip) {
      for (Int &a : key)
        a = -a;
      cst = -cst;
    }
    Rec &rec = recs[key];
    if (c.kind == CmpKind::Eq) {
      Int v = -cst; // E = -cst
      if (rec.eq && *rec.eq != v)
        return false;
      rec.eq = v;
    } else if (!flip) {
      Int v = -cst; // E >= -cst
      if (!rec.lo || *rec.lo < v)
        rec.lo = v;
    } else {
      // flipped row is the negation of the original, so the original
      // constraint reads E <= -cst in canonical terms
      Int v = -cst;
      if (!rec.hi || *rec.hi > v)
        rec.hi = v;
    }
  }

  std::vector<Constraint> out;
  for (auto &[key, rec] : recs) {
    if (rec.eq) {
      if ((rec.lo && *rec.lo > *rec.eq) || (rec.hi && *rec.hi < *rec.eq))
        return false;
      Constraint c;
      c.kind = CmpKind::Eq;
      c.coeff = key;
      c.cst = -*rec.eq;
      out.push_back(std::move(c));
      continue;
    }
    if (rec.lo && rec.hi) {
      if (*rec.lo > *rec.hi)
        return false;
      if (*rec.lo == *rec.hi) {
        Constraint c;
        c.kind = CmpKind::Eq;
        c.coeff = key;
        c.cst = -*rec.lo;
        out.push_back(std::move(c));
        continue;
      }
    }
    if (rec.lo) {
      Constraint c;
      c.kind = CmpKind::Ge;
      c.coeff = key;
      c.cst = -*rec.lo;
      out.push_back(std::move(c));
    }
    if (rec.hi) {
      Constraint c;
      c.kind = CmpKind::Ge;
      c.coeff = key;
      for (Int &a : c.coeff)
        a = -a;
      c.cst = *rec.hi;
      out.push_back(std::move(c));
    }
  }
  t.cons = std::move(out);
  if (t.cons.size() > kMaxCons)
    throw DimensionLimit("constraint system exceeded size guard");
  return true;
}

// Substitute column x using equality row `def` with def.coeff[x] == +-1.
// def: a*x + r = 0  =>  x = -a*r (a in {1,-1}).
void substituteUnit(Tableau &t, size_t x, const Constraint &def) {
  Int a = def.coeff[x];
  assert(absInt(a) == 1);
  Constraint r = def;
  r.coeff[x] = 0;
  for (Constraint &c : t.cons) {
    Int k = c.coeff[x];
    if (k == 0)
      continue;
    Int factor = -k * a;
    c.coeff[x] = 0;
    for (size_t i = 0; i < t.nCols; ++i)
      if (r.coeff[i] != 0)
        c.coeff[i] += factor * r.coeff[i];
    c.cst += factor * r.cst;
  }
}

void substituteValue(Tableau &t, size_t x, const Int &v) {
  for (Constraint &c : t.cons) {
    if (c.coeff[x] != 0) {
      c.cst += c.coeff[x] * v;
      c.coeff[x] = 0;
    }
  }
}

// Coefficient reduction for an equality with no unit coefficient on an
// eliminable variable: express the smallest-coefficient variable through a
// fresh existential one, shrinking coefficients (integer-point bijection).
void sigmaReduce(Tableau &t, size_t eqIdx, size_t k) {
  Constraint E = t.cons[eqIdx];
  Int ak = E.coeff[k];
  Int m = absInt(ak) + 1;
  Int s = signInt(ak);

  t.addColumn(/*eliminable=*/true);
  size_t sig = t.nCols - 1;

  Constraint def;
  def.kind = CmpKind::Eq;
  def.coeff.assign(t.nCols, Int(0));
  def.coeff[k] = 1;
  for (size_t i = 0; i < t.nCols - 1; ++i) {
    if (i == k)
      continue;
    Int mi = symMod(i < E.coeff.size() ? E.coeff[i] : Int(0), m);
    if (mi != 0)
      def.coeff[i] = -s * mi;
  }
  def.coeff[sig] = s * m;
  def.cst = -s * symMod(E.cst, m);
  substituteUnit(t, k, def);
}

enum class EqPhase { Done, Infeasible, Stuck };

// Remove every equality that mentions an eliminable variable. An equality
// whose eliminable coefficients share a gcd >= 2 encodes a congruence on
// the kept variables; it cannot be removed symbolically and is reported
// Stuck (the caller enumerates a bounded variable instead).
EqPhase eliminateEqualities(Tableau &t) {
  for (;;) {
    if (!simplify(t))
      return EqPhase::Infeasible;
    int eqIdx = -1;
    int unitVar = -1, minVar = -1;
    bool sawStuck = false;
    for (size_t i = 0; i < t.cons.size() && eqIdx < 0; ++i) {
      const Constraint &c = t.cons[i];
      if (c.kind != CmpKind::Eq)
        continue;
      int u = -1, mv = -1;
      Int ma = 0, g = 0;
      for (size_t j = 0; j < t.nCols; ++j) {
        if (!t.elim[j] || c.coeff[j] == 0)
          continue;
        Int a = absInt(c.coeff[j]);
        g = gcdInt(g, a);
        if (a == 1 && u < 0)
          u = static_cast<int>(j);
        if (mv < 0 || a < ma) {
          mv = static_cast<int>(j);
          ma = a;
        }
      }
      if (mv < 0)
        continue; // no eliminable variable involved
      if (u < 0 && g > 1) {
        sawStuck = true; // congruence constraint on kept variables
        continue;
      }
      eqIdx = static_cast<int>(i);
      unitVar = u;
      minVar = mv;
    }
    if (eqIdx < 0)
      return sawStuck ? EqPhase::Stuck : EqPhase::Done;
    if (unitVar >= 0) {
      Constraint def = t.cons[eqIdx];
      t.cons.erase(t.cons.begin() + eqIdx);
      substituteUnit(t, static_cast<size_t>(unitVar), def);
      continue;
    }
    if (--t.sigmaBudget < 0)
      return EqPhase::Stuck;
    sigmaReduce(t, static_cast<size_t>(eqIdx), static_cast<size_t>(minVar));
  }
}

struct VarStats {
  size_t nLow = 0, nUp = 0;
  bool allExact = true;
  bool present = false;
};

VarStats statsFor(const Tableau &t, size_t x) {
  VarStats s;
  for (const Constraint &c : t.cons) {
    if (c.coeff[x] == 0)
      continue;
    s.present = true;
    if (c.kind == CmpKind::Eq) {
      // treated as one lower and one upper, both inexact unless unit
      ++s.nLow;
      ++s.nUp;
      if (absInt(c.coeff[x]) != 1)
        s.allExact = false;
      continue;
    }
    if (c.coeff[x] > 0)
      ++s.nLow;
    else
      ++s.nUp;
  }
  if (s.nLow && s.nUp) {
    // pairwise exactness: for every pair min(a,b) == 1; cheap sufficient
    // test: all lower coefficients 1 or all upper coefficients 1, else scan.
    Int maxLow = 0, maxUp = 0;
    for (const Constraint &c : t.cons) {
      if (c.coeff[x] == 0 || c.kind == CmpKind::Eq)
        continue;
      if (c.coeff[x] > 0)
        maxLow = std::max(maxLow, c.coeff[x]);
      else
        maxUp = std::max(maxUp, Int(-c.coeff[x]));
    }
    if (maxLow > 1 && maxUp > 1)
      s.allExact = false;
  }
  return s;
}

// Combine lower L (a*x + rL >= 0, a > 0) and upper U (-b*x + rU >= 0,
// b > 0): a*rU + b*rL >= 0; dark shadow additionally subtracts
// (a-1)(b-1).
Constraint combinePair(const Tableau &t, const Constraint &L,
                       const Constraint &U, size_t x, bool dark) {
  Int a = L.coeff[x];
  Int b = -U.coeff[x];
  Constraint c;
  c.kind = CmpKind::Ge;
  c.coeff.assign(t.nCols, Int(0));
  for (size_t i = 0; i < t.nCols; ++i) {
    if (i == x)
      continue;
    c.coeff[i] = a * U.coeff[i] + b * L.coeff[i];
  }
  c.cst = a * U.cst + b * L.cst;
  if (dark)
    c.cst -= (a - 1) * (b - 1);
  return c;
}

// Eliminate x from a tableau with no equalities on x. The union of the
// returned tableaux is exactly "exists x". Splinter tableaux still contain
// x, pinned by an equality the caller's pipeline removes.
std::vector<Tableau> fmEliminate(const Tableau &t, size_t x) {
  std::vector<const Constraint *> lows, ups;
  Tableau main = t;
  main.cons.clear();
  for (const Constraint &c : t.cons) {
    assert(c.kind != CmpKind::Eq || c.coeff[x] == 0);
    if (c.coeff[x] > 0)
      lows.push_back(&c);
    else if (c.coeff[x] < 0)
      ups.push_back(&c);
    else
      main.cons.push_back(c);
  }
  if (lows.empty() || ups.empty())
    return {std::move(main)}; // unbounded on one side: exact drop

  bool allExact = true;
  Int bhat = 0;
  for (const Constraint *u : ups)
    bhat = std::max(bhat, Int(-u->coeff[x]));
  for (const Constraint *l : lows)
    for (const Constraint *u : ups) {
      bool exact = l->coeff[x] == 1 || -u->coeff[x] == 1;
      if (!exact)
        allExact = false;
      main.cons.push_back(combinePair(t, *l, *u, x, /*dark=*/!exact));
    }
  if (main.cons.size() > kMaxCons)
    throw DimensionLimit("constraint system exceeded size guard");
  std::vector<Tableau> out;
  out.push_back(std::move(main));
  if (allExact)
    return out;

  for (const Constraint *l : lows) {
    Int a = l->coeff[x];
    if (a < 2)
      continue;
    Int kmax = floorDiv(a * bhat - a - bhat, bhat);
    for (Int i = 0; i <= kmax; ++i) {
      Tableau sp = t;
      Constraint eq = *l;
      eq.kind = CmpKind::Eq;
      eq.cst -= i; // a*x + rL - i = 0
      sp.cons.push_back(std::move(eq));
      out.push_back(std::move(sp));
    }
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Rational relaxation (sound pruning only)
//===----------------------------------------------------------------------===//

// Substitute x rationally using equality a*x + r = 0 by scaling rows.
void rationalSubstitute(std::vector<Constraint> &cons, size_t x,
                        const Constraint &def) {
  Int a = def.coeff[x];
  Int absA = absInt(a);
  Int s = signInt(a);
  Constraint r = def;
  r.coeff[x] = 0;
  for (Constraint &c : cons) {
    Int k = c.coeff[x];
    if (k == 0)
      continue;
    c.coeff[x] = 0;
    for (size_t i = 0; i < c.coeff.size(); ++i)
      c.coeff[i] = absA * c.coeff[i] - k * s * r.coeff[i];
    c.cst = absA * c.cst - k * s * r.cst;
  }
}

// True only when the rational relaxation is certainly empty.
bool rationallyEmpty(std::vector<Constraint> cons, size_t nCols,
                     std::optional<size_t> keepVar = std::nullopt) {
  for (;;) {
    // constants / normalization
    std::vector<Constraint> next;
    for (Constraint &c : cons) {
      Int g = 0;
      for (const Int &a : c.coeff)
        g = gcdInt(g, a);
      if (g == 0) {
        if (c.kind == CmpKind::Eq ? c.cst != 0 : c.cst < 0)
          return true;
        continue;
      }
      // rational scale-down keeps things small (no flooring!)
      Int gc = gcdInt(g, c.cst);
      if (gc > 1) {
        for (Int &a : c.coeff)
          a /= gc;
        c.cst /= gc;
      }
      next.push_back(std::move(c));
    }
    cons = std::move(next);

    // pick a variable to eliminate
    int best = -1;
    size_t bestCost = 0;
    int eqVar = -1, eqIdx = -1;
    for (size_t x = 0; x < nCols; ++x) {
      if (keepVar && *keepVar == x)
        continue;
      size_t lo = 0, up = 0;
      bool present = false;
      for (size_t i = 0; i < cons.size(); ++i) {
        const Constraint &c = cons[i];
        if (c.coeff[x] == 0)
          continue;
        present = true;
        if (c.kind == CmpKind::Eq) {
          if (eqVar < 0) {
            eqVar = static_cast<int>(x);
            eqIdx = static_cast<int>(i);
          }
        } else if (c.coeff[x] > 0)
          ++lo;
        else
          ++up;
      }
      if (!present)
        continue;
      size_t cost = lo * up;
      if (best < 0 || cost < bestCost) {
        best = static_cast<int>(x);
        bestCost = cost;
      }
    }
    if (eqVar >= 0) {
      Constraint def = cons[eqIdx];
      cons.erase(cons.begin() + eqIdx);
      rationalSubstitute(cons, static_cast<size_t>(eqVar), def);
      continue;
    }
    if (best < 0)
      return false; // no variables left, no contradiction found
    size_t x = static_cast<size_t>(best);
    std::vector<Constraint> lows, ups, rest;
    for (Constraint &c : cons) {
      if (c.coeff[x] > 0)
        lows.push_back(std::move(c));
      else if (c.coeff[x] < 0)
        ups.push_back(std::move(c));
      else
        rest.push_back(std::move(c));
    }
    for (const Constraint &l : lows)
      for (const Constraint &u : ups) {
        Constraint c;
        c.kind = CmpKind::Ge;
        c.coeff.assign(nCols, Int(0));
        Int a = l.coeff[x], b = -u.coeff[x];
        for (size_t i = 0; i < nCols; ++i)
          if (i != x)
            c.coeff[i] = a * u.coeff[i] + b * l.coeff[i];
        c.cst = a * u.cst + b * l.cst;
        rest.push_back(std::move(c));
      }
    if (rest.size() > kMaxCons)
      return false; // too expensive to prove; give up soundly
    cons = std::move(rest);
  }
}

struct VarRange {
  bool empty = false;
  std::optional<Int> lo, hi;
  bool finite() const { return lo && hi; }
  Int width() const { return *hi - *lo; }
};

// Integer bounds on variable x implied by the rational relaxation.
VarRange rationalRange(const Tableau &t, size_t x) {
  std::vector<Constraint> cons = t.cons;
  // eliminate everything else rationally
  for (;;) {
    int pick = -1;
    for (size_t v = 0; v < t.nCols && pick < 0; ++v) {
      if (v == x)
        continue;
      for (const Constraint &c : cons)
        if (c.coeff[v] != 0) {
          pick = static_cast<int>(v);
          break;
        }
    }
    if (pick < 0)
      break;
    size_t v = static_cast<size_t>(pick);
    int eqIdx = -1;
    for (size_t i = 0; i < cons.size(); ++i)
      if (cons[i].kind == CmpKind::Eq && cons[i].coeff[v] != 0) {
        eqIdx = static_cast<int>(i);
        break;
      }
    if (eqIdx >= 0) {
      Constraint def = cons[static_cast<size_t>(eqIdx)];
      cons.erase(cons.begin() + eqIdx);
      rationalSubstitute(cons, v, def);
      continue;
    }
    std::vector<Constraint> lows, ups, rest;
    for (Constraint &c : cons) {
      if (c.coeff[v] > 0)
        lows.push_back(std::move(c));
      else if (c.coeff[v] < 0)
        ups.push_back(std::move(c));
      else
        rest.push_back(std::move(c));
    }
    for (const Constraint &l : lows)
      for (const Constraint &u : ups) {
        Constraint nc;
        nc.kind = CmpKind::Ge;
        nc.coeff.assign(t.nCols, Int(0));
        Int a = l.coeff[v], b = -u.coeff[v];
        for (size_t i = 0; i < t.nCols; ++i)
          if (i != v)
            nc.coeff[i] = a * u.coeff[i] + b * l.coeff[i];
        nc.cst = a * u.cst + b * l.cst;
        rest.push_back(std::move(nc));
      }
    if (rest.size() > kMaxCons)
      return {}; // unknown: report unbounded
    cons = std::move(rest);
  }

  VarRange r;
  for (const Constraint &c : cons) {
    Int a = c.coeff[x];
    if (a == 0) {
      if (c.kind == CmpKind::Eq ? c.cst != 0 : c.cst < 0) {
        r.empty = true;
        return r;
      }
      continue;
    }
    if (c.kind == CmpKind::Eq) {
      if (c.cst % a != 0) {
        r.empty = true;
        return r;
      }
      Int v = -c.cst / a;
      if (!r.lo || *r.lo < v)
        r.lo = v;
      if (!r.hi || *r.hi > v)
        r.hi = v;
    } else if (a > 0) {
      Int v = ceilDiv(-c.cst, a);
      if (!r.lo || *r.lo < v)
        r.lo = v;
    } else {
      Int v = floorDiv(c.cst, -a);
      if (!r.hi || *r.hi > v)
        r.hi = v;
    }
  }
  if (r.lo && r.hi && *r.lo > *r.hi)
    r.empty = true;
  return r;
}

//===----------------------------------------------------------------------===//
// Integer emptiness
//===----------------------------------------------------------------------===//

bool hasIntegerPoint(Tableau t, int depth) {
  if (depth > kMaxDepth)
    throw DimensionLimit("emptiness search exceeded depth guard");
  for (;;) {
    EqPhase ep = eliminateEqualities(t);
    if (ep == EqPhase::Infeasible)
      return false;
    if (ep == EqPhase::Stuck) {
      // Fall back to branching below; keep equalities as-is.
    }
    if (t.cons.empty())
      return true;
    if (rationallyEmpty(t.cons, t.nCols))
      return false;

    // cheap exact eliminations (only when no equality mentions the var)
    auto eqFree = [&](size_t x) {
      for (const Constraint &c : t.cons)
        if (c.kind == CmpKind::Eq && c.coeff[x] != 0)
          return false;
      return true;
    };
    int pick = -1;
    size_t bestCost = 0;
    for (size_t x = 0; x < t.nCols; ++x) {
      VarStats s = statsFor(t, x);
      if (!s.present || !eqFree(x))
        continue;
      if (s.nLow == 0 || s.nUp == 0) {
        pick = static_cast<int>(x);
        bestCost = 0;
        break;
      }
      if (s.allExact) {
        size_t cost = s.nLow * s.nUp;
        if (cost <= 64 && (pick < 0 || cost < bestCost)) {
          pick = static_cast<int>(x);
          bestCost = cost;
        }
      }
    }
    if (pick >= 0) {
      auto parts = fmEliminate(t, static_cast<size_t>(pick));
      assert(parts.size() == 1);
      t = std::move(parts.front());
      continue;
    }

    // branch: enumerate the variable with the smallest range
    int enumVar = -1;
    VarRange enumRange;
    for (size_t x = 0; x < t.nCols; ++x) {
      VarStats s = statsFor(t, x);
      if (!s.present)
        continue;
      VarRange r = rationalRange(t, x);
      if (r.empty)
        return false;
      if (!r.finite())
        continue;
      if (enumVar < 0 || r.width() < enumRange.width()) {
        enumVar = static_cast<int>(x);
        enumRange = r;
      }
    }
    if (enumVar >= 0 && enumRange.width() <= kMaxEnumWidth) {
      for (Int v = *enumRange.lo; v <= *enumRange.hi; ++v) {
        Tableau branch = t;
        branch.sigmaBudget = kMaxSigmaSteps;
        substituteValue(branch, static_cast<size_t>(enumVar), v);
        if (hasIntegerPoint(std::move(branch), depth + 1))
          return true;
      }
      return false;
    }

    // dark shadow + splinters on some inexact variable
    int fmVar = -1;
    size_t fmCost = 0;
    for (size_t x = 0; x < t.nCols; ++x) {
      VarStats s = statsFor(t, x);
      if (!s.present || !eqFree(x))
        continue;
      size_t cost = s.nLow * s.nUp;
      if (fmVar < 0 || cost < fmCost) {
        fmVar = static_cast<int>(x);
        fmCost = cost;
      }
    }
    if (fmVar < 0) {
      // only equality-entangled variables remain (sigma budget exhausted);
      // ranges are all unbounded here, give up honestly
      throw DimensionLimit("cannot decide emptiness within guards");
    }
    for (Tableau &branch : fmEliminate(t, static_cast<size_t>(fmVar)))
      if (hasIntegerPoint(std::move(branch), depth + 1))
        return true;
    return false;
  }
}

//===----------------------------------------------------------------------===//
// Exact projection
//===----------------------------------------------------------------------===//

void projectWorker(Tableau t, int depth, std::vector<Piece> &out) {
  if (depth > kMaxDepth)
    throw DimensionLimit("projection exceeded depth guard");
  for (;;) {
    EqPhase ep = eliminateEqualities(t);
    if (ep == EqPhase::Infeasible)
      return;
    if (ep == EqPhase::Stuck) {
      // A congruence got entangled with kept variables. Enumerate a
      // variable of some stuck equality with a finite range; without one
      // the projection is not representable as a finite union here.
      std::vector<char> candidate(t.nCols, 0);
      for (const Constraint &c : t.cons) {
        if (c.kind != CmpKind::Eq)
          continue;
        Int g = 0;
        bool unit = false;
        for (size_t x = 0; x < t.nCols; ++x) {
          if (!t.elim[x] || c.coeff[x] == 0)
            continue;
          Int a = absInt(c.coeff[x]);
          g = gcdInt(g, a);
          if (a == 1)
            unit = true;
        }
        if (g == 0 || unit || g == 1)
          continue; // not the stuck kind
        for (size_t x = 0; x < t.nCols; ++x)
          if (c.coeff[x] != 0)
            candidate[x] = 1;
      }
      int var = -1;
      VarRange best;
      for (size_t x = 0; x < t.nCols; ++x) {
        if (!candidate[x])
          continue;
        VarRange r = rationalRange(t, x);
        if (r.empty)
          return;
        if (!r.finite())
          continue;
        if (var < 0 || r.width() < best.width()) {
          var = static_cast<int>(x);
          best = r;
        }
      }
      if (var < 0 || best.width() > kMaxEnumWidth)
        throw DimensionLimit("projection requires congruences; giving up");
      for (Int v = *best.lo; v <= *best.hi; ++v) {
        Tableau branch = t;
        branch.sigmaBudget = kMaxSigmaSteps;
        substituteValue(branch, static_cast<size_t>(var), v);
        if (!t.elim[static_cast<size_t>(var)]) {
          // a kept variable was enumerated: pin its value in the output
          Constraint pin;
          pin.kind = CmpKind::Eq;
          pin.coeff.assign(branch.nCols, Int(0));
          pin.coeff[static_cast<size_t>(var)] = 1;
          pin.cst = -v;
          branch.cons.push_back(std::move(pin));
        }
        projectWorker(std::move(branch), depth + 1, out);
      }
      return;
    }

    // choose an eliminable variable still present
    int pick = -1;
    size_t bestCost = 0;
    bool bestOneSided = false;
    for (size_t x = 0; x < t.nCols; ++x) {
      if (!t.elim[x])
        continue;
      VarStats s = statsFor(t, x);
      if (!s.present)
        continue;
      bool oneSided = s.nLow == 0 || s.nUp == 0;
      size_t cost = s.nLow * s.nUp;
      if (pick < 0 || (oneSided && !bestOneSided) ||
          (oneSided == bestOneSided && cost < bestCost)) {
        pick = static_cast<int>(x);
        bestCost = cost;
        bestOneSided = oneSided;
      }
    }
    if (pick < 0) {
      // done: all eliminable variables gone
      if (rationallyEmpty(t.cons, t.nCols))
        return;
      out.push_back(t.cons);
      if (out.size() > kMaxPieces)
        throw DimensionLimit("projection produced too many pieces");
      return;
    }
    auto parts = fmEliminate(t, static_cast<size_t>(pick));
    if (parts.size() == 1) {
      t = std::move(parts.front());
      continue;
    }
    for (Tableau &branch : parts)
      projectWorker(std::move(branch), depth + 1, out);
    return;
  }
}

Tableau tableauFromPiece(const IntSet &s, const Piece &p,
                         const std::vector<char> &elim,
                         const EmptinessOptions &opts) {
  Tableau t;
  t.nCols = s.space().size();
  t.elim = elim;
  t.cons = p;
  size_t nd = s.space().dims.size();
  for (size_t i = 0; i < s.space().params.size(); ++i) {
    const std::string &pn = s.space().params[i];
    auto makeRow = [&](CmpKind k, Int coeff, Int cst) {
      Constraint c;
      c.kind = k;
      c.coeff.assign(t.nCols, Int(0));
      c.coeff[nd + i] = std::move(coeff);
      c.cst = std::move(cst);
      t.cons.push_back(std::move(c));
    };
    auto fl = opts.paramFloors.find(pn);
    if (fl != opts.paramFloors.end())
      makeRow(CmpKind::Ge, 1, -fl->second); // p >= floor
    auto bx = opts.paramBox.find(pn);
    if (bx != opts.paramBox.end()) {
      makeRow(CmpKind::Ge, 1, -bx->second.first);  // p >= lo
      makeRow(CmpKind::Ge, -1, bx->second.second); // p <= hi
    }
  }
  return t;
}

void validate(const IntSet &s) {
  if (s.space().size() > kMaxUserVars)
    throw DimensionLimit("set has more than " +
                         std::to_string(kMaxUserVars) + " variables");
  for (const Piece &p : s.pieces())
    if (p.size() > kMaxUserConstraints)
      throw DimensionLimit("piece has more than " +
                           std::to_string(kMaxUserConstraints) +
                           " constraints");
}

} // namespace

bool isEmptyInt(const IntSet &s, const EmptinessOptions &opts) {
  validate(s);
  std::vector<char> elim(s.space().size(), 1);
  for (const Piece &p : s.pieces()) {
    Tableau t = tableauFromPiece(s, p, elim, opts);
    if (hasIntegerPoint(std::move(t), 0))
      return false;
  }
  return true;
}

IntSet projectOnto(const IntSet &s, const std::vector<std::string> &keep) {
  validate(s);
  const Space &sp = s.space();
  std::vector<char> elim(sp.size(), 0);
  for (size_t i = 0; i < sp.dims.size(); ++i)
    elim[i] = 1;
  for (const std::string &k : keep) {
    auto idx = sp.indexOf(k);
    bool isDim = idx && *idx < sp.dims.size();
    if (!isDim)
      throw ArityMismatch("projectOnto: '" + k + "' is not a set dimension");
    elim[*idx] = 0;
  }

  std::vector<Piece> rawPieces;
  for (const Piece &p : s.pieces()) {
    Tableau t = tableauFromPiece(s, p, elim, {});
    projectWorker(std::move(t), 0, rawPieces);
  }

  // Rebuild over the kept layout. Fresh sigma columns only ever appear past
  // the original layout and are eliminated, so original indexing is stable.
  Space outSpace;
  outSpace.dims = keep;
  outSpace.params = sp.params;
  std::vector<size_t> colOf; // outSpace index -> original column
  for (const std::string &k : keep)
    colOf.push_back(*sp.indexOf(k));
  for (size_t i = 0; i < sp.params.size(); ++i)
    colOf.push_back(sp.dims.size() + i);

  IntSet out(outSpace);
  std::vector<Piece> seen;
  for (const Piece &p : rawPieces) {
    Piece np;
    for (const Constraint &c : p) {
      Constraint nc;
      nc.kind = c.kind;
      nc.cst = c.cst;
      nc.coeff.assign(outSpace.size(), Int(0));
      for (size_t i = 0; i < outSpace.size(); ++i)
        nc.coeff[i] = colOf[i] < c.coeff.size() ? c.coeff[colOf[i]] : Int(0);
      np.push_back(std::move(nc));
    }
    if (std::find(seen.begin(), seen.end(), np) == seen.end()) {
      seen.push_back(np);
      out.addPiece(std::move(np));
    }
  }
  out.setTupleName(s.tupleName());
  return out;
}

std::optional<std::map<std::string, Int>>
samplePoint(const IntSet &s, const EmptinessOptions &opts, long searchRadius) {
  validate(s);
  const Space &sp = s.space();
  std::vector<char> elim(sp.size(), 1);

  for (const Piece &p : s.pieces()) {
    Tableau t0 = tableauFromPiece(s, p, elim, opts);
    std::vector<std::optional<Int>> assign(sp.size());
    long nodes = 0;

    // depth-first value search, smallest-range-first, small magnitudes first
    std::function<bool(Tableau &)> dfs = [&](Tableau &t) -> bool {
      if (++nodes > 100000)
        return false;
      if (!simplify(t))
        return false;
      int var = -1;
      VarRange best;
      for (size_t x = 0; x < sp.size(); ++x) {
        if (assign[x])
          continue;
        VarRange r = rationalRange(t, x);
        if (r.empty)
          return false;
        if (!r.lo)
          r.lo = -Int(searchRadius);
        if (!r.hi)
          r.hi = Int(searchRadius);
        if (*r.lo > *r.hi)
          return false;
        if (var < 0 || r.width() < best.width()) {
          var = static_cast<int>(x);
          best = r;
        }
      }
      if (var < 0) {
        for (const Constraint &c : t.cons)
          if (c.kind == CmpKind::Eq ? c.cst != 0 : c.cst < 0)
            return false;
        return true;
      }
      // values ordered by magnitude
      std::vector<Int> vals;
      for (Int v = *best.lo; v <= *best.hi; ++v)
        vals.push_back(v);
      std::stable_sort(vals.begin(), vals.end(), [](const Int &a, const Int &b) {
        return absInt(a) < absInt(b);
      });
      for (const Int &v : vals) {
        Tableau branch = t;
        substituteValue(branch, static_cast<size_t>(var), v);
        assign[static_cast<size_t>(var)] = v;
        if (dfs(branch))
          return true;
        assign[static_cast<size_t>(var)] = std::nullopt;
      }
      return false;
    };

    Tableau t = t0;
    if (dfs(t)) {
      std::map<std::string, Int> point;
      for (size_t i = 0; i < sp.size(); ++i)
        point[sp.name(i)] = assign[i] ? *assign[i] : Int(0);
      return point;
    }
  }
  return std::nullopt;
}

} // namespace polyrace
