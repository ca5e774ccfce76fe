//===-- IntSet.cpp - Set types, algebra, and printing ---------------------===//

#include "polyrace/IntSet.h"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace polyrace {

//===----------------------------------------------------------------------===//
// AffineExpr
//===----------------------------------------------------------------------===//

AffineExpr &AffineExpr::operator+=(const AffineExpr &o) {
  for (const auto &[n, c] : o.coeffs) {
    Int &mine = coeffs[n];
    mine += c;
    if (mine == 0)
      coeffs.erase(n);
  }
  constant += o.constant;
  return *this;
}

AffineExpr &AffineExpr::operator-=(const AffineExpr &o) {
  for (const auto &[n, c] : o.coeffs) {
    Int &mine = coeffs[n];
    mine -= c;
    if (mine == 0)
      coeffs.erase(n);
  }
  constant -= o.constant;
  return *this;
}

AffineExpr &AffineExpr::operator*=(const Int &k) {
  if (k == 0) {
    coeffs.clear();
    constant = 0;
    return *this;
  }
  for (auto &[n, c] : coeffs)
    c *= k;
  constant *= k;
  return *this;
}

AffineExpr AffineExpr::operator-() const {
  AffineExpr e = *this;
  e *= Int(-1);
  return e;
}

Int AffineExpr::coeff(const std::string &name) const {
  auto it = coeffs.find(name);
  return it == coeffs.end() ? Int(0) : it->second;
}

Int AffineExpr::eval(const std::map<std::string, Int> &point) const {
  Int v = constant;
  for (const auto &[n, c] : coeffs) {
    auto it = point.find(n);
    if (it != point.end())
      v += c * it->second;
  }
  return v;
}

std::string AffineExpr::str() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Int &c, const std::string &name) {
    if (c == 0)
      return;
    if (first) {
      if (c == -1 && !name.empty())
        os << "-";
      else if (!(c == 1 && !name.empty()))
        os << c.str() << (name.empty() ? "" : "*");
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
      Int a = absInt(c);
      if (!(a == 1 && !name.empty()))
        os << a.str() << (name.empty() ? "" : "*");
    }
    os << name;
  };
  for (const auto &[n, c] : coeffs)
    emit(c, n);
  if (constant != 0 || first) {
    if (first)
      os << constant.str();
    else
      os << (constant < 0 ? " - " : " + ") << absInt(constant).str();
  }
  return os.str();
}

//===----------------------------------------------------------------------===//
// Space / IntSet
//===----------------------------------------------------------------------===//

std::optional<size_t> Space::indexOf(const std::string &n) const {
  for (size_t i = 0; i < dims.size(); ++i)
    if (dims[i] == n)
      return i;
  for (size_t i = 0; i < params.size(); ++i)
    if (params[i] == n)
      return dims.size() + i;
  return std::nullopt;
}

IntSet IntSet::universe(Space space) {
  IntSet s(std::move(space));
  s.pieces_.push_back({});
  return s;
}

Constraint IntSet::makeConstraint(CmpKind k, const AffineExpr &e) const {
  Constraint c;
  c.kind = k;
  c.coeff.assign(space_.size(), Int(0));
  c.cst = e.constant;
  for (const auto &[n, v] : e.coeffs) {
    auto idx = space_.indexOf(n);
    if (!idx)
      throw ArityMismatch("variable '" + n + "' not in set space");
    c.coeff[*idx] = v;
  }
  return c;
}

IntSet IntSet::withConstraint(CmpKind k, const AffineExpr &e) const {
  IntSet out = *this;
  Constraint c = makeConstraint(k, e);
  for (Piece &p : out.pieces_)
    p.push_back(c);
  return out;
}

static bool pieceContains(const Piece &p, const std::vector<Int> &vals) {
  for (const Constraint &c : p) {
    Int v = c.cst;
    for (size_t i = 0; i < c.coeff.size(); ++i)
      if (c.coeff[i] != 0)
        v += c.coeff[i] * vals[i];
    if (c.kind == CmpKind::Eq ? (v != 0) : (v < 0))
      return false;
  }
  return true;
}

bool IntSet::contains(const std::map<std::string, Int> &point) const {
  std::vector<Int> vals(space_.size(), Int(0));
  for (size_t i = 0; i < space_.size(); ++i) {
    auto it = point.find(space_.name(i));
    if (it != point.end())
      vals[i] = it->second;
  }
  for (const Piece &p : pieces_)
    if (pieceContains(p, vals))
      return true;
  return false;
}

IntSet IntSet::renamed(const std::vector<std::string> &newDims) const {
  assert(newDims.size() == space_.dims.size());
  IntSet out = *this;
  out.space_.dims = newDims;
  return out;
}

//===----------------------------------------------------------------------===//
// IntRel
//===----------------------------------------------------------------------===//

IntRel::IntRel(IntSet set, size_t nIn) : set_(std::move(set)), nIn_(nIn) {
  if (nIn_ > set_.space().dims.size())
    throw ArityMismatch("relation split point exceeds dimension count");
}

std::vector<std::string> IntRel::inDims() const {
  const auto &d = set_.space().dims;
  return {d.begin(), d.begin() + static_cast<long>(nIn_)};
}

std::vector<std::string> IntRel::outDims() const {
  const auto &d = set_.space().dims;
  return {d.begin() + static_cast<long>(nIn_), d.end()};
}

//===----------------------------------------------------------------------===//
// Param alignment and simple algebra
//===----------------------------------------------------------------------===//

namespace {

// Rewrite a constraint from an old space layout into a new one given a
// column mapping (oldIndex -> newIndex).
Constraint remapConstraint(const Constraint &c, const std::vector<size_t> &map,
                           size_t newSize) {
  Constraint out;
  out.kind = c.kind;
  out.cst = c.cst;
  out.coeff.assign(newSize, Int(0));
  for (size_t i = 0; i < c.coeff.size(); ++i)
    if (c.coeff[i] != 0)
      out.coeff[map[i]] += c.coeff[i];
  return out;
}

std::vector<size_t> columnMap(const Space &from, const Space &to) {
  std::vector<size_t> map(from.size());
  for (size_t i = 0; i < from.size(); ++i) {
    auto idx = to.indexOf(from.name(i));
    assert(idx && "aligned space must contain every variable");
    map[i] = *idx;
  }
  return map;
}

Space mergeParams(const Space &a, const Space &b,
                  std::vector<std::string> dims) {
  Space out;
  out.dims = std::move(dims);
  out.params = a.params;
  for (const auto &p : b.params)
    if (std::find(out.params.begin(), out.params.end(), p) == out.params.end())
      out.params.push_back(p);
  return out;
}

} // namespace

IntSet intersect(const IntSet &a, const IntSet &b) {
  if (a.space().dims.size() != b.space().dims.size())
    throw ArityMismatch("intersect: dimension count mismatch");
  // Positional dim alignment: b's dims are read as a's.
  Space space = mergeParams(a.space(), b.space(), a.space().dims);
  Space bAsA = b.space();
  bAsA.dims = a.space().dims;
  auto mapA = columnMap(a.space(), space);
  auto mapB = columnMap(bAsA, space);
  IntSet out(space);
  for (const Piece &pa : a.pieces())
    for (const Piece &pb : b.pieces()) {
      Piece p;
      p.reserve(pa.size() + pb.size());
      for (const Constraint &c : pa)
        p.push_back(remapConstraint(c, mapA, space.size()));
      for (const Constraint &c : pb)
        p.push_back(remapConstraint(c, mapB, space.size()));
      out.addPiece(std::move(p));
    }
  return out;
}

IntSet unionSet(const IntSet &a, const IntSet &b) {
  if (a.space().dims.size() != b.space().dims.size())
    throw ArityMismatch("union: dimension count mismatch");
  Space space = mergeParams(a.space(), b.space(), a.space().dims);
  Space bAsA = b.space();
  bAsA.dims = a.space().dims;
  auto mapA = columnMap(a.space(), space);
  auto mapB = columnMap(bAsA, space);
  IntSet out(space);
  for (const Piece &pa : a.pieces()) {
    Piece p;
    for (const Constraint &c : pa)
      p.push_back(remapConstraint(c, mapA, space.size()));
    out.addPiece(std::move(p));
  }
  for (const Piece &pb : b.pieces()) {
    Piece p;
    for (const Constraint &c : pb)
      p.push_back(remapConstraint(c, mapB, space.size()));
    out.addPiece(std::move(p));
  }
  return out;
}

IntRel intersect(const IntRel &a, const IntRel &b) {
  if (a.nIn() != b.nIn() || a.nOut() != b.nOut())
    throw ArityMismatch("intersect: relation arity mismatch");
  IntRel out(intersect(a.set(), b.set()), a.nIn());
  out.setTupleNames(a.inName(), a.outName());
  return out;
}

IntRel unionRel(const IntRel &a, const IntRel &b) {
  if (a.nIn() != b.nIn() || a.nOut() != b.nOut())
    throw ArityMismatch("union: relation arity mismatch");
  IntRel out(unionSet(a.set(), b.set()), a.nIn());
  out.setTupleNames(a.inName(), a.outName());
  return out;
}

IntRel inverse(const IntRel &r) {
  const Space &sp = r.set().space();
  Space out;
  out.params = sp.params;
  out.dims.insert(out.dims.end(), sp.dims.begin() + static_cast<long>(r.nIn()),
                  sp.dims.end());
  out.dims.insert(out.dims.end(), sp.dims.begin(),
                  sp.dims.begin() + static_cast<long>(r.nIn()));
  auto map = columnMap(sp, out);
  IntSet s(out);
  for (const Piece &p : r.set().pieces()) {
    Piece np;
    for (const Constraint &c : p)
      np.push_back(remapConstraint(c, map, out.size()));
    s.addPiece(std::move(np));
  }
  IntRel res(std::move(s), r.nOut());
  res.setTupleNames(r.outName(), r.inName());
  return res;
}

namespace {

// Unique names for an internal tuple: base names, primed until they clash
// with nothing in `taken`.
std::vector<std::string> freshNames(const std::vector<std::string> &base,
                                    std::vector<std::string> &taken) {
  std::vector<std::string> out;
  for (const auto &b : base) {
    std::string n = b;
    while (std::find(taken.begin(), taken.end(), n) != taken.end())
      n += "'";
    taken.push_back(n);
    out.push_back(n);
  }
  return out;
}

} // namespace

IntRel compose(const IntRel &r1, const IntRel &r2) {
  if (r1.nOut() != r2.nIn())
    throw ArityMismatch("compose: inner arity mismatch");

  // seed with parameter names so tuple dims never shadow a parameter
  std::vector<std::string> taken = r1.set().space().params;
  for (const auto &p : r2.set().space().params)
    taken.push_back(p);
  auto inNames = freshNames(r1.inDims(), taken);
  auto midNames = freshNames(r1.outDims(), taken);
  auto outNames = freshNames(r2.outDims(), taken);

  std::vector<std::string> allDims = inNames;
  allDims.insert(allDims.end(), midNames.begin(), midNames.end());
  allDims.insert(allDims.end(), outNames.begin(), outNames.end());
  Space space = mergeParams(r1.set().space(), r2.set().space(), allDims);

  Space s1 = r1.set().space();
  s1.dims = inNames;
  s1.dims.insert(s1.dims.end(), midNames.begin(), midNames.end());
  Space s2 = r2.set().space();
  s2.dims = midNames;
  s2.dims.insert(s2.dims.end(), outNames.begin(), outNames.end());
  auto map1 = columnMap(s1, space);
  auto map2 = columnMap(s2, space);

  IntSet combined(space);
  for (const Piece &p1 : r1.set().pieces())
    for (const Piece &p2 : r2.set().pieces()) {
      Piece p;
      for (const Constraint &c : p1)
        p.push_back(remapConstraint(c, map1, space.size()));
      for (const Constraint &c : p2)
        p.push_back(remapConstraint(c, map2, space.size()));
      combined.addPiece(std::move(p));
    }

  std::vector<std::string> keep = inNames;
  keep.insert(keep.end(), outNames.begin(), outNames.end());
  IntRel out(projectOnto(combined, keep), inNames.size());
  out.setTupleNames(r1.inName(), r2.outName());
  return out;
}

IntRel applyDomain(const IntRel &r, const IntSet &s) {
  if (s.space().dims.size() != r.nIn())
    throw ArityMismatch("applyDomain: arity mismatch");
  IntSet cond = s.renamed(r.inDims());
  // Lift `cond` into the relation's space: same dims plus r's out dims.
  Space space =
      mergeParams(r.set().space(), cond.space(), r.set().space().dims);
  auto mapR = columnMap(r.set().space(), space);
  auto mapC = columnMap(cond.space(), space);
  IntSet out(space);
  for (const Piece &pr : r.set().pieces())
    for (const Piece &pc : cond.pieces()) {
      Piece p;
      for (const Constraint &c : pr)
        p.push_back(remapConstraint(c, mapR, space.size()));
      for (const Constraint &c : pc)
        p.push_back(remapConstraint(c, mapC, space.size()));
      out.addPiece(std::move(p));
    }
  IntRel res(std::move(out), r.nIn());
  res.setTupleNames(r.inName(), r.outName());
  return res;
}

IntRel applyRange(const IntRel &r, const IntSet &s) {
  return inverse(applyDomain(inverse(r), s));
}

IntSet deltas(const IntRel &r) {
  if (r.nIn() != r.nOut())
    throw ArityMismatch("deltas: source and target arity differ");
  size_t n = r.nIn();
  const Space &sp = r.set().space();

  std::vector<std::string> taken = sp.dims;
  taken.insert(taken.end(), sp.params.begin(), sp.params.end());
  std::vector<std::string> deltaBase;
  for (size_t i = 0; i < n; ++i)
    deltaBase.push_back("d" + sp.dims[i]);
  auto deltaNames = freshNames(deltaBase, taken);

  Space ext;
  ext.dims = sp.dims;
  ext.dims.insert(ext.dims.end(), deltaNames.begin(), deltaNames.end());
  ext.params = sp.params;
  auto map = columnMap(sp, ext);

  IntSet extSet(ext);
  for (const Piece &p : r.set().pieces()) {
    Piece np;
    for (const Constraint &c : p)
      np.push_back(remapConstraint(c, map, ext.size()));
    for (size_t i = 0; i < n; ++i) {
      // d_i - t_i + s_i = 0
      AffineExpr e = AffineExpr::var(deltaNames[i]) -
                     AffineExpr::var(sp.dims[n + i]) +
                     AffineExpr::var(sp.dims[i]);
      np.push_back(IntSet(ext).makeConstraint(CmpKind::Eq, e));
    }
    extSet.addPiece(std::move(np));
  }
  return projectOnto(extSet, deltaNames);
}

IntRel lexLess(size_t arity, size_t level) {
  if (level < 1 || level > arity)
    throw ArityMismatch("lexLess: level out of range");
  Space sp;
  for (size_t i = 1; i <= arity; ++i)
    sp.dims.push_back("s" + std::to_string(i));
  for (size_t i = 1; i <= arity; ++i)
    sp.dims.push_back("t" + std::to_string(i));
  IntSet s = IntSet::universe(sp);
  for (size_t i = 1; i < level; ++i)
    s = s.withConstraint(CmpKind::Eq,
                         AffineExpr::var("s" + std::to_string(i)) -
                             AffineExpr::var("t" + std::to_string(i)));
  s = s.withConstraint(CmpKind::Ge,
                       AffineExpr::var("t" + std::to_string(level)) -
                           AffineExpr::var("s" + std::to_string(level)) -
                           AffineExpr(1));
  return IntRel(std::move(s), arity);
}

//===----------------------------------------------------------------------===//
// Printing
//===----------------------------------------------------------------------===//

namespace {

AffineExpr rowToExpr(const Constraint &c, const Space &sp) {
  AffineExpr e;
  for (size_t i = 0; i < c.coeff.size(); ++i)
    if (c.coeff[i] != 0)
      e.coeffs[sp.name(i)] = c.coeff[i];
  e.constant = c.cst;
  return e;
}

// Render one conjunction, folding single-dim bounds into "lo <= x <= hi"
// chains in dim order.
std::string renderPiece(const Piece &piece, const Space &sp) {
  size_t nd = sp.dims.size();
  struct Bound {
    std::optional<AffineExpr> lo, hi, eq; // bounds as exprs over params
  };
  std::vector<Bound> bounds(nd);
  std::vector<std::string> rest;

  auto soleDim = [&](const Constraint &c) -> std::optional<size_t> {
    std::optional<size_t> found;
    for (size_t i = 0; i < nd; ++i)
      if (c.coeff[i] != 0) {
        if (found || absInt(c.coeff[i]) != 1)
          return std::nullopt;
        found = i;
      }
    return found;
  };

  for (const Constraint &c : piece) {
    auto d = soleDim(c);
    if (d) {
      // c: k*x + rest_params + cst (>=|==) 0, k = +-1
      AffineExpr restExpr;
      for (size_t i = nd; i < c.coeff.size(); ++i)
        if (c.coeff[i] != 0)
          restExpr.coeffs[sp.name(i)] = c.coeff[i];
      restExpr.constant = c.cst;
      bool pos = c.coeff[*d] > 0;
      if (c.kind == CmpKind::Eq) {
        if (!bounds[*d].eq) {
          bounds[*d].eq = pos ? -restExpr : restExpr;
          continue;
        }
      } else if (pos) {
        // x >= -rest
        if (!bounds[*d].lo) {
          bounds[*d].lo = -restExpr;
          continue;
        }
      } else {
        // x <= rest
        if (!bounds[*d].hi) {
          bounds[*d].hi = restExpr;
          continue;
        }
      }
    }
    AffineExpr e = rowToExpr(c, sp);
    rest.push_back(e.str() + (c.kind == CmpKind::Eq ? " = 0" : " >= 0"));
  }

  std::vector<std::string> parts;
  for (size_t i = 0; i < nd; ++i) {
    const Bound &b = bounds[i];
    if (b.eq)
      parts.push_back(sp.dims[i] + " = " + b.eq->str());
    if (b.lo && b.hi)
      parts.push_back(b.lo->str() + " <= " + sp.dims[i] + " <= " +
                      b.hi->str());
    else if (b.lo)
      parts.push_back(sp.dims[i] + " >= " + b.lo->str());
    else if (b.hi)
      parts.push_back(sp.dims[i] + " <= " + b.hi->str());
  }
  parts.insert(parts.end(), rest.begin(), rest.end());

  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += " and ";
    out += parts[i];
  }
  return out;
}

std::string renderTuple(const std::string &name,
                        const std::vector<std::string> &dims) {
  std::string out = name + "[";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i)
      out += ", ";
    out += dims[i];
  }
  return out + "]";
}

} // namespace

std::string IntSet::str() const {
  std::string head = renderTuple(name_, space_.dims);
  if (pieces_.empty())
    return "{ " + head + " : false }";
  std::string out = "{ ";
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (i)
      out += "; ";
    out += head;
    std::string body = renderPiece(pieces_[i], space_);
    if (!body.empty())
      out += " : " + body;
  }
  return out + " }";
}

std::string IntRel::str() const {
  auto in = inDims();
  auto out = outDims();
  std::string head =
      renderTuple(inName_, in) + " -> " + renderTuple(outName_, out);
  if (set_.pieces().empty())
    return "{ " + head + " : false }";
  std::string res = "{ ";
  for (size_t i = 0; i < set_.pieces().size(); ++i) {
    if (i)
      res += "; ";
    res += head;
    std::string body = renderPiece(set_.pieces()[i], set_.space());
    if (!body.empty())
      res += " : " + body;
  }
  return res + " }";
}

} // namespace polyrace
