//===-- IntSet.h - Exact integer sets and relations -------------*- C++ -*-===//
//
// Conjunctions/disjunctions of affine integer constraints over named
// iteration dimensions and symbolic parameters, with projection by
// Fourier-Motzkin elimination and exact integer emptiness.
//
// Rational FM is not integer-exact on its own. Projection here stays exact
// by combining three integer-preserving steps:
//   * per-constraint tightening (divide by the coefficient gcd, floor the
//     constant),
//   * equality elimination by substitution, with a fresh existential
//     variable when no unit coefficient exists,
//   * pairwise FM where exact (some unit coefficient per bound pair), and
//     otherwise a dark-shadow piece plus finitely many equality splinters.
// Emptiness adds branch-and-bound search over FM-derived variable ranges
// with rational pruning.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/Diag.h"
#include "polyrace/Numeric.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polyrace {

/// Sum of integer-scaled variables plus an integer constant. Variables are
/// iteration dims or symbolic parameters, referenced by name.
struct AffineExpr {
  std::map<std::string, Int> coeffs;
  Int constant = 0;

  AffineExpr() = default;
  /*implicit*/ AffineExpr(Int c) : constant(std::move(c)) {}
  /*implicit*/ AffineExpr(long c) : constant(c) {}

  static AffineExpr var(const std::string &name, Int scale = 1) {
    AffineExpr e;
    if (scale != 0)
      e.coeffs[name] = std::move(scale);
    return e;
  }

  AffineExpr &operator+=(const AffineExpr &o);
  AffineExpr &operator-=(const AffineExpr &o);
  AffineExpr &operator*=(const Int &k);
  friend AffineExpr operator+(AffineExpr a, const AffineExpr &b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr &b) { return a -= b; }
  friend AffineExpr operator*(AffineExpr a, const Int &k) { return a *= k; }
  AffineExpr operator-() const;

  bool isConstant() const { return coeffs.empty(); }
  Int coeff(const std::string &name) const;
  /// Evaluate at a full assignment; names absent from `point` evaluate as 0.
  Int eval(const std::map<std::string, Int> &point) const;
  bool operator==(const AffineExpr &o) const = default;
  std::string str() const;
};

/// Ordered dims followed by params; constraint coefficient vectors index
/// into this layout.
struct Space {
  std::vector<std::string> dims;
  std::vector<std::string> params;

  size_t size() const { return dims.size() + params.size(); }
  const std::string &name(size_t i) const {
    return i < dims.size() ? dims[i] : params[i - dims.size()];
  }
  std::optional<size_t> indexOf(const std::string &n) const;
  bool operator==(const Space &o) const = default;
};

enum class CmpKind { Eq, Ge }; // expr == 0  /  expr >= 0

/// One affine constraint in dense (space-indexed) form.
struct Constraint {
  CmpKind kind = CmpKind::Ge;
  std::vector<Int> coeff; // one entry per space variable
  Int cst = 0;

  bool operator==(const Constraint &o) const = default;
};

using Piece = std::vector<Constraint>; // conjunction

/// Options threaded through emptiness queries.
struct EmptinessOptions {
  /// Inclusive lower bounds on parameters (by name). Used by the race
  /// checker to require loop extents of at least 2.
  std::map<std::string, Int> paramFloors;
  /// Inclusive box over parameters; when set for a param it bounds both
  /// sides.
  std::map<std::string, std::pair<Int, Int>> paramBox;
};

class IntSet {
public:
  IntSet() = default;
  explicit IntSet(Space space) : space_(std::move(space)) {} // empty set

  static IntSet universe(Space space);
  static IntSet empty(Space space) { return IntSet(std::move(space)); }

  const Space &space() const { return space_; }
  const std::vector<Piece> &pieces() const { return pieces_; }
  const std::string &tupleName() const { return name_; }
  void setTupleName(std::string n) { name_ = std::move(n); }

  bool plainEmpty() const { return pieces_.empty(); } // structurally empty

  /// Append one disjunct given as a list of constraints over this space.
  void addPiece(Piece p) { pieces_.push_back(std::move(p)); }

  /// Add a constraint to every piece (intersection with a half-space or
  /// hyperplane). `e (>=|==) 0`.
  IntSet withConstraint(CmpKind k, const AffineExpr &e) const;

  /// Dense-form constraint from a name-keyed expression; names must exist
  /// in the space.
  Constraint makeConstraint(CmpKind k, const AffineExpr &e) const;

  bool contains(const std::map<std::string, Int> &point) const;

  IntSet renamed(const std::vector<std::string> &newDims) const;

  bool operator==(const IntSet &o) const {
    return space_ == o.space_ && pieces_ == o.pieces_;
  }

  std::string str() const;

private:
  Space space_;
  std::vector<Piece> pieces_;
  std::string name_;
};

class IntRel {
public:
  IntRel() = default;
  IntRel(IntSet set, size_t nIn);

  const IntSet &set() const { return set_; }
  IntSet &set() { return set_; }
  size_t nIn() const { return nIn_; }
  size_t nOut() const { return set_.space().dims.size() - nIn_; }
  std::vector<std::string> inDims() const;
  std::vector<std::string> outDims() const;

  const std::string &inName() const { return inName_; }
  const std::string &outName() const { return outName_; }
  void setTupleNames(std::string in, std::string out) {
    inName_ = std::move(in);
    outName_ = std::move(out);
  }

  std::string str() const;

private:
  IntSet set_;
  size_t nIn_ = 0;
  std::string inName_, outName_;
};

//===----------------------------------------------------------------------===//
// Set operations
//===----------------------------------------------------------------------===//

/// True iff `s` contains no integer point. Parameters are existential: the
/// set is empty iff it is empty for every integer parameter value.
bool isEmptyInt(const IntSet &s, const EmptinessOptions &opts = {});

/// Fourier-Motzkin projection onto the named dims (subset of s.dims, kept
/// in their original order). Integer-exact; may return more pieces than the
/// input.
IntSet projectOnto(const IntSet &s, const std::vector<std::string> &keep);

/// { t - s : (s, t) in r }, over fresh difference dims (d<name>).
IntSet deltas(const IntRel &r);

/// {(s, t) : s_1 = t_1, ..., s_{k-1} = t_{k-1}, s_k < t_k} over dims
/// s1..sn/t1..tn.
IntRel lexLess(size_t arity, size_t level);

IntSet intersect(const IntSet &a, const IntSet &b);
IntSet unionSet(const IntSet &a, const IntSet &b);
IntRel intersect(const IntRel &a, const IntRel &b);
IntRel unionRel(const IntRel &a, const IntRel &b);

/// {(a, c) : exists b. (a, b) in r1 and (b, c) in r2}.
IntRel compose(const IntRel &r1, const IntRel &r2);

/// Restrict the source tuple of r to s.
IntRel applyDomain(const IntRel &r, const IntSet &s);
/// Restrict the target tuple of r to s.
IntRel applyRange(const IntRel &r, const IntSet &s);

IntRel inverse(const IntRel &r);

/// Find some integer point, searching parameters/dims within `searchRadius`
/// of zero where the system leaves them unbounded. Best-effort; used for
/// witness samples only.
std::optional<std::map<std::string, Int>>
samplePoint(const IntSet &s, const EmptinessOptions &opts = {},
            long searchRadius = 64);

} // namespace polyrace
