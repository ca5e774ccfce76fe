//===-- DepGraph.h - Reduced dependence graph -------------------*- C++ -*-===//
//
// Exact memory-based dependences between statement instances of a Scop,
// restricted to conflict-eligible accesses. Every conflicting ordered pair
// is kept (not just last writers): a race is any unordered conflicting
// pair, so value-based pruning would mask races.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/Scop.h"

#include <functional>
#include <optional>

namespace polyrace {

enum class DepKind { RAW, WAR, WAW };

struct Dependence {
  DepKind kind = DepKind::RAW;
  size_t srcStmt = 0, dstStmt = 0;     // indices into scop.stmts
  size_t srcAccess = 0, dstAccess = 0; // indices into accesses
  IntRel rel;                          // source iteration -> target iteration
  std::optional<IntSet> delta;         // target - source, same-arity pairs
};

struct RDG {
  const Scop *scop = nullptr;
  std::vector<Dependence> edges;
};

using EligiblePred = std::function<bool(const Access &)>;

/// Conflict eligibility used by the race checker: shared accesses and
/// non-matching accesses to reduction variables; private-like classes,
/// matching reduction updates, and ordered-block accesses are exempt.
bool conflictEligible(const Access &a);

/// Build the RDG of a fully affine scop. Throws NotAffineError otherwise;
/// DimensionLimit propagates from the set engine.
RDG computeDependences(const Scop &s, const EligiblePred &eligible);

/// Edges whose both endpoints are lexically inside `loop`.
RDG restrictToLoop(const RDG &g, const Directive &loop);

/// Edge relations in debug notation; used by --dump-rdg.
std::string dumpRDG(const RDG &g);

/// Is statement `s` lexically inside the subtree rooted at `root`?
bool stmtWithin(const Stmt *root, const Stmt *s);

} // namespace polyrace
