//===-- Scop.h - Polyhedral model of a directive region ---------*- C++ -*-===//
//
// Iteration domains, a sequential schedule, and access maps for the loop
// nest associated with a parallel construct. Loop variables outside the
// region enter as symbolic parameters. Strides are normalized to 1 by
// index substitution; min/max bounds expand into conjunctive constraints
// or extra domain pieces depending on polarity.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/Directive.h"
#include "polyrace/IntSet.h"

#include <map>
#include <string>
#include <vector>

namespace polyrace {

struct Access {
  std::string array; // scalars are rank-0 arrays
  bool isWrite = false;
  bool affine = true;
  std::vector<AffineExpr> subscripts; // meaningful iff affine
  size_t rank = 0;
  Vtype varClass = Vtype::Shared;
  std::string reductionOp;     // declared op when varClass == Reduction
  bool reductionUpdate = false; // matches the declared reduction pattern
  bool inOrderedBlock = false;
  SourceLoc loc;
};

/// Schedule position entry: a constant sequence number or a loop dim.
struct SchedEntry {
  bool isDim = false;
  size_t dim = 0; // index into ScopStmt::dims
  long long seq = 0;

  static SchedEntry dimAt(size_t d) { return {true, d, 0}; }
  static SchedEntry seqNo(long long s) { return {false, 0, s}; }
};

struct ScopStmt {
  std::string id; // S0, S1, ...
  const Stmt *stmt = nullptr;
  std::vector<std::string> dims; // enclosing loop vars, outermost first
  IntSet domain;                 // over dims + scop params
  std::vector<SchedEntry> schedule; // interleaved [c0, d0, c1, d1, ..., ck]
  std::vector<Access> accesses;
};

struct Scop {
  const Directive *region = nullptr;
  const Program *program = nullptr;
  std::vector<ScopStmt> stmts;
  std::vector<std::string> params; // program params + outer loop vars
  bool fullyAffine = true;
  std::string notAffineReason;
  size_t parallelDims = 1; // dims 1..parallelDims are parallelized (collapse)
  std::map<std::string, VarClause> classes;
};

/// Build the polyhedral model for a loop-forming directive (for / simd /
/// distribute, possibly under parallel) or for a bare region body.
/// `classes` is the region root's resolved variable classification.
///
/// Throws UnsupportedConstruct when the region contains a parse-only
/// construct or a malformed collapse nest; non-affine bounds or subscripts
/// set fullyAffine = false instead of failing.
Scop constructScop(const Directive &region, const Program &p,
                   const std::map<std::string, VarClause> &classes);

/// Accesses with affine = false (these route the region to the may-ref
/// fallback).
std::vector<const Access *> markNonAffine(const Scop &s);

/// I/S/A blocks in the debug notation; used by --dump-scop.
std::string dumpScop(const Scop &s);

} // namespace polyrace
