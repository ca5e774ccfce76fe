//===-- Directive.h - Reconstructed OpenMP construct tree ------*- C++ -*-===//
//
// The in-memory directive representation:
//   <Directive> ::= <Dtype> [ Sched ] { <Var> } { <Directive> }
// Combined pragmas expand into nested directives (parallel for simd becomes
// parallel > workshare-loop > simd). A "for" under a parallel ancestor is a
// workshare-loop; orphaned it stays a plain for. Each non-combined parallel
// region ends with its implicit join barrier, kept as an implicit child.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/Ast.h"

#include <map>
#include <memory>
#include <vector>

namespace polyrace {

enum class Dtype {
  Parallel,
  For,           // orphaned worksharing loop
  WorkshareLoop, // worksharing loop bound to a parallel region
  Simd,
  Single,
  Master,
  Critical,
  Ordered,
  Distribute,
  ThreadPrivate,
  Barrier,
  Atomic,
  Unknown
};

/// Listing-style name (OMP_Parallel, OMP_Workshare_Loop, ...).
std::string dtypeName(Dtype d);
/// Pragma-surface name ("parallel for", "single", ...).
std::string dtypeKeyword(Dtype d);

struct Directive {
  Dtype dtype = Dtype::Unknown;
  std::optional<Schedule> sched;
  std::vector<VarClause> vars; // resolved classes on region roots
  long long collapse = 1;
  bool nowait = false;
  bool implicit = false; // synthesized (region-end barrier)
  std::optional<long long> numThreads;
  std::vector<std::unique_ptr<Directive>> children;
  const Stmt *body = nullptr; // associated statement; null when standalone
  SourceLoc loc;
  std::string rawText;
  std::string unknownName; // for Dtype::Unknown

  bool isLoopDirective() const {
    return dtype == Dtype::For || dtype == Dtype::WorkshareLoop ||
           dtype == Dtype::Simd || dtype == Dtype::Distribute;
  }
  bool isParseOnly() const {
    return dtype == Dtype::Single || dtype == Dtype::Master ||
           dtype == Dtype::Critical || dtype == Dtype::Atomic ||
           (dtype == Dtype::Barrier && !implicit);
  }
};

using DirectivePtr = std::unique_ptr<Directive>;

/// Build the directive forest in source order and resolve the variable
/// classification of every region root: explicit clauses win, induction
/// variables are private, threadprivate declarations apply, and everything
/// else occurring in the region body is shared.
std::vector<DirectivePtr> extractDirectives(const Program &p);

/// Classification lookup for a region (root directive of a forest entry).
/// Contains one entry per variable occurring in the region.
std::map<std::string, VarClause> classMapOf(const Directive &root);

/// Names of every non-induction variable referenced under stmt
/// (array names and scalar reads/writes; induction variables excluded).
void collectVariables(const Stmt &s, std::vector<std::string> &inductionStack,
                      std::map<std::string, bool> &names);

/// Listing-style textual dump of a directive tree.
std::string dumpDirective(const Directive &d, int indent = 0);

} // namespace polyrace
