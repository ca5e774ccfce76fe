//===-- RaceCheck.h - Per-region race verdicts ------------------*- C++ -*-===//
//
// Decides RaceDetected / RaceFree / NotAnalyzable per parallel construct:
// a loop dimension is parallel iff every dependence, projected onto that
// dimension with the zero distance removed, is integer-empty. Non-affine
// regions fall back to a conservative Mod/Ref-style check unless disabled.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/DepGraph.h"

#include <map>
#include <string>
#include <vector>

namespace polyrace {

enum class Outcome { RaceDetected, RaceFree, NotAnalyzable };

std::string outcomeName(Outcome o);

struct RaceWitness {
  std::string array;
  SourceLoc writeLoc;
  SourceLoc otherLoc;
  bool otherIsWrite = false;
  std::string dimName; // parallelized dimension the conflict crosses
  std::map<std::string, Int> deltaSample; // may be empty

  bool operator<(const RaceWitness &o) const {
    if (writeLoc.line != o.writeLoc.line)
      return writeLoc.line < o.writeLoc.line;
    if (otherLoc.line != o.otherLoc.line)
      return otherLoc.line < o.otherLoc.line;
    return array < o.array;
  }
};

struct Verdict {
  const Directive *region = nullptr;
  SourceLoc loc;
  Outcome outcome = Outcome::NotAnalyzable;
  std::string regionKind; // "parallel for", "simd", ...
  std::vector<RaceWitness> evidence;
  std::string reason; // NotAnalyzable explanation
  std::vector<std::string> notes;
};

struct CheckOptions {
  bool mayRefFallback = true; // --disable-mayref turns this off
  long paramFloor = 2;        // loop extents assumed at least this large
};

/// Parameter regime for all verdict-facing emptiness queries.
EmptinessOptions raceEmptinessOptions(const Scop &s, const CheckOptions &opts);

/// Algorithm 2: true iff every edge's distance at `dim` (1-based, scop
/// relative), zero removed, is integer-empty.
bool isParallel(const RDG &g, size_t dim, const EmptinessOptions &opts);

/// Algorithm 1 for one region (a loop-forming construct, possibly the
/// parallel wrapper of one). Never throws: failures become NotAnalyzable.
Verdict isRaceFree(const Directive &region, const Program &p,
                   const CheckOptions &opts = {});

/// Conservative fallback for regions that are not fully affine: a write to
/// any conflict-eligible variable flags a race; read-only regions are free.
Verdict mayRefCheck(const Directive &region, const Scop &s);

/// One verdict per outermost supported parallel construct, in source order.
/// A plain parallel region reports through its component constructs.
std::vector<Verdict> checkProgram(const Program &p,
                                  const CheckOptions &opts = {});

/// Stable diagnostic line:
/// <file>:<line>: <OUTCOME>: <kind> [witness: <arr> write@<l> ~ <k>@<l>, dim <d>]
std::string formatVerdict(const Verdict &v, const std::string &file);

} // namespace polyrace
