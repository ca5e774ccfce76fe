//===-- RaceCheck.cpp - Verdict computation ----------------------------------===//

#include "polyrace/RaceCheck.h"

#include <algorithm>
#include <sstream>

namespace polyrace {

std::string outcomeName(Outcome o) {
  switch (o) {
  case Outcome::RaceDetected:
    return "RaceDetected";
  case Outcome::RaceFree:
    return "RaceFree";
  case Outcome::NotAnalyzable:
    return "NotAnalyzable";
  }
  return "NotAnalyzable";
}

EmptinessOptions raceEmptinessOptions(const Scop &s, const CheckOptions &opts) {
  EmptinessOptions e;
  for (const auto &p : s.program->params)
    e.paramFloors[p] = Int(opts.paramFloor);
  return e;
}

namespace {

std::string regionKindOf(const Directive &d) {
  switch (d.dtype) {
  case Dtype::Parallel: {
    // name combined constructs by their chain
    const Directive *c = d.children.empty() ? nullptr : d.children[0].get();
    if (c && c->body == d.body && c->dtype == Dtype::WorkshareLoop) {
      const Directive *g =
          c->children.empty() ? nullptr : c->children[0].get();
      if (g && g->dtype == Dtype::Simd && g->body == d.body)
        return "parallel for simd";
      return "parallel for";
    }
    return "parallel";
  }
  case Dtype::For:
  case Dtype::WorkshareLoop: {
    const Directive *c = d.children.empty() ? nullptr : d.children[0].get();
    if (c && c->dtype == Dtype::Simd && c->body == d.body)
      return "for simd";
    return "for";
  }
  case Dtype::Simd:
    return "simd";
  case Dtype::Distribute:
    return "distribute";
  case Dtype::Single:
    return "single";
  case Dtype::Master:
    return "master";
  case Dtype::Critical:
    return "critical";
  case Dtype::Ordered:
    return "ordered";
  case Dtype::Barrier:
    return "barrier";
  case Dtype::ThreadPrivate:
    return "threadprivate";
  case Dtype::Atomic:
    return "atomic";
  case Dtype::Unknown:
    return d.unknownName;
  }
  return "unknown";
}

// distance of edge at dim crossing in one direction: rel /\ sign*(q_d - p_d) >= 1
bool crossesAtDim(const Dependence &e, const Scop &s, size_t dim, int sign,
                  const EmptinessOptions &opts) {
  const ScopStmt &P = s.stmts[e.srcStmt];
  const ScopStmt &Q = s.stmts[e.dstStmt];
  if (P.dims.size() < dim || Q.dims.size() < dim)
    return false; // an endpoint is outside the queried loop depth
  AffineExpr diff = AffineExpr::var(Q.dims[dim - 1] + "'") -
                    AffineExpr::var(P.dims[dim - 1]);
  if (sign < 0)
    diff = -diff;
  IntSet crossing =
      e.rel.set().withConstraint(CmpKind::Ge, diff - AffineExpr(1));
  return !isEmptyInt(crossing, opts);
}

struct DimConflict {
  size_t edge;
  size_t dim;
  int sign;
};

std::vector<DimConflict> conflictsAtDim(const RDG &g, size_t dim,
                                        const EmptinessOptions &opts) {
  std::vector<DimConflict> out;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    if (crossesAtDim(g.edges[i], *g.scop, dim, +1, opts))
      out.push_back({i, dim, +1});
    else if (crossesAtDim(g.edges[i], *g.scop, dim, -1, opts))
      out.push_back({i, dim, -1});
  }
  return out;
}

RaceWitness witnessFor(const RDG &g, const DimConflict &c,
                       const EmptinessOptions &opts) {
  const Dependence &e = g.edges[c.edge];
  const Scop &s = *g.scop;
  const ScopStmt &P = s.stmts[e.srcStmt];
  const ScopStmt &Q = s.stmts[e.dstStmt];
  const Access &a1 = P.accesses[e.srcAccess];
  const Access &a2 = Q.accesses[e.dstAccess];

  RaceWitness w;
  w.array = a1.array;
  w.dimName = P.dims.size() >= c.dim ? P.dims[c.dim - 1] : "";
  if (a1.isWrite) {
    w.writeLoc = a1.loc;
    w.otherLoc = a2.loc;
    w.otherIsWrite = a2.isWrite;
  } else {
    w.writeLoc = a2.loc;
    w.otherLoc = a1.loc;
    w.otherIsWrite = false;
  }

  // concrete distance vector, when a small sample exists
  if (e.delta && P.dims == Q.dims) {
    AffineExpr diff = AffineExpr::var("d" + P.dims[c.dim - 1]);
    if (c.sign < 0)
      diff = -diff;
    IntSet crossing =
        e.delta->withConstraint(CmpKind::Ge, diff - AffineExpr(1));
    if (auto pt = samplePoint(crossing, opts)) {
      for (const auto &d : e.delta->space().dims)
        w.deltaSample[d] = (*pt)[d];
    }
  }
  return w;
}

constexpr size_t kMaxWitnesses = 8;

Verdict notAnalyzable(const Directive &region, std::string reason) {
  Verdict v;
  v.region = &region;
  v.loc = region.loc;
  v.outcome = Outcome::NotAnalyzable;
  v.regionKind = regionKindOf(region);
  v.reason = std::move(reason);
  return v;
}

// Bare statements of a plain parallel region (outside any child construct).
void collectBareAssigns(const Stmt &s, std::vector<const Stmt *> &out) {
  switch (s.kind) {
  case Stmt::Kind::Assign:
    out.push_back(&s);
    return;
  case Stmt::Kind::For:
    collectBareAssigns(*s.body[0], out);
    return;
  case Stmt::Kind::Block:
    for (const auto &c : s.body)
      collectBareAssigns(*c, out);
    return;
  case Stmt::Kind::Omp:
    return; // child construct: its own verdict unit
  }
}

} // namespace

bool isParallel(const RDG &g, size_t dim, const EmptinessOptions &opts) {
  return conflictsAtDim(g, dim, opts).empty();
}

namespace {

Verdict analyzeLoopRegion(const Directive &region, const Program &p,
                          const CheckOptions &opts,
                          const std::map<std::string, VarClause> &classes) {
  Verdict v;
  v.region = &region;
  v.loc = region.loc;
  v.regionKind = regionKindOf(region);

  Scop scop;
  try {
    scop = constructScop(region, p, classes);
  } catch (const UnsupportedConstruct &e) {
    return notAnalyzable(region, e.what());
  } catch (const Error &e) {
    return notAnalyzable(region, e.what());
  }

  if (!scop.fullyAffine) {
    if (!opts.mayRefFallback)
      return notAnalyzable(region, scop.notAffineReason);
    Verdict m = mayRefCheck(region, scop);
    m.regionKind = regionKindOf(region);
    return m;
  }

  try {
    RDG rdg = computeDependences(scop, conflictEligible);
    EmptinessOptions eopts = raceEmptinessOptions(scop, opts);
    std::vector<RaceWitness> witnesses;
    for (size_t dim = 1; dim <= scop.parallelDims; ++dim)
      for (const DimConflict &c : conflictsAtDim(rdg, dim, eopts))
        witnesses.push_back(witnessFor(rdg, c, eopts));
    if (witnesses.empty()) {
      v.outcome = Outcome::RaceFree;
      return v;
    }
    std::sort(witnesses.begin(), witnesses.end());
    if (witnesses.size() > kMaxWitnesses)
      witnesses.resize(kMaxWitnesses);
    v.outcome = Outcome::RaceDetected;
    v.evidence = std::move(witnesses);
    return v;
  } catch (const DimensionLimit &e) {
    return notAnalyzable(region, e.what());
  } catch (const Error &e) {
    return notAnalyzable(region, e.what());
  }
}

} // namespace

Verdict isRaceFree(const Directive &region, const Program &p,
                   const CheckOptions &opts) {
  return analyzeLoopRegion(region, p, opts, classMapOf(region));
}

Verdict mayRefCheck(const Directive &region, const Scop &s) {
  Verdict v;
  v.region = &region;
  v.loc = region.loc;
  v.regionKind = regionKindOf(region);

  std::vector<RaceWitness> writes;
  for (const auto &st : s.stmts)
    for (const auto &a : st.accesses) {
      if (!conflictEligible(a) || !a.isWrite)
        continue;
      RaceWitness w;
      w.array = a.array;
      w.writeLoc = a.loc;
      w.otherLoc = a.loc;
      w.otherIsWrite = true;
      w.dimName = st.dims.empty() ? "" : st.dims[0];
      writes.push_back(std::move(w));
    }
  if (writes.empty()) {
    v.outcome = Outcome::RaceFree;
    v.notes.push_back("non-affine region: verified read-only on shared data");
    return v;
  }
  std::sort(writes.begin(), writes.end());
  if (writes.size() > kMaxWitnesses)
    writes.resize(kMaxWitnesses);
  v.outcome = Outcome::RaceDetected;
  v.evidence = std::move(writes);
  v.notes.push_back("conservative may-ref result on a non-affine region "
                    "(may be a false positive)");
  return v;
}

namespace {

bool isLoopChainRoot(const Directive &d) {
  if (d.isLoopDirective())
    return true;
  if (d.dtype != Dtype::Parallel)
    return false;
  // combined parallel + loop sharing the same statement
  return !d.children.empty() && d.children[0]->isLoopDirective() &&
         d.children[0]->body == d.body;
}

void verdictsFor(const Directive &d, const Program &p,
                 const CheckOptions &opts,
                 const std::map<std::string, VarClause> &classes,
                 std::vector<Verdict> &out) {
  switch (d.dtype) {
  case Dtype::ThreadPrivate:
    return; // declarative, no verdict
  case Dtype::Unknown:
    out.push_back(notAnalyzable(d, "unsupported: " + d.unknownName));
    return;
  case Dtype::Single:
  case Dtype::Master:
  case Dtype::Critical:
  case Dtype::Atomic:
  case Dtype::Ordered:
    out.push_back(notAnalyzable(d, "unsupported: " + dtypeKeyword(d.dtype)));
    return;
  case Dtype::Barrier:
    if (!d.implicit)
      out.push_back(notAnalyzable(d, "unsupported: barrier"));
    return;
  default:
    break;
  }

  if (isLoopChainRoot(d)) {
    out.push_back(analyzeLoopRegion(d, p, opts, classes));
    return;
  }

  // plain parallel region: verdicts come from its component constructs
  size_t before = out.size();
  for (const auto &c : d.children)
    verdictsFor(*c, p, opts, classes, out);

  // replicated (non-worksharing) statements execute on every thread: any
  // eligible write is a write-write race between threads
  std::vector<const Stmt *> bare;
  if (d.body)
    collectBareAssigns(*d.body, bare);
  if (!bare.empty()) {
    Scop scop;
    bool haveScop = false;
    try {
      scop = constructScop(d, p, classes);
      haveScop = true;
    } catch (const Error &) {
      haveScop = false;
    }
    Verdict v;
    v.region = &d;
    v.loc = d.loc;
    v.regionKind = regionKindOf(d);
    std::vector<RaceWitness> ws;
    if (haveScop) {
      for (const auto &st : scop.stmts) {
        if (std::find(bare.begin(), bare.end(), st.stmt) == bare.end())
          continue;
        for (const auto &a : st.accesses)
          if (a.isWrite && conflictEligible(a)) {
            RaceWitness w;
            w.array = a.array;
            w.writeLoc = a.loc;
            w.otherLoc = a.loc;
            w.otherIsWrite = true;
            ws.push_back(std::move(w));
          }
      }
    } else {
      // cannot model the body (contains parse-only constructs): the bare
      // statements were still replicated, check their targets by name
      for (const Stmt *s : bare) {
        const Expr &lhs = *s->lhs;
        auto it = classes.find(lhs.name);
        Access fake;
        fake.array = lhs.name;
        fake.isWrite = true;
        if (it != classes.end()) {
          fake.varClass = it->second.vtype;
          fake.reductionOp = it->second.reductionOp;
        }
        if (conflictEligible(fake)) {
          RaceWitness w;
          w.array = lhs.name;
          w.writeLoc = lhs.loc;
          w.otherLoc = lhs.loc;
          w.otherIsWrite = true;
          ws.push_back(std::move(w));
        }
      }
    }
    std::sort(ws.begin(), ws.end());
    if (ws.size() > kMaxWitnesses)
      ws.resize(kMaxWitnesses);
    if (!ws.empty()) {
      v.outcome = Outcome::RaceDetected;
      v.evidence = std::move(ws);
      v.notes.push_back("statements outside worksharing constructs execute "
                        "on every thread");
    } else {
      v.outcome = Outcome::RaceFree;
    }
    out.push_back(std::move(v));
  } else if (out.size() == before) {
    // empty parallel region: nothing can race
    Verdict v;
    v.region = &d;
    v.loc = d.loc;
    v.regionKind = regionKindOf(d);
    v.outcome = Outcome::RaceFree;
    out.push_back(std::move(v));
  }

  // a nowait worksharing loop followed by other constructs: ordering across
  // constructs is not modeled, a race across them would be missed
  bool sawNowait = false;
  for (const auto &c : d.children) {
    if (c->implicit)
      continue;
    if (sawNowait) {
      if (before < out.size())
        out[before].notes.push_back(
            "nowait ahead of later constructs: dependences across "
            "constructs are not tracked (possible missed race)");
      break;
    }
    if (c->isLoopDirective() && c->nowait)
      sawNowait = true;
  }
}

} // namespace

std::vector<Verdict> checkProgram(const Program &p, const CheckOptions &opts) {
  std::vector<Verdict> out;
  auto forest = extractDirectives(p);
  for (const auto &d : forest)
    verdictsFor(*d, p, opts, classMapOf(*d), out);
  // stable source order
  std::stable_sort(out.begin(), out.end(),
                   [](const Verdict &a, const Verdict &b) {
                     return a.loc.line < b.loc.line;
                   });
  return out;
}

std::string formatVerdict(const Verdict &v, const std::string &file) {
  std::ostringstream os;
  os << file << ":" << v.loc.line << ": " << outcomeName(v.outcome) << ": "
     << v.regionKind;
  if (v.outcome == Outcome::RaceDetected) {
    for (const auto &w : v.evidence) {
      os << " [witness: " << w.array << " write@" << w.writeLoc.line << " ~ "
         << (w.otherIsWrite ? "write" : "read") << "@" << w.otherLoc.line;
      if (!w.dimName.empty())
        os << ", dim " << w.dimName;
      if (!w.deltaSample.empty()) {
        os << ", delta (";
        bool first = true;
        for (const auto &[n, val] : w.deltaSample) {
          os << (first ? "" : ", ") << val.str();
          first = false;
        }
        os << ")";
      }
      os << "]";
    }
  } else if (v.outcome == Outcome::NotAnalyzable && !v.reason.empty()) {
    os << " [reason: " << v.reason << "]";
  }
  return os.str();
}

} // namespace polyrace
