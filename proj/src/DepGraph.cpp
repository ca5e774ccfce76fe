//===-- DepGraph.cpp - Dependence computation --------------------------------===//

#include "polyrace/DepGraph.h"

#include <sstream>

namespace polyrace {

bool conflictEligible(const Access &a) {
  if (a.inOrderedBlock)
    return false; // serialized in iteration order by the runtime
  switch (a.varClass) {
  case Vtype::Private:
  case Vtype::FirstPrivate:
  case Vtype::LastPrivate:
  case Vtype::ThreadPrivate:
    return false;
  case Vtype::Reduction:
    return !a.reductionUpdate; // stray accesses to a reduction var conflict
  case Vtype::Shared:
    return true;
  }
  return true;
}

namespace {

AffineExpr schedExpr(const ScopStmt &st, size_t k,
                     const std::vector<std::string> &names) {
  if (k >= st.schedule.size())
    return AffineExpr(0); // padding
  const SchedEntry &e = st.schedule[k];
  if (e.isDim)
    return AffineExpr::var(names[e.dim]);
  return AffineExpr(Int(e.seq));
}

// Lexicographic-precedence pieces over padded schedules: each piece is a
// conjunction of (Eq/Ge, expr) constraints over the pair space.
struct LexPiece {
  std::vector<std::pair<CmpKind, AffineExpr>> cons;
};

std::vector<LexPiece> lexPrecedes(const ScopStmt &P, const ScopStmt &Q,
                                  const std::vector<std::string> &pNames,
                                  const std::vector<std::string> &qNames) {
  std::vector<LexPiece> pieces;
  LexPiece eqs;
  size_t maxLen = std::max(P.schedule.size(), Q.schedule.size());
  for (size_t k = 0; k < maxLen; ++k) {
    AffineExpr a = schedExpr(P, k, pNames);
    AffineExpr b = schedExpr(Q, k, qNames);
    AffineExpr diff = b - a; // want diff > 0 for "less at k"
    if (diff.isConstant()) {
      if (diff.constant > 0) {
        pieces.push_back(eqs); // constants decide; equality impossible deeper
        return pieces;
      }
      if (diff.constant < 0)
        return pieces; // a > b: neither less nor equal
      continue;        // equal constants: nothing to record
    }
    LexPiece less = eqs;
    less.cons.push_back({CmpKind::Ge, diff - AffineExpr(1)});
    pieces.push_back(std::move(less));
    eqs.cons.push_back({CmpKind::Eq, diff});
  }
  return pieces;
}

} // namespace

bool stmtWithin(const Stmt *root, const Stmt *s) {
  if (!root)
    return false;
  if (root == s)
    return true;
  for (const auto &c : root->body)
    if (stmtWithin(c.get(), s))
      return true;
  return false;
}

RDG computeDependences(const Scop &s, const EligiblePred &eligible) {
  if (!s.fullyAffine)
    throw NotAffineError("dependence analysis requires a fully affine region" +
                         (s.notAffineReason.empty()
                              ? std::string()
                              : ": " + s.notAffineReason));
  RDG g;
  g.scop = &s;

  EmptinessOptions floors;
  for (const auto &p : s.program->params)
    floors.paramFloors[p] = 2; // loop extents of at least 2

  for (size_t pi = 0; pi < s.stmts.size(); ++pi) {
    const ScopStmt &P = s.stmts[pi];
    for (size_t qi = 0; qi < s.stmts.size(); ++qi) {
      const ScopStmt &Q = s.stmts[qi];

      // pair space: source dims keep their names, target dims primed
      std::vector<std::string> pNames = P.dims;
      std::vector<std::string> qNames;
      for (const auto &d : Q.dims)
        qNames.push_back(d + "'");
      Space sp;
      sp.dims = pNames;
      sp.dims.insert(sp.dims.end(), qNames.begin(), qNames.end());
      sp.params = s.params;

      auto lexPieces = lexPrecedes(P, Q, pNames, qNames);
      if (lexPieces.empty())
        continue;

      for (size_t ai = 0; ai < P.accesses.size(); ++ai) {
        const Access &a1 = P.accesses[ai];
        if (!eligible(a1))
          continue;
        for (size_t bi = 0; bi < Q.accesses.size(); ++bi) {
          const Access &a2 = Q.accesses[bi];
          if (!eligible(a2))
            continue;
          if (a1.array != a2.array || (!a1.isWrite && !a2.isWrite))
            continue;

          IntSet rel(sp);
          auto addPiecePair = [&](const Piece &dp, const Piece &dq,
                                  const LexPiece &lex) {
            Piece piece;
            // domain of P over source columns
            for (const Constraint &c : dp) {
              Constraint nc;
              nc.kind = c.kind;
              nc.cst = c.cst;
              nc.coeff.assign(sp.size(), Int(0));
              for (size_t i = 0; i < c.coeff.size(); ++i)
                if (c.coeff[i] != 0) {
                  const std::string &n = P.domain.space().name(i);
                  auto idx = sp.indexOf(i < P.dims.size() ? n : n);
                  nc.coeff[*idx] += c.coeff[i];
                }
              piece.push_back(std::move(nc));
            }
            // domain of Q over primed columns
            for (const Constraint &c : dq) {
              Constraint nc;
              nc.kind = c.kind;
              nc.cst = c.cst;
              nc.coeff.assign(sp.size(), Int(0));
              for (size_t i = 0; i < c.coeff.size(); ++i)
                if (c.coeff[i] != 0) {
                  std::string n = Q.domain.space().name(i);
                  if (i < Q.dims.size())
                    n += "'";
                  nc.coeff[*sp.indexOf(n)] += c.coeff[i];
                }
              piece.push_back(std::move(nc));
            }
            // same cell
            for (size_t r = 0; r < a1.subscripts.size(); ++r) {
              AffineExpr sub2;
              for (const auto &[n, c] : a2.subscripts[r].coeffs) {
                bool isDim = std::find(Q.dims.begin(), Q.dims.end(), n) !=
                             Q.dims.end();
                sub2.coeffs[isDim ? n + "'" : n] = c;
              }
              sub2.constant = a2.subscripts[r].constant;
              piece.push_back(
                  rel.makeConstraint(CmpKind::Eq, a1.subscripts[r] - sub2));
            }
            // schedule precedence
            for (const auto &[k, e] : lex.cons)
              piece.push_back(rel.makeConstraint(k, e));
            rel.addPiece(std::move(piece));
          };

          for (const Piece &dp : P.domain.pieces())
            for (const Piece &dq : Q.domain.pieces())
              for (const LexPiece &lex : lexPieces)
                addPiecePair(dp, dq, lex);

          if (isEmptyInt(rel, floors))
            continue;

          Dependence d;
          d.kind = a1.isWrite ? (a2.isWrite ? DepKind::WAW : DepKind::RAW)
                              : DepKind::WAR;
          d.srcStmt = pi;
          d.dstStmt = qi;
          d.srcAccess = ai;
          d.dstAccess = bi;
          IntRel r(rel, P.dims.size());
          r.setTupleNames(P.id, Q.id);
          d.rel = r;
          if (P.dims.size() == Q.dims.size() && !P.dims.empty()) {
            try {
              d.delta = deltas(d.rel);
            } catch (const DimensionLimit &) {
              d.delta = std::nullopt; // diagnostic only
            }
          }
          g.edges.push_back(std::move(d));
        }
      }
    }
  }
  return g;
}

RDG restrictToLoop(const RDG &g, const Directive &loop) {
  RDG out;
  out.scop = g.scop;
  for (const auto &e : g.edges) {
    const Stmt *src = g.scop->stmts[e.srcStmt].stmt;
    const Stmt *dst = g.scop->stmts[e.dstStmt].stmt;
    if (stmtWithin(loop.body, src) && stmtWithin(loop.body, dst))
      out.edges.push_back(e);
  }
  return out;
}

std::string dumpRDG(const RDG &g) {
  std::ostringstream os;
  for (const auto &e : g.edges) {
    const ScopStmt &P = g.scop->stmts[e.srcStmt];
    const Access &a1 = P.accesses[e.srcAccess];
    os << (e.kind == DepKind::RAW   ? "RAW"
           : e.kind == DepKind::WAR ? "WAR"
                                    : "WAW")
       << " on " << a1.array << ": " << e.rel.str() << "\n";
    if (e.delta)
      os << "  delta: " << e.delta->str() << "\n";
  }
  if (g.edges.empty())
    os << "(no dependences)\n";
  return os.str();
}

} // namespace polyrace
