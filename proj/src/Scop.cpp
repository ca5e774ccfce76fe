//===-- Scop.cpp - Polyhedral model construction ----------------------------===//

#include "polyrace/Scop.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace polyrace {

namespace {

// Disjunction of conjunctions of "expr >= 0" constraints.
using ConstraintDNF = std::vector<std::vector<AffineExpr>>;

ConstraintDNF dnfCross(const ConstraintDNF &a, const ConstraintDNF &b) {
  ConstraintDNF out;
  for (const auto &pa : a)
    for (const auto &pb : b) {
      std::vector<AffineExpr> p = pa;
      p.insert(p.end(), pb.begin(), pb.end());
      out.push_back(std::move(p));
    }
  return out;
}

ConstraintDNF dnfUnion(ConstraintDNF a, const ConstraintDNF &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class ScopBuilder {
public:
  ScopBuilder(const Directive &region, const Program &p,
              const std::map<std::string, VarClause> &classes)
      : region_(region), prog_(p), classes_(classes) {
    scop_.region = &region;
    scop_.program = &p;
    scop_.classes = classes;
    scop_.parallelDims =
        static_cast<size_t>(std::max<long long>(1, region.collapse));
  }

  Scop build() {
    const Stmt *body = region_.body;
    if (!body)
      throw UnsupportedConstruct("directive has no associated statement",
                                 region_.loc);
    collectParams(*body);
    if (region_.isLoopDirective()) {
      if (body->kind != Stmt::Kind::For)
        throw UnsupportedConstruct("loop directive without a loop",
                                   region_.loc);
      checkCollapseNest(*body, scop_.parallelDims);
    }
    domain_.push_back({}); // universe piece
    walk(*body, /*ordered=*/false);
    trimParams();
    return std::move(scop_);
  }

private:
  const Directive &region_;
  const Program &prog_;
  const std::map<std::string, VarClause> &classes_;
  Scop scop_;

  std::vector<std::string> dims_;            // loop vars, outermost first
  std::map<std::string, AffineExpr> dimValue_; // dim -> value expression
  ConstraintDNF domain_;                     // constraints so far
  std::vector<long long> seqCounters_ = {0}; // per nest level
  int stmtCounter_ = 0;

  //===--- parameters ---===//

  void collectParams(const Stmt &regionBody) {
    // program parameters plus loop variables of loops enclosing the region
    std::set<std::string> declared(prog_.params.begin(), prog_.params.end());
    std::vector<std::string> outer;
    findEnclosing(prog_.body, &regionBody, outer);
    for (const auto &p : prog_.params)
      scop_.params.push_back(p);
    for (const auto &v : outer)
      scop_.params.push_back(v);
  }

  // DFS for the path of loop variables enclosing `target`.
  bool findEnclosing(const std::vector<StmtPtr> &body, const Stmt *target,
                     std::vector<std::string> &path) {
    for (const auto &s : body)
      if (findEnclosing(*s, target, path))
        return true;
    return false;
  }
  bool findEnclosing(const Stmt &s, const Stmt *target,
                     std::vector<std::string> &path) {
    if (&s == target)
      return true;
    switch (s.kind) {
    case Stmt::Kind::For:
      path.push_back(s.loopVar);
      if (findEnclosing(*s.body[0], target, path))
        return true;
      path.pop_back();
      return false;
    case Stmt::Kind::Block:
    case Stmt::Kind::Omp:
      for (const auto &c : s.body)
        if (findEnclosing(*c, target, path))
          return true;
      return false;
    case Stmt::Kind::Assign:
      return false;
    }
    return false;
  }

  void trimParams() {
    std::set<std::string> used;
    for (const auto &st : scop_.stmts) {
      for (const auto &piece : st.domain.pieces())
        for (const auto &c : piece)
          for (size_t i = 0; i < c.coeff.size(); ++i)
            if (c.coeff[i] != 0)
              used.insert(st.domain.space().name(i));
      for (const auto &a : st.accesses)
        for (const auto &sub : a.subscripts)
          for (const auto &[n, v] : sub.coeffs)
            used.insert(n);
    }
    std::vector<std::string> trimmed;
    for (const auto &p : scop_.params)
      if (used.count(p))
        trimmed.push_back(p);
    if (trimmed == scop_.params)
      return;
    scop_.params = trimmed;
    for (auto &st : scop_.stmts) {
      Space sp;
      sp.dims = st.dims;
      sp.params = scop_.params;
      IntSet dom(sp);
      for (const auto &piece : st.domain.pieces()) {
        Piece np;
        for (const auto &c : piece) {
          Constraint nc;
          nc.kind = c.kind;
          nc.cst = c.cst;
          nc.coeff.assign(sp.size(), Int(0));
          for (size_t i = 0; i < c.coeff.size(); ++i)
            if (c.coeff[i] != 0) {
              auto idx = sp.indexOf(st.domain.space().name(i));
              nc.coeff[*idx] = c.coeff[i];
            }
          np.push_back(std::move(nc));
        }
        dom.addPiece(std::move(np));
      }
      dom.setTupleName(st.id);
      st.domain = dom;
    }
  }

  //===--- affine conversion ---===//

  std::optional<AffineExpr> toAffine(const Expr &e) const {
    switch (e.kind) {
    case Expr::Kind::IntLit:
      return AffineExpr(Int(e.intValue));
    case Expr::Kind::FloatLit:
      return std::nullopt;
    case Expr::Kind::Var: {
      auto dv = dimValue_.find(e.name);
      if (dv != dimValue_.end())
        return dv->second;
      if (std::find(scop_.params.begin(), scop_.params.end(), e.name) !=
          scop_.params.end())
        return AffineExpr::var(e.name);
      return std::nullopt; // scalar memory read: not affine
    }
    case Expr::Kind::ArrayRef:
    case Expr::Kind::MinMax:
      return std::nullopt;
    case Expr::Kind::Neg: {
      auto a = toAffine(*e.args[0]);
      if (!a)
        return std::nullopt;
      return -*a;
    }
    case Expr::Kind::Binary: {
      if (e.op == BinOp::Div || e.op == BinOp::Mod)
        return std::nullopt;
      auto l = toAffine(*e.args[0]);
      auto r = toAffine(*e.args[1]);
      if (!l || !r)
        return std::nullopt;
      switch (e.op) {
      case BinOp::Add:
        return *l + *r;
      case BinOp::Sub:
        return *l - *r;
      case BinOp::Mul:
        if (l->isConstant())
          return *r * l->constant;
        if (r->isConstant())
          return *l * r->constant;
        return std::nullopt;
      default:
        return std::nullopt;
      }
    }
    }
    return std::nullopt;
  }

  // x <= E + adj, expanding min (conjunctive) / max (disjunctive).
  std::optional<ConstraintDNF> upperDNF(const AffineExpr &x, const Expr &E,
                                        const Int &adj) const {
    if (E.kind == Expr::Kind::MinMax) {
      auto a = upperDNF(x, *E.args[0], adj);
      auto b = upperDNF(x, *E.args[1], adj);
      if (!a || !b)
        return std::nullopt;
      return E.isMin ? dnfCross(*a, *b) : dnfUnion(*a, *b);
    }
    auto e = toAffine(E);
    if (!e)
      return std::nullopt;
    return ConstraintDNF{{*e + AffineExpr(adj) - x}};
  }

  // x >= E + adj, expanding max (conjunctive) / min (disjunctive).
  std::optional<ConstraintDNF> lowerDNF(const AffineExpr &x, const Expr &E,
                                        const Int &adj) const {
    if (E.kind == Expr::Kind::MinMax) {
      auto a = lowerDNF(x, *E.args[0], adj);
      auto b = lowerDNF(x, *E.args[1], adj);
      if (!a || !b)
        return std::nullopt;
      return E.isMin ? dnfUnion(*a, *b) : dnfCross(*a, *b);
    }
    auto e = toAffine(E);
    if (!e)
      return std::nullopt;
    return ConstraintDNF{{x - *e - AffineExpr(adj)}};
  }

  //===--- the nest walk ---===//

  void checkCollapseNest(const Stmt &loop, size_t depth) {
    const Stmt *cur = &loop;
    for (size_t d = 1; d < depth; ++d) {
      const Stmt *body = cur->loopBody();
      // allow a single-statement block between collapsed loops
      while (body && body->kind == Stmt::Kind::Block && body->body.size() == 1)
        body = body->body[0].get();
      if (!body || body->kind != Stmt::Kind::For)
        throw UnsupportedConstruct(
            "collapse(" + std::to_string(region_.collapse) +
                ") requires perfectly nested loops",
            region_.loc);
      cur = body;
    }
  }

  void walk(const Stmt &s, bool ordered) {
    switch (s.kind) {
    case Stmt::Kind::Block:
      for (const auto &c : s.body)
        walk(*c, ordered);
      return;
    case Stmt::Kind::For:
      walkLoop(s, ordered);
      return;
    case Stmt::Kind::Assign:
      addStatement(s, ordered);
      return;
    case Stmt::Kind::Omp: {
      const OmpPragma &p = s.pragma;
      if (p.isUnknown())
        throw UnsupportedConstruct("unsupported: " + p.unknownName, p.loc);
      for (Construct c : p.parts) {
        switch (c) {
        case Construct::Single:
        case Construct::Master:
        case Construct::Critical:
        case Construct::Atomic:
        case Construct::Barrier:
          throw UnsupportedConstruct(
              "unsupported: " + std::string(c == Construct::Single ? "single"
                                            : c == Construct::Master
                                                ? "master"
                                            : c == Construct::Critical
                                                ? "critical"
                                            : c == Construct::Atomic
                                                ? "atomic"
                                                : "barrier"),
              p.loc);
        case Construct::ThreadPrivate:
          return; // declarative
        case Construct::Ordered:
          if (const Stmt *b = s.loopBody())
            walk(*b, /*ordered=*/true);
          return;
        default:
          break; // nested loop/parallel directives are structure only
        }
      }
      if (const Stmt *b = s.loopBody())
        walk(*b, ordered);
      return;
    }
    }
  }

  void walkLoop(const Stmt &loop, bool ordered) {
    // take one sequence slot at the current level
    long long mySeq = seqCounters_.back()++;
    loopSeq_.push_back(mySeq);

    const std::string &v = loop.loopVar;
    dims_.push_back(v);

    long long step = loop.step;
    bool forward = step > 0;
    AffineExpr dim = AffineExpr::var(v);
    std::optional<AffineExpr> init = toAffine(*loop.init);

    AffineExpr value = dim; // value of the induction variable
    bool affineBounds = true;
    ConstraintDNF loopCons;

    if ((step == 1 || step == -1) || init) {
      if (step == 1) {
        // init may contain min/max: expand as a lower bound
        auto lo = lowerDNF(dim, *loop.init, 0);
        std::optional<ConstraintDNF> hi;
        switch (loop.cmp) {
        case CmpOp::LT:
          hi = upperDNF(dim, *loop.bound, -1);
          break;
        case CmpOp::LE:
          hi = upperDNF(dim, *loop.bound, 0);
          break;
        default:
          affineBounds = false; // upward loop with > or >= never advances
        }
        if (!lo || !hi)
          affineBounds = false;
        else
          loopCons = dnfCross(*lo, *hi);
      } else if (step == -1) {
        auto hi = upperDNF(dim, *loop.init, 0);
        std::optional<ConstraintDNF> lo;
        switch (loop.cmp) {
        case CmpOp::GT:
          lo = lowerDNF(dim, *loop.bound, 1);
          break;
        case CmpOp::GE:
          lo = lowerDNF(dim, *loop.bound, 0);
          break;
        default:
          affineBounds = false;
        }
        if (!lo || !hi)
          affineBounds = false;
        else
          loopCons = dnfCross(*lo, *hi);
      } else {
        // strided: substitute value = init + step * counter, counter >= 0
        if (!init) {
          affineBounds = false;
        } else {
          value = *init + dim * Int(step);
          std::vector<AffineExpr> base = {dim}; // counter >= 0
          std::optional<ConstraintDNF> limit;
          if (forward) {
            switch (loop.cmp) {
            case CmpOp::LT:
              limit = upperDNF(value, *loop.bound, -1);
              break;
            case CmpOp::LE:
              limit = upperDNF(value, *loop.bound, 0);
              break;
            default:
              affineBounds = false;
            }
          } else {
            switch (loop.cmp) {
            case CmpOp::GT:
              limit = lowerDNF(value, *loop.bound, 1);
              break;
            case CmpOp::GE:
              limit = lowerDNF(value, *loop.bound, 0);
              break;
            default:
              affineBounds = false;
            }
          }
          if (!limit)
            affineBounds = false;
          else
            loopCons = dnfCross(ConstraintDNF{base}, *limit);
        }
      }
    } else {
      affineBounds = false;
    }

    if (!affineBounds) {
      scop_.fullyAffine = false;
      if (scop_.notAffineReason.empty())
        scop_.notAffineReason = "non-affine loop bounds at line " +
                                std::to_string(loop.loc.line);
      // keep only the trivially true domain for this dim
      loopCons = ConstraintDNF{{}};
      value = dim;
    }

    ConstraintDNF savedDomain = domain_;
    auto savedValue = dimValue_;
    domain_ = dnfCross(domain_, loopCons);
    dimValue_[v] = value;

    seqCounters_.push_back(0);
    walk(*loop.body[0], ordered);
    seqCounters_.pop_back();

    loopSeq_.pop_back();
    dims_.pop_back();
    domain_ = std::move(savedDomain);
    dimValue_ = std::move(savedValue);
  }

  //===--- statements and accesses ---===//

  Vtype classOf(const std::string &name, std::string *redOp) const {
    auto it = classes_.find(name);
    if (it == classes_.end())
      return Vtype::Shared;
    if (redOp)
      *redOp = it->second.reductionOp;
    return it->second.vtype;
  }

  void addAccess(ScopStmt &st, const std::string &name, bool isWrite,
                 const std::vector<ExprPtr> *subs, bool ordered,
                 SourceLoc loc) {
    Access a;
    a.array = name;
    a.isWrite = isWrite;
    a.inOrderedBlock = ordered;
    a.loc = loc;
    std::string redOp;
    a.varClass = classOf(name, &redOp);
    a.reductionOp = redOp;
    if (subs) {
      a.rank = subs->size();
      for (const auto &sub : *subs) {
        auto aff = toAffine(*sub);
        if (!aff) {
          a.affine = false;
          break;
        }
        a.subscripts.push_back(*aff);
      }
      if (!a.affine) {
        a.subscripts.clear();
        scop_.fullyAffine = false;
        if (scop_.notAffineReason.empty())
          scop_.notAffineReason = "non-affine subscript on '" + name +
                                  "' at line " + std::to_string(loc.line);
      }
    }
    st.accesses.push_back(std::move(a));
  }

  void collectReads(ScopStmt &st, const Expr &e, bool ordered) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::FloatLit:
      return;
    case Expr::Kind::Var: {
      if (dimValue_.count(e.name))
        return; // induction variable: an index, not memory
      if (std::find(scop_.params.begin(), scop_.params.end(), e.name) !=
          scop_.params.end())
        return; // symbolic parameter
      addAccess(st, e.name, /*isWrite=*/false, nullptr, ordered, e.loc);
      return;
    }
    case Expr::Kind::ArrayRef:
      addAccess(st, e.name, /*isWrite=*/false, &e.args, ordered, e.loc);
      for (const auto &s : e.args)
        collectReads(st, *s, ordered);
      return;
    default:
      for (const auto &a : e.args)
        collectReads(st, *a, ordered);
      return;
    }
  }

  // Does the assignment match the declared reduction update for `name`?
  bool matchesReduction(const Stmt &s, const std::string &name,
                        const std::string &op) const {
    auto exprUses = [&](const Expr &e, auto &&self) -> bool {
      if (e.kind == Expr::Kind::Var && e.name == name)
        return true;
      if (e.kind == Expr::Kind::ArrayRef && e.name == name)
        return true;
      for (const auto &a : e.args)
        if (self(*a, self))
          return true;
      return false;
    };
    if (s.assignOp != AssignOp::Assign) {
      // x += e / x -= e / x *= e
      const char *got = s.assignOp == AssignOp::AddAssign   ? "+"
                        : s.assignOp == AssignOp::SubAssign ? "-"
                                                            : "*";
      return op == got && !exprUses(*s.rhs, exprUses);
    }
    const Expr &r = *s.rhs;
    if (op == "max" || op == "min") {
      if (r.kind != Expr::Kind::MinMax ||
          (op == "min") != r.isMin)
        return false;
      const Expr &a0 = *r.args[0], &a1 = *r.args[1];
      if (a0.kind == Expr::Kind::Var && a0.name == name)
        return !exprUses(a1, exprUses);
      if (a1.kind == Expr::Kind::Var && a1.name == name)
        return !exprUses(a0, exprUses);
      return false;
    }
    if (r.kind != Expr::Kind::Binary)
      return false;
    const char *got = r.op == BinOp::Add   ? "+"
                      : r.op == BinOp::Sub ? "-"
                      : r.op == BinOp::Mul ? "*"
                                           : "?";
    if (op != got)
      return false;
    const Expr &a0 = *r.args[0], &a1 = *r.args[1];
    bool leftIsVar = a0.kind == Expr::Kind::Var && a0.name == name;
    bool rightIsVar = a1.kind == Expr::Kind::Var && a1.name == name;
    if (leftIsVar && !exprUses(a1, exprUses))
      return true;
    // subtraction only reduces as x = x - e
    if (r.op != BinOp::Sub && rightIsVar && !exprUses(a0, exprUses))
      return true;
    return false;
  }

  void addStatement(const Stmt &s, bool ordered) {
    long long mySeq = seqCounters_.back()++;

    ScopStmt st;
    st.id = "S" + std::to_string(stmtCounter_++);
    st.stmt = &s;
    st.dims = dims_;

    Space sp;
    sp.dims = dims_;
    sp.params = scop_.params;
    IntSet dom(sp);
    for (const auto &piece : domain_) {
      Piece p;
      for (const auto &e : piece)
        p.push_back(dom.makeConstraint(CmpKind::Ge, e));
      dom.addPiece(std::move(p));
    }
    dom.setTupleName(st.id);
    st.domain = std::move(dom);

    // schedule: [c0, d0, c1, d1, ..., c_depth] with this statement's
    // sequence number innermost
    for (size_t d = 0; d < dims_.size(); ++d) {
      st.schedule.push_back(SchedEntry::seqNo(loopSeq_[d]));
      st.schedule.push_back(SchedEntry::dimAt(d));
    }
    st.schedule.push_back(SchedEntry::seqNo(mySeq));

    // writes then reads
    const Expr &lhs = *s.lhs;
    bool compound = s.assignOp != AssignOp::Assign;
    if (lhs.kind == Expr::Kind::Var) {
      addAccess(st, lhs.name, /*isWrite=*/true, nullptr, ordered, lhs.loc);
      if (compound)
        addAccess(st, lhs.name, /*isWrite=*/false, nullptr, ordered, lhs.loc);
    } else {
      addAccess(st, lhs.name, /*isWrite=*/true, &lhs.args, ordered, lhs.loc);
      if (compound)
        addAccess(st, lhs.name, /*isWrite=*/false, &lhs.args, ordered,
                  lhs.loc);
      for (const auto &sub : lhs.args)
        collectReads(st, *sub, ordered);
    }
    collectReads(st, *s.rhs, ordered);

    // reduction-update marking
    std::string target = lhs.name;
    auto it = classes_.find(target);
    if (it != classes_.end() && it->second.vtype == Vtype::Reduction &&
        lhs.kind == Expr::Kind::Var &&
        matchesReduction(s, target, it->second.reductionOp)) {
      for (Access &a : st.accesses)
        if (a.array == target)
          a.reductionUpdate = true;
    }

    scop_.stmts.push_back(std::move(st));
  }

  // Sequence numbers of the enclosing loops, outermost first.
  std::vector<long long> loopSeq_;
};

} // namespace

Scop constructScop(const Directive &region, const Program &p,
                   const std::map<std::string, VarClause> &classes) {
  // descend through a combined parallel wrapper to its loop part
  const Directive *r = &region;
  while (!r->isLoopDirective() && r->children.size() >= 1 &&
         r->children[0]->isLoopDirective() && r->dtype == Dtype::Parallel &&
         r->children[0]->body == r->body)
    r = r->children[0].get();
  ScopBuilder b(*r, p, classes);
  return b.build();
}

std::vector<const Access *> markNonAffine(const Scop &s) {
  std::vector<const Access *> out;
  for (const auto &st : s.stmts)
    for (const auto &a : st.accesses)
      if (!a.affine)
        out.push_back(&a);
  return out;
}

std::string dumpScop(const Scop &s) {
  std::ostringstream os;
  for (const auto &st : s.stmts) {
    os << "Statement " << st.id << ":\n";
    os << "  Iteration Domain : " << st.domain.str() << "\n";
    os << "  Schedule : { " << st.id << "[";
    for (size_t i = 0; i < st.dims.size(); ++i)
      os << (i ? ", " : "") << st.dims[i];
    os << "] -> [";
    for (size_t i = 0; i < st.schedule.size(); ++i) {
      const SchedEntry &e = st.schedule[i];
      os << (i ? ", " : "");
      if (e.isDim)
        os << st.dims[e.dim];
      else
        os << e.seq;
    }
    os << "] }\n";
    for (const auto &a : st.accesses) {
      os << "  Access Map : { " << st.id << "[";
      for (size_t i = 0; i < st.dims.size(); ++i)
        os << (i ? ", " : "") << st.dims[i];
      os << "] -> " << a.array << "[";
      if (a.affine) {
        for (size_t i = 0; i < a.subscripts.size(); ++i)
          os << (i ? ", " : "") << a.subscripts[i].str();
      } else {
        os << "?";
      }
      os << "] } (" << (a.isWrite ? "write" : "read");
      if (!a.affine)
        os << ", non-affine";
      os << ")\n";
    }
  }
  if (!s.fullyAffine)
    os << "Region is not fully affine: " << s.notAffineReason << "\n";
  return os.str();
}

} // namespace polyrace
