//===-- AstPrinter.cpp - Source rendering and structural equality ----------===//

#include "polyrace/Ast.h"

#include <sstream>

namespace polyrace {

ExprPtr Expr::intLit(long long v, SourceLoc loc) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::IntLit;
  e->intValue = v;
  e->loc = loc;
  return e;
}

ExprPtr Expr::var(std::string n, SourceLoc loc) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Var;
  e->name = std::move(n);
  e->loc = loc;
  return e;
}

ExprPtr cloneExpr(const Expr &e) {
  auto c = std::make_unique<Expr>();
  c->kind = e.kind;
  c->loc = e.loc;
  c->intValue = e.intValue;
  c->floatText = e.floatText;
  c->name = e.name;
  c->op = e.op;
  c->isMin = e.isMin;
  for (const auto &a : e.args)
    c->args.push_back(cloneExpr(*a));
  return c;
}

bool structurallyEqual(const Expr &a, const Expr &b) {
  if (a.kind != b.kind || a.args.size() != b.args.size())
    return false;
  switch (a.kind) {
  case Expr::Kind::IntLit:
    if (a.intValue != b.intValue)
      return false;
    break;
  case Expr::Kind::FloatLit:
    if (a.floatText != b.floatText)
      return false;
    break;
  case Expr::Kind::Var:
  case Expr::Kind::ArrayRef:
    if (a.name != b.name)
      return false;
    break;
  case Expr::Kind::Binary:
    if (a.op != b.op)
      return false;
    break;
  case Expr::Kind::MinMax:
    if (a.isMin != b.isMin)
      return false;
    break;
  case Expr::Kind::Neg:
    break;
  }
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!structurallyEqual(*a.args[i], *b.args[i]))
      return false;
  return true;
}

namespace {

int precOf(const Expr &e) {
  switch (e.kind) {
  case Expr::Kind::Binary:
    return e.op == BinOp::Add || e.op == BinOp::Sub ? 1 : 2;
  case Expr::Kind::Neg:
    return 3;
  default:
    return 4;
  }
}

void printExpr(const Expr &e, std::ostream &os) {
  switch (e.kind) {
  case Expr::Kind::IntLit:
    os << e.intValue;
    return;
  case Expr::Kind::FloatLit:
    os << e.floatText;
    return;
  case Expr::Kind::Var:
    os << e.name;
    return;
  case Expr::Kind::ArrayRef:
    os << e.name;
    for (const auto &a : e.args) {
      os << "[";
      printExpr(*a, os);
      os << "]";
    }
    return;
  case Expr::Kind::Neg: {
    os << "-";
    bool paren = precOf(*e.args[0]) < precOf(e);
    if (paren)
      os << "(";
    printExpr(*e.args[0], os);
    if (paren)
      os << ")";
    return;
  }
  case Expr::Kind::Binary: {
    int p = precOf(e);
    const Expr &l = *e.args[0];
    const Expr &r = *e.args[1];
    bool lp = precOf(l) < p;
    bool rp = precOf(r) <= p; // grammar is left-associative
    if (lp)
      os << "(";
    printExpr(l, os);
    if (lp)
      os << ")";
    switch (e.op) {
    case BinOp::Add:
      os << " + ";
      break;
    case BinOp::Sub:
      os << " - ";
      break;
    case BinOp::Mul:
      os << " * ";
      break;
    case BinOp::Div:
      os << " / ";
      break;
    case BinOp::Mod:
      os << " % ";
      break;
    }
    if (rp)
      os << "(";
    printExpr(r, os);
    if (rp)
      os << ")";
    return;
  }
  case Expr::Kind::MinMax:
    os << (e.isMin ? "min(" : "max(");
    printExpr(*e.args[0], os);
    os << ", ";
    printExpr(*e.args[1], os);
    os << ")";
    return;
  }
}

const char *cmpText(CmpOp c) {
  switch (c) {
  case CmpOp::LT:
    return "<";
  case CmpOp::LE:
    return "<=";
  case CmpOp::GT:
    return ">";
  case CmpOp::GE:
    return ">=";
  }
  return "<";
}

const char *elemText(ElemKind k) {
  switch (k) {
  case ElemKind::Int:
    return "int";
  case ElemKind::Float:
    return "float";
  case ElemKind::Double:
    return "double";
  }
  return "int";
}

std::string vtypeClause(Vtype v) {
  switch (v) {
  case Vtype::Private:
    return "private";
  case Vtype::FirstPrivate:
    return "firstprivate";
  case Vtype::Shared:
    return "shared";
  case Vtype::LastPrivate:
    return "lastprivate";
  case Vtype::Reduction:
    return "reduction";
  case Vtype::ThreadPrivate:
    return "threadprivate";
  }
  return "?";
}

std::string pragmaToString(const OmpPragma &p) {
  if (p.isUnknown())
    return p.rawText; // cannot reconstruct; keep verbatim
  std::ostringstream os;
  os << "#pragma omp ";
  std::string sep;
  for (Construct c : p.parts) {
    os << sep;
    sep = " ";
    switch (c) {
    case Construct::Parallel:
      os << "parallel";
      break;
    case Construct::For:
      os << "for";
      break;
    case Construct::Simd:
      os << "simd";
      break;
    case Construct::Distribute:
      os << "distribute";
      break;
    case Construct::Single:
      os << "single";
      break;
    case Construct::Master:
      os << "master";
      break;
    case Construct::Critical:
      os << "critical";
      break;
    case Construct::Ordered:
      os << "ordered";
      break;
    case Construct::Barrier:
      os << "barrier";
      break;
    case Construct::ThreadPrivate:
      os << "threadprivate";
      break;
    case Construct::Atomic:
      os << "atomic";
      break;
    case Construct::Unknown:
      break;
    }
  }
  if (!p.threadPrivateVars.empty()) {
    os << "(";
    for (size_t i = 0; i < p.threadPrivateVars.size(); ++i)
      os << (i ? ", " : "") << p.threadPrivateVars[i];
    os << ")";
  }
  // group variable clauses in their original order, adjacent same-kind runs
  for (size_t i = 0; i < p.vars.size();) {
    size_t j = i;
    while (j < p.vars.size() && p.vars[j].vtype == p.vars[i].vtype &&
           p.vars[j].reductionOp == p.vars[i].reductionOp)
      ++j;
    os << " " << vtypeClause(p.vars[i].vtype) << "(";
    if (p.vars[i].vtype == Vtype::Reduction)
      os << p.vars[i].reductionOp << ": ";
    for (size_t k = i; k < j; ++k)
      os << (k > i ? ", " : "") << p.vars[k].name;
    os << ")";
    i = j;
  }
  if (p.sched) {
    os << " schedule(";
    if (p.sched->modifier)
      os << (*p.sched->modifier == SchedModifier::Monotonic ? "monotonic: "
                                                            : "nonmonotonic: ");
    switch (p.sched->stype) {
    case SchedKind::Static:
      os << "static";
      break;
    case SchedKind::Dynamic:
      os << "dynamic";
      break;
    case SchedKind::Guided:
      os << "guided";
      break;
    case SchedKind::Auto:
      os << "auto";
      break;
    case SchedKind::Runtime:
      os << "runtime";
      break;
    }
    if (p.sched->chunk)
      os << ", " << *p.sched->chunk;
    os << ")";
  }
  if (p.collapse > 1)
    os << " collapse(" << p.collapse << ")";
  if (p.orderedClause)
    os << " ordered";
  if (p.nowait)
    os << " nowait";
  if (p.numThreads)
    os << " num_threads(" << *p.numThreads << ")";
  return os.str();
}

void printStmt(const Stmt &s, std::ostream &os, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  switch (s.kind) {
  case Stmt::Kind::Assign: {
    os << pad;
    printExpr(*s.lhs, os);
    switch (s.assignOp) {
    case AssignOp::Assign:
      os << " = ";
      break;
    case AssignOp::AddAssign:
      os << " += ";
      break;
    case AssignOp::SubAssign:
      os << " -= ";
      break;
    case AssignOp::MulAssign:
      os << " *= ";
      break;
    }
    printExpr(*s.rhs, os);
    os << ";\n";
    return;
  }
  case Stmt::Kind::For: {
    os << pad << "for (";
    if (s.declaresVar)
      os << "int ";
    os << s.loopVar << " = ";
    printExpr(*s.init, os);
    os << "; " << s.loopVar << " " << cmpText(s.cmp) << " ";
    printExpr(*s.bound, os);
    os << "; " << s.loopVar;
    if (s.step == 1)
      os << "++";
    else if (s.step == -1)
      os << "--";
    else if (s.step > 0)
      os << " += " << s.step;
    else
      os << " -= " << -s.step;
    os << ")\n";
    printStmt(*s.body[0], os, indent + 1);
    return;
  }
  case Stmt::Kind::Block: {
    if (s.body.empty()) {
      os << pad << ";\n";
      return;
    }
    os << pad << "{\n";
    for (const auto &c : s.body)
      printStmt(*c, os, indent + 1);
    os << pad << "}\n";
    return;
  }
  case Stmt::Kind::Omp: {
    os << pragmaToString(s.pragma) << "\n";
    if (!s.body.empty())
      printStmt(*s.body[0], os, indent);
    return;
  }
  }
}

} // namespace

std::string exprToString(const Expr &e) {
  std::ostringstream os;
  printExpr(e, os);
  return os.str();
}

const ArrayDecl *Program::findArray(const std::string &n) const {
  for (const auto &a : arrays)
    if (a.name == n)
      return &a;
  return nullptr;
}

const ScalarDecl *Program::findScalar(const std::string &n) const {
  for (const auto &s : scalars)
    if (s.name == n)
      return &s;
  return nullptr;
}

bool Program::isParam(const std::string &n) const {
  for (const auto &p : params)
    if (p == n)
      return true;
  return false;
}

std::string printProgram(const Program &p) {
  std::ostringstream os;
  // implicit parameters print too; reparsing then declares them up front,
  // which keeps the round trip stable
  if (!p.params.empty()) {
    os << "param ";
    for (size_t i = 0; i < p.params.size(); ++i)
      os << (i ? ", " : "") << p.params[i];
    os << ";\n";
  }
  for (const auto &s : p.scalars)
    os << elemText(s.kind) << " " << s.name << ";\n";
  for (const auto &a : p.arrays) {
    os << elemText(a.kind) << " " << a.name;
    for (const auto &e : a.extents) {
      os << "[";
      printExpr(*e, os);
      os << "]";
    }
    os << ";\n";
  }
  for (const auto &s : p.body)
    printStmt(*s, os, 0);
  return os.str();
}

bool structurallyEqual(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.body.size() != b.body.size())
    return false;
  switch (a.kind) {
  case Stmt::Kind::Assign:
    if (a.assignOp != b.assignOp || !structurallyEqual(*a.lhs, *b.lhs) ||
        !structurallyEqual(*a.rhs, *b.rhs))
      return false;
    break;
  case Stmt::Kind::For:
    if (a.loopVar != b.loopVar || a.declaresVar != b.declaresVar ||
        a.cmp != b.cmp || a.step != b.step ||
        !structurallyEqual(*a.init, *b.init) ||
        !structurallyEqual(*a.bound, *b.bound))
      return false;
    break;
  case Stmt::Kind::Block:
    break;
  case Stmt::Kind::Omp: {
    const OmpPragma &x = a.pragma, &y = b.pragma;
    if (x.parts != y.parts || x.vars != y.vars || x.sched != y.sched ||
        x.collapse != y.collapse || x.nowait != y.nowait ||
        x.orderedClause != y.orderedClause || x.numThreads != y.numThreads ||
        x.threadPrivateVars != y.threadPrivateVars ||
        x.unknownName != y.unknownName)
      return false;
    break;
  }
  }
  for (size_t i = 0; i < a.body.size(); ++i)
    if (!structurallyEqual(*a.body[i], *b.body[i]))
      return false;
  return true;
}

bool structurallyEqual(const Program &a, const Program &b) {
  if (a.params != b.params || a.body.size() != b.body.size())
    return false;
  if (a.scalars.size() != b.scalars.size() ||
      a.arrays.size() != b.arrays.size())
    return false;
  for (size_t i = 0; i < a.scalars.size(); ++i)
    if (a.scalars[i].name != b.scalars[i].name ||
        a.scalars[i].kind != b.scalars[i].kind)
      return false;
  for (size_t i = 0; i < a.arrays.size(); ++i) {
    if (a.arrays[i].name != b.arrays[i].name ||
        a.arrays[i].kind != b.arrays[i].kind ||
        a.arrays[i].extents.size() != b.arrays[i].extents.size())
      return false;
    for (size_t j = 0; j < a.arrays[i].extents.size(); ++j)
      if (!structurallyEqual(*a.arrays[i].extents[j], *b.arrays[i].extents[j]))
        return false;
  }
  for (size_t i = 0; i < a.body.size(); ++i)
    if (!structurallyEqual(*a.body[i], *b.body[i]))
      return false;
  return true;
}

} // namespace polyrace
