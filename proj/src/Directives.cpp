//===-- Directives.cpp - Directive forest construction ---------------------===//

#include "polyrace/Directive.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace polyrace {

std::string dtypeName(Dtype d) {
  switch (d) {
  case Dtype::Parallel:
    return "OMP_Parallel";
  case Dtype::For:
    return "OMP_For";
  case Dtype::WorkshareLoop:
    return "OMP_Workshare_Loop";
  case Dtype::Simd:
    return "OMP_Simd";
  case Dtype::Single:
    return "OMP_Workshare_single";
  case Dtype::Master:
    return "OMP_Master";
  case Dtype::Critical:
    return "OMP_Critical";
  case Dtype::Ordered:
    return "OMP_Ordered";
  case Dtype::Distribute:
    return "OMP_Distribute";
  case Dtype::ThreadPrivate:
    return "OMP_ThreadPrivate";
  case Dtype::Barrier:
    return "OMP_Barrier";
  case Dtype::Atomic:
    return "OMP_Atomic";
  case Dtype::Unknown:
    return "OMP_Unknown";
  }
  return "OMP_Unknown";
}

std::string dtypeKeyword(Dtype d) {
  switch (d) {
  case Dtype::Parallel:
    return "parallel";
  case Dtype::For:
    return "for";
  case Dtype::WorkshareLoop:
    return "for";
  case Dtype::Simd:
    return "simd";
  case Dtype::Single:
    return "single";
  case Dtype::Master:
    return "master";
  case Dtype::Critical:
    return "critical";
  case Dtype::Ordered:
    return "ordered";
  case Dtype::Distribute:
    return "distribute";
  case Dtype::ThreadPrivate:
    return "threadprivate";
  case Dtype::Barrier:
    return "barrier";
  case Dtype::Atomic:
    return "atomic";
  case Dtype::Unknown:
    return "unknown";
  }
  return "unknown";
}

void collectVariables(const Stmt &s, std::vector<std::string> &inductionStack,
                      std::map<std::string, bool> &names) {
  auto addExpr = [&](const Expr &e, auto &&self) -> void {
    switch (e.kind) {
    case Expr::Kind::Var:
      if (std::find(inductionStack.begin(), inductionStack.end(), e.name) ==
          inductionStack.end())
        names.emplace(e.name, false);
      return;
    case Expr::Kind::ArrayRef:
      names.emplace(e.name, true);
      for (const auto &a : e.args)
        self(*a, self);
      return;
    default:
      for (const auto &a : e.args)
        self(*a, self);
      return;
    }
  };
  switch (s.kind) {
  case Stmt::Kind::Assign:
    addExpr(*s.lhs, addExpr);
    addExpr(*s.rhs, addExpr);
    return;
  case Stmt::Kind::For:
    addExpr(*s.init, addExpr);
    addExpr(*s.bound, addExpr);
    inductionStack.push_back(s.loopVar);
    collectVariables(*s.body[0], inductionStack, names);
    inductionStack.pop_back();
    return;
  case Stmt::Kind::Block:
    for (const auto &c : s.body)
      collectVariables(*c, inductionStack, names);
    return;
  case Stmt::Kind::Omp:
    for (const auto &c : s.body)
      collectVariables(*c, inductionStack, names);
    return;
  }
}

namespace {

void collectInductionVars(const Stmt &s, std::set<std::string> &vars) {
  if (s.kind == Stmt::Kind::For) {
    vars.insert(s.loopVar);
    collectInductionVars(*s.body[0], vars);
    return;
  }
  for (const auto &c : s.body)
    collectInductionVars(*c, vars);
}

struct Builder {
  const Program &prog;
  std::set<std::string> threadPrivate; // file-scope threadprivate names

  Dtype mapConstruct(Construct c, bool underParallel) const {
    switch (c) {
    case Construct::Parallel:
      return Dtype::Parallel;
    case Construct::For:
      return underParallel ? Dtype::WorkshareLoop : Dtype::For;
    case Construct::Simd:
      return Dtype::Simd;
    case Construct::Distribute:
      return Dtype::Distribute;
    case Construct::Single:
      return Dtype::Single;
    case Construct::Master:
      return Dtype::Master;
    case Construct::Critical:
      return Dtype::Critical;
    case Construct::Ordered:
      return Dtype::Ordered;
    case Construct::Barrier:
      return Dtype::Barrier;
    case Construct::ThreadPrivate:
      return Dtype::ThreadPrivate;
    case Construct::Atomic:
      return Dtype::Atomic;
    case Construct::Unknown:
      return Dtype::Unknown;
    }
    return Dtype::Unknown;
  }

  // Build the directive chain for one Omp statement and collect nested
  // directives from its body.
  DirectivePtr buildOmp(const Stmt &s, bool underParallel) {
    const OmpPragma &p = s.pragma;
    DirectivePtr root;
    Directive *leaf = nullptr;
    bool sawParallel = underParallel;
    for (Construct c : p.parts) {
      auto d = std::make_unique<Directive>();
      d->dtype = mapConstruct(c, sawParallel);
      d->loc = p.loc;
      d->rawText = p.rawText;
      d->unknownName = p.unknownName;
      d->body = s.loopBody();
      if (c == Construct::Parallel)
        sawParallel = true;
      if (!root) {
        // data-sharing clauses and num_threads sit on the outermost part
        d->vars = p.vars;
        d->numThreads = p.numThreads;
        leaf = d.get();
        root = std::move(d);
      } else {
        Directive *next = d.get();
        leaf->children.push_back(std::move(d));
        leaf = next;
      }
    }
    // loop-shape clauses sit on the worksharing loop part (or the simd
    // directive when it stands alone)
    Directive *loopPart = nullptr;
    Directive *simdPart = nullptr;
    for (Directive *d = root.get();;) {
      if (d->dtype == Dtype::Simd)
        simdPart = d;
      else if (d->isLoopDirective() && !loopPart)
        loopPart = d;
      if (d->children.empty())
        break;
      d = d->children[0].get();
    }
    if (!loopPart)
      loopPart = simdPart;
    if (loopPart) {
      loopPart->sched = p.sched;
      loopPart->collapse = p.collapse;
      loopPart->nowait = p.nowait;
      if (p.orderedClause || p.sched) {
        Schedule sch = p.sched.value_or(Schedule{});
        sch.ordered = sch.ordered || p.orderedClause;
        loopPart->sched = sch;
      } else if (loopPart->dtype != Dtype::Simd) {
        // worksharing loops run under some schedule; default is static
        loopPart->sched = Schedule{};
      }
    } else if (root->dtype == Dtype::Unknown || root->isParseOnly()) {
      root->nowait = p.nowait;
    }

    if (root->dtype == Dtype::ThreadPrivate)
      for (const auto &n : p.threadPrivateVars)
        root->vars.push_back({Vtype::ThreadPrivate, n, ""});

    // nested directives from the body
    if (const Stmt *body = s.loopBody())
      walk(*body, leaf->children, sawParallel);

    // a plain parallel region joins at an implicit barrier
    if (p.parts.size() == 1 && p.parts[0] == Construct::Parallel) {
      auto bar = std::make_unique<Directive>();
      bar->dtype = Dtype::Barrier;
      bar->implicit = true;
      bar->loc = p.loc;
      root->children.push_back(std::move(bar));
    }
    return root;
  }

  void walk(const Stmt &s, std::vector<DirectivePtr> &out,
            bool underParallel) {
    switch (s.kind) {
    case Stmt::Kind::Omp:
      out.push_back(buildOmp(s, underParallel));
      return;
    case Stmt::Kind::For:
      walk(*s.body[0], out, underParallel);
      return;
    case Stmt::Kind::Block:
      for (const auto &c : s.body)
        walk(*c, out, underParallel);
      return;
    case Stmt::Kind::Assign:
      return;
    }
  }

  // Resolve variable classes for a region root: explicit clauses from the
  // subtree (outermost wins), induction variables private, threadprivate
  // declarations, default shared for the rest.
  void classify(Directive &root) {
    std::map<std::string, VarClause> classes;
    std::vector<const Directive *> stack = {&root};
    while (!stack.empty()) {
      const Directive *d = stack.back();
      stack.pop_back();
      for (const auto &vc : d->vars)
        classes.emplace(vc.name, vc);
      for (const auto &c : d->children)
        stack.push_back(c.get());
    }
    for (const auto &n : threadPrivate)
      classes.insert_or_assign(
          n, VarClause{Vtype::ThreadPrivate, n, ""});

    std::set<std::string> induction;
    std::map<std::string, bool> occurring;
    if (root.body) {
      collectInductionVars(*root.body, induction);
      std::vector<std::string> inductionStack;
      collectVariables(*root.body, inductionStack, occurring);
    }
    for (const auto &n : induction)
      classes.insert_or_assign(n, VarClause{Vtype::Private, n, ""});
    for (const auto &[n, isArray] : occurring)
      classes.emplace(n, VarClause{Vtype::Shared, n, ""});

    // resolved list: explicit clause order first, then defaults by name
    std::vector<VarClause> resolved = root.vars;
    std::set<std::string> have;
    for (const auto &vc : resolved)
      have.insert(vc.name);
    std::vector<std::string> rest;
    for (const auto &[n, vc] : classes)
      if (!have.count(n))
        rest.push_back(n);
    std::sort(rest.begin(), rest.end());
    for (const auto &n : rest)
      resolved.push_back(classes.at(n));
    root.vars = std::move(resolved);
  }
};

} // namespace

std::vector<DirectivePtr> extractDirectives(const Program &p) {
  Builder b{p, {}};
  // file-scope threadprivate directives apply to every region
  for (const auto &s : p.body)
    if (s->kind == Stmt::Kind::Omp &&
        s->pragma.parts.front() == Construct::ThreadPrivate)
      for (const auto &n : s->pragma.threadPrivateVars)
        b.threadPrivate.insert(n);

  std::vector<DirectivePtr> out;
  for (const auto &s : p.body)
    b.walk(*s, out, false);
  for (auto &d : out)
    b.classify(*d);
  return out;
}

std::map<std::string, VarClause> classMapOf(const Directive &root) {
  std::map<std::string, VarClause> m;
  for (const auto &vc : root.vars)
    m.emplace(vc.name, vc);
  return m;
}

namespace {

std::string vtypeLabel(Vtype v) {
  switch (v) {
  case Vtype::Private:
    return "Private";
  case Vtype::FirstPrivate:
    return "Firstprivate";
  case Vtype::Shared:
    return "Shared";
  case Vtype::LastPrivate:
    return "Lastprivate";
  case Vtype::Reduction:
    return "Reduction";
  case Vtype::ThreadPrivate:
    return "Threadprivate";
  }
  return "?";
}

std::string schedLabel(const Schedule &s) {
  std::string out;
  switch (s.stype) {
  case SchedKind::Static:
    out = "Static Schedule";
    break;
  case SchedKind::Dynamic:
    out = "Dynamic Schedule";
    break;
  case SchedKind::Guided:
    out = "Guided Schedule";
    break;
  case SchedKind::Auto:
    out = "Auto Schedule";
    break;
  case SchedKind::Runtime:
    out = "Runtime Schedule";
    break;
  }
  if (s.chunk)
    out += " (chunk " + std::to_string(*s.chunk) + ")";
  else
    out += " (auto-chunked)";
  if (s.ordered)
    out += " ordered";
  if (s.modifier)
    out = (*s.modifier == SchedModifier::Monotonic ? "monotonic "
                                                   : "nonmonotonic ") +
          out;
  return out;
}

} // namespace

std::string dumpDirective(const Directive &d, int indent) {
  std::ostringstream os;
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  os << pad << "Directive: " << dtypeName(d.dtype);
  if (d.dtype == Dtype::Unknown)
    os << " (" << d.unknownName << ")";
  if (d.implicit)
    os << " (implicit)";
  os << "\n";
  if (d.sched)
    os << pad << "  Schedule type : " << schedLabel(*d.sched) << "\n";
  if (d.collapse > 1)
    os << pad << "  Collapse: " << d.collapse << "\n";
  if (d.nowait)
    os << pad << "  Nowait\n";
  if (!d.vars.empty()) {
    os << pad << "  Variables:\n";
    for (const auto &vc : d.vars) {
      os << pad << "    " << vtypeLabel(vc.vtype);
      if (vc.vtype == Vtype::Reduction)
        os << "(" << vc.reductionOp << ")";
      os << ": " << vc.name << "\n";
    }
  }
  if (!d.children.empty()) {
    os << pad << "  Child Directives:\n";
    int i = 1;
    for (const auto &c : d.children)
      os << pad << "  " << i++ << ":\n" << dumpDirective(*c, indent + 2);
  }
  return os.str();
}

} // namespace polyrace
