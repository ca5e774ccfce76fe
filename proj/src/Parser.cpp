//===-- Parser.cpp - Recursive-descent frontend ----------------------------===//
//
// Grammar (docs/grammar.md): declarations first, then statements. Pragma
// lines attach to the syntactically following statement. Undeclared
// identifiers in rvalue position become implicit symbolic parameters;
// writes require a declaration.
//
//===----------------------------------------------------------------------===//

#include "polyrace/Parser.h"

#include "LexerImpl.h"

#include <algorithm>
#include <map>
#include <set>

namespace polyrace {

namespace {

using lex::Tok;
using lex::Token;

const std::set<std::string> kTypeKeywords = {"int", "float", "double"};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    parseDecls();
    while (!at(Tok::End))
      prog_.body.push_back(parseStmt());
    return std::move(prog_);
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Program prog_;

  const Token &cur() const { return toks_[pos_]; }
  const Token &peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool atPunct(const std::string &p) const {
    return cur().kind == Tok::Punct && cur().text == p;
  }
  bool atIdent(const std::string &s) const {
    return cur().kind == Tok::Ident && cur().text == s;
  }
  Token take() { return toks_[pos_++]; }
  Token expectPunct(const std::string &p) {
    if (!atPunct(p))
      throw SyntaxError("expected '" + p + "'", cur().loc);
    return take();
  }
  Token expectIdent() {
    if (!at(Tok::Ident))
      throw SyntaxError("expected identifier", cur().loc);
    return take();
  }

  static ElemKind elemKindOf(const std::string &s) {
    if (s == "int")
      return ElemKind::Int;
    if (s == "float")
      return ElemKind::Float;
    return ElemKind::Double;
  }

  //===--- declarations ---===//

  void parseDecls() {
    for (;;) {
      if (atIdent("param")) {
        take();
        for (;;) {
          Token n = expectIdent();
          prog_.params.push_back(n.text);
          if (atPunct(",")) {
            take();
            continue;
          }
          break;
        }
        expectPunct(";");
        continue;
      }
      if (at(Tok::Ident) && kTypeKeywords.count(cur().text)) {
        ElemKind k = elemKindOf(take().text);
        for (;;) {
          Token n = expectIdent();
          std::vector<ExprPtr> extents;
          while (atPunct("[")) {
            take();
            extents.push_back(parseExpr());
            expectPunct("]");
          }
          if (extents.size() > 3)
            throw SemanticError("arrays of rank > 3 are not supported", n.loc);
          if (extents.empty()) {
            prog_.scalars.push_back({n.text, k, n.loc});
          } else {
            ArrayDecl a;
            a.name = n.text;
            a.kind = k;
            a.extents = std::move(extents);
            a.loc = n.loc;
            prog_.arrays.push_back(std::move(a));
          }
          if (atPunct(",")) {
            take();
            continue;
          }
          break;
        }
        expectPunct(";");
        continue;
      }
      break;
    }
  }

  //===--- statements ---===//

  StmtPtr parseStmt() {
    if (at(Tok::Pragma))
      return parsePragmaStmt();
    if (atIdent("for"))
      return parseFor();
    if (atPunct("{"))
      return parseBlock();
    if (atPunct(";")) {
      Token t = take();
      auto s = std::make_unique<Stmt>();
      s->kind = Stmt::Kind::Block;
      s->loc = t.loc;
      return s;
    }
    if (at(Tok::Ident) && kTypeKeywords.count(cur().text))
      throw SyntaxError("declarations must precede statements", cur().loc);
    return parseAssign();
  }

  StmtPtr parseBlock() {
    Token open = expectPunct("{");
    auto s = std::make_unique<Stmt>();
    s->kind = Stmt::Kind::Block;
    s->loc = open.loc;
    while (!atPunct("}")) {
      if (at(Tok::End))
        throw SyntaxError("unterminated block", open.loc);
      s->body.push_back(parseStmt());
    }
    take();
    return s;
  }

  StmtPtr parseFor() {
    Token kw = take(); // for
    expectPunct("(");
    auto s = std::make_unique<Stmt>();
    s->kind = Stmt::Kind::For;
    s->loc = kw.loc;
    if (at(Tok::Ident) && kTypeKeywords.count(cur().text)) {
      if (cur().text != "int")
        throw SemanticError("loop variables must be integers", cur().loc);
      take();
      s->declaresVar = true;
    }
    Token var = expectIdent();
    s->loopVar = var.text;
    expectPunct("=");
    s->init = parseExpr();
    expectPunct(";");
    Token var2 = expectIdent();
    if (var2.text != s->loopVar)
      throw SyntaxError("loop condition must test '" + s->loopVar + "'",
                        var2.loc);
    if (atPunct("<"))
      s->cmp = CmpOp::LT;
    else if (atPunct("<="))
      s->cmp = CmpOp::LE;
    else if (atPunct(">"))
      s->cmp = CmpOp::GT;
    else if (atPunct(">="))
      s->cmp = CmpOp::GE;
    else
      throw SyntaxError("expected loop comparison", cur().loc);
    take();
    s->bound = parseExpr();
    expectPunct(";");
    s->step = parseIncrement(s->loopVar);
    expectPunct(")");
    s->body.push_back(parseStmt());
    return s;
  }

  long long parseIncrement(const std::string &var) {
    // i++ / ++i / i-- / --i / i += k / i -= k / i = i + k / i = i - k
    if (atPunct("++") || atPunct("--")) {
      bool inc = take().text == "++";
      Token n = expectIdent();
      if (n.text != var)
        throw SyntaxError("loop increment must update '" + var + "'", n.loc);
      return inc ? 1 : -1;
    }
    Token n = expectIdent();
    if (n.text != var)
      throw SyntaxError("loop increment must update '" + var + "'", n.loc);
    if (atPunct("++") || atPunct("--"))
      return take().text == "++" ? 1 : -1;
    if (atPunct("+=") || atPunct("-=")) {
      bool add = take().text == "+=";
      if (!at(Tok::IntLit))
        throw SyntaxError("loop stride must be an integer constant",
                          cur().loc);
      long long k = take().intVal;
      if (k <= 0)
        throw SyntaxError("loop stride must be positive", cur().loc);
      return add ? k : -k;
    }
    if (atPunct("=")) {
      take();
      Token m = expectIdent();
      if (m.text != var)
        throw SyntaxError("loop increment must update '" + var + "'", m.loc);
      bool add;
      if (atPunct("+"))
        add = true;
      else if (atPunct("-"))
        add = false;
      else
        throw SyntaxError("expected '+' or '-' in loop increment", cur().loc);
      take();
      if (!at(Tok::IntLit))
        throw SyntaxError("loop stride must be an integer constant",
                          cur().loc);
      long long k = take().intVal;
      if (k <= 0)
        throw SyntaxError("loop stride must be positive", cur().loc);
      return add ? k : -k;
    }
    throw SyntaxError("malformed loop increment", cur().loc);
  }

  StmtPtr parseAssign() {
    auto s = std::make_unique<Stmt>();
    s->kind = Stmt::Kind::Assign;
    s->loc = cur().loc;
    Token name = expectIdent();
    ExprPtr lhs;
    if (atPunct("[")) {
      auto a = std::make_unique<Expr>();
      a->kind = Expr::Kind::ArrayRef;
      a->loc = name.loc;
      a->name = name.text;
      while (atPunct("[")) {
        take();
        a->args.push_back(parseExpr());
        expectPunct("]");
      }
      lhs = std::move(a);
    } else {
      lhs = Expr::var(name.text, name.loc);
    }
    if (atPunct("="))
      s->assignOp = AssignOp::Assign;
    else if (atPunct("+="))
      s->assignOp = AssignOp::AddAssign;
    else if (atPunct("-="))
      s->assignOp = AssignOp::SubAssign;
    else if (atPunct("*="))
      s->assignOp = AssignOp::MulAssign;
    else
      throw SyntaxError("expected assignment operator", cur().loc);
    take();
    s->lhs = std::move(lhs);
    s->rhs = parseExpr();
    expectPunct(";");
    return s;
  }

  //===--- expressions ---===//

  ExprPtr parseExpr() {
    ExprPtr e = parseTerm();
    while (atPunct("+") || atPunct("-")) {
      BinOp op = take().text == "+" ? BinOp::Add : BinOp::Sub;
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = e->loc;
      b->op = op;
      b->args.push_back(std::move(e));
      b->args.push_back(parseTerm());
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parseTerm() {
    ExprPtr e = parseUnary();
    while (atPunct("*") || atPunct("/") || atPunct("%")) {
      std::string t = take().text;
      BinOp op = t == "*" ? BinOp::Mul : (t == "/" ? BinOp::Div : BinOp::Mod);
      auto b = std::make_unique<Expr>();
      b->kind = Expr::Kind::Binary;
      b->loc = e->loc;
      b->op = op;
      b->args.push_back(std::move(e));
      b->args.push_back(parseUnary());
      e = std::move(b);
    }
    return e;
  }

  ExprPtr parseUnary() {
    if (atPunct("-")) {
      Token t = take();
      auto n = std::make_unique<Expr>();
      n->kind = Expr::Kind::Neg;
      n->loc = t.loc;
      n->args.push_back(parseUnary());
      return n;
    }
    return parsePrimary();
  }

  ExprPtr parsePrimary() {
    if (at(Tok::IntLit)) {
      Token t = take();
      return Expr::intLit(t.intVal, t.loc);
    }
    if (at(Tok::FloatLit)) {
      Token t = take();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::FloatLit;
      e->loc = t.loc;
      e->floatText = t.text;
      return e;
    }
    if (atPunct("(")) {
      take();
      ExprPtr e = parseExpr();
      expectPunct(")");
      return e;
    }
    if (at(Tok::Ident)) {
      Token name = take();
      if (atPunct("(")) {
        if (name.text != "min" && name.text != "max")
          throw SyntaxError("function calls are not supported (only min/max)",
                            name.loc);
        take();
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::MinMax;
        e->loc = name.loc;
        e->isMin = name.text == "min";
        e->args.push_back(parseExpr());
        expectPunct(",");
        e->args.push_back(parseExpr());
        expectPunct(")");
        return e;
      }
      if (atPunct("[")) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::ArrayRef;
        e->loc = name.loc;
        e->name = name.text;
        while (atPunct("[")) {
          take();
          e->args.push_back(parseExpr());
          expectPunct("]");
        }
        return e;
      }
      return Expr::var(name.text, name.loc);
    }
    throw SyntaxError("expected expression", cur().loc);
  }

  //===--- pragmas ---===//

  StmtPtr parsePragmaStmt() {
    Token p = take();
    OmpPragma pragma = parsePragmaLine(p);
    auto s = std::make_unique<Stmt>();
    s->kind = Stmt::Kind::Omp;
    s->loc = p.loc;
    s->pragma = std::move(pragma);
    if (pragmaTakesBody(s->pragma)) {
      if (at(Tok::End) || atPunct("}"))
        throw SyntaxError("pragma requires a following statement", p.loc);
      s->body.push_back(parseStmt());
    }
    return s;
  }

  static bool pragmaTakesBody(const OmpPragma &p) {
    if (p.isUnknown()) {
      // Standalone unsupported constructs; region-forming ones keep their
      // body attached so the region reports cleanly.
      static const std::set<std::string> standalone = {
          "taskwait", "taskyield", "flush", "#non-omp"};
      return !standalone.count(p.unknownName);
    }
    switch (p.parts.front()) {
    case Construct::Barrier:
    case Construct::ThreadPrivate:
      return false;
    default:
      return true;
    }
  }

  OmpPragma parsePragmaLine(const Token &p) {
    OmpPragma out;
    out.rawText = p.text;
    out.loc = p.loc;
    std::string text = p.text;
    if (!text.empty() && text[0] == '#')
      text = text.substr(1);

    std::vector<Token> ts;
    try {
      ts = lex::tokenizePragmaText(text, p.loc);
    } catch (const SyntaxError &) {
      out.parts = {Construct::Unknown};
      out.unknownName = "#malformed";
      return out;
    }
    size_t i = 0;
    auto ident = [&](size_t k = 0) -> std::string {
      return i + k < ts.size() && ts[i + k].kind == Tok::Ident ? ts[i + k].text
                                                               : "";
    };
    if (ident() != "pragma") {
      out.parts = {Construct::Unknown};
      out.unknownName = "#non-pragma";
      return out;
    }
    ++i;
    if (ident() != "omp") {
      out.parts = {Construct::Unknown};
      out.unknownName = "#non-omp";
      return out;
    }
    ++i;

    auto unknown = [&](const std::string &name) {
      OmpPragma u;
      u.rawText = p.text;
      u.loc = p.loc;
      u.parts = {Construct::Unknown};
      u.unknownName = name;
      return u;
    };

    // construct name, longest match
    std::string c0 = ident();
    if (c0.empty())
      return unknown("#empty");
    ++i;
    if (c0 == "parallel") {
      out.parts.push_back(Construct::Parallel);
      if (ident() == "for") {
        out.parts.push_back(Construct::For);
        ++i;
        if (ident() == "simd") {
          out.parts.push_back(Construct::Simd);
          ++i;
        }
      } else if (ident() == "sections") {
        return unknown("parallel sections");
      }
    } else if (c0 == "for") {
      out.parts.push_back(Construct::For);
      if (ident() == "simd") {
        out.parts.push_back(Construct::Simd);
        ++i;
      }
    } else if (c0 == "simd") {
      out.parts.push_back(Construct::Simd);
    } else if (c0 == "distribute") {
      if (!ident().empty() && ident() != "schedule" && ident() != "collapse" &&
          ident() != "private" && ident() != "firstprivate" &&
          ident() != "lastprivate")
        return unknown("distribute " + ident());
      out.parts.push_back(Construct::Distribute);
    } else if (c0 == "single") {
      out.parts.push_back(Construct::Single);
    } else if (c0 == "master") {
      out.parts.push_back(Construct::Master);
    } else if (c0 == "critical") {
      out.parts.push_back(Construct::Critical);
      // optional name
      if (i < ts.size() && ts[i].kind == Tok::Punct && ts[i].text == "(") {
        while (i < ts.size() && ts[i].text != ")")
          ++i;
        if (i < ts.size())
          ++i;
      }
    } else if (c0 == "ordered") {
      out.parts.push_back(Construct::Ordered);
    } else if (c0 == "barrier") {
      out.parts.push_back(Construct::Barrier);
    } else if (c0 == "atomic") {
      out.parts.push_back(Construct::Atomic);
      if (!ident().empty())
        ++i; // read/write/update/capture
    } else if (c0 == "threadprivate") {
      out.parts.push_back(Construct::ThreadPrivate);
      if (i >= ts.size() || ts[i].text != "(")
        return unknown("threadprivate");
      ++i;
      while (i < ts.size() && ts[i].kind == Tok::Ident) {
        out.threadPrivateVars.push_back(ts[i].text);
        ++i;
        if (i < ts.size() && ts[i].text == ",")
          ++i;
      }
      if (i >= ts.size() || ts[i].text != ")")
        return unknown("threadprivate");
      ++i;
    } else {
      return unknown(c0);
    }

    // clauses
    while (i < ts.size() && ts[i].kind != Tok::End) {
      if (ts[i].kind != Tok::Ident)
        return unknown("#malformed-clause");
      std::string cl = ts[i].text;
      ++i;
      auto list = [&](Vtype vt) -> bool {
        if (i >= ts.size() || ts[i].text != "(")
          return false;
        ++i;
        while (i < ts.size() && ts[i].kind == Tok::Ident) {
          out.vars.push_back({vt, ts[i].text, ""});
          ++i;
          if (i < ts.size() && ts[i].text == ",")
            ++i;
        }
        if (i >= ts.size() || ts[i].text != ")")
          return false;
        ++i;
        return true;
      };
      if (cl == "private") {
        if (!list(Vtype::Private))
          return unknown("#malformed-clause");
      } else if (cl == "firstprivate") {
        if (!list(Vtype::FirstPrivate))
          return unknown("#malformed-clause");
      } else if (cl == "lastprivate") {
        if (!list(Vtype::LastPrivate))
          return unknown("#malformed-clause");
      } else if (cl == "shared") {
        if (!list(Vtype::Shared))
          return unknown("#malformed-clause");
      } else if (cl == "reduction") {
        if (i >= ts.size() || ts[i].text != "(")
          return unknown("#malformed-clause");
        ++i;
        static const std::set<std::string> ops = {"+", "*",  "-",
                                                  "&&", "||"};
        std::string op;
        if (i < ts.size() &&
            (ops.count(ts[i].text) ||
             (ts[i].kind == Tok::Ident &&
              (ts[i].text == "max" || ts[i].text == "min")))) {
          op = ts[i].text;
          ++i;
        } else {
          return unknown("reduction operator");
        }
        if (i >= ts.size() || ts[i].text != ":")
          return unknown("#malformed-clause");
        ++i;
        size_t firstVar = out.vars.size();
        while (i < ts.size() && ts[i].kind == Tok::Ident) {
          out.vars.push_back({Vtype::Reduction, ts[i].text, op});
          ++i;
          if (i < ts.size() && ts[i].text == ",")
            ++i;
        }
        if (out.vars.size() == firstVar || i >= ts.size() ||
            ts[i].text != ")")
          return unknown("#malformed-clause");
        ++i;
      } else if (cl == "schedule") {
        if (i >= ts.size() || ts[i].text != "(")
          return unknown("#malformed-clause");
        ++i;
        Schedule sch;
        if (ident() == "monotonic" || ident() == "nonmonotonic") {
          sch.modifier = ident() == "monotonic" ? SchedModifier::Monotonic
                                                : SchedModifier::Nonmonotonic;
          ++i;
          if (i >= ts.size() || ts[i].text != ":")
            return unknown("#malformed-clause");
          ++i;
        }
        std::string kind = ident();
        if (kind == "static")
          sch.stype = SchedKind::Static;
        else if (kind == "dynamic")
          sch.stype = SchedKind::Dynamic;
        else if (kind == "guided")
          sch.stype = SchedKind::Guided;
        else if (kind == "auto")
          sch.stype = SchedKind::Auto;
        else if (kind == "runtime")
          sch.stype = SchedKind::Runtime;
        else
          return unknown("schedule kind");
        ++i;
        if (i < ts.size() && ts[i].text == ",") {
          ++i;
          if (i >= ts.size() || ts[i].kind != Tok::IntLit || ts[i].intVal < 1)
            throw SyntaxError("schedule chunk must be a positive constant",
                              i < ts.size() ? ts[i].loc : p.loc);
          sch.chunk = ts[i].intVal;
          ++i;
        }
        if (i >= ts.size() || ts[i].text != ")")
          return unknown("#malformed-clause");
        ++i;
        out.sched = sch;
      } else if (cl == "collapse") {
        if (i + 2 >= ts.size() || ts[i].text != "(" ||
            ts[i + 1].kind != Tok::IntLit)
          return unknown("#malformed-clause");
        if (ts[i + 1].intVal < 1)
          throw SyntaxError("collapse count must be positive", ts[i + 1].loc);
        out.collapse = ts[i + 1].intVal;
        if (ts[i + 2].text != ")")
          return unknown("#malformed-clause");
        i += 3;
      } else if (cl == "nowait") {
        out.nowait = true;
      } else if (cl == "ordered") {
        out.orderedClause = true;
      } else if (cl == "num_threads") {
        if (i + 2 >= ts.size() || ts[i].text != "(")
          return unknown("#malformed-clause");
        if (ts[i + 1].kind == Tok::IntLit)
          out.numThreads = ts[i + 1].intVal;
        else if (ts[i + 1].kind != Tok::Ident)
          return unknown("#malformed-clause");
        if (ts[i + 2].text != ")")
          return unknown("#malformed-clause");
        i += 3;
      } else if (cl == "default") {
        if (i + 2 >= ts.size() || ts[i].text != "(" ||
            (ts[i + 1].text != "shared" && ts[i + 1].text != "none") ||
            ts[i + 2].text != ")")
          return unknown("#malformed-clause");
        i += 3;
      } else {
        return unknown("clause " + cl);
      }
    }
    return out;
  }
};

//===----------------------------------------------------------------------===//
// Semantic checks
//===----------------------------------------------------------------------===//

class Sema {
public:
  explicit Sema(Program &p) : prog_(p) {
    for (const auto &n : p.params)
      declare(n, Sym::Param, {});
    for (const auto &s : p.scalars)
      declare(s.name, Sym::Scalar, s.loc);
    for (const auto &a : p.arrays)
      declare(a.name, Sym::Array, a.loc);
    for (const auto &a : p.arrays)
      for (const auto &e : a.extents)
        checkExpr(*e, /*rvalue=*/true);
  }

  void run() {
    for (const auto &s : prog_.body)
      checkStmt(*s);
    // implicit parameters become part of the program's parameter list
    for (const auto &n : implicit_)
      prog_.params.push_back(n);
  }

private:
  enum class Sym { Param, Scalar, Array, LoopVar };

  Program &prog_;
  std::map<std::string, Sym> symbols_;
  std::vector<std::string> loopStack_;
  std::vector<std::string> implicit_; // discovery order

  void declare(const std::string &n, Sym s, SourceLoc loc) {
    if (symbols_.count(n))
      throw SemanticError("'" + n + "' declared more than once", loc);
    symbols_[n] = s;
  }

  void checkStmt(const Stmt &s) {
    switch (s.kind) {
    case Stmt::Kind::Block:
      for (const auto &c : s.body)
        checkStmt(*c);
      return;
    case Stmt::Kind::Omp:
      for (const auto &tp : s.pragma.threadPrivateVars)
        if (!symbols_.count(tp))
          throw SemanticError("threadprivate variable '" + tp +
                                  "' is not declared",
                              s.pragma.loc);
      if (!s.pragma.isUnknown() && requiresLoop(s.pragma) &&
          (s.body.empty() || s.body[0]->kind != Stmt::Kind::For))
        throw SemanticError("this pragma must be followed by a for loop",
                            s.pragma.loc);
      for (const auto &c : s.body)
        checkStmt(*c);
      return;
    case Stmt::Kind::For: {
      for (const auto &v : loopStack_)
        if (v == s.loopVar)
          throw SemanticError("induction variable '" + s.loopVar +
                                  "' reused in nested loop",
                              s.loc);
      auto it = symbols_.find(s.loopVar);
      if (it != symbols_.end()) {
        if (it->second == Sym::Param)
          throw SemanticError("parameter '" + s.loopVar +
                                  "' cannot be a loop variable",
                              s.loc);
        if (it->second == Sym::Array)
          throw SemanticError("array '" + s.loopVar +
                                  "' cannot be a loop variable",
                              s.loc);
      }
      checkExpr(*s.init, true);
      checkExpr(*s.bound, true);
      loopStack_.push_back(s.loopVar);
      checkStmt(*s.body[0]);
      loopStack_.pop_back();
      return;
    }
    case Stmt::Kind::Assign: {
      const Expr &lhs = *s.lhs;
      if (lhs.kind == Expr::Kind::Var) {
        auto it = symbols_.find(lhs.name);
        bool isLoop = std::find(loopStack_.begin(), loopStack_.end(),
                                lhs.name) != loopStack_.end();
        if (isLoop)
          throw SemanticError("loop variable '" + lhs.name +
                                  "' modified in loop body",
                              lhs.loc);
        if (it == symbols_.end())
          throw SemanticError("assignment to undeclared variable '" +
                                  lhs.name + "'",
                              lhs.loc);
        if (it->second == Sym::Param)
          throw SemanticError("assignment to parameter '" + lhs.name + "'",
                              lhs.loc);
        if (it->second == Sym::Array)
          throw SemanticError("array '" + lhs.name +
                                  "' assigned without subscripts",
                              lhs.loc);
      } else {
        checkArrayRef(lhs);
      }
      for (const auto &sub : lhs.args)
        checkExpr(*sub, true);
      checkExpr(*s.rhs, true);
      return;
    }
    }
  }

  bool requiresLoop(const OmpPragma &p) const {
    for (Construct c : p.parts)
      if (c == Construct::For || c == Construct::Simd ||
          c == Construct::Distribute)
        return true;
    return false;
  }

  void checkArrayRef(const Expr &e) {
    auto it = symbols_.find(e.name);
    if (it == symbols_.end() || it->second != Sym::Array)
      throw SemanticError("'" + e.name + "' is not a declared array", e.loc);
    const ArrayDecl *d = prog_.findArray(e.name);
    if (d && d->extents.size() != e.args.size())
      throw SemanticError("array '" + e.name + "' has rank " +
                              std::to_string(d->extents.size()),
                          e.loc);
  }

  void checkExpr(const Expr &e, bool rvalue) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::FloatLit:
      return;
    case Expr::Kind::Var: {
      if (std::find(loopStack_.begin(), loopStack_.end(), e.name) !=
          loopStack_.end())
        return;
      auto it = symbols_.find(e.name);
      if (it == symbols_.end()) {
        if (!rvalue)
          throw SemanticError("undeclared identifier '" + e.name + "'",
                              e.loc);
        // read of an undeclared name: an implicit symbolic parameter
        symbols_[e.name] = Sym::Param;
        implicit_.push_back(e.name);
      }
      return;
    }
    case Expr::Kind::ArrayRef:
      checkArrayRef(e);
      for (const auto &a : e.args)
        checkExpr(*a, true);
      return;
    case Expr::Kind::Neg:
    case Expr::Kind::Binary:
    case Expr::Kind::MinMax:
      for (const auto &a : e.args)
        checkExpr(*a, true);
      return;
    }
  }
};

} // namespace

Program parse(const std::string &source, std::string fileName) {
  Parser parser(lex::tokenize(source));
  Program prog = parser.run();
  prog.fileName = std::move(fileName);
  Sema sema(prog);
  sema.run();
  return prog;
}

} // namespace polyrace
