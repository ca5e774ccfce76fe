//===-- Ast.h - Kernel language AST -----------------------------*- C++ -*-===//
//
// The restricted C-like kernel language: integer/real scalars, arrays of
// rank <= 3, affine for loops, assignments, min/max intrinsics, and
// "#pragma omp" lines attached to the following statement.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/Diag.h"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace polyrace {

enum class ElemKind { Int, Float, Double };

enum class BinOp { Add, Sub, Mul, Div, Mod };
enum class CmpOp { LT, LE, GT, GE };
enum class AssignOp { Assign, AddAssign, SubAssign, MulAssign };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { IntLit, FloatLit, Var, ArrayRef, Neg, Binary, MinMax };

  Kind kind;
  SourceLoc loc;
  long long intValue = 0;   // IntLit
  std::string floatText;    // FloatLit (kept verbatim)
  std::string name;         // Var / ArrayRef
  BinOp op = BinOp::Add;    // Binary
  bool isMin = true;        // MinMax
  std::vector<ExprPtr> args; // subscripts / operands

  static ExprPtr intLit(long long v, SourceLoc loc = {});
  static ExprPtr var(std::string n, SourceLoc loc = {});
};

bool structurallyEqual(const Expr &a, const Expr &b);
ExprPtr cloneExpr(const Expr &e);
std::string exprToString(const Expr &e);

//===----------------------------------------------------------------------===//
// OpenMP pragma surface form (as parsed; semantic tree built later)
//===----------------------------------------------------------------------===//

enum class Construct {
  Parallel,
  For,  // worksharing loop ("omp for"); becomes workshare-loop when nested
  Simd,
  Distribute,
  Single,
  Master,
  Critical,
  Ordered,
  Barrier,
  ThreadPrivate,
  Atomic,
  Unknown
};

enum class Vtype {
  Private,
  FirstPrivate,
  Shared,
  LastPrivate,
  Reduction,
  ThreadPrivate
};

enum class SchedKind { Static, Dynamic, Guided, Auto, Runtime };
enum class SchedModifier { Monotonic, Nonmonotonic };

struct Schedule {
  std::optional<SchedModifier> modifier;
  bool ordered = false;
  SchedKind stype = SchedKind::Static;
  std::optional<long long> chunk; // >= 1 when present

  bool operator==(const Schedule &) const = default;
};

struct VarClause {
  Vtype vtype;
  std::string name;
  std::string reductionOp; // set when vtype == Reduction

  bool operator==(const VarClause &) const = default;
};

struct OmpPragma {
  // Combined constructs keep their parts in order, e.g. parallel for simd
  // is {Parallel, For, Simd}.
  std::vector<Construct> parts;
  std::vector<VarClause> vars;
  std::optional<Schedule> sched;
  long long collapse = 1;
  bool nowait = false;
  bool orderedClause = false;
  std::optional<long long> numThreads; // analysis ignores the value
  std::vector<std::string> threadPrivateVars; // threadprivate(...)
  std::string rawText;     // original "#pragma ..." line
  std::string unknownName; // construct/clause that made this Unknown
  SourceLoc loc;

  bool isUnknown() const {
    return parts.size() == 1 && parts[0] == Construct::Unknown;
  }
};

//===----------------------------------------------------------------------===//
// Statements
//===----------------------------------------------------------------------===//

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Kind { Assign, For, Block, Omp };

  Kind kind;
  SourceLoc loc;

  // Assign
  ExprPtr lhs; // Var or ArrayRef
  AssignOp assignOp = AssignOp::Assign;
  ExprPtr rhs;

  // For
  std::string loopVar;
  bool declaresVar = false; // "for (int i = ..."
  ExprPtr init;
  CmpOp cmp = CmpOp::LT;
  ExprPtr bound;
  long long step = 1; // nonzero constant

  // Block / For body / Omp body
  std::vector<StmtPtr> body; // Block: children; For/Omp: single element

  // Omp
  OmpPragma pragma;

  const Stmt *loopBody() const { return body.empty() ? nullptr : body[0].get(); }
};

bool structurallyEqual(const Stmt &a, const Stmt &b);

//===----------------------------------------------------------------------===//
// Program
//===----------------------------------------------------------------------===//

struct ArrayDecl {
  std::string name;
  ElemKind kind = ElemKind::Double;
  std::vector<ExprPtr> extents; // rank = extents.size(), 1..3
  SourceLoc loc;
};

struct ScalarDecl {
  std::string name;
  ElemKind kind = ElemKind::Int;
  SourceLoc loc;
};

struct Program {
  std::string fileName;
  std::vector<std::string> params;
  std::vector<ArrayDecl> arrays;
  std::vector<ScalarDecl> scalars;
  std::vector<StmtPtr> body;

  const ArrayDecl *findArray(const std::string &n) const;
  const ScalarDecl *findScalar(const std::string &n) const;
  bool isParam(const std::string &n) const;
};

bool structurallyEqual(const Program &a, const Program &b);

/// Render the program back to kernel-language source. Reparsing the output
/// yields a structurally identical AST.
std::string printProgram(const Program &p);

} // namespace polyrace
