//===-- Interp.h - Reference interpreter for kernel programs ---*- C++ -*-===//
//
// Sequential execution of a kernel with concrete parameter values,
// recording every memory touch. Race and dependence oracles are built on
// the touch log; nothing here consults the polyhedral machinery.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "polyrace/Ast.h"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

using polyrace::Expr;
using polyrace::Program;
using polyrace::Stmt;

struct Touch {
  std::string array;           // scalars are rank-0
  std::vector<long> cell;
  bool isWrite = false;
  const Stmt *stmt = nullptr;
  std::map<std::string, long> iter; // active loop variables
  long seq = 0;                     // sequential order of the touch
};

class Interp {
public:
  Interp(const Program &p, std::map<std::string, long> params)
      : prog_(p), env_(std::move(params)) {}

  std::vector<Touch> run() {
    touches_.clear();
    seq_ = 0;
    for (const auto &s : prog_.body)
      exec(*s);
    return std::move(touches_);
  }

private:
  const Program &prog_;
  std::map<std::string, long> env_; // params + loop vars + scalar values
  std::map<std::string, long> loops_;
  std::vector<Touch> touches_;
  long seq_ = 0;

  long eval(const Expr &e) {
    switch (e.kind) {
    case Expr::Kind::IntLit:
      return e.intValue;
    case Expr::Kind::FloatLit:
      return 0;
    case Expr::Kind::Var: {
      auto it = env_.find(e.name);
      return it == env_.end() ? 0 : it->second;
    }
    case Expr::Kind::ArrayRef: {
      std::vector<long> cell;
      for (const auto &a : e.args)
        cell.push_back(eval(*a));
      auto it = arrays_.find(e.name);
      if (it == arrays_.end())
        return 0;
      auto jt = it->second.find(cell);
      return jt == it->second.end() ? 0 : jt->second;
    }
    case Expr::Kind::Neg:
      return -eval(*e.args[0]);
    case Expr::Kind::Binary: {
      long l = eval(*e.args[0]);
      long r = eval(*e.args[1]);
      switch (e.op) {
      case polyrace::BinOp::Add:
        return l + r;
      case polyrace::BinOp::Sub:
        return l - r;
      case polyrace::BinOp::Mul:
        return l * r;
      case polyrace::BinOp::Div:
        return r == 0 ? 0 : l / r;
      case polyrace::BinOp::Mod:
        return r == 0 ? 0 : l % r;
      }
      return 0;
    }
    case Expr::Kind::MinMax: {
      long l = eval(*e.args[0]);
      long r = eval(*e.args[1]);
      return e.isMin ? std::min(l, r) : std::max(l, r);
    }
    }
    return 0;
  }

  void touch(const std::string &array, std::vector<long> cell, bool isWrite,
             const Stmt *stmt) {
    Touch t;
    t.array = array;
    t.cell = std::move(cell);
    t.isWrite = isWrite;
    t.stmt = stmt;
    t.iter = loops_;
    t.seq = seq_++;
    touches_.push_back(std::move(t));
  }

  bool isMemoryVar(const std::string &n) const {
    if (loops_.count(n))
      return false;
    if (prog_.isParam(n))
      return false;
    return prog_.findScalar(n) != nullptr || prog_.findArray(n) != nullptr;
  }

  void readExpr(const Expr &e, const Stmt *stmt) {
    switch (e.kind) {
    case Expr::Kind::Var:
      if (isMemoryVar(e.name))
        touch(e.name, {}, false, stmt);
      return;
    case Expr::Kind::ArrayRef: {
      for (const auto &a : e.args)
        readExpr(*a, stmt);
      std::vector<long> cell;
      for (const auto &a : e.args)
        cell.push_back(eval(*a));
      touch(e.name, std::move(cell), false, stmt);
      return;
    }
    default:
      for (const auto &a : e.args)
        readExpr(*a, stmt);
      return;
    }
  }

  void exec(const Stmt &s) {
    switch (s.kind) {
    case Stmt::Kind::Block:
      for (const auto &c : s.body)
        exec(*c);
      return;
    case Stmt::Kind::Omp:
      for (const auto &c : s.body)
        exec(*c); // sequential semantics
      return;
    case Stmt::Kind::For: {
      long v = eval(*s.init);
      for (;;) {
        long b = eval(*s.bound);
        bool cont;
        switch (s.cmp) {
        case polyrace::CmpOp::LT:
          cont = v < b;
          break;
        case polyrace::CmpOp::LE:
          cont = v <= b;
          break;
        case polyrace::CmpOp::GT:
          cont = v > b;
          break;
        case polyrace::CmpOp::GE:
          cont = v >= b;
          break;
        }
        if (!cont)
          break;
        loops_[s.loopVar] = v;
        env_[s.loopVar] = v;
        exec(*s.body[0]);
        v += s.step;
      }
      loops_.erase(s.loopVar);
      env_.erase(s.loopVar);
      return;
    }
    case Stmt::Kind::Assign: {
      // reads before the write, like hardware would observe
      const Expr &lhs = *s.lhs;
      for (const auto &sub : lhs.args)
        readExpr(*sub, &s);
      if (s.assignOp != polyrace::AssignOp::Assign) {
        // compound: the target is read too
        if (lhs.kind == Expr::Kind::Var) {
          if (isMemoryVar(lhs.name))
            touch(lhs.name, {}, false, &s);
        } else {
          std::vector<long> cell;
          for (const auto &a : lhs.args)
            cell.push_back(eval(*a));
          touch(lhs.name, std::move(cell), false, &s);
        }
      }
      readExpr(*s.rhs, &s);
      long val = eval(*s.rhs);
      if (lhs.kind == Expr::Kind::Var) {
        if (isMemoryVar(lhs.name)) {
          touch(lhs.name, {}, true, &s);
          long old = env_.count(lhs.name) ? env_[lhs.name] : 0;
          switch (s.assignOp) {
          case polyrace::AssignOp::Assign:
            env_[lhs.name] = val;
            break;
          case polyrace::AssignOp::AddAssign:
            env_[lhs.name] = old + val;
            break;
          case polyrace::AssignOp::SubAssign:
            env_[lhs.name] = old - val;
            break;
          case polyrace::AssignOp::MulAssign:
            env_[lhs.name] = old * val;
            break;
          }
        }
      } else {
        std::vector<long> cell;
        for (const auto &a : lhs.args)
          cell.push_back(eval(*a));
        long old = arrays_[lhs.name].count(cell) ? arrays_[lhs.name][cell] : 0;
        long nv = val;
        switch (s.assignOp) {
        case polyrace::AssignOp::AddAssign:
          nv = old + val;
          break;
        case polyrace::AssignOp::SubAssign:
          nv = old - val;
          break;
        case polyrace::AssignOp::MulAssign:
          nv = old * val;
          break;
        default:
          break;
        }
        touch(lhs.name, cell, true, &s);
        arrays_[lhs.name][cell] = nv;
      }
      return;
    }
    }
  }

  std::map<std::string, std::map<std::vector<long>, long>> arrays_;
};

inline std::vector<Touch> interpret(const Program &p,
                                    std::map<std::string, long> params) {
  return Interp(p, std::move(params)).run();
}

/// Restrict an iteration map to the given variables, in order.
inline std::vector<long> restrict(const std::map<std::string, long> &iter,
                                  const std::vector<std::string> &vars) {
  std::vector<long> out;
  for (const auto &v : vars) {
    auto it = iter.find(v);
    out.push_back(it == iter.end() ? 0 : it->second);
  }
  return out;
}

/// Brute-force race oracle: does some pair of touches on the same cell,
/// at least one write, both eligible, agree on `outerVars` but differ on
/// `parallelVars`?
struct RaceOracleInput {
  std::vector<Touch> touches;                // already filtered to the region
  std::vector<std::string> parallelVars;     // collapsed dims
  std::vector<std::string> outerVars;        // sequential enclosing loops
  std::function<bool(const Touch &)> eligible;
};

inline bool raceOracle(const RaceOracleInput &in) {
  struct Group {
    std::set<std::vector<long>> tuples;
    std::set<std::vector<long>> writeTuples;
  };
  std::map<std::pair<std::string, std::vector<long>>,
           std::map<std::vector<long>, Group>>
      groups;
  for (const Touch &t : in.touches) {
    if (!in.eligible(t))
      continue;
    auto outer = restrict(t.iter, in.outerVars);
    auto par = restrict(t.iter, in.parallelVars);
    Group &g = groups[{t.array, t.cell}][outer];
    g.tuples.insert(par);
    if (t.isWrite)
      g.writeTuples.insert(par);
  }
  for (const auto &[cellKey, byOuter] : groups)
    for (const auto &[outer, g] : byOuter)
      if (!g.writeTuples.empty() && g.tuples.size() >= 2)
        return true;
  return false;
}

} // namespace testsupport
