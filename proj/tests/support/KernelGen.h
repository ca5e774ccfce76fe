//===-- KernelGen.h - Random affine kernel generator -----------*- C++ -*-===//
//
// Generates small fully affine kernels with one parallel pragma at a known
// nest depth, plus the metadata the brute-force oracle needs (parallel and
// outer loop variables, clause-exempt names, canonical reduction lines).
//
//===----------------------------------------------------------------------===//

#pragma once

#include "Interp.h"

#include <random>
#include <set>
#include <sstream>

namespace testsupport {

struct GenKernel {
  std::string source;
  std::vector<std::string> parallelVars; // collapsed dims of the pragma loop
  std::vector<std::string> outerVars;    // sequential enclosing loops
  std::set<std::string> privateNames;    // clause-private scalars
  std::string reductionVar;              // empty if none
  std::set<int> reductionLines;          // canonical update statements
};

class KernelGen {
public:
  explicit KernelGen(unsigned seed) : rng_(seed) {}

  GenKernel next() {
    GenKernel k;
    lines_.clear();
    line_ = 1;

    int depth = pick(1, 3);
    std::vector<int> extents;
    for (int i = 0; i < depth; ++i)
      extents.push_back(pick(2, 6));
    int pragmaDepth = pick(0, depth - 1);
    int maxCollapse = depth - pragmaDepth;
    int collapse = pick(0, 2) == 0 ? std::min(2, maxCollapse) : 1;

    int nArrays = pick(1, 2);
    std::vector<int> ranks;
    for (int i = 0; i < nArrays; ++i)
      ranks.push_back(pick(1, 2));

    bool useShared = pick(0, 2) == 0;
    bool usePrivate = pick(0, 1) == 0;
    bool useReduction = pick(0, 2) == 0;

    // declarations
    {
      std::ostringstream os;
      for (int i = 0; i < nArrays; ++i) {
        os << "double a" << i;
        for (int r = 0; r < ranks[i]; ++r)
          os << "[8]";
        os << "; ";
      }
      if (useShared)
        os << "double s; ";
      if (usePrivate)
        os << "double t; ";
      if (useReduction)
        os << "double r; ";
      emit(os.str());
    }

    for (int i = 0; i < depth; ++i)
      loopVars_.push_back("i" + std::to_string(i));

    k.parallelVars.assign(loopVars_.begin() + pragmaDepth,
                          loopVars_.begin() + pragmaDepth + collapse);
    k.outerVars.assign(loopVars_.begin(), loopVars_.begin() + pragmaDepth);
    if (usePrivate)
      k.privateNames.insert("t");
    if (useReduction)
      k.reductionVar = "r";

    // loop nest
    for (int d = 0; d < depth; ++d) {
      if (d == pragmaDepth) {
        std::ostringstream os;
        os << "#pragma omp parallel for";
        if (collapse > 1)
          os << " collapse(" << collapse << ")";
        if (usePrivate)
          os << " private(t)";
        if (useReduction)
          os << " reduction(+: r)";
        emit(os.str());
      }
      std::ostringstream os;
      os << indent(d) << "for (int " << loopVars_[d] << " = 0; "
         << loopVars_[d] << " < " << extents[d] << "; " << loopVars_[d]
         << "++) {";
      emit(os.str());
      // no statements between collapsed loops
      bool inCollapseGap =
          d >= pragmaDepth && d + 1 < pragmaDepth + collapse;
      if (!inCollapseGap && d + 1 < depth && pick(0, 2) == 0)
        emitStatement(k, d + 1, nArrays, ranks, useShared, usePrivate,
                      useReduction);
    }
    int nStmts = pick(1, 3);
    for (int i = 0; i < nStmts; ++i)
      emitStatement(k, depth, nArrays, ranks, useShared, usePrivate,
                    useReduction);
    for (int d = depth - 1; d >= 0; --d)
      emit(indent(d) + "}");

    std::ostringstream src;
    for (const auto &l : lines_)
      src << l << "\n";
    k.source = src.str();
    loopVars_.clear();
    return k;
  }

  /// Same kernel with "parallel for" replaced by another pragma spelling.
  static std::string withPragma(const std::string &source,
                                const std::string &spelling) {
    std::string out = source;
    std::string from = "#pragma omp parallel for";
    auto pos = out.find(from);
    if (pos != std::string::npos)
      out.replace(pos, from.size(), "#pragma omp " + spelling);
    return out;
  }

private:
  std::mt19937 rng_;
  std::vector<std::string> lines_;
  std::vector<std::string> loopVars_;
  int line_ = 1;

  int pick(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng_);
  }

  static std::string indent(int d) {
    return std::string(static_cast<size_t>(d) * 2, ' ');
  }

  void emit(const std::string &l) {
    lines_.push_back(l);
    ++line_;
  }

  std::string affineSubscript(int activeDepth) {
    // coefficient on one or two active loop vars plus a constant
    std::ostringstream os;
    int var = pick(0, activeDepth - 1);
    int coeff = pick(0, 4) == 0 ? 2 : 1;
    if (coeff != 1)
      os << coeff << " * ";
    os << loopVars_[var];
    if (activeDepth > 1 && pick(0, 3) == 0) {
      int var2 = pick(0, activeDepth - 1);
      if (var2 != var)
        os << " + " << loopVars_[var2];
    }
    int c = pick(-2, 2);
    if (c > 0)
      os << " + " << c;
    else if (c < 0)
      os << " - " << -c;
    return os.str();
  }

  std::string arrayRef(int arrayIdx, int rank, int activeDepth) {
    std::ostringstream os;
    os << "a" << arrayIdx;
    for (int r = 0; r < rank; ++r)
      os << "[" << affineSubscript(activeDepth) << "]";
    return os.str();
  }

  std::string readExpr(int activeDepth, int nArrays,
                       const std::vector<int> &ranks, bool useShared,
                       bool usePrivate) {
    std::ostringstream os;
    int which = pick(0, 3);
    if (which == 3 && useShared)
      os << "s";
    else if (which == 2 && usePrivate)
      os << "t";
    else {
      int a = pick(0, nArrays - 1);
      os << arrayRef(a, ranks[a], activeDepth);
    }
    if (pick(0, 1) == 0) {
      int a = pick(0, nArrays - 1);
      os << " + " << arrayRef(a, ranks[a], activeDepth);
    } else {
      os << " + " << pick(0, 9);
    }
    return os.str();
  }

  void emitStatement(GenKernel &k, int activeDepth, int nArrays,
                     const std::vector<int> &ranks, bool useShared,
                     bool usePrivate, bool useReduction) {
    std::ostringstream os;
    os << indent(activeDepth);
    int kind = pick(0, 5);
    if (kind == 0 && useReduction) {
      os << "r = r + "
         << readExpr(activeDepth, nArrays, ranks, false, usePrivate) << ";";
      k.reductionLines.insert(line_);
      emit(os.str());
      return;
    }
    if (kind == 1 && useShared) {
      os << "s = " << readExpr(activeDepth, nArrays, ranks, false, usePrivate)
         << ";";
      emit(os.str());
      return;
    }
    if (kind == 2 && usePrivate) {
      os << "t = " << readExpr(activeDepth, nArrays, ranks, useShared, false)
         << ";";
      emit(os.str());
      return;
    }
    int a = pick(0, nArrays - 1);
    os << arrayRef(a, ranks[a], activeDepth) << " = "
       << readExpr(activeDepth, nArrays, ranks, useShared, usePrivate) << ";";
    emit(os.str());
  }
};

/// Oracle verdict for a generated kernel: race iff two iterations of the
/// parallel tuple conflict on a cell with an eligible write.
inline bool generatedKernelRaces(const GenKernel &k,
                                 const polyrace::Program &prog) {
  std::vector<Touch> all = interpret(prog, {});
  RaceOracleInput in;
  for (Touch &t : all) {
    bool inRegion = true;
    for (const auto &v : k.parallelVars)
      if (!t.iter.count(v))
        inRegion = false;
    if (inRegion)
      in.touches.push_back(std::move(t));
  }
  in.parallelVars = k.parallelVars;
  in.outerVars = k.outerVars;
  in.eligible = [&k](const Touch &t) {
    if (k.privateNames.count(t.array))
      return false;
    if (!k.reductionVar.empty() && t.array == k.reductionVar)
      return !k.reductionLines.count(t.stmt->loc.line);
    return true;
  };
  return raceOracle(in);
}

} // namespace testsupport
