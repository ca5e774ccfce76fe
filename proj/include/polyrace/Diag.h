//===-- Diag.h - Source locations and structured errors ---------*- C++ -*-===//
//
// Every failure the tool can produce is one of these exception types. The
// race checker catches them per region and degrades to NotAnalyzable; they
// escape to the CLI only for file-level problems (unparseable input, bad
// manifest), which map to exit codes >= 64.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <stdexcept>
#include <string>

namespace polyrace {

struct SourceLoc {
  int line = 0; // 1-based; 0 means "no location"
  int col = 0;

  bool valid() const { return line > 0; }
  std::string str() const {
    if (!valid())
      return "";
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

class Error : public std::runtime_error {
public:
  Error(std::string msg, SourceLoc loc = {})
      : std::runtime_error(loc.valid() ? loc.str() + ": " + msg : msg),
        loc_(loc) {}
  SourceLoc loc() const { return loc_; }

private:
  SourceLoc loc_;
};

/// Malformed kernel text.
class SyntaxError : public Error {
public:
  using Error::Error;
};

/// Well-formed text with inconsistent meaning (undeclared identifier,
/// duplicate induction variable, write to a parameter, ...).
class SemanticError : public Error {
public:
  using Error::Error;
};

/// Constraint system exceeded the engine's size guard. Regions that trip
/// this are reported NotAnalyzable rather than crashing.
class DimensionLimit : public Error {
public:
  using Error::Error;
};

/// Relation/set operands with incompatible tuple sizes.
class ArityMismatch : public Error {
public:
  using Error::Error;
};

/// Dependence computation asked for on a region that is not fully affine.
class NotAffineError : public Error {
public:
  using Error::Error;
};

/// Region contains a construct the analyzer only parses (single, critical,
/// sections, ...). Maps to a NotAnalyzable verdict naming the construct.
class UnsupportedConstruct : public Error {
public:
  using Error::Error;
};

/// Benchmark manifest references a kernel with no verdict.
class MissingVerdict : public Error {
public:
  using Error::Error;
};

/// Benchmark manifest is malformed or references missing files.
class ManifestError : public Error {
public:
  using Error::Error;
};

} // namespace polyrace
