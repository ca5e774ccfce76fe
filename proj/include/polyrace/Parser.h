//===-- Parser.h - Kernel language frontend ---------------------*- C++ -*-===//

#pragma once

#include "polyrace/Ast.h"

#include <string>

namespace polyrace {

/// Parse one kernel file. Grammar and semantic errors carry line/column.
/// Unsupported "#pragma omp" constructs are recorded (Construct::Unknown),
/// not rejected; the checker reports their regions NotAnalyzable.
Program parse(const std::string &source, std::string fileName = "<input>");

} // namespace polyrace
