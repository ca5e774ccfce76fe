//===-- LexerImpl.h - Token stream for the kernel language -----*- C++ -*-===//

#pragma once

#include "polyrace/Diag.h"

#include <string>
#include <vector>

namespace polyrace::lex {

enum class Tok { Ident, IntLit, FloatLit, Pragma, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text; // identifier spelling, punctuation, or pragma line
  long long intVal = 0;
  SourceLoc loc;
};

/// Tokenize a whole file. "#pragma ..." lines become single Pragma tokens
/// carrying the full line. Throws SyntaxError on stray characters.
std::vector<Token> tokenize(const std::string &source);

/// Tokenize the text of a pragma line (no pragma recursion, no comments).
std::vector<Token> tokenizePragmaText(const std::string &text, SourceLoc base);

} // namespace polyrace::lex
