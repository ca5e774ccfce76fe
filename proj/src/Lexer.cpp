//===-- Lexer.cpp - Tokenizer for the kernel language ----------------------===//

#include "LexerImpl.h"

#include <cctype>

namespace polyrace::lex {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Cursor {
  const std::string &src;
  size_t pos = 0;
  int line = 1, col = 1;

  bool done() const { return pos >= src.size(); }
  char peek(size_t k = 0) const {
    return pos + k < src.size() ? src[pos + k] : '\0';
  }
  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  SourceLoc loc() const { return {line, col}; }
};

// Longest-match punctuation table.
const char *kPuncts[] = {"<=", ">=", "==", "!=", "++", "--", "+=", "-=",
                         "*=", "&&", "||", "(",  ")",  "[",  "]",  "{",
                         "}",  ";",  ",",  "<",  ">",  "=",  "+",  "-",
                         "*",  "/",  "%",  ":"};

} // namespace

std::vector<Token> tokenize(const std::string &source) {
  std::vector<Token> out;
  Cursor c{source};
  bool atLineStart = true;

  while (!c.done()) {
    char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      c.advance();
      continue;
    }
    if (ch == '\n') {
      c.advance();
      atLineStart = true;
      continue;
    }
    if (ch == '/' && c.peek(1) == '/') {
      while (!c.done() && c.peek() != '\n')
        c.advance();
      continue;
    }
    if (ch == '/' && c.peek(1) == '*') {
      SourceLoc start = c.loc();
      c.advance();
      c.advance();
      while (!c.done() && !(c.peek() == '*' && c.peek(1) == '/'))
        c.advance();
      if (c.done())
        throw SyntaxError("unterminated comment", start);
      c.advance();
      c.advance();
      continue;
    }
    if (ch == '#') {
      if (!atLineStart)
        throw SyntaxError("'#' must start a line", c.loc());
      Token t;
      t.kind = Tok::Pragma;
      t.loc = c.loc();
      std::string text;
      while (!c.done() && c.peek() != '\n')
        text += c.advance();
      t.text = text;
      out.push_back(std::move(t));
      continue;
    }
    atLineStart = false;
    if (identStart(ch)) {
      Token t;
      t.kind = Tok::Ident;
      t.loc = c.loc();
      while (!c.done() && identChar(c.peek()))
        t.text += c.advance();
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      Token t;
      t.loc = c.loc();
      std::string text;
      bool isFloat = false;
      while (!c.done() &&
             (std::isdigit(static_cast<unsigned char>(c.peek())) ||
              c.peek() == '.' || c.peek() == 'e' || c.peek() == 'E' ||
              ((c.peek() == '+' || c.peek() == '-') &&
               (text.ends_with("e") || text.ends_with("E"))))) {
        char d = c.advance();
        if (d == '.' || d == 'e' || d == 'E')
          isFloat = true;
        text += d;
      }
      if (isFloat) {
        t.kind = Tok::FloatLit;
        t.text = text;
      } else {
        t.kind = Tok::IntLit;
        try {
          t.intVal = std::stoll(text);
        } catch (const std::exception &) {
          throw SyntaxError("integer literal out of range", t.loc);
        }
        t.text = text;
      }
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char *p : kPuncts) {
      size_t len = std::string(p).size();
      if (source.compare(c.pos, len, p) == 0) {
        Token t;
        t.kind = Tok::Punct;
        t.loc = c.loc();
        t.text = p;
        for (size_t i = 0; i < len; ++i)
          c.advance();
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched)
      throw SyntaxError(std::string("unexpected character '") + ch + "'",
                        c.loc());
  }
  Token end;
  end.kind = Tok::End;
  end.loc = c.loc();
  out.push_back(end);
  return out;
}

std::vector<Token> tokenizePragmaText(const std::string &text,
                                      SourceLoc base) {
  std::vector<Token> out;
  size_t pos = 0;
  auto loc = [&](size_t p) {
    return SourceLoc{base.line, base.col + static_cast<int>(p)};
  };
  while (pos < text.size()) {
    char ch = text[pos];
    if (ch == ' ' || ch == '\t') {
      ++pos;
      continue;
    }
    if (identStart(ch)) {
      Token t;
      t.kind = Tok::Ident;
      t.loc = loc(pos);
      while (pos < text.size() && identChar(text[pos]))
        t.text += text[pos++];
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      Token t;
      t.kind = Tok::IntLit;
      t.loc = loc(pos);
      std::string digits;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos])))
        digits += text[pos++];
      t.intVal = std::stoll(digits);
      t.text = digits;
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char *p : kPuncts) {
      size_t len = std::string(p).size();
      if (text.compare(pos, len, p) == 0) {
        Token t;
        t.kind = Tok::Punct;
        t.loc = loc(pos);
        t.text = p;
        pos += len;
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched)
      throw SyntaxError(std::string("unexpected character '") + ch +
                            "' in pragma",
                        loc(pos));
  }
  Token end;
  end.kind = Tok::End;
  end.loc = loc(text.size());
  out.push_back(end);
  return out;
}

} // namespace polyrace::lex
