#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colog {

// Parse failure for any of the textual formats. `offset` is the byte
// position in the input where the problem was detected; `expected`
// describes what the reader was looking for.
class SyntaxError : public std::runtime_error {
public:
  SyntaxError(std::size_t offset, std::string expected)
      : std::runtime_error("syntax error at byte " + std::to_string(offset) +
                           ": expected " + expected),
        offset(offset), expected(std::move(expected)) {}

  std::size_t offset;
  std::string expected;
};

// Minimal s-expression tree shared by the formula, model, proof and
// derivation formats. Atoms are kept as raw token strings; numeric
// interpretation is up to the consumer.
struct SExpr {
  enum class Kind { Symbol, List };

  Kind kind = Kind::Symbol;
  std::string sym;          // Kind::Symbol
  std::vector<SExpr> items; // Kind::List
  std::size_t offset = 0;   // byte offset of the token or '('

  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_list() const { return kind == Kind::List; }

  bool is_symbol(std::string_view s) const {
    return kind == Kind::Symbol && sym == s;
  }

  // Head symbol of a list, or "" when not applicable.
  std::string_view head() const {
    if (kind != Kind::List || items.empty() || !items[0].is_symbol())
      return {};
    return items[0].sym;
  }
};

namespace detail {

inline bool sexpr_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

inline bool sexpr_token_char(char c) {
  return !sexpr_space(c) && c != '(' && c != ')' && c != ';';
}

inline void skip_space(std::string_view text, std::size_t &pos) {
  while (pos < text.size()) {
    if (sexpr_space(text[pos])) {
      ++pos;
    } else if (text[pos] == ';') { // line comment
      while (pos < text.size() && text[pos] != '\n')
        ++pos;
    } else {
      break;
    }
  }
}

inline SExpr read_sexpr_at(std::string_view text, std::size_t &pos) {
  skip_space(text, pos);
  if (pos >= text.size())
    throw SyntaxError(pos, "an s-expression");

  SExpr node;
  node.offset = pos;
  if (text[pos] == '(') {
    ++pos;
    node.kind = SExpr::Kind::List;
    for (;;) {
      skip_space(text, pos);
      if (pos >= text.size())
        throw SyntaxError(pos, "')'");
      if (text[pos] == ')') {
        ++pos;
        return node;
      }
      node.items.push_back(read_sexpr_at(text, pos));
    }
  }
  if (text[pos] == ')')
    throw SyntaxError(pos, "a token or '('");

  std::size_t start = pos;
  while (pos < text.size() && sexpr_token_char(text[pos]))
    ++pos;
  node.kind = SExpr::Kind::Symbol;
  node.sym = std::string(text.substr(start, pos - start));
  return node;
}

} // namespace detail

// Reads exactly one s-expression; trailing garbage is an error.
inline SExpr read_sexpr(std::string_view text) {
  std::size_t pos = 0;
  SExpr node = detail::read_sexpr_at(text, pos);
  detail::skip_space(text, pos);
  if (pos != text.size())
    throw SyntaxError(pos, "end of input");
  return node;
}

// Reads a whole file worth of top-level forms.
inline std::vector<SExpr> read_sexpr_seq(std::string_view text) {
  std::vector<SExpr> forms;
  std::size_t pos = 0;
  for (;;) {
    detail::skip_space(text, pos);
    if (pos >= text.size())
      return forms;
    forms.push_back(detail::read_sexpr_at(text, pos));
  }
}

// Integer field helper used by the model/proof readers.
inline int sexpr_int(const SExpr &node, const char *what) {
  if (!node.is_symbol() || node.sym.empty())
    throw SyntaxError(node.offset, what);
  std::size_t i = node.sym[0] == '-' ? 1 : 0;
  if (i == node.sym.size())
    throw SyntaxError(node.offset, what);
  for (; i < node.sym.size(); ++i)
    if (node.sym[i] < '0' || node.sym[i] > '9')
      throw SyntaxError(node.offset, what);
  return std::stoi(node.sym);
}

} // namespace colog
