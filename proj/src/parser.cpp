#include <cctype>
#include <optional>

#include "acyclify/formula.hpp"

namespace acyclify {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Zero, LParen, RParen, Not, And, Or, Arrow, Equals, Dot, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (identStart(c)) {
      std::size_t j = i;
      while (j < text.size() && identChar(text[j])) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && identChar(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (word != "0") throw ParseError(l, cl, "variable '" + word + "' must not start with a digit");
      out.push_back({Tok::Zero, word, l, cl});
      advance(1);
      continue;
    }
    Tok kind;
    std::size_t width = 1;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '~': kind = Tok::Not; break;
      case '&': kind = Tok::And; break;
      case '|': kind = Tok::Or; break;
      case '=': kind = Tok::Equals; break;
      case '.': kind = Tok::Dot; break;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          kind = Tok::Arrow;
          width = 2;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(text.substr(i, width)), l, cl});
    advance(width);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool reserved(const std::string& s) { return s == "E" || s == "A" || s == "in"; }

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options)
      : tokens_(std::move(tokens)), options_(options) {}

  Formula parseAll() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(t.line, t.column, message);
  }

  bool atQuantifier() const {
    return peek().kind == Tok::Ident && (peek().text == "E" || peek().text == "A");
  }

  Formula formula() {
    if (atQuantifier()) return quantified();
    return implication();
  }

  Formula quantified() {
    const bool existential = take().text == "E";
    Var v = variable();
    if (peek().kind != Tok::Dot) fail(peek(), "expected '.' after quantified variable");
    take();
    Formula body = formula();
    return existential ? Formula::exists(std::move(v), body) : Formula::forall(std::move(v), body);
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::implies(lhs, formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      acc = Formula::disj(acc, conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = negation();
    while (peek().kind == Tok::And) {
      take();
      acc = Formula::conj(acc, negation());
    }
    return acc;
  }

  Formula negation() {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      take();
      return Formula::negate(negation());
    }
    if (atQuantifier()) return quantified();
    if (t.kind == Tok::LParen) {
      take();
      Formula inner = formula();
      if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
      take();
      return inner;
    }
    return atom();
  }

  Formula atom() {
    if (peek().kind == Tok::Zero) fail(peek(), "constant '0' may only appear on the right of '='");
    Var lhs = variable();
    const Token& rel = peek();
    bool membership;
    if (rel.kind == Tok::Ident && rel.text == "in") {
      membership = true;
    } else if (rel.kind == Tok::Equals) {
      membership = false;
    } else {
      fail(rel, "expected 'in' or '='");
    }
    take();
    if (peek().kind == Tok::Zero) {
      const Token& z = take();
      if (membership) fail(z, "constant '0' may only appear on the right of '='");
      if (!options_.allowConstant) fail(z, "constant '0' is not enabled");
      return Formula::eqConst(std::move(lhs));
    }
    Var rhs = variable();
    return membership ? Formula::mem(std::move(lhs), std::move(rhs)) : Formula::eq(std::move(lhs), std::move(rhs));
  }

  Var variable() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, t.kind == Tok::End ? "expected variable, found end of input"
                                                          : "expected variable, found '" + t.text + "'");
    if (reserved(t.text)) fail(t, "reserved word '" + t.text + "' cannot be used as a variable");
    if (!options_.allowGenerated && t.text.size() >= 2 && t.text.compare(0, 2, "_g") == 0)
      fail(t, "names starting with '_g' are reserved for generated variables");
    take();
    return Var(t.text);
  }

  std::vector<Token> tokens_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text, const ParseOptions& options) {
  Parser p(tokenize(text), options);
  return p.parseAll();
}

}  // namespace acyclify
