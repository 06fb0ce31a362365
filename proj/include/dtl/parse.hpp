#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dtl/formula.hpp"
#include "dtl/signature.hpp"

namespace dtl {

// recursive-descent parser for the formula syntax
//   global: '@' agent '[' local ']'   with '!', '->', '&', '|'
//   local : prop | '!' | '->' | 'X' | 'G' | 'C' agent '[' local ']'
//           plus sugar '&', '|', 'F', 'true', 'false'
// precedence: unary > '&' > '|' > '->' (right associative)
namespace detail {

struct Token {
  enum Kind { Ident, At, LBrack, RBrack, LParen, RParen, Bang, Arrow, Amp, Bar, End } kind;
  std::string text;
  int line, col;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, int c) {
    out.push_back({k, std::move(t), line, c});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace((unsigned char)c)) { ++col; ++i; continue; }
    int c0 = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum((unsigned char)src[j]) || src[j] == '_')) ++j;
      push(Token::Ident, std::string(src.substr(i, j - i)), c0);
      col += int(j - i); i = j; continue;
    }
    switch (c) {
      case '@': push(Token::At, "@", c0); ++i; ++col; break;
      case '[': push(Token::LBrack, "[", c0); ++i; ++col; break;
      case ']': push(Token::RBrack, "]", c0); ++i; ++col; break;
      case '(': push(Token::LParen, "(", c0); ++i; ++col; break;
      case ')': push(Token::RParen, ")", c0); ++i; ++col; break;
      case '!': push(Token::Bang, "!", c0); ++i; ++col; break;
      case '&': push(Token::Amp, "&", c0); ++i; ++col; break;
      case '|': push(Token::Bar, "|", c0); ++i; ++col; break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          push(Token::Arrow, "->", c0); i += 2; col += 2; break;
        }
        throw ParseError("stray '-' (expected '->')", line, c0);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, c0);
    }
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

class Parser {
  const DistributedSignature& sig_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  Token expect(Token::Kind k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return take();
  }
  bool ident_is(const char* kw) const {
    return peek().kind == Token::Ident && peek().text == kw;
  }

  int agent_ident() {
    Token t = expect(Token::Ident, "an agent name");
    if (!sig_.has_agent(t.text))
      throw ParseError("unknown agent '" + t.text + "'", t.line, t.col);
    return sig_.agent_index(t.text);
  }

  // 'true' for agent i is rendered as p -> p over i's first proposition
  LocalFormula truth(int agent, const Token& at) {
    if (sig_.props(agent).empty())
      throw ParseError("'true'/'false' need at least one proposition for agent '" +
                           sig_.agent_name(agent) + "'",
                       at.line, at.col);
    LocalFormula p = LocalFormula::prop(agent, sig_.props(agent).front());
    return LocalFormula::imp(p, p);
  }

  LocalFormula l_unary(int agent) {
    Token t = peek();
    if (t.kind == Token::Bang) { take(); return LocalFormula::neg(l_unary(agent)); }
    if (ident_is("X")) { take(); return LocalFormula::next(l_unary(agent)); }
    if (ident_is("G")) { take(); return LocalFormula::always(l_unary(agent)); }
    if (ident_is("F")) {  // F x == !G!x
      take();
      return LocalFormula::neg(LocalFormula::always(LocalFormula::neg(l_unary(agent))));
    }
    if (ident_is("C")) {
      take();
      int peer = agent_ident();
      expect(Token::LBrack, "'['");
      LocalFormula body = l_imp(peer);
      expect(Token::RBrack, "']'");
      return LocalFormula::comm(agent, peer, body);
    }
    if (ident_is("true")) { take(); return truth(agent, t); }
    if (ident_is("false")) { take(); return LocalFormula::neg(truth(agent, t)); }
    if (t.kind == Token::LParen) {
      take();
      LocalFormula f = l_imp(agent);
      expect(Token::RParen, "')'");
      return f;
    }
    if (t.kind == Token::Ident) {
      take();
      int owner = sig_.owner_of(t.text);
      if (owner < 0)
        throw ParseError("unknown proposition '" + t.text + "'", t.line, t.col);
      if (owner != agent)
        throw ParseError("proposition '" + t.text + "' belongs to agent '" +
                             sig_.agent_name(owner) + "', not '" +
                             sig_.agent_name(agent) + "'",
                         t.line, t.col);
      return LocalFormula::prop(agent, t.text);
    }
    fail("expected a local formula");
  }

  LocalFormula l_and(int agent) {
    LocalFormula f = l_unary(agent);
    while (peek().kind == Token::Amp) {
      take();
      LocalFormula g = l_unary(agent);
      // a & b == !(a -> !b)
      f = LocalFormula::neg(LocalFormula::imp(f, LocalFormula::neg(g)));
    }
    return f;
  }

  LocalFormula l_or(int agent) {
    LocalFormula f = l_and(agent);
    while (peek().kind == Token::Bar) {
      take();
      LocalFormula g = l_and(agent);
      // a | b == !a -> b
      f = LocalFormula::imp(LocalFormula::neg(f), g);
    }
    return f;
  }

  LocalFormula l_imp(int agent) {
    LocalFormula f = l_or(agent);
    if (peek().kind == Token::Arrow) {
      take();
      return LocalFormula::imp(f, l_imp(agent));
    }
    return f;
  }

  GlobalFormula g_unary() {
    Token t = peek();
    if (t.kind == Token::Bang) { take(); return GlobalFormula::neg(g_unary()); }
    if (t.kind == Token::At) {
      take();
      int agent = agent_ident();
      expect(Token::LBrack, "'['");
      LocalFormula body = l_imp(agent);
      expect(Token::RBrack, "']'");
      return GlobalFormula::at(agent, body);
    }
    if (t.kind == Token::LParen) {
      take();
      GlobalFormula f = g_imp();
      expect(Token::RParen, "')'");
      return f;
    }
    fail("expected '@', '!' or '('");
  }

  GlobalFormula g_and() {
    GlobalFormula f = g_unary();
    while (peek().kind == Token::Amp) {
      take();
      GlobalFormula g = g_unary();
      f = GlobalFormula::neg(GlobalFormula::imp(f, GlobalFormula::neg(g)));
    }
    return f;
  }

  GlobalFormula g_or() {
    GlobalFormula f = g_and();
    while (peek().kind == Token::Bar) {
      take();
      GlobalFormula g = g_and();
      f = GlobalFormula::imp(GlobalFormula::neg(f), g);
    }
    return f;
  }

  GlobalFormula g_imp() {
    GlobalFormula f = g_or();
    if (peek().kind == Token::Arrow) {
      take();
      return GlobalFormula::imp(f, g_imp());
    }
    return f;
  }

 public:
  Parser(std::string_view src, const DistributedSignature& sig)
      : sig_(sig), toks_(lex(src)) {}

  GlobalFormula global() {
    GlobalFormula f = g_imp();
    if (peek().kind != Token::End) fail("trailing input after formula");
    return f;
  }
  LocalFormula local(int agent) {
    LocalFormula f = l_imp(agent);
    if (peek().kind != Token::End) fail("trailing input after formula");
    return f;
  }
};

}  // namespace detail

inline GlobalFormula parse_global(std::string_view src, const DistributedSignature& sig) {
  return detail::Parser(src, sig).global();
}

inline LocalFormula parse_local(std::string_view src, const DistributedSignature& sig, int agent) {
  return detail::Parser(src, sig).local(agent);
}

inline LocalFormula parse_local(std::string_view src, const DistributedSignature& sig,
                                const std::string& agent) {
  return parse_local(src, sig, sig.agent_index(agent));
}

}  // namespace dtl
