#pragma once
// Parser for the source-language surface syntax.
//
//   P ::= STOP | DIV | TICK | X | a -> P | P [] P | P |~| P
//       | P |[ a, b ]| P | P / a | rn { a -> b, ... } P | mu X . P | ( P )
//
// Lowercase identifiers are channel names, uppercase identifiers are process
// variables.  Binding tightness: prefix, then / and rn, then [], then |~|,
// then |[ A ]|.  A mu body extends as far right as possible.

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "csp.hpp"

namespace cspccs::csp {

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t at)
      : std::runtime_error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}
};

class Parser {
 public:
  explicit Parser(std::string src) : s_(std::move(src)) {}

  P parse() {
    P p = parsePar();
    skipWs();
    if (i_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  std::string s_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, i_); }

  void skipWs() {
    while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) i_++;
  }
  bool lit(const std::string& tok) {
    skipWs();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    // keyword tokens must not glue onto a following identifier character
    if (std::isalpha((unsigned char)tok[0]) && i_ + tok.size() < s_.size() &&
        (std::isalnum((unsigned char)s_[i_ + tok.size()]) || s_[i_ + tok.size()] == '_'))
      return false;
    i_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!lit(tok)) fail("expected '" + tok + "'");
  }
  bool peekIdent() {
    skipWs();
    return i_ < s_.size() && std::isalpha((unsigned char)s_[i_]);
  }
  std::string ident() {
    skipWs();
    size_t j = i_;
    while (j < s_.size() && (std::isalnum((unsigned char)s_[j]) || s_[j] == '_')) j++;
    if (j == i_) fail("expected identifier");
    std::string t = s_.substr(i_, j - i_);
    i_ = j;
    return t;
  }
  Name channel() {
    std::string t = ident();
    if (std::isupper((unsigned char)t[0])) fail("expected channel name, got variable '" + t + "'");
    return names().source(t);
  }

  P parsePar() {
    P p = parseInt();
    for (;;) {
      skipWs();
      if (s_.compare(i_, 2, "|[") != 0) return p;
      i_ += 2;
      std::vector<Name> sync;
      skipWs();
      if (!lit("]|")) {
        do sync.push_back(channel());
        while (lit(","));
        expect("]|");
      }
      p = par(p, parseInt(), std::move(sync));
    }
  }

  P parseInt() {
    P p = parseSum();
    while (lit("|~|")) p = intchoice(p, parseSum());
    return p;
  }

  P parseSum() {
    P p = parseHide();
    if (!tryLitSumSep()) return p;
    std::vector<Branch> bs = asBranch(p);
    do {
      auto q = parseHide();
      auto more = asBranch(q);
      bs.insert(bs.end(), more.begin(), more.end());
    } while (tryLitSumSep());
    return extsum(std::move(bs));
  }
  bool tryLitSumSep() {
    skipWs();
    // "[]" but not the opening of "|[" handled upstream; plain match:
    if (s_.compare(i_, 2, "[]") == 0) { i_ += 2; return true; }
    return false;
  }
  std::vector<Branch> asBranch(const P& p) {
    if (p->k != SK::ExtSum) fail("external choice operands must be action prefixes");
    return p->branches;
  }

  // '/' hiding and 'rn' renaming bind equally, looser than prefix.
  P parseHide() {
    if (lit("rn")) {
      expect("{");
      std::vector<std::pair<Name, Name>> map;
      skipWs();
      if (!lit("}")) {
        do {
          Name from = channel();
          expect("->");
          map.push_back({from, channel()});
        } while (lit(","));
        expect("}");
      }
      return rename(parseHide(), std::move(map));
    }
    P p = parsePrefix();
    for (;;) {
      skipWs();
      if (i_ < s_.size() && s_[i_] == '/') {
        i_++;
        p = conceal(p, channel());
      } else
        return p;
    }
  }

  P parsePrefix() {
    if (lit("mu")) {
      std::string v = ident();
      if (!std::isupper((unsigned char)v[0])) fail("recursion variable must be uppercase");
      expect(".");
      return mu(names().sourceVar(v), parsePar());
    }
    skipWs();
    if (i_ < s_.size() && s_[i_] == '(') {
      i_++;
      P p = parsePar();
      expect(")");
      return p;
    }
    if (lit("STOP")) return stop();
    if (lit("DIV")) return div();
    if (lit("TICK")) return success();
    if (!peekIdent()) fail("expected process");
    std::string t = ident();
    if (std::isupper((unsigned char)t[0])) return var(names().sourceVar(t));
    Name a = names().source(t);
    expect("->");
    return prefix(a, parsePrefix());
  }
};

inline P parse(const std::string& src) { return Parser(src).parse(); }

}  // namespace cspccs::csp
