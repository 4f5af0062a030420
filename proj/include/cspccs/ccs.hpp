#pragma once
// Target terms: asynchronous CCS with name passing and matching.
//
//   T ::= T | T  |  (nu a~) T  |  !c(x~).T  |  c(x~).T  |  c<y~>  |  [x=y]T
//       | 0 | TICK
//
// Outputs carry no continuation.  Matching only fires on equal names.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "names.hpp"

namespace cspccs::ccs {

enum class TK : uint8_t { Par, Res, RepInput, Input, Output, Match, Nil, Success };

struct Term;
using T = std::shared_ptr<const Term>;

struct Term {
  TK k;
  T a, b;                  // Par operands; Res/Input/RepInput/Match body in a
  Name chan;               // Input/RepInput/Output subject; Match lhs
  Name match2;             // Match rhs
  std::vector<Name> args;  // Res bound names, Input parameters, Output arguments
};

inline T mk(Term&& t) { return std::make_shared<const Term>(std::move(t)); }
inline T nil() { static T n = mk({TK::Nil}); return n; }
inline T success() { static T s = mk({TK::Success}); return s; }
inline T out(Name c, std::vector<Name> xs = {}) {
  Term t{TK::Output};
  t.chan = c;
  t.args = std::move(xs);
  return mk(std::move(t));
}
inline T in(Name c, std::vector<Name> xs, T body) {
  Term t{TK::Input};
  t.chan = c;
  t.args = std::move(xs);
  t.a = std::move(body);
  return mk(std::move(t));
}
inline T repin(Name c, std::vector<Name> xs, T body) {
  Term t{TK::RepInput};
  t.chan = c;
  t.args = std::move(xs);
  t.a = std::move(body);
  return mk(std::move(t));
}
inline T match(Name x, Name y, T body) {
  Term t{TK::Match};
  t.chan = x;
  t.match2 = y;
  t.a = std::move(body);
  return mk(std::move(t));
}
inline T par2(T l, T r) {
  if (l->k == TK::Nil) return r;
  if (r->k == TK::Nil) return l;
  Term t{TK::Par};
  t.a = std::move(l);
  t.b = std::move(r);
  return mk(std::move(t));
}
inline T par(std::vector<T> ts) {
  T acc = nil();
  for (auto& t : ts) acc = par2(acc, std::move(t));
  return acc;
}
inline T res(std::vector<Name> ns, T body) {
  if (ns.empty()) return body;
  Term t{TK::Res};
  t.args = std::move(ns);
  t.a = std::move(body);
  return mk(std::move(t));
}

// ---- free names ----

inline void freeNamesInto(const T& t, std::set<Name>& bound, std::set<Name>& out) {
  auto use = [&](Name n) {
    if (n.valid() && !bound.count(n)) out.insert(n);
  };
  switch (t->k) {
    case TK::Nil: case TK::Success: return;
    case TK::Par:
      freeNamesInto(t->a, bound, out);
      freeNamesInto(t->b, bound, out);
      return;
    case TK::Res: {
      std::vector<Name> added;
      for (Name n : t->args)
        if (bound.insert(n).second) added.push_back(n);
      freeNamesInto(t->a, bound, out);
      for (Name n : added) bound.erase(n);
      return;
    }
    case TK::Output:
      use(t->chan);
      for (Name n : t->args) use(n);
      return;
    case TK::Input: case TK::RepInput: {
      use(t->chan);
      std::vector<Name> added;
      for (Name n : t->args)
        if (bound.insert(n).second) added.push_back(n);
      freeNamesInto(t->a, bound, out);
      for (Name n : added) bound.erase(n);
      return;
    }
    case TK::Match:
      use(t->chan);
      use(t->match2);
      freeNamesInto(t->a, bound, out);
      return;
  }
}
inline std::set<Name> freeNames(const T& t) {
  std::set<Name> bound, out;
  freeNamesInto(t, bound, out);
  return out;
}

// ---- capture-avoiding simultaneous substitution ----

inline T subst(const T& t, const std::map<Name, Name>& sub);

namespace detail {
inline Name applySub(Name n, const std::map<Name, Name>& sub) {
  if (!n.valid()) return n;
  auto it = sub.find(n);
  return it == sub.end() ? n : it->second;
}
// Rename binders that would clash with the substitution's domain or image.
inline T substUnderBinder(const T& t, std::vector<Name> binders, const T& body,
                          const std::map<Name, Name>& sub, TK kind, Name chan) {
  std::map<Name, Name> inner = sub;
  std::set<Name> images;
  for (auto& [from, to] : sub) images.insert(to);
  std::map<Name, Name> alpha;
  for (Name& bnd : binders) {
    inner.erase(bnd);
    if (images.count(bnd)) {
      Name fresh = names().fresh(names().role(bnd) == Role::Canon ? names().canonRole(bnd)
                                                                  : names().role(bnd),
                                 names().text(bnd));
      alpha[bnd] = fresh;
      inner[bnd] = fresh;
      bnd = fresh;
    }
  }
  T nb = subst(body, inner);
  Term r{kind};
  r.chan = applySub(chan, sub);
  r.args = std::move(binders);
  r.a = std::move(nb);
  return mk(std::move(r));
}
}  // namespace detail

inline T subst(const T& t, const std::map<Name, Name>& sub) {
  using detail::applySub;
  if (sub.empty()) return t;
  switch (t->k) {
    case TK::Nil: case TK::Success: return t;
    case TK::Par: return par2(subst(t->a, sub), subst(t->b, sub));
    case TK::Res: return detail::substUnderBinder(t, t->args, t->a, sub, TK::Res, Name{});
    case TK::Output: {
      std::vector<Name> xs;
      for (Name n : t->args) xs.push_back(applySub(n, sub));
      return out(applySub(t->chan, sub), std::move(xs));
    }
    case TK::Input: case TK::RepInput:
      return detail::substUnderBinder(t, t->args, t->a, sub, t->k, t->chan);
    case TK::Match:
      return match(applySub(t->chan, sub), applySub(t->match2, sub), subst(t->a, sub));
  }
  return t;
}

// TICK unguarded anywhere under parallel/restriction/satisfied match.
inline bool hasSuccess(const T& t) {
  switch (t->k) {
    case TK::Success: return true;
    case TK::Par: return hasSuccess(t->a) || hasSuccess(t->b);
    case TK::Res: return hasSuccess(t->a);
    case TK::Match: return t->chan == t->match2 && hasSuccess(t->a);
    default: return false;
  }
}

// ---- printing ----

inline std::string print(const T& t) {
  auto list = [](const std::vector<Name>& ns) {
    std::string s;
    for (size_t i = 0; i < ns.size(); i++) s += (i ? "," : "") + nameText(ns[i]);
    return s;
  };
  switch (t->k) {
    case TK::Nil: return "0";
    case TK::Success: return "TICK";
    case TK::Output: return nameText(t->chan) + "<" + list(t->args) + ">";
    case TK::Input: case TK::RepInput: {
      std::string body = print(t->a);
      bool wrap = t->a->k == TK::Par;
      return std::string(t->k == TK::RepInput ? "!" : "") + nameText(t->chan) + "(" +
             list(t->args) + ")." + (wrap ? "(" + body + ")" : body);
    }
    case TK::Match: {
      std::string body = print(t->a);
      bool wrap = t->a->k == TK::Par;
      return "[" + nameText(t->chan) + "=" + nameText(t->match2) + "]" +
             (wrap ? "(" + body + ")" : body);
    }
    case TK::Res: {
      std::string body = print(t->a);
      bool wrap = t->a->k == TK::Par;
      return "(new " + list(t->args) + ") " + (wrap ? "(" + body + ")" : body);
    }
    case TK::Par: {
      auto wrapSide = [](const T& s) {
        std::string b = print(s);
        return s->k == TK::Par ? b : b;  // Par is associative; flat printing
      };
      return wrapSide(t->a) + " | " + wrapSide(t->b);
    }
  }
  return "?";
}

}  // namespace cspccs::ccs
