#pragma once
// CSP-side terms and their labelled operational semantics.
//
// Syntax: STOP, DIV, TICK (success), process variables, mu-recursion,
// internal choice, external sums of action prefixes, alphabetised parallel,
// concealment, and functional renaming with an explicit finite domain.
// Action prefixes occur only as branches of external sums.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "names.hpp"

namespace cspccs::csp {

enum class SK : uint8_t { Stop, Div, Success, Var, Mu, IntChoice, ExtSum, Par, Conceal, Rename };

struct Proc;
using P = std::shared_ptr<const Proc>;

struct Branch {
  Name act;
  P cont;
};

struct Proc {
  SK k;
  P a, b;                                  // IntChoice/Par operands; Mu/Conceal/Rename body in a
  std::vector<Branch> branches;            // ExtSum
  std::vector<Name> sync;                  // Par synchronisation set (sorted, unique)
  Name n;                                  // Var name, Mu binder, Conceal hidden name
  std::vector<std::pair<Name, Name>> ren;  // Rename map, sorted by domain name
};

inline P mk(Proc&& p) { return std::make_shared<const Proc>(std::move(p)); }
inline P stop() { return mk({SK::Stop}); }
inline P div() { return mk({SK::Div}); }
inline P success() { return mk({SK::Success}); }
inline P var(Name x) { Proc p{SK::Var}; p.n = x; return mk(std::move(p)); }
inline P mu(Name x, P body) { Proc p{SK::Mu}; p.a = body; p.n = x; return mk(std::move(p)); }
inline P intchoice(P l, P r) { Proc p{SK::IntChoice}; p.a = l; p.b = r; return mk(std::move(p)); }
inline P extsum(std::vector<Branch> bs) {
  if (bs.empty()) throw std::invalid_argument("external sum needs at least one branch");
  Proc p{SK::ExtSum};
  p.branches = std::move(bs);
  return mk(std::move(p));
}
inline P prefix(Name a, P cont) { return extsum({{a, cont}}); }
inline P par(P l, P r, std::vector<Name> sync) {
  std::sort(sync.begin(), sync.end());
  sync.erase(std::unique(sync.begin(), sync.end()), sync.end());
  Proc p{SK::Par};
  p.a = l;
  p.b = r;
  p.sync = std::move(sync);
  return mk(std::move(p));
}
inline P conceal(P body, Name hidden) { Proc p{SK::Conceal}; p.a = body; p.n = hidden; return mk(std::move(p)); }
inline P rename(P body, std::vector<std::pair<Name, Name>> map) {
  std::sort(map.begin(), map.end());
  for (size_t i = 0; i + 1 < map.size(); i++)
    if (map[i].first == map[i + 1].first) throw std::invalid_argument("renaming domain not a function");
  Proc p{SK::Rename};
  p.a = body;
  p.ren = std::move(map);
  return mk(std::move(p));
}

// ---- free channel names / free process variables ----

inline void freeNamesInto(const P& p, std::set<Name>& out) {
  switch (p->k) {
    case SK::Stop: case SK::Div: case SK::Success: case SK::Var: return;
    case SK::Mu: freeNamesInto(p->a, out); return;
    case SK::IntChoice: freeNamesInto(p->a, out); freeNamesInto(p->b, out); return;
    case SK::ExtSum:
      for (auto& b : p->branches) { out.insert(b.act); freeNamesInto(b.cont, out); }
      return;
    case SK::Par: freeNamesInto(p->a, out); freeNamesInto(p->b, out); return;
    case SK::Conceal: {
      std::set<Name> inner;
      freeNamesInto(p->a, inner);
      inner.erase(p->n);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case SK::Rename: {
      std::set<Name> inner;
      freeNamesInto(p->a, inner);
      for (Name a : inner) {
        auto it = std::lower_bound(p->ren.begin(), p->ren.end(), std::make_pair(a, Name{}),
                                   [](auto& x, auto& y) { return x.first < y.first; });
        out.insert(it != p->ren.end() && it->first == a ? it->second : a);
      }
      return;
    }
  }
}
inline std::set<Name> freeNames(const P& p) {
  std::set<Name> s;
  freeNamesInto(p, s);
  return s;
}

// Free process variables (those not bound by an enclosing mu).
inline void freeVarsInto(const P& p, std::set<Name>& bound, std::set<Name>& out) {
  switch (p->k) {
    case SK::Stop: case SK::Div: case SK::Success: return;
    case SK::Var:
      if (!bound.count(p->n)) out.insert(p->n);
      return;
    case SK::Mu: {
      bool had = bound.count(p->n);
      bound.insert(p->n);
      freeVarsInto(p->a, bound, out);
      if (!had) bound.erase(p->n);
      return;
    }
    case SK::IntChoice: case SK::Par:
      freeVarsInto(p->a, bound, out);
      freeVarsInto(p->b, bound, out);
      return;
    case SK::ExtSum:
      for (auto& b : p->branches) freeVarsInto(b.cont, bound, out);
      return;
    case SK::Conceal: case SK::Rename: freeVarsInto(p->a, bound, out); return;
  }
}
inline std::set<Name> freeVars(const P& p) {
  std::set<Name> bound, out;
  freeVarsInto(p, bound, out);
  return out;
}
inline bool closed(const P& p) { return freeVars(p).empty(); }

// ---- printing (round-trips through the parser) ----

inline std::string print(const P& p);
namespace detail {
inline std::string printAtom(const P& p) {
  switch (p->k) {
    case SK::Stop: return "STOP";
    case SK::Div: return "DIV";
    case SK::Success: return "TICK";
    case SK::Var: return nameText(p->n);
    default: return "(" + print(p) + ")";
  }
}
}  // namespace detail
inline std::string print(const P& p) {
  using detail::printAtom;
  switch (p->k) {
    case SK::Stop: case SK::Div: case SK::Success: case SK::Var: return printAtom(p);
    case SK::Mu: return "mu " + nameText(p->n) + " . " + printAtom(p->a);
    case SK::IntChoice: return printAtom(p->a) + " |~| " + printAtom(p->b);
    case SK::ExtSum: {
      std::string s;
      for (size_t i = 0; i < p->branches.size(); i++) {
        if (i) s += " [] ";
        s += nameText(p->branches[i].act) + " -> " + printAtom(p->branches[i].cont);
      }
      return s;
    }
    case SK::Par: {
      std::string s = printAtom(p->a) + " |[";
      for (size_t i = 0; i < p->sync.size(); i++) s += (i ? ", " : " ") + nameText(p->sync[i]);
      s += p->sync.empty() ? "]| " : " ]| ";
      return s + printAtom(p->b);
    }
    case SK::Conceal: return printAtom(p->a) + " / " + nameText(p->n);
    case SK::Rename: {
      std::string s = "rn {";
      for (size_t i = 0; i < p->ren.size(); i++)
        s += (i ? ", " : " ") + nameText(p->ren[i].first) + " -> " + nameText(p->ren[i].second);
      return s + " } " + printAtom(p->a);
    }
  }
  return "?";
}

// ---- structural equality ----

inline bool equal(const P& p, const P& q) {
  if (p == q) return true;
  if (p->k != q->k) return false;
  switch (p->k) {
    case SK::Stop: case SK::Div: case SK::Success: return true;
    case SK::Var: return p->n == q->n;
    case SK::Mu: return p->n == q->n && equal(p->a, q->a);
    case SK::IntChoice: return equal(p->a, q->a) && equal(p->b, q->b);
    case SK::ExtSum: {
      if (p->branches.size() != q->branches.size()) return false;
      for (size_t i = 0; i < p->branches.size(); i++)
        if (p->branches[i].act != q->branches[i].act || !equal(p->branches[i].cont, q->branches[i].cont))
          return false;
      return true;
    }
    case SK::Par: return p->sync == q->sync && equal(p->a, q->a) && equal(p->b, q->b);
    case SK::Conceal: return p->n == q->n && equal(p->a, q->a);
    case SK::Rename: return p->ren == q->ren && equal(p->a, q->a);
  }
  return false;
}

// ---- substitution of a closed recursion body for a variable ----

inline P substVar(const P& p, Name x, const P& r) {
  switch (p->k) {
    case SK::Stop: case SK::Div: case SK::Success: return p;
    case SK::Var: return p->n == x ? r : p;
    case SK::Mu:
      if (p->n == x) return p;  // shadowed
      return mu(p->n, substVar(p->a, x, r));
    case SK::IntChoice: return intchoice(substVar(p->a, x, r), substVar(p->b, x, r));
    case SK::ExtSum: {
      std::vector<Branch> bs;
      for (auto& b : p->branches) bs.push_back({b.act, substVar(b.cont, x, r)});
      return extsum(std::move(bs));
    }
    case SK::Par: return par(substVar(p->a, x, r), substVar(p->b, x, r), p->sync);
    case SK::Conceal: return conceal(substVar(p->a, x, r), p->n);
    case SK::Rename: return rename(substVar(p->a, x, r), p->ren);
  }
  return p;
}

// ---- labelled transitions ----

struct Label {
  bool tau = false;
  Name act;  // valid iff !tau
  bool operator==(const Label& o) const { return tau == o.tau && (tau || act == o.act); }
};
inline Label tauLabel() { return {true, Name{}}; }
inline Label actLabel(Name a) { return {false, a}; }

// Resources consumed by a transition: the identities (node addresses) of the
// choice/recursion constructs that fire.  Two transitions conflict iff their
// resource sets intersect; disjoint resources mean the steps are distributable.
struct Transition {
  Label label;
  P dest;
  std::set<const Proc*> resources;
};

inline std::vector<Transition> transitions(const P& p) {
  std::vector<Transition> out;
  switch (p->k) {
    case SK::Stop: case SK::Success: case SK::Var:
      break;
    case SK::Div:
      out.push_back({tauLabel(), p, {p.get()}});
      break;
    case SK::IntChoice:
      out.push_back({tauLabel(), p->a, {p.get()}});
      out.push_back({tauLabel(), p->b, {p.get()}});
      break;
    case SK::ExtSum:
      for (auto& b : p->branches) out.push_back({actLabel(b.act), b.cont, {p.get()}});
      break;
    case SK::Mu:
      out.push_back({tauLabel(), substVar(p->a, p->n, p), {p.get()}});
      break;
    case SK::Par: {
      auto inSync = [&](const Label& l) {
        return !l.tau && std::binary_search(p->sync.begin(), p->sync.end(), l.act);
      };
      auto ls = transitions(p->a), rs = transitions(p->b);
      for (auto& t : ls)
        if (!inSync(t.label)) out.push_back({t.label, par(t.dest, p->b, p->sync), t.resources});
      for (auto& t : rs)
        if (!inSync(t.label)) out.push_back({t.label, par(p->a, t.dest, p->sync), t.resources});
      for (auto& tl : ls)
        if (inSync(tl.label))
          for (auto& tr : rs)
            if (tr.label == tl.label) {
              std::set<const Proc*> res = tl.resources;
              res.insert(tr.resources.begin(), tr.resources.end());
              out.push_back({tl.label, par(tl.dest, tr.dest, p->sync), std::move(res)});
            }
      break;
    }
    case SK::Conceal:
      for (auto& t : transitions(p->a)) {
        Label l = (!t.label.tau && t.label.act == p->n) ? tauLabel() : t.label;
        out.push_back({l, conceal(t.dest, p->n), t.resources});
      }
      break;
    case SK::Rename:
      for (auto& t : transitions(p->a)) {
        Label l = t.label;
        if (!l.tau) {
          auto it = std::lower_bound(p->ren.begin(), p->ren.end(),
                                     std::make_pair(l.act, Name{}),
                                     [](auto& a, auto& b) { return a.first < b.first; });
          if (it != p->ren.end() && it->first == l.act) l.act = it->second;
        }
        out.push_back({l, rename(t.dest, p->ren), t.resources});
      }
      break;
  }
  return out;
}

// Immediate visible actions offered.
inline std::set<Name> barbs(const P& p) {
  std::set<Name> s;
  for (auto& t : transitions(p))
    if (!t.label.tau) s.insert(t.label.act);
  return s;
}

// TICK unguarded at top level (under parallel/conceal/rename contexts).
inline bool hasSuccess(const P& p) {
  switch (p->k) {
    case SK::Success: return true;
    case SK::Par: return hasSuccess(p->a) || hasSuccess(p->b);
    case SK::Conceal: case SK::Rename: return hasSuccess(p->a);
    default: return false;
  }
}

// Top-level parallel components, with conceal/rename wrappers re-attached to
// each component they scope over.
inline std::vector<P> components(const P& p) {
  switch (p->k) {
    case SK::Par: {
      auto l = components(p->a), r = components(p->b);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case SK::Conceal: {
      std::vector<P> out;
      for (auto& c : components(p->a)) out.push_back(conceal(c, p->n));
      return out;
    }
    case SK::Rename: {
      std::vector<P> out;
      for (auto& c : components(p->a)) out.push_back(rename(c, p->ren));
      return out;
    }
    default: return {p};
  }
}

// Apply an injective renaming of source names (for the name-invariance check).
inline P applySigma(const P& p, const std::map<Name, Name>& sig) {
  auto m = [&](Name a) { auto it = sig.find(a); return it == sig.end() ? a : it->second; };
  switch (p->k) {
    case SK::Stop: case SK::Div: case SK::Success: case SK::Var: return p;
    case SK::Mu: return mu(p->n, applySigma(p->a, sig));
    case SK::IntChoice: return intchoice(applySigma(p->a, sig), applySigma(p->b, sig));
    case SK::ExtSum: {
      std::vector<Branch> bs;
      for (auto& b : p->branches) bs.push_back({m(b.act), applySigma(b.cont, sig)});
      return extsum(std::move(bs));
    }
    case SK::Par: {
      std::vector<Name> sync;
      for (auto a : p->sync) sync.push_back(m(a));
      return par(applySigma(p->a, sig), applySigma(p->b, sig), std::move(sync));
    }
    case SK::Conceal: return conceal(applySigma(p->a, sig), m(p->n));
    case SK::Rename: {
      std::vector<std::pair<Name, Name>> rn;
      for (auto& [x, z] : p->ren) rn.push_back({m(x), m(z)});
      return rename(applySigma(p->a, sig), std::move(rn));
    }
  }
  return p;
}

}  // namespace cspccs::csp
