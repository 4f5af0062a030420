#pragma once
// The two encodings from the source calculus into the target calculus.
//
// Every source operator is translated into a process that *announces* the
// actions it could perform on an announcement channel `act` as messages
// act<c, r, l, s>: c tags the action (first projection of the renaming
// policy, or the reserved tau tag for internal actions), r is a request
// channel, l a Boolean lock answering whether the action is still available,
// and s the channel on which the final verdict is awarded.
//
// Booleans travel as pairs of continuation channels: sending TRUE on b is
// b(t,f).t<>, reading b is (nu t,f)(b<t,f> | t().P | f().Q).
//
// A parallel operator pairs left/right announcements of synchronised actions
// through a chain of forwarders and emits combined announcements upward; the
// pair process (`simPair` below) interrogates both sums' locks and reports
// the combined lock.  The coordinator at the outermost level requests and
// resolves announcements: the centralised one serialises attempts through a
// single busy token, the decentralised one is a replicated server.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "canonical.hpp"
#include "ccs.hpp"
#include "csp.hpp"
#include "names.hpp"

namespace cspccs::enc {

using ccs::T;

struct RenamingPolicy {
  std::map<Name, std::array<Name, 3>> triples;
  Name tau;
  Name proj(Name src, int i) const { return triples.at(src)[i - 1]; }
};

// Triples are interned per source name, so they are injective, deterministic,
// and never collide with reserved or generated names.
inline RenamingPolicy make_renaming_policy(const std::set<Name>& sourceNames) {
  RenamingPolicy p;
  p.tau = names().tauTag();
  for (Name n : sourceNames)
    p.triples[n] = {names().phi(n, 1), names().phi(n, 2), names().phi(n, 3)};
  return p;
}

// ---- Boolean abbreviations ----

// send the value v on channel ch:  ch(t,f). t<>   /   ch(t,f). f<>
inline T boolSend(Name ch, bool v) {
  Name t = names().fresh(Role::Carrier, "t");
  Name f = names().fresh(Role::Carrier, "f");
  return ccs::in(ch, {t, f}, ccs::out(v ? t : f));
}

// read a value from ch:  (nu t,f)( ch<t,f> | t().thenB | f().elseB )
inline T boolRead(Name ch, T thenB, T elseB) {
  Name t = names().fresh(Role::Carrier, "t");
  Name f = names().fresh(Role::Carrier, "f");
  return ccs::res({t, f}, ccs::par({ccs::out(ch, {t, f}), ccs::in(t, {}, std::move(thenB)),
                                    ccs::in(f, {}, std::move(elseB))}));
}

// Verdict read: a verdict channel delivers any number of FALSEs followed by
// at most one TRUE, so the reader re-arms only after a FALSE.  Once the TRUE
// branch fires the leftover !g().armed has no token and is garbage.
// (nu g)( armed | !g().armed )  with  armed = read ch (then: thenB) (else: g<> | elseB)
inline T repBoolRead(Name ch, const T& thenB, const T& elseB) {
  Name g = names().fresh(Role::RelockAux, "g");
  T armed = boolRead(ch, thenB, ccs::par2(ccs::out(g), elseB));
  return ccs::res({g}, ccs::par2(armed, ccs::repin(g, {}, armed)));
}

// Par over `allowed` of [x=n] emit(n)
inline T matchSet(Name x, const std::vector<std::pair<Name, T>>& cases) {
  std::vector<T> ts;
  for (auto& [n, body] : cases) ts.push_back(ccs::match(x, n, body));
  return ccs::par(std::move(ts));
}

struct Encoding {
  T term;
  Name act;              // outermost announcement channel
  Name coordT, coordF;   // binder names of the coordinator's lock-read carriers
  RenamingPolicy policy;
};

class Encoder {
 public:
  explicit Encoder(csp::P p)
      : src_(std::move(p)),
        policy_(make_renaming_policy(collectNames(src_))),
        sParam_(names().fresh(Role::Param, "s")) {}

  const RenamingPolicy& policy() const { return policy_; }

  // Encoding of the term alone; `act` is left free.
  T inner(Name act) { return enc(src_, act); }

  Encoding central() {
    Name act0 = names().fresh(Role::ActOuter, "act0");
    Name o = names().fresh(Role::Once, "o");
    auto [body, ct, cf] = coordBody(act0, ccs::par2(ccs::out(o), boolSend(sParam_, true)),
                                    ccs::out(o));
    T coord = ccs::res({o}, ccs::par2(body, ccs::repin(o, {}, body)));
    return finish(act0, coord, ct, cf);
  }

  Encoding decentral() {
    Name act0 = names().fresh(Role::ActOuter, "act0");
    auto [body, ct, cf] = coordBody(act0, boolSend(sParam_, true), ccs::nil());
    // replicated server: every announcement is interrogated concurrently
    T coord = ccs::mk([&] {
      ccs::Term t{ccs::TK::RepInput};
      t.chan = body->chan;
      t.args = body->args;
      t.a = body->a;
      return t;
    }());
    return finish(act0, coord, ct, cf);
  }

 private:
  csp::P src_;
  RenamingPolicy policy_;
  std::map<Name, Name> recTok_;
  Name sParam_;  // coordinator's s parameter, shared between builds

  static std::set<Name> collectNames(const csp::P& p) { return csp::freeNames(p); }

  Name phi(Name n, int i) {
    if (!policy_.triples.count(n)) policy_.triples[n] = {names().phi(n, 1), names().phi(n, 2), names().phi(n, 3)};
    return policy_.proj(n, i);
  }

  // act0(c,r,l,s).( r<> | (nu ct,cf)( l<ct,cf> | ct().thenB | cf().elseB ) )
  std::tuple<T, Name, Name> coordBody(Name act0, T thenB, T elseB) {
    Name c = names().fresh(Role::Param, "c");
    Name r = names().fresh(Role::Param, "r");
    Name l = names().fresh(Role::Param, "l");
    Name ct = names().fresh(Role::Carrier, "ct");
    Name cf = names().fresh(Role::Carrier, "cf");
    T read = ccs::res({ct, cf},
                      ccs::par({ccs::out(l, {ct, cf}), ccs::in(ct, {}, std::move(thenB)),
                                ccs::in(cf, {}, std::move(elseB))}));
    T body = ccs::in(act0, {c, r, l, sParam_}, ccs::par2(ccs::out(r), std::move(read)));
    return {body, ct, cf};
  }

  Encoding finish(Name act0, T coord, Name ct, Name cf) {
    T inner = enc(src_, act0);
    // restrict every minted tag that is still free (renaming domains
    // introduce tags for names no longer free in the source term)
    std::set<Name> fn = ccs::freeNames(inner);
    std::vector<Name> top{act0};
    for (auto& [n, tri] : policy_.triples)
      for (Name t : tri)
        if (fn.count(t)) top.push_back(t);
    top.push_back(policy_.tau);
    return {ccs::res(std::move(top), ccs::par2(std::move(inner), std::move(coord))), act0, ct,
            cf, policy_};
  }

  T enc(const csp::P& p, Name act) {
    using namespace csp;
    switch (p->k) {
      case SK::Stop: return ccs::nil();
      case SK::Success: return ccs::success();
      case SK::Div: {
        Name rep = names().fresh(Role::RepTok, "rep");
        return ccs::res({rep}, ccs::par2(ccs::out(rep), ccs::repin(rep, {}, ccs::out(rep))));
      }
      case SK::Var: {
        auto it = recTok_.find(p->n);
        if (it == recTok_.end())
          throw std::invalid_argument("unbound process variable " + nameText(p->n));
        return ccs::out(it->second);
      }
      case SK::Mu: {
        Name x = names().fresh(Role::RecTok, "rec");
        auto saved = recTok_.find(p->n) != recTok_.end()
                         ? std::optional<Name>(recTok_[p->n])
                         : std::nullopt;
        recTok_[p->n] = x;
        T body = enc(p->a, act);
        if (saved)
          recTok_[p->n] = *saved;
        else
          recTok_.erase(p->n);
        return ccs::res({x}, ccs::par2(ccs::out(x), ccs::repin(x, {}, std::move(body))));
      }
      case SK::IntChoice: {
        Name m = names().fresh(Role::MuTok, "mu");
        return ccs::res({m}, ccs::par({ccs::out(m), ccs::in(m, {}, enc(p->a, act)),
                                       ccs::in(m, {}, enc(p->b, act))}));
      }
      case SK::ExtSum: return encSum(p, act);
      case SK::Par: return encPar(p, act);
      case SK::Conceal: return encConceal(p, act);
      case SK::Rename: return encRename(p, act);
    }
    return ccs::nil();
  }

  // (nu r,l,s1..sn)( r().l<T> | PROD_i( act<phi1(ci),r,l,si> | rep-read si of
  //   (then: [Pi] | !r().l<F>)  (else: r().l<T>) ) )
  T encSum(const csp::P& p, Name act) {
    Name r = names().fresh(Role::Req, "r");
    Name l = names().fresh(Role::Lock, "l");
    std::vector<T> parts{ccs::in(r, {}, boolSend(l, true))};
    std::vector<Name> bound{r, l};
    for (auto& b : p->branches) {
      Name s = names().fresh(Role::Simu, "s");
      bound.push_back(s);
      parts.push_back(ccs::out(act, {phi(b.act, 1), r, l, s}));
      T thenB = ccs::par2(enc(b.cont, act), ccs::repin(r, {}, boolSend(l, false)));
      T elseB = ccs::in(r, {}, boolSend(l, true));
      parts.push_back(repBoolRead(s, thenB, elseB));
    }
    return ccs::res(std::move(bound), ccs::par(std::move(parts)));
  }

  // handler of one side of a parallel: announcements for synchronised
  // actions are redirected to the per-action sync channel, everything else
  // (and tau) is forwarded upward.
  T sideHandler(Name actIn, Name actFwd, const std::vector<Name>& sync, int proj,
                const std::set<Name>& fwdTags) {
    Name c = names().fresh(Role::Param, "c");
    Name r = names().fresh(Role::Param, "r");
    Name l = names().fresh(Role::Param, "l");
    Name s = names().fresh(Role::Param, "s");
    std::vector<std::pair<Name, T>> cases;
    for (Name a : sync) cases.push_back({phi(a, 1), ccs::out(phi(a, proj), {r, l, s})});
    for (Name tag : fwdTags) cases.push_back({tag, ccs::out(actFwd, {tag, r, l, s})});
    return ccs::repin(actIn, {c, r, l, s}, matchSet(c, cases));
  }

  T encPar(const csp::P& p, Name act) {
    const std::vector<Name>& A = p->sync;
    Name actL = names().fresh(Role::Act, "actL");
    Name actR = names().fresh(Role::Act, "actR");
    Name actP = names().fresh(Role::ActPrime, "actp");
    std::set<Name> fnBoth = csp::freeNames(p->a);
    for (Name n : csp::freeNames(p->b)) fnBoth.insert(n);
    std::set<Name> fwdTags{policy_.tau};
    for (Name n : fnBoth)
      if (!std::binary_search(A.begin(), A.end(), n)) fwdTags.insert(phi(n, 1));

    T left = ccs::res({actL}, ccs::par2(enc(p->a, actL), sideHandler(actL, actP, A, 2, fwdTags)));
    T right = ccs::res({actR}, ccs::par2(enc(p->b, actR), sideHandler(actR, actP, A, 3, fwdTags)));

    std::vector<T> parts{std::move(left), std::move(right)};
    std::vector<Name> bound{actP};
    for (Name a : A) {
      parts.push_back(synch(a, act));
      bound.push_back(phi(a, 2));
      bound.push_back(phi(a, 3));
    }
    {  // upward forwarder
      Name c = names().fresh(Role::Param, "c");
      Name r = names().fresh(Role::Param, "r");
      Name l = names().fresh(Role::Param, "l");
      Name s = names().fresh(Role::Param, "s");
      parts.push_back(ccs::repin(actP, {c, r, l, s}, ccs::out(act, {c, r, l, s})));
    }
    return ccs::res(std::move(bound), ccs::par(std::move(parts)));
  }

  // Tag-rewriting handler shared by conceal and rename: announcements from
  // the inner term are re-emitted upward with their tag mapped through
  // `cases` (other tags have no observable continuation and die silently,
  // matching the source semantics where such actions cannot occur).
  T tagHandler(Name actIn, Name act, const std::vector<std::pair<Name, Name>>& cases) {
    Name c = names().fresh(Role::Param, "c");
    Name r = names().fresh(Role::Param, "r");
    Name l = names().fresh(Role::Param, "l");
    Name s = names().fresh(Role::Param, "s");
    std::vector<std::pair<Name, T>> ms;
    for (auto& [from, to] : cases) ms.push_back({from, ccs::out(act, {to, r, l, s})});
    return ccs::repin(actIn, {c, r, l, s}, matchSet(c, ms));
  }

  // P / b: announcements tagged phi1(b) become tau announcements; everything
  // else in fn(P) (and tau itself) is forwarded unchanged.  phi(b) is
  // restricted here since b is no longer free in the whole.
  T encConceal(const csp::P& p, Name act) {
    Name actP = names().fresh(Role::ActPrime, "actp");
    std::vector<std::pair<Name, Name>> cases{{phi(p->n, 1), policy_.tau},
                                             {policy_.tau, policy_.tau}};
    for (Name n : csp::freeNames(p->a))
      if (n != p->n) cases.push_back({phi(n, 1), phi(n, 1)});
    std::vector<Name> bound{actP};
    for (int i = 1; i <= 3; i++) bound.push_back(phi(p->n, i));
    return ccs::res(std::move(bound),
                    ccs::par2(enc(p->a, actP), tagHandler(actP, act, cases)));
  }

  // rn { f } P: announcements tagged phi1(x) for x in dom f become phi1(f x);
  // names outside the domain (and tau) pass through.
  T encRename(const csp::P& p, Name act) {
    Name actP = names().fresh(Role::ActPrime, "actp");
    std::vector<std::pair<Name, Name>> cases{{policy_.tau, policy_.tau}};
    std::set<Name> dom;
    for (auto& [x, fx] : p->ren) {
      dom.insert(x);
      cases.push_back({phi(x, 1), phi(fx, 1)});
    }
    for (Name n : csp::freeNames(p->a))
      if (!dom.count(n)) cases.push_back({phi(n, 1), phi(n, 1)});
    return ccs::res({actP}, ccs::par2(enc(p->a, actP), tagHandler(actP, act, cases)));
  }

  // Pairing grid for one synchronised action a: the first left request pairs
  // with right requests arriving on phi3(a); each pairing instance forwards
  // the right requests it saw to the next instance's channel.
  T synch(Name a, Name act) {
    Name mt = names().fresh(Role::SynNext, "mt");
    Name sn = names().fresh(Role::Param, "sn");
    Name lr = names().fresh(Role::Param, "lr");
    Name ll = names().fresh(Role::Param, "ll");
    Name ls = names().fresh(Role::Param, "ls");
    Name rr = names().fresh(Role::Param, "rr");
    Name rl = names().fresh(Role::Param, "rl");
    Name rs = names().fresh(Role::Param, "rs");
    Name sp = names().fresh(Role::Syn, "sp");
    Name s2 = names().fresh(Role::Syn, "s2");
    Name x1 = names().fresh(Role::Param, "x1");
    Name x2 = names().fresh(Role::Param, "x2");
    Name x3 = names().fresh(Role::Param, "x3");

    Name r = names().fresh(Role::Req, "r");
    Name l = names().fresh(Role::Lock, "l");
    Name sim = names().fresh(Role::Simu, "sim");
    T candidate = ccs::res(
        {r, l, sim},
        ccs::par2(ccs::out(act, {phi(a, 1), r, l, sim}), simPair(r, l, sim, lr, ll, ls, rr, rl, rs)));

    T pairing = ccs::repin(sn, {rr, rl, rs},
                           ccs::par2(std::move(candidate), ccs::out(sp, {rr, rl, rs})));
    T rechain = ccs::res(
        {s2}, ccs::par2(ccs::out(mt, {s2}), ccs::repin(sp, {x1, x2, x3}, ccs::out(s2, {x1, x2, x3}))));
    T instance =
        ccs::repin(mt, {sn},
                   ccs::in(phi(a, 2), {lr, ll, ls},
                           ccs::res({sp}, ccs::par2(std::move(pairing), std::move(rechain)))));
    return ccs::res({mt}, ccs::par2(ccs::out(mt, {phi(a, 3)}), std::move(instance)));
  }

  // Coordinates one (left branch, right branch) pair.  On request r it
  // interrogates the left lock, then the right lock; on double success it
  // instantiates the combined lock positively and awaits the verdict on sim,
  // awarding or releasing both branches.  Failed attempts release whatever
  // was consumed and answer later requests negatively (or retry via lp when
  // the pair itself stays viable).
  T simPair(Name r, Name l, Name sim, Name lr, Name ll, Name ls, Name rr, Name rl, Name rs) {
    Name lp = names().fresh(Role::RelockAux, "lp");
    auto deadHenceforth = [&] { return ccs::repin(r, {}, boolSend(l, false)); };
    T onVerdict = boolRead(sim,
                           ccs::par({boolSend(ls, true), boolSend(rs, true), deadHenceforth()}),
                           ccs::par({boolSend(ls, false), boolSend(rs, false), ccs::out(lp)}));
    T onRight = boolRead(rl, ccs::par2(boolSend(l, true), std::move(onVerdict)),
                         ccs::par({boolSend(l, false), boolSend(ls, false), deadHenceforth()}));
    T onLeft = boolRead(ll, ccs::par2(ccs::out(rr), std::move(onRight)),
                        ccs::par2(boolSend(l, false), deadHenceforth()));
    T core = ccs::in(r, {}, ccs::par2(ccs::out(lr), std::move(onLeft)));
    return ccs::res({lp}, ccs::par2(core, ccs::repin(lp, {}, core)));
  }
};

inline Encoding encode_central(const csp::P& p) { return Encoder(p).central(); }
inline Encoding encode_decentral(const csp::P& p) { return Encoder(p).decentral(); }

// Apply the induced target renaming sigma' (triple-wise images of an
// injective source renaming) to an encoded term.  This renames *every*
// occurrence, binders included: the policy names are global tags.
inline ccs::T applySigmaPrime(const ccs::T& t, const std::map<Name, Name>& sigma) {
  std::map<Name, Name> m;
  for (auto& [a, b] : sigma)
    for (int i = 1; i <= 3; i++) m[names().phi(a, i)] = names().phi(b, i);
  std::function<ccs::T(const ccs::T&)> go = [&](const ccs::T& u) -> ccs::T {
    auto ap = [&](Name n) {
      if (!n.valid()) return n;
      auto it = m.find(n);
      return it == m.end() ? n : it->second;
    };
    ccs::Term r{u->k};
    r.chan = ap(u->chan);
    r.match2 = ap(u->match2);
    for (Name n : u->args) r.args.push_back(ap(n));
    if (u->a) r.a = go(u->a);
    if (u->b) r.b = go(u->b);
    return ccs::mk(std::move(r));
  };
  return go(t);
}

// Static announcement analysis: the action tags an encoded term can announce
// on its (free) act channel by propagation steps alone -- forwarding through
// handlers and the synchronisation chain, without consuming any lock, token,
// or coordinator resource.  On a fresh encoding every lock is positive, so
// these tags are exactly the translated barbs before any simulation step.
inline std::set<Name> innerStaticBarbs(const ccs::T& term, Name act, size_t budget = 20000) {
  auto isPropagation = [](Role r) {
    return r == Role::Act || r == Role::ActPrime || r == Role::Src2 || r == Role::Src3 ||
           r == Role::SynNext || r == Role::Syn;
  };
  std::set<Name> barbs;
  std::map<std::string, bool> seen;
  std::vector<ccs::State> frontier{ccs::canonicalize(term)};
  seen[frontier[0].key] = true;
  while (!frontier.empty() && seen.size() < budget) {
    ccs::State st = std::move(frontier.back());
    frontier.pop_back();
    for (auto& a : st.atoms)
      if (a->k == ccs::TK::Output && a->chan == act && !a->args.empty() &&
          names().role(a->args[0]) == Role::Src1)
        barbs.insert(names().srcLink(a->args[0]));
    for (auto& rx : ccs::reductions(st)) {
      if (!isPropagation(names().canonRole(rx.chan))) continue;
      ccs::State nx = ccs::canonicalizeStep(st, rx);
      if (!seen[nx.key]) {
        seen[nx.key] = true;
        frontier.push_back(std::move(nx));
      }
    }
  }
  return barbs;
}

}  // namespace cspccs::enc
