#pragma once
// Reduction-graph exploration for source terms and encoded target terms.
//
// Target semantics of interest is the reduction relation; edges are
// classified as auxiliary or simulating:
//   - central coordinator: consuming an announcement on the outermost act
//     channel is simulating iff the Boolean read it spawns on the received
//     lock later resolves positively on some path (the point of no return is
//     accepting the announcement whose lock will answer TRUE); token steps
//     on internal-choice / divergence / recursion triggers are simulating.
//   - decentral coordinator: any step consuming a positive lock
//     instantiation is simulating, plus the same token steps.
//
// A state has an immediate translated barb `a` iff it contains an unguarded
// announcement tagged with a's policy name, or a pending coordinator
// lock-read spawned from one, whose lock is still positively instantiated.
// Reachable barbs close that predicate over the step relation.  Pending
// reads are tracked as per-node metadata and transported along edges through
// the canonical renaming maps.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "csp.hpp"
#include "encode.hpp"
#include "names.hpp"

namespace cspccs::xp {

struct Budget {
  size_t maxStates = 50000;
  size_t maxEdges = 200000;
};

enum class StepClass { Src, Aux, Sim };

// ---------------------------------------------------------------- source

struct SourceGraph {
  struct Edge {
    int from, to;
    csp::Label label;
    std::vector<const csp::Proc*> resources;
  };
  std::vector<csp::P> terms;
  std::vector<std::vector<int>> out;  // node -> edge ids
  std::vector<Edge> edges;
  int root = 0;
  bool truncated = false;
  std::vector<std::set<Name>> immBarbs;
  std::vector<char> immSuccess;
  std::vector<std::set<Name>> reachBarbs;
  std::vector<char> reachSuccess;
};

inline SourceGraph build_source_graph(const csp::P& p, Budget budget = {}) {
  SourceGraph g;
  std::map<std::string, int> index;
  auto add = [&](const csp::P& t) {
    std::string k = csp::print(t);
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = (int)g.terms.size();
    index[k] = id;
    g.terms.push_back(t);
    g.out.emplace_back();
    return id;
  };
  add(p);
  for (size_t i = 0; i < g.terms.size(); i++) {
    if (g.terms.size() > budget.maxStates || g.edges.size() > budget.maxEdges) {
      g.truncated = true;
      break;
    }
    for (auto& tr : csp::transitions(g.terms[i])) {
      int j = add(tr.dest);
      g.out[i].push_back((int)g.edges.size());
      g.edges.push_back({(int)i, j, tr.label,
                         {tr.resources.begin(), tr.resources.end()}});
    }
  }
  size_t n = g.terms.size();
  g.immBarbs.resize(n);
  g.immSuccess.resize(n);
  for (size_t i = 0; i < n; i++) {
    g.immSuccess[i] = csp::hasSuccess(g.terms[i]);
    for (int e : g.out[i])
      if (!g.edges[e].label.tau) g.immBarbs[i].insert(g.edges[e].label.act);
  }
  g.reachBarbs = g.immBarbs;
  g.reachSuccess = g.immSuccess;
  bool chg = true;
  while (chg) {
    chg = false;
    for (auto& e : g.edges) {
      for (Name b : g.reachBarbs[e.to])
        if (g.reachBarbs[e.from].insert(b).second) chg = true;
      if (g.reachSuccess[e.to] && !g.reachSuccess[e.from]) {
        g.reachSuccess[e.from] = true;
        chg = true;
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------- target

struct TestInst {
  Name lock, ct, cf;  // canonical names in the owning node
  Name src;           // committed source action; invalid for tau-tagged announcements
  bool operator<(const TestInst& o) const {
    return std::tie(lock.v, ct.v, cf.v, src.v) < std::tie(o.lock.v, o.ct.v, o.cf.v, o.src.v);
  }
};

struct TargetGraph {
  struct Node {
    ccs::State st;
    bool expanded = false;
    // Pending coordinator lock-reads.  Part of node identity: the source tag
    // of a consumed announcement is not recoverable from the term, so states
    // differing only in what their pending tests stand for must not merge.
    std::set<TestInst> tests;
    std::set<Name> deadLocks;  // locks negatively instantiated here or in an ancestor
  };
  struct Edge {
    int from, to;
    StepClass cls = StepClass::Aux;
    std::string witness;
    Name chan;
    Role chanRole;
    int outAtom, inAtom;
    bool replicated;
    bool flagged = false;
    // events
    bool resolves = false;
    Name resLock, resCt;  // pre-state names of the resolved read
    bool positive = false;
    bool creates = false;
    TestInst created;  // post-state names
    std::set<Name> commits;  // source actions committed by this edge
    std::map<Name, Name> nameMap;  // pre -> post for lock/carrier-role names
  };

  std::vector<Node> nodes;
  std::vector<std::vector<int>> out;
  std::vector<Edge> edges;
  int root = 0;
  bool truncated = false;
  bool central = true;
  std::vector<std::set<Name>> barbs;  // reachable translated barbs (or free-output barbs)
  std::vector<char> reachSuccess;

  size_t simEdgeCount() const {
    size_t c = 0;
    for (auto& e : edges) c += e.cls == StepClass::Sim;
    return c;
  }
};

namespace detail {

inline bool isInstantiation(const ccs::T& a, bool& positive) {
  if (a->k != ccs::TK::Input || a->args.size() != 2) return false;
  const ccs::T& b = a->a;
  if (b->k != ccs::TK::Output || !b->args.empty()) return false;
  if (b->chan == a->args[0]) {
    positive = true;
    return true;
  }
  if (b->chan == a->args[1]) {
    positive = false;
    return true;
  }
  return false;
}

// Roles whose steps are pure plumbing: no announcement consumption, no lock
// instantiation, no simulation token.
inline bool compressibleRole(Role r) {
  switch (r) {
    case Role::Carrier: case Role::Req: case Role::Act: case Role::ActPrime:
    case Role::Syn: case Role::SynNext: case Role::Simu: case Role::RelockAux:
      return true;
    default:
      return false;
  }
}

// Deterministic-step compression: repeatedly fire redexes that are
// inevitable and confluent -- a plumbing-role subject that is restricted,
// never transmitted, and has a unique receiver (replicated, or the only
// input facing the only output).  Such a step commutes with every other
// step, so executing it eagerly merges weakly equivalent interleavings
// without touching announcement, lock, or token edges.
inline ccs::State compress(ccs::State st, bool prune, std::map<Name, Name>* ren) {
  for (int guard = 0; guard < 10000; guard++) {
    std::unordered_map<uint32_t, ccs::detail::Cnt> total;
    {
      std::vector<Name> bs;
      for (auto& a : st.atoms) ccs::detail::scanAtom(a, bs, total);
    }
    std::set<Name> restricted(st.restricted.begin(), st.restricted.end());
    bool fired = false;
    for (auto& rx : ccs::reductions(st)) {
      if (names().rigid(rx.chan) || !restricted.count(rx.chan)) continue;
      if (!compressibleRole(names().canonRole(rx.chan))) continue;
      const ccs::detail::Cnt& c = total[rx.chan.v];
      if (c.trans > 0 || c.inSubj != 1) continue;
      if (!rx.replicated && c.outSubj != 1) continue;
      std::map<Name, Name> r2;
      st = ccs::canonicalizeStep(st, rx, prune, &r2);
      if (ren) {
        for (auto it = ren->begin(); it != ren->end();) {
          auto j = r2.find(it->second);
          if (j == r2.end())
            it = ren->erase(it);
          else {
            it->second = j->second;
            ++it;
          }
        }
      }
      fired = true;
      break;
    }
    if (!fired) break;
  }
  return st;
}

// Static lock positivity: a lock is positively instantiated in a state iff
// the state still contains a producer of its TRUE instance, reachable
// through request prefixes, retry loops, available tokens, and then-branches
// of reads of other locks that are themselves positive.  Reads of verdict
// channels are decision points, not plumbing: their branches never count,
// so a pending verdict revokes the positivity of the locks it consumed.
class LockEval {
 public:
  explicit LockEval(const ccs::State& st) : st_(st) {
    for (auto& a : st.atoms) {
      if (a->k == ccs::TK::Output && a->args.empty()) tokens_.insert(a->chan);
      if (a->k == ccs::TK::Output && a->args.size() == 2 &&
          names().canonRole(a->chan) == Role::Lock)
        thenOf_[a->args[0]] = a->chan;
    }
  }

  bool positive(Name l) {
    auto it = memo_.find(l);
    if (it != memo_.end()) return it->second;
    if (!visiting_.insert(l).second) return false;  // cycle: no independent producer
    bool r = false;
    for (auto& a : st_.atoms)
      if (search(a, l, thenOf_, tokens_)) {
        r = true;
        break;
      }
    visiting_.erase(l);
    memo_[l] = r;
    return r;
  }

 private:
  const ccs::State& st_;
  std::map<Name, Name> thenOf_;  // carrier -> lock whose TRUE answer fires it
  std::set<Name> tokens_;        // unguarded bare outputs
  std::map<Name, bool> memo_;
  std::set<Name> visiting_;

  // Split a body into parallel components, collecting local grants.
  static void split(const ccs::T& t, std::vector<ccs::T>& comps, std::map<Name, Name>& thenOf,
                    std::set<Name>& tokens) {
    switch (t->k) {
      case ccs::TK::Par:
        split(t->a, comps, thenOf, tokens);
        split(t->b, comps, thenOf, tokens);
        return;
      case ccs::TK::Res:
        split(t->a, comps, thenOf, tokens);
        return;
      case ccs::TK::Match:
        if (t->chan == t->match2) split(t->a, comps, thenOf, tokens);
        return;  // unresolved matches never guard lock producers here
      case ccs::TK::Output:
        if (t->args.empty()) tokens.insert(t->chan);
        if (t->args.size() == 2 && names().canonRole(t->chan) == Role::Lock)
          thenOf[t->args[0]] = t->chan;
        comps.push_back(t);
        return;
      default:
        comps.push_back(t);
        return;
    }
  }

  bool search(const ccs::T& t, Name l, std::map<Name, Name> thenOf, std::set<Name> tokens) {
    std::vector<ccs::T> comps;
    split(t, comps, thenOf, tokens);
    for (auto& c : comps) {
      bool pos;
      if (isInstantiation(c, pos) && pos && c->chan == l) return true;
      if (c->k != ccs::TK::Input && c->k != ccs::TK::RepInput) continue;
      Role r = names().canonRole(c->chan);
      bool enter = r == Role::Req || r == Role::RelockAux || tokens.count(c->chan);
      if (!enter) {
        auto g = thenOf.find(c->chan);
        enter = g != thenOf.end() && positive(g->second);
      }
      if (enter && search(c->a, l, thenOf, tokens)) return true;
    }
    return false;
  }
};

inline std::set<Name> scanDeadLocks(const ccs::State& st) {
  std::set<Name> dead;
  for (auto& a : st.atoms) {
    bool pos;
    if (isInstantiation(a, pos) && !pos && names().canonRole(a->chan) == Role::Lock)
      dead.insert(a->chan);
  }
  return dead;
}

}  // namespace detail

inline TargetGraph build_target_graph(const enc::Encoding& e, bool central, Budget budget = {},
                                      bool prune = true) {
  TargetGraph g;
  g.central = central;
  std::map<std::string, int> index;
  auto add = [&](ccs::State&& st, std::set<TestInst>&& tests) {
    std::string key = st.key;
    for (const TestInst& t : tests)
      key += "#" + std::to_string(t.lock.v) + "." + std::to_string(t.ct.v) + "." +
             std::to_string(t.cf.v) + ":" + std::to_string(t.src.v);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = (int)g.nodes.size();
    index[std::move(key)] = id;
    TargetGraph::Node n;
    n.st = std::move(st);
    n.tests = std::move(tests);
    n.deadLocks = detail::scanDeadLocks(n.st);
    g.nodes.push_back(std::move(n));
    g.out.emplace_back();
    return id;
  };
  add(detail::compress(ccs::canonicalize(e.term, prune), prune, nullptr), {});

  // phase 1: structural exploration + per-edge event detection
  for (size_t i = 0; i < g.nodes.size(); i++) {
    if (g.nodes.size() > budget.maxStates || g.edges.size() > budget.maxEdges) {
      g.truncated = true;
      break;
    }
    g.nodes[i].expanded = true;
    for (auto& rx : ccs::reductions(g.nodes[i].st)) {
      std::map<Name, Name> ren;
      ccs::State nx =
          detail::compress(ccs::canonicalizeStep(g.nodes[i].st, rx, prune, &ren), prune, &ren);
      // copies: add() below may reallocate g.nodes
      ccs::T outAtom = g.nodes[i].st.atoms[rx.outIdx];
      ccs::T inAtom = g.nodes[i].st.atoms[rx.inIdx];
      TargetGraph::Edge ed;
      ed.from = (int)i;
      ed.chan = rx.chan;
      ed.chanRole = names().canonRole(rx.chan);
      ed.outAtom = rx.outIdx;
      ed.inAtom = rx.inIdx;
      ed.replicated = rx.replicated;
      for (auto& [pre, post] : ren) {
        Role r = names().canonRole(pre);
        if (r == Role::Lock || r == Role::Carrier) ed.nameMap[pre] = post;
      }
      if (ed.chanRole == Role::ActOuter && outAtom->args.size() == 4) {
        // a coordinator consumed an announcement: a lock-read is spawned
        auto lk = ed.nameMap.find(outAtom->args[2]);
        auto ct = ren.find(e.coordT);
        auto cf = ren.find(e.coordF);
        if (lk != ed.nameMap.end() && ct != ren.end() && cf != ren.end()) {
          ed.creates = true;
          Name tag = outAtom->args[0];
          Name src = names().role(tag) == Role::Src1 ? names().srcLink(tag) : Name{};
          ed.created = {lk->second, ct->second, cf->second, src};
        }
      }
      if (ed.chanRole == Role::Lock && outAtom->args.size() == 2) {
        bool pos;
        if (detail::isInstantiation(inAtom, pos)) {
          ed.resolves = true;
          ed.resLock = rx.chan;
          ed.resCt = outAtom->args[0];
          ed.positive = pos;
        }
      }
      // transport the pending tests into the successor
      std::set<TestInst> tests;
      for (const TestInst& t : g.nodes[i].tests) {
        if (ed.resolves && t.lock == ed.resLock && t.ct == ed.resCt) continue;
        auto lk = ed.nameMap.find(t.lock);
        auto ct = ed.nameMap.find(t.ct);
        auto cf = ed.nameMap.find(t.cf);
        if (lk == ed.nameMap.end() || ct == ed.nameMap.end() || cf == ed.nameMap.end())
          continue;  // the read vanished (resolved read pruned away): test is dead
        tests.insert({lk->second, ct->second, cf->second, t.src});
      }
      if (ed.creates) tests.insert(ed.created);
      ed.to = add(std::move(nx), std::move(tests));
      // immediate classification clauses
      if (ed.chanRole == Role::MuTok || ed.chanRole == Role::RepTok ||
          ed.chanRole == Role::RecTok) {
        ed.cls = StepClass::Sim;
        ed.witness = "mu/rep/rec-token step";
      } else if (!central && ed.resolves && ed.positive) {
        ed.cls = StepClass::Sim;
        ed.witness = "positive-lock-consumption";
      }
      g.out[i].push_back((int)g.edges.size());
      g.edges.push_back(std::move(ed));
    }
  }

  // phase 2: transport dead-lock sets to a fixpoint
  {
    std::vector<int> work;
    for (size_t i = 0; i < g.nodes.size(); i++) work.push_back((int)i);
    while (!work.empty()) {
      int u = work.back();
      work.pop_back();
      for (int ei : g.out[u]) {
        auto& ed = g.edges[ei];
        auto& v = g.nodes[ed.to];
        bool changed = false;
        for (Name d : g.nodes[u].deadLocks) {
          auto it = ed.nameMap.find(d);
          if (it != ed.nameMap.end() && v.deadLocks.insert(it->second).second) changed = true;
        }
        if (changed) work.push_back(ed.to);
      }
    }
  }

  // commits per edge (needs settled test sets)
  for (auto& ed : g.edges) {
    if (!ed.resolves || !ed.positive) continue;
    for (const TestInst& t : g.nodes[ed.from].tests)
      if (t.lock == ed.resLock && t.ct == ed.resCt && t.src.valid()) ed.commits.insert(t.src);
  }

  // phase 3: central classification of announcement-consumption edges --
  // simulating iff the created test resolves positively on some path.
  if (central) {
    for (auto& ed : g.edges) {
      if (!ed.creates) continue;
      // search forward following the test's per-node incarnations
      std::set<std::pair<int, TestInst>> seen;
      std::vector<std::pair<int, TestInst>> stack{{ed.to, ed.created}};
      bool foundPos = false, unknown = false;
      while (!stack.empty() && !foundPos) {
        auto [n, t] = stack.back();
        stack.pop_back();
        if (!seen.insert({n, t}).second) continue;
        if (!g.nodes[n].expanded) {
          unknown = true;
          continue;
        }
        for (int ei : g.out[n]) {
          auto& f = g.edges[ei];
          if (f.resolves && f.resLock == t.lock && f.resCt == t.ct) {
            if (f.positive) foundPos = true;
            continue;  // resolved on this edge; this path ends the test
          }
          auto lk = f.nameMap.find(t.lock);
          auto ct = f.nameMap.find(t.ct);
          auto cf = f.nameMap.find(t.cf);
          if (lk == f.nameMap.end() || ct == f.nameMap.end() || cf == f.nameMap.end()) continue;
          stack.push_back({f.to, {lk->second, ct->second, cf->second, t.src}});
        }
      }
      if (foundPos) {
        ed.cls = StepClass::Sim;
        ed.witness = "outermost-act announcement whose lock returns TRUE";
      } else if (unknown) {
        ed.cls = StepClass::Sim;
        ed.flagged = true;
        ed.witness = "outermost-act announcement; lock fate unknown (budget)";
      }
    }
  }

  // phase 4: predicates -- immediate translated barbs, then closure
  size_t n = g.nodes.size();
  g.barbs.assign(n, {});
  g.reachSuccess.assign(n, 0);
  for (size_t i = 0; i < n; i++) {
    g.reachSuccess[i] = g.nodes[i].st.success;
    // Under the centralised coordinator a pending lock test holds the
    // once-token: the simulated step was already chosen when the
    // announcement was consumed, and until the protocol completes nothing
    // else can be offered.  Such mid-decision states expose no immediate
    // barbs; the reachability closure below supplies the barbs of the
    // committed continuation.  Decentralised tests instead keep the
    // announced barb alive while unresolved (clause 2 of translated barbs),
    // which is what produces partial-commitment barb sets.
    if (g.central && !g.nodes[i].tests.empty()) continue;
    detail::LockEval locks(g.nodes[i].st);
    for (auto& a : g.nodes[i].st.atoms)
      if (a->k == ccs::TK::Output && a->args.size() == 4 &&
          names().canonRole(a->chan) == Role::ActOuter &&
          names().role(a->args[0]) == Role::Src1 && locks.positive(a->args[2]))
        g.barbs[i].insert(names().srcLink(a->args[0]));
    for (const TestInst& t : g.nodes[i].tests)
      if (t.src.valid() && locks.positive(t.lock)) g.barbs[i].insert(t.src);
  }
  bool chg = true;
  while (chg) {
    chg = false;
    for (auto& ed : g.edges) {
      for (Name b : g.barbs[ed.to])
        if (g.barbs[ed.from].insert(b).second) chg = true;
      if (g.reachSuccess[ed.to] && !g.reachSuccess[ed.from]) {
        g.reachSuccess[ed.from] = true;
        chg = true;
      }
    }
  }
  return g;
}

// Plain reduction graph of an arbitrary target term: no coordinator, no
// classification; barbs are outputs on free (non-restricted) channels.
inline TargetGraph build_raw_target_graph(const ccs::T& t, Budget budget = {}, bool prune = true) {
  TargetGraph g;
  g.central = false;
  std::map<std::string, int> index;
  auto add = [&](ccs::State&& st) {
    auto it = index.find(st.key);
    if (it != index.end()) return it->second;
    int id = (int)g.nodes.size();
    index[st.key] = id;
    g.nodes.push_back({std::move(st)});
    g.out.emplace_back();
    return id;
  };
  add(ccs::canonicalize(t, prune));
  for (size_t i = 0; i < g.nodes.size(); i++) {
    if (g.nodes.size() > budget.maxStates || g.edges.size() > budget.maxEdges) {
      g.truncated = true;
      break;
    }
    g.nodes[i].expanded = true;
    for (auto& rx : ccs::reductions(g.nodes[i].st)) {
      TargetGraph::Edge ed;
      ed.from = (int)i;
      ed.to = add(ccs::canonicalizeStep(g.nodes[i].st, rx, prune));
      ed.chan = rx.chan;
      ed.chanRole = names().canonRole(rx.chan);
      ed.outAtom = rx.outIdx;
      ed.inAtom = rx.inIdx;
      ed.replicated = rx.replicated;
      g.out[i].push_back((int)g.edges.size());
      g.edges.push_back(std::move(ed));
    }
  }
  size_t n = g.nodes.size();
  g.barbs.assign(n, {});
  g.reachSuccess.assign(n, 0);
  for (size_t i = 0; i < n; i++) {
    g.reachSuccess[i] = g.nodes[i].st.success;
    std::set<Name> res(g.nodes[i].st.restricted.begin(), g.nodes[i].st.restricted.end());
    for (Name r : g.nodes[i].st.rigidRes) res.insert(r);
    for (auto& a : g.nodes[i].st.atoms)
      if (a->k == ccs::TK::Output && !res.count(a->chan)) g.barbs[i].insert(a->chan);
  }
  bool chg = true;
  while (chg) {
    chg = false;
    for (auto& ed : g.edges) {
      for (Name b : g.barbs[ed.to])
        if (g.barbs[ed.from].insert(b).second) chg = true;
      if (g.reachSuccess[ed.to] && !g.reachSuccess[ed.from]) {
        g.reachSuccess[ed.from] = true;
        chg = true;
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------- analyses

inline bool hasCycle(size_t n, const std::vector<std::vector<int>>& succ) {
  std::vector<int> color(n, 0);
  std::vector<std::pair<int, size_t>> stack;
  for (size_t s = 0; s < n; s++) {
    if (color[s]) continue;
    stack.push_back({(int)s, 0});
    color[s] = 1;
    while (!stack.empty()) {
      auto& [u, k] = stack.back();
      if (k < succ[u].size()) {
        int v = succ[u][k++];
        if (color[v] == 1) return true;
        if (color[v] == 0) {
          color[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        color[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

inline bool detect_divergence(const SourceGraph& g) {
  std::vector<std::vector<int>> succ(g.terms.size());
  for (auto& e : g.edges) succ[e.from].push_back(e.to);
  return hasCycle(g.terms.size(), succ);
}

inline bool detect_divergence(const TargetGraph& g) {
  std::vector<std::vector<int>> succ(g.nodes.size());
  for (auto& e : g.edges) succ[e.from].push_back(e.to);
  return hasCycle(g.nodes.size(), succ);
}

// every cycle contains at least one sim edge <=> the aux-only subgraph is acyclic
inline bool auxOnlyCycleFree(const TargetGraph& g) {
  std::vector<std::vector<int>> succ(g.nodes.size());
  for (auto& e : g.edges)
    if (e.cls != StepClass::Sim) succ[e.from].push_back(e.to);
  return !hasCycle(g.nodes.size(), succ);
}

struct LockViolation {
  int node;
  int clause;
  std::string detail;
};

// Sum-lock invariants over every node: (1) at most one positive
// instantiation per lock, (2) a positive instantiation excludes any other
// instantiation of the same lock, (3) no positive instantiation of a lock
// that was negatively instantiated here or in an ancestor.
inline std::vector<LockViolation> check_lock_invariants(const TargetGraph& g) {
  std::vector<LockViolation> out;
  for (size_t i = 0; i < g.nodes.size(); i++) {
    std::map<Name, std::pair<int, int>> counts;  // lock -> (pos, neg)
    for (auto& a : g.nodes[i].st.atoms) {
      bool pos;
      if (detail::isInstantiation(a, pos) && names().canonRole(a->chan) == Role::Lock) {
        if (pos)
          counts[a->chan].first++;
        else
          counts[a->chan].second++;
      }
    }
    for (auto& [l, c] : counts) {
      if (c.first > 1) out.push_back({(int)i, 1, "two positive instantiations of " + nameText(l)});
      if (c.first >= 1 && c.first + c.second > 1)
        out.push_back({(int)i, 2, "positive and other instantiation of " + nameText(l)});
      if (c.first >= 1 && g.nodes[i].deadLocks.count(l) && c.second == 0)
        out.push_back({(int)i, 3, "positive instantiation of dead lock " + nameText(l)});
    }
  }
  return out;
}

// ---------------------------------------------------------------- DOT

inline std::string dotEscape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

inline void write_dot(const SourceGraph& g, const std::string& path) {
  std::ofstream f(path);
  f << "digraph source {\n  rankdir=LR;\n";
  for (size_t i = 0; i < g.terms.size(); i++) {
    std::string b;
    for (Name x : g.reachBarbs[i]) b += (b.empty() ? "" : ",") + nameText(x);
    f << "  n" << i << " [label=\"" << dotEscape(csp::print(g.terms[i])) << "\\n{" << b << "}"
      << (g.reachSuccess[i] ? " tick" : "") << "\"];\n";
  }
  for (auto& e : g.edges)
    f << "  n" << e.from << " -> n" << e.to << " [label=\""
      << (e.label.tau ? std::string("tau") : nameText(e.label.act)) << "\"];\n";
  f << "}\n";
}

inline void write_dot(const TargetGraph& g, const std::string& path) {
  std::ofstream f(path);
  f << "digraph target {\n  rankdir=LR;\n";
  for (size_t i = 0; i < g.nodes.size(); i++) {
    std::string b;
    for (Name x : g.barbs[i]) b += (b.empty() ? "" : ",") + nameText(x);
    f << "  n" << i << " [label=\"s" << i << "\\n{" << b << "}"
      << (g.reachSuccess[i] ? " tick" : "") << "\"];\n";
  }
  std::set<std::tuple<int, int, int>> seen;
  for (auto& e : g.edges) {
    if (!seen.insert({e.from, e.to, (int)e.cls}).second) continue;  // dedup
    f << "  n" << e.from << " -> n" << e.to;
    if (e.cls == StepClass::Sim)
      f << " [color=red penwidth=2 label=\"sim" << (e.flagged ? "?" : "") << "\"]";
    f << ";\n";
  }
  f << "}\n";
}

}  // namespace cspccs::xp
