#pragma once
// Quality-criteria checks per source term and coordinator: operational
// correspondence (strict and weak), divergence reflection, success
// sensitivity, barb respect, name invariance, distributability preservation.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "encode.hpp"
#include "equivalence.hpp"
#include "graph.hpp"

namespace cspccs::crit {

using eq::Verdict;
using xp::Budget;

struct Context {
  csp::P p;
  bool central;
  xp::SourceGraph srcG;
  enc::Encoding encoding;
  xp::TargetGraph tgtG;
};

inline Context make_context(const csp::P& p, bool central, Budget budget = {}) {
  Context c{p, central, xp::build_source_graph(p, budget),
            central ? enc::encode_central(p) : enc::encode_decentral(p), {}};
  c.tgtG = xp::build_target_graph(c.encoding, central, budget);
  return c;
}

// Strict operational correspondence:
//   Complete: every source-reachable S' has a target state T with
//             encode(S') weakly bisimilar to T.
//   Sound:    every target state T has such an S'.
inline Verdict check_operational_correspondence_strict(const Context& c, Budget budget = {}) {
  if (c.srcG.truncated || c.tgtG.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  eq::View main = eq::view(c.tgtG);
  size_t nT = main.size();
  std::vector<char> covered(nT, 0);
  for (size_t i = 0; i < c.srcG.terms.size(); i++) {
    enc::Encoding di = c.central ? enc::encode_central(c.srcG.terms[i])
                                 : enc::encode_decentral(c.srcG.terms[i]);
    xp::TargetGraph dg = xp::build_target_graph(di, c.central, budget);
    if (dg.truncated) return {Verdict::Inconclusive, "derivative graph truncated", {}};
    auto m = eq::weak_bisim_matrix(eq::view(dg), main);
    bool any = false;
    for (size_t t = 0; t < nT; t++)
      if (m.at(dg.root, t)) {
        covered[t] = 1;
        any = true;
      }
    if (!any)
      return {Verdict::False,
              "completeness fails: no target state matches encoding of derivative '" +
                  csp::print(c.srcG.terms[i]) + "'",
              {}};
  }
  for (size_t t = 0; t < nT; t++)
    if (!covered[t])
      return {Verdict::False,
              "soundness fails: target state " + std::to_string(t) +
                  " matches no source derivative",
              {}};
  return {Verdict::True, "", {}};
}

// Weak operational correspondence (coupled similarity):
//   Complete: every source derivative S' is coupled similar to some T.
//   Weakly sound: every target T can be extended T ==> T' to a state
//   coupled similar to some encode(S').
inline Verdict check_weak_operational_correspondence(const Context& c, Budget budget = {}) {
  if (c.srcG.truncated || c.tgtG.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  eq::View main = eq::view(c.tgtG);
  size_t nT = main.size();
  std::vector<char> meets(nT, 0);  // T' coupled similar to some derivative encoding
  for (size_t i = 0; i < c.srcG.terms.size(); i++) {
    enc::Encoding di = c.central ? enc::encode_central(c.srcG.terms[i])
                                 : enc::encode_decentral(c.srcG.terms[i]);
    xp::TargetGraph dg = xp::build_target_graph(di, c.central, budget);
    if (dg.truncated) return {Verdict::Inconclusive, "derivative graph truncated", {}};
    auto [ab, ba] = eq::coupled_sim_matrices(eq::view(dg), main);
    bool any = false;
    for (size_t t = 0; t < nT; t++)
      if (ab.at(dg.root, t) && ba.at(t, dg.root)) {
        meets[t] = 1;
        any = true;
      }
    if (!any)
      return {Verdict::False,
              "completeness fails: no target state coupled similar to encoding of '" +
                  csp::print(c.srcG.terms[i]) + "'",
              {}};
  }
  // weak soundness: forward closure can always reach a meeting point
  std::vector<char> canMeet = meets;
  bool chg = true;
  while (chg) {
    chg = false;
    for (auto& e : c.tgtG.edges)
      if (canMeet[e.to] && !canMeet[e.from]) {
        canMeet[e.from] = 1;
        chg = true;
      }
  }
  for (size_t t = 0; t < nT; t++)
    if (!canMeet[t])
      return {Verdict::False,
              "weak soundness fails: target state " + std::to_string(t) +
                  " cannot reach any matched state",
              {}};
  return {Verdict::True, "", {}};
}

inline Verdict check_divergence_reflection(const Context& c) {
  if (c.srcG.truncated || c.tgtG.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  bool td = xp::detect_divergence(c.tgtG);
  bool sd = xp::detect_divergence(c.srcG);
  if (td && !sd)
    return {Verdict::False, "target diverges but source does not", {}};
  return {Verdict::True, "", {}};
}

inline Verdict check_success_sensitivity(const Context& c) {
  if (c.srcG.truncated || c.tgtG.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  bool s = c.srcG.reachSuccess[c.srcG.root];
  bool t = c.tgtG.reachSuccess[c.tgtG.root];
  if (s != t)
    return {Verdict::False,
            std::string("source ") + (s ? "reaches" : "does not reach") +
                " success, target " + (t ? "does" : "does not"),
            {}};
  return {Verdict::True, "", {}};
}

inline Verdict check_barb_respect(const Context& c) {
  if (c.srcG.truncated || c.tgtG.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  const std::set<Name>& s = c.srcG.reachBarbs[c.srcG.root];
  const std::set<Name>& t = c.tgtG.barbs[c.tgtG.root];
  if (s != t) {
    auto fmt = [](const std::set<Name>& xs) {
      std::string r = "{";
      for (Name x : xs) r += (r.size() > 1 ? "," : "") + nameText(x);
      return r + "}";
    };
    return {Verdict::False, "barb sets differ: source " + fmt(s) + " vs target " + fmt(t), {}};
  }
  return {Verdict::True, "", {}};
}

inline Verdict check_name_invariance(const csp::P& p, const std::map<Name, Name>& sigma,
                                     bool central) {
  enc::Encoding e1 = central ? enc::encode_central(csp::applySigma(p, sigma))
                             : enc::encode_decentral(csp::applySigma(p, sigma));
  enc::Encoding e2 = central ? enc::encode_central(p) : enc::encode_decentral(p);
  ccs::T lhs = e1.term;
  ccs::T rhs = enc::applySigmaPrime(e2.term, sigma);
  std::string k1 = ccs::canonicalize(lhs, false).key;
  std::string k2 = ccs::canonicalize(rhs, false).key;
  if (k1 != k2)
    return {Verdict::False, "canonical forms of encode(sigma(p)) and sigma'(encode(p)) differ", {}};
  return {Verdict::True, "", {}};
}

// Deterministic injective renamings used by reports and the acceptance suite.
inline std::vector<std::map<Name, Name>> invariance_sigmas(const csp::P& p) {
  std::set<Name> fnSet = csp::freeNames(p);
  std::vector<Name> fn(fnSet.begin(), fnSet.end());
  std::vector<std::map<Name, Name>> out;
  std::map<Name, Name> fresh, rot, swap;
  for (size_t i = 0; i < fn.size(); i++) {
    fresh[fn[i]] = names().source("nv" + std::to_string(i));
    rot[fn[i]] = fn[(i + 1) % std::max<size_t>(fn.size(), 1)];
    swap[fn[i]] = fn[i < 2 && fn.size() >= 2 ? 1 - i : i];
  }
  out.push_back(fresh);
  out.push_back(rot);
  out.push_back(swap);
  return out;
}

namespace detail {
// nodes reachable from `start` along paths containing a commit of `a`
inline std::set<int> reachableAfterCommit(const xp::TargetGraph& g, int start, Name a) {
  std::vector<char> pre(g.nodes.size(), 0), post(g.nodes.size(), 0);
  std::vector<int> stack{start};
  pre[start] = 1;
  std::vector<int> seeds;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int ei : g.out[u]) {
      auto& e = g.edges[ei];
      if (e.commits.count(a) && !post[e.to]) {
        post[e.to] = 1;
        seeds.push_back(e.to);
      }
      if (!pre[e.to]) {
        pre[e.to] = 1;
        stack.push_back(e.to);
      }
    }
  }
  stack = seeds;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int ei : g.out[u]) {
      int v = g.edges[ei].to;
      if (!post[v]) {
        post[v] = 1;
        stack.push_back(v);
      }
    }
  }
  std::set<int> r;
  for (size_t i = 0; i < post.size(); i++)
    if (post[i]) r.insert((int)i);
  return r;
}
}  // namespace detail

// Commutation primitive: some state offers commit edges for both actions
// consuming disjoint atoms, and executing them in either order converges on
// a common canonical state.
inline bool commit_diamond(const xp::TargetGraph& g, Name a, Name b) {
  for (size_t u = 0; u < g.nodes.size(); u++) {
    for (int e1i : g.out[u]) {
      auto& e1 = g.edges[e1i];
      if (!e1.commits.count(a)) continue;
      for (int e2i : g.out[u]) {
        auto& e2 = g.edges[e2i];
        if (e2i == e1i || !e2.commits.count(b)) continue;
        if (e1.outAtom == e2.outAtom || e1.outAtom == e2.inAtom || e1.inAtom == e2.outAtom ||
            e1.inAtom == e2.inAtom)
          continue;  // contended resource
        std::set<int> r1 = detail::reachableAfterCommit(g, e1.to, b);
        std::set<int> r2 = detail::reachableAfterCommit(g, e2.to, a);
        for (int n : r1)
          if (r2.count(n)) return true;
      }
    }
  }
  return false;
}

// Distributable source-step pairs at the root: distinct transitions with
// disjoint resource sets.  Only pairs of visible actions are checked (the
// corpus has no distributable tau pairs); the commutation check is a
// sufficient operational condition, not the full distributability claim.
inline Verdict check_distributability_preservation(const Context& c) {
  if (c.tgtG.truncated) return {Verdict::Inconclusive, "graph truncated by budget", {}};
  auto root = csp::transitions(c.p);
  bool anyPair = false;
  for (size_t i = 0; i < root.size(); i++)
    for (size_t j = i + 1; j < root.size(); j++) {
      bool disjoint = true;
      for (auto* r : root[i].resources)
        if (root[j].resources.count(r)) disjoint = false;
      if (!disjoint) continue;
      if (root[i].label.tau || root[j].label.tau) continue;  // approximation scope
      anyPair = true;
      if (!commit_diamond(c.tgtG, root[i].label.act, root[j].label.act))
        return {Verdict::False,
                "distributable steps " + nameText(root[i].label.act) + "/" +
                    nameText(root[j].label.act) + " do not commute in the target",
                {}};
    }
  return {Verdict::True, anyPair ? "" : "vacuous: no distributable pair", {}};
}

struct CriteriaReport {
  std::string term;
  std::string coordinator;
  std::vector<std::pair<std::string, Verdict>> criteria;
  size_t nodes = 0, edges = 0, simEdges = 0;
  bool truncated = false;
};

inline CriteriaReport run_criteria(const csp::P& p, bool central, Budget budget = {}) {
  Context c = make_context(p, central, budget);
  CriteriaReport r;
  r.term = csp::print(p);
  r.coordinator = central ? "central" : "decentral";
  r.nodes = c.tgtG.nodes.size();
  r.edges = c.tgtG.edges.size();
  r.simEdges = c.tgtG.simEdgeCount();
  r.truncated = c.tgtG.truncated;
  if (central)
    r.criteria.push_back(
        {"operational-correspondence-strict", check_operational_correspondence_strict(c, budget)});
  else
    r.criteria.push_back(
        {"weak-operational-correspondence", check_weak_operational_correspondence(c, budget)});
  r.criteria.push_back({"divergence-reflection", check_divergence_reflection(c)});
  r.criteria.push_back({"success-sensitivity", check_success_sensitivity(c)});
  r.criteria.push_back({"barb-respect", check_barb_respect(c)});
  {
    Verdict v{Verdict::True, "", {}};
    for (auto& sig : invariance_sigmas(p)) {
      Verdict vi = check_name_invariance(p, sig, central);
      if (vi.result != Verdict::True) {
        v = vi;
        break;
      }
    }
    r.criteria.push_back({"name-invariance", v});
  }
  if (!central)
    r.criteria.push_back({"distributability", check_distributability_preservation(c)});
  {
    auto viols = xp::check_lock_invariants(c.tgtG);
    Verdict v = viols.empty() ? Verdict{Verdict::True, "", {}}
                              : Verdict{Verdict::False,
                                        "clause " + std::to_string(viols[0].clause) + " at node " +
                                            std::to_string(viols[0].node) + ": " + viols[0].detail,
                                        {}};
    r.criteria.push_back({"lock-invariants", v});
  }
  return r;
}

}  // namespace cspccs::crit
