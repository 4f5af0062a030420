#pragma once
// Success-sensitive, barb-respecting weak reduction bisimilarity and coupled
// similarity between states of two finite reduction graphs.
//
// Both graphs are reduced to a uniform view (successors + per-node reachable
// predicates in source-name space).  The checks are greatest-fixpoint
// eliminations over the pair matrix: start from signature-equal pairs and
// delete pairs with an unanswerable challenge (strong challenge, weak
// response over the precomputed reflexive-transitive closure).  A returned
// `true` relation is re-validated clause by clause before the verdict is
// emitted.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"
#include "names.hpp"

namespace cspccs::eq {

struct View {
  int root = 0;
  bool truncated = false;
  std::vector<std::vector<int>> succ;
  std::vector<std::set<Name>> barbs;  // reachable barbs
  std::vector<char> success;          // reachable success
  size_t size() const { return succ.size(); }
};

inline View view(const xp::SourceGraph& g) {
  View v;
  v.root = g.root;
  v.truncated = g.truncated;
  v.succ.resize(g.terms.size());
  for (auto& e : g.edges) v.succ[e.from].push_back(e.to);
  v.barbs = g.reachBarbs;
  v.success.assign(g.reachSuccess.begin(), g.reachSuccess.end());
  return v;
}

inline View view(const xp::TargetGraph& g) {
  View v;
  v.root = g.root;
  v.truncated = g.truncated;
  v.succ.resize(g.nodes.size());
  for (auto& e : g.edges) v.succ[e.from].push_back(e.to);
  v.barbs = g.barbs;
  v.success.assign(g.reachSuccess.begin(), g.reachSuccess.end());
  return v;
}

struct Verdict {
  enum R { True, False, Inconclusive } result;
  std::string witness;
  std::vector<std::pair<int, int>> relation;  // surviving pairs for True
  bool isTrue() const { return result == True; }
};

namespace detail {

class Bits {
 public:
  Bits(size_t n = 0) : n_(n), w_((n + 63) / 64, 0) {}
  void set(size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
  void clear(size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  bool orWith(const Bits& o) {  // returns true if changed
    bool chg = false;
    for (size_t i = 0; i < w_.size(); i++) {
      uint64_t nw = w_[i] | o.w_[i];
      if (nw != w_[i]) {
        w_[i] = nw;
        chg = true;
      }
    }
    return chg;
  }

 private:
  size_t n_;
  std::vector<uint64_t> w_;
};

// reflexive-transitive closure, one bitset row per node
inline std::vector<Bits> closure(const View& v) {
  size_t n = v.size();
  std::vector<Bits> r(n, Bits(n));
  for (size_t i = 0; i < n; i++) r[i].set(i);
  bool chg = true;
  while (chg) {
    chg = false;
    for (size_t i = 0; i < n; i++)
      for (int j : v.succ[i])
        if (r[i].orWith(r[j])) chg = true;
  }
  return r;
}

struct PairMatrix {
  size_t n1, n2;
  std::vector<char> a;
  PairMatrix(size_t x, size_t y) : n1(x), n2(y), a(x * y, 0) {}
  char& at(size_t i, size_t j) { return a[i * n2 + j]; }
  char at(size_t i, size_t j) const { return a[i * n2 + j]; }
};

inline bool sigEqual(const View& g1, const View& g2, int u, int v) {
  return g1.success[u] == g2.success[v] && g1.barbs[u] == g2.barbs[v];
}

// One-directional observation condition for simulation-style pairs: the
// simulating side (v) must offer at least the observables of the simulated
// side (u).  Requiring it in both root directions yields equality at the
// roots, but intermediate pairs of a coupled simulation may be strictly
// included (partial commitments rule options out without matching any
// single source state).
inline bool sigIncluded(const View& g1, const View& g2, int u, int v) {
  if (g1.success[u] && !g2.success[v]) return false;
  return std::includes(g2.barbs[v].begin(), g2.barbs[v].end(), g1.barbs[u].begin(),
                       g1.barbs[u].end());
}

// exists v' in reach(v) with alive(u', v')
inline bool weakAnswer(const PairMatrix& alive, const Bits& reachV, size_t n2, int uPrime) {
  for (size_t vp = 0; vp < n2; vp++)
    if (reachV.get(vp) && alive.at(uPrime, vp)) return true;
  return false;
}

}  // namespace detail

inline Verdict weak_bisim_check(const View& g1, const View& g2, int s1, int s2) {
  using namespace detail;
  if (g1.truncated || g2.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  size_t n1 = g1.size(), n2 = g2.size();
  auto r1 = closure(g1), r2 = closure(g2);
  PairMatrix alive(n1, n2);
  for (size_t u = 0; u < n1; u++)
    for (size_t v = 0; v < n2; v++) alive.at(u, v) = sigEqual(g1, g2, (int)u, (int)v);

  auto check = [&](size_t u, size_t v, std::string* why) {
    for (int up : g1.succ[u]) {
      bool ok = false;
      for (size_t vp = 0; vp < n2 && !ok; vp++)
        if (r2[v].get(vp) && alive.at(up, vp)) ok = true;
      if (!ok) {
        if (why) *why = "challenge " + std::to_string(u) + "->" + std::to_string(up) +
                        " unanswered from right state " + std::to_string(v);
        return false;
      }
    }
    for (int vp : g2.succ[v]) {
      bool ok = false;
      for (size_t up = 0; up < n1 && !ok; up++)
        if (r1[u].get(up) && alive.at(up, vp)) ok = true;
      if (!ok) {
        if (why) *why = "challenge " + std::to_string(v) + "->" + std::to_string(vp) +
                        " unanswered from left state " + std::to_string(u);
        return false;
      }
    }
    return true;
  };

  bool chg = true;
  while (chg) {
    chg = false;
    for (size_t u = 0; u < n1; u++)
      for (size_t v = 0; v < n2; v++) {
        if (!alive.at(u, v)) continue;
        if (!check(u, v, nullptr)) {
          alive.at(u, v) = 0;
          chg = true;
        }
      }
  }

  if (!alive.at(s1, s2)) {
    std::string why;
    if (!sigEqual(g1, g2, s1, s2)) {
      auto fmt = [](const View& g, int s) {
        std::string b;
        for (Name x : g.barbs[s]) b += (b.empty() ? "" : ",") + nameText(x);
        return "{" + b + "}" + (g.success[s] ? "+tick" : "");
      };
      why = "signature mismatch: " + fmt(g1, s1) + " vs " + fmt(g2, s2);
    } else {
      check(s1, s2, &why);
    }
    return {Verdict::False, why, {}};
  }

  // self-audit: the surviving relation must satisfy every clause
  Verdict res{Verdict::True, "", {}};
  for (size_t u = 0; u < n1; u++)
    for (size_t v = 0; v < n2; v++)
      if (alive.at(u, v)) {
        std::string why;
        if (!sigEqual(g1, g2, (int)u, (int)v) || !check(u, v, &why))
          return {Verdict::False, "self-audit failed at (" + std::to_string(u) + "," +
                                      std::to_string(v) + "): " + why,
                  {}};
        res.relation.push_back({(int)u, (int)v});
      }
  return res;
}

inline Verdict coupled_sim_check(const View& g1, const View& g2, int s1, int s2) {
  using namespace detail;
  if (g1.truncated || g2.truncated)
    return {Verdict::Inconclusive, "graph truncated by budget", {}};
  size_t n1 = g1.size(), n2 = g2.size();
  auto r1 = closure(g1), r2 = closure(g2);
  PairMatrix ab(n1, n2), ba(n2, n1);
  for (size_t u = 0; u < n1; u++)
    for (size_t v = 0; v < n2; v++) {
      ab.at(u, v) = sigIncluded(g1, g2, (int)u, (int)v);
      ba.at(v, u) = sigIncluded(g2, g1, (int)v, (int)u);
    }

  // (u,v) in AB survives iff for every u -> u' there are v ==> v' with
  // (u',v') in AB and v ==> v'' with (v'',u') in BA (the coupling clause).
  auto checkAB = [&](size_t u, size_t v, std::string* why) {
    for (int up : g1.succ[u]) {
      bool sim = false, coup = false;
      for (size_t vp = 0; vp < n2 && !(sim && coup); vp++) {
        if (!r2[v].get(vp)) continue;
        if (ab.at(up, vp)) sim = true;
        if (ba.at(vp, up)) coup = true;
      }
      if (!sim || !coup) {
        if (why) *why = std::string(!sim ? "simulation" : "coupling") + " clause fails for " +
                        std::to_string(u) + "->" + std::to_string(up) + " against " +
                        std::to_string(v);
        return false;
      }
    }
    return true;
  };
  auto checkBA = [&](size_t v, size_t u, std::string* why) {
    for (int vp : g2.succ[v]) {
      bool sim = false, coup = false;
      for (size_t up = 0; up < n1 && !(sim && coup); up++) {
        if (!r1[u].get(up)) continue;
        if (ba.at(vp, up)) sim = true;
        if (ab.at(up, vp)) coup = true;
      }
      if (!sim || !coup) {
        if (why) *why = std::string(!sim ? "simulation" : "coupling") + " clause fails for " +
                        std::to_string(v) + "->" + std::to_string(vp) + " against " +
                        std::to_string(u);
        return false;
      }
    }
    return true;
  };

  bool chg = true;
  while (chg) {
    chg = false;
    for (size_t u = 0; u < n1; u++)
      for (size_t v = 0; v < n2; v++) {
        if (ab.at(u, v) && !checkAB(u, v, nullptr)) {
          ab.at(u, v) = 0;
          chg = true;
        }
        if (ba.at(v, u) && !checkBA(v, u, nullptr)) {
          ba.at(v, u) = 0;
          chg = true;
        }
      }
  }

  if (!ab.at(s1, s2) || !ba.at(s2, s1)) {
    std::string why;
    if (!sigIncluded(g1, g2, s1, s2) || !sigIncluded(g2, g1, s2, s1))
      why = "signature mismatch at roots";
    else if (!ab.at(s1, s2))
      checkAB(s1, s2, &why);
    else
      checkBA(s2, s1, &why);
    return {Verdict::False, why, {}};
  }

  Verdict res{Verdict::True, "", {}};
  for (size_t u = 0; u < n1; u++)
    for (size_t v = 0; v < n2; v++) {
      if (ab.at(u, v)) {
        std::string why;
        if (!sigIncluded(g1, g2, (int)u, (int)v) || !checkAB(u, v, &why))
          return {Verdict::False, "self-audit failed: " + why, {}};
        res.relation.push_back({(int)u, (int)v});
      }
      if (ba.at(v, u)) {
        std::string why;
        if (!sigIncluded(g2, g1, (int)v, (int)u) || !checkBA(v, u, &why))
          return {Verdict::False, "self-audit failed: " + why, {}};
      }
    }
  return res;
}

// Full surviving-pair matrix of the weak-bisimulation fixpoint (no audit):
// entry (u,v) is 1 iff u and v are weakly bisimilar.
inline detail::PairMatrix weak_bisim_matrix(const View& g1, const View& g2) {
  using namespace detail;
  size_t n1 = g1.size(), n2 = g2.size();
  auto r1 = closure(g1), r2 = closure(g2);
  PairMatrix alive(n1, n2);
  for (size_t u = 0; u < n1; u++)
    for (size_t v = 0; v < n2; v++) alive.at(u, v) = sigEqual(g1, g2, (int)u, (int)v);
  bool chg = true;
  while (chg) {
    chg = false;
    for (size_t u = 0; u < n1; u++)
      for (size_t v = 0; v < n2; v++) {
        if (!alive.at(u, v)) continue;
        bool ok = true;
        for (int up : g1.succ[u]) {
          bool ans = false;
          for (size_t vp = 0; vp < n2 && !ans; vp++)
            if (r2[v].get(vp) && alive.at(up, vp)) ans = true;
          if (!ans) {
            ok = false;
            break;
          }
        }
        if (ok)
          for (int vp : g2.succ[v]) {
            bool ans = false;
            for (size_t up = 0; up < n1 && !ans; up++)
              if (r1[u].get(up) && alive.at(up, vp)) ans = true;
            if (!ans) {
              ok = false;
              break;
            }
          }
        if (!ok) {
          alive.at(u, v) = 0;
          chg = true;
        }
      }
  }
  return alive;
}

// Coupled-simulation fixpoint matrices: first component oriented g1 x g2,
// second g2 x g1.  (u,v) are coupled similar iff ab(u,v) and ba(v,u).
inline std::pair<detail::PairMatrix, detail::PairMatrix> coupled_sim_matrices(const View& g1,
                                                                              const View& g2) {
  using namespace detail;
  size_t n1 = g1.size(), n2 = g2.size();
  auto r1 = closure(g1), r2 = closure(g2);
  PairMatrix ab(n1, n2), ba(n2, n1);
  for (size_t u = 0; u < n1; u++)
    for (size_t v = 0; v < n2; v++) {
      ab.at(u, v) = sigIncluded(g1, g2, (int)u, (int)v);
      ba.at(v, u) = sigIncluded(g2, g1, (int)v, (int)u);
    }
  bool chg = true;
  while (chg) {
    chg = false;
    for (size_t u = 0; u < n1; u++)
      for (size_t v = 0; v < n2; v++) {
        if (ab.at(u, v)) {
          bool ok = true;
          for (int up : g1.succ[u]) {
            bool sim = false, coup = false;
            for (size_t vp = 0; vp < n2 && !(sim && coup); vp++) {
              if (!r2[v].get(vp)) continue;
              if (ab.at(up, vp)) sim = true;
              if (ba.at(vp, up)) coup = true;
            }
            if (!sim || !coup) {
              ok = false;
              break;
            }
          }
          if (!ok) {
            ab.at(u, v) = 0;
            chg = true;
          }
        }
        if (ba.at(v, u)) {
          bool ok = true;
          for (int vp : g2.succ[v]) {
            bool sim = false, coup = false;
            for (size_t up = 0; up < n1 && !(sim && coup); up++) {
              if (!r1[u].get(up)) continue;
              if (ba.at(vp, up)) sim = true;
              if (ab.at(up, vp)) coup = true;
            }
            if (!sim || !coup) {
              ok = false;
              break;
            }
          }
          if (!ok) {
            ba.at(v, u) = 0;
            chg = true;
          }
        }
      }
  }
  return {std::move(ab), std::move(ba)};
}

}  // namespace cspccs::eq
