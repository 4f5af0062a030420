// Whole-artifact acceptance suite: one pass/fail line per criterion.
// Exit status 0 iff every criterion passes.

#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cspccs/corpus.hpp"
#include "cspccs/criteria.hpp"
#include "cspccs/parser.hpp"

using namespace cspccs;

namespace {

struct Ctx {
  crit::Context c;
  eq::View vs, vt;
};

std::map<std::string, Ctx> gCentral, gDecentral;

Ctx& ctx(const std::string& id, bool central) {
  auto& m = central ? gCentral : gDecentral;
  auto it = m.find(id);
  if (it != m.end()) return it->second;
  crit::Context c = crit::make_context(corpusTerm(id), central);
  eq::View vs = eq::view(c.srcG), vt = eq::view(c.tgtG);
  return m.emplace(id, Ctx{std::move(c), std::move(vs), std::move(vt)}).first->second;
}

int failures = 0;

void report(int num, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << num << ": " << what
            << (detail.empty() ? "" : " -- " + detail) << std::endl;
  if (!ok) failures++;
}

std::string nameSet(const std::set<Name>& s) {
  std::string r = "{";
  for (Name n : s) r += (r.size() > 1 ? "," : "") + nameText(n);
  return r + "}";
}

}  // namespace

int main() {
  auto ids = corpus();

  // 1. weak bisimilarity of the centralised encoding on every corpus term
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      auto t0 = std::chrono::steady_clock::now();
      Ctx& x = ctx(e.id, true);
      auto v = eq::weak_bisim_check(x.vs, x.vt, x.c.srcG.root, x.c.tgtG.root);
      auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!v.isTrue()) {
        ok = false;
        detail = e.id + ": " + v.witness;
        break;
      }
      if (secs > 60) {
        ok = false;
        detail = e.id + ": exceeded 60s (" + std::to_string(secs) + "s)";
        break;
      }
    }
    report(1, "central encoding weakly bisimilar to source (all corpus terms)", ok, detail);
  }

  // 2. coupled similarity of the decentralised encoding on every corpus term
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      auto t0 = std::chrono::steady_clock::now();
      Ctx& x = ctx(e.id, false);
      auto v = eq::coupled_sim_check(x.vs, x.vt, x.c.srcG.root, x.c.tgtG.root);
      auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!v.isTrue()) {
        ok = false;
        detail = e.id + ": " + v.witness;
        break;
      }
      if (secs > 60) {
        ok = false;
        detail = e.id + ": exceeded 60s";
        break;
      }
    }
    report(2, "decentral encoding coupled similar to source (all corpus terms)", ok, detail);
  }

  // 3. partial-commitment witness in the decentralised graph of E
  {
    Ctx& x = ctx("E", false);
    std::set<Name> oq{names().source("o"), names().source("q")};
    int pc = -1;
    for (size_t i = 0; i < x.c.tgtG.nodes.size(); i++)
      if (x.c.tgtG.barbs[i] == oq) {
        pc = (int)i;
        break;
      }
    bool ok = pc >= 0;
    std::string detail = ok ? "state " + std::to_string(pc) + " has barbs {o,q}"
                            : "no state with barbs {o,q}";
    if (ok) {
      for (size_t s = 0; s < x.c.srcG.terms.size() && ok; s++) {
        auto v = eq::weak_bisim_check(x.vs, x.vt, (int)s, pc);
        if (v.isTrue()) {
          ok = false;
          detail = "bisimilar to source derivative " + csp::print(x.c.srcG.terms[s]);
        }
      }
    }
    if (ok) {
      auto v = eq::coupled_sim_check(x.vs, x.vt, x.c.srcG.root, x.c.tgtG.root);
      if (!v.isTrue()) {
        ok = false;
        detail = "whole pair not coupled similar: " + v.witness;
      }
    }
    report(3, "partially committed state: no bisimilar source derivative, coupled overall", ok,
           detail);
  }

  // 4. strict correspondence holds centrally, fails on decentral E; weak holds decentrally
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      auto v = crit::check_operational_correspondence_strict(ctx(e.id, true).c);
      if (v.result != eq::Verdict::True) {
        ok = false;
        detail = "strict fails centrally on " + e.id + ": " + v.witness;
        break;
      }
    }
    if (ok) {
      auto v = crit::check_operational_correspondence_strict(ctx("E", false).c);
      if (v.result != eq::Verdict::False) {
        ok = false;
        detail = "strict soundness unexpectedly holds on decentral E";
      }
    }
    if (ok) {
      for (auto& e : ids) {
        auto v = crit::check_weak_operational_correspondence(ctx(e.id, false).c);
        if (v.result != eq::Verdict::True) {
          ok = false;
          detail = "weak fails decentrally on " + e.id + ": " + v.witness;
          break;
        }
      }
    }
    report(4, "strict correspondence central; strict fails on decentral E; weak decentral", ok,
           detail);
  }

  // 5. sum-lock invariants: zero violations over every reachable state
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      for (bool central : {true, false}) {
        auto viols = xp::check_lock_invariants(ctx(e.id, central).c.tgtG);
        if (!viols.empty()) {
          ok = false;
          detail = e.id + (central ? " central: " : " decentral: ") + viols[0].detail;
          break;
        }
      }
      if (!ok) break;
    }
    report(5, "lock invariants hold in every reachable target state", ok, detail);
  }

  // 6. divergence reflection, and no auxiliary-only cycles
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      for (bool central : {true, false}) {
        Ctx& x = ctx(e.id, central);
        auto v = crit::check_divergence_reflection(x.c);
        if (v.result != eq::Verdict::True) {
          ok = false;
          detail = e.id + ": " + v.witness;
          break;
        }
        if (!xp::auxOnlyCycleFree(x.c.tgtG)) {
          ok = false;
          detail = e.id + (central ? " central" : " decentral") + ": auxiliary-only cycle";
          break;
        }
      }
      if (!ok) break;
    }
    report(6, "divergence reflected; every target cycle contains a simulation step", ok, detail);
  }

  // 7. success sensitivity, barb respect, and the static announcement check
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      for (bool central : {true, false}) {
        Ctx& x = ctx(e.id, central);
        auto vs = crit::check_success_sensitivity(x.c);
        auto vb = crit::check_barb_respect(x.c);
        if (vs.result != eq::Verdict::True || vb.result != eq::Verdict::True) {
          ok = false;
          detail = e.id + ": " + (vs.result != eq::Verdict::True ? vs.witness : vb.witness);
          break;
        }
      }
      if (!ok) break;
      csp::P p = corpusTerm(e.id);
      Name act = names().fresh(Role::ActOuter, "act");
      auto stat = enc::innerStaticBarbs(enc::Encoder(p).inner(act), act);
      auto src = csp::barbs(p);
      if (stat != src) {
        ok = false;
        detail = e.id + ": static announcements " + nameSet(stat) + " vs source barbs " +
                 nameSet(src);
      }
      if (!ok) break;
    }
    report(7, "success and barbs agree at roots; static announcements match source barbs", ok,
           detail);
  }

  // 8. name invariance under three injective renamings per term
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      csp::P p = corpusTerm(e.id);
      auto sigmas = crit::invariance_sigmas(p);
      for (bool central : {true, false}) {
        for (size_t i = 0; i < sigmas.size(); i++) {
          auto v = crit::check_name_invariance(p, sigmas[i], central);
          if (v.result != eq::Verdict::True) {
            ok = false;
            detail = e.id + " sigma " + std::to_string(i) +
                     (central ? " central" : " decentral") + ": " + v.witness;
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
    report(8, "encoding commutes with injective renamings (3 per term)", ok, detail);
  }

  // 9. distributability preserved decentrally, broken by the central token
  {
    bool ok = true;
    std::string detail;
    for (auto& e : ids) {
      auto v = crit::check_distributability_preservation(ctx(e.id, false).c);
      if (v.result != eq::Verdict::True) {
        ok = false;
        detail = e.id + ": " + v.witness;
        break;
      }
    }
    if (ok) {
      auto v = crit::check_distributability_preservation(ctx("interleave", true).c);
      if (v.result != eq::Verdict::False) {
        ok = false;
        detail = "central interleaving unexpectedly passes the commutation check";
      }
    }
    report(9, "distributability: decentral commutes, central does not", ok, detail);
  }

  // 10. pruning safety and canonicalizer idempotence on random terms
  {
    bool ok = true;
    std::string detail;
    RandomTargetGen gen(42);
    for (int i = 0; i < 20 && ok; i++) {
      ccs::T t = gen.gen();
      auto gp = xp::build_raw_target_graph(t, {}, true);
      auto gu = xp::build_raw_target_graph(t, {}, false);
      if (gp.truncated || gu.truncated) {
        ok = false;
        detail = "sample " + std::to_string(i) + " truncated";
        break;
      }
      auto vp = eq::view(gp), vu = eq::view(gu);
      auto v = eq::weak_bisim_check(vp, vu, gp.root, gu.root);
      if (!v.isTrue() || gp.barbs[gp.root] != gu.barbs[gu.root] ||
          gp.reachSuccess[gp.root] != gu.reachSuccess[gu.root]) {
        ok = false;
        detail = "sample " + std::to_string(i) + " pruned/unpruned mismatch: " + v.witness;
      }
    }
    RandomTargetGen gen2(43);
    for (int i = 0; i < 1000 && ok; i++) {
      ccs::T t = gen2.gen();
      ccs::State s1 = ccs::canonicalize(t);
      ccs::State s2 = ccs::canonicalize(s1.toTerm());
      if (s1.key != s2.key) {
        ok = false;
        detail = "canonicalize not idempotent on sample " + std::to_string(i);
      }
    }
    report(10, "pruned vs unpruned graphs bisimilar (20 samples); canonicalize idempotent (1000)",
           ok, detail);
  }

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
