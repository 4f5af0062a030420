// Weak reduction bisimilarity and coupled similarity over finite graphs.

#include <catch2/catch_amalgamated.hpp>

#include "cspccs/corpus.hpp"
#include "cspccs/equivalence.hpp"
#include "cspccs/parser.hpp"

using namespace cspccs;

static Name nm(const char* s) { return names().source(s); }

static eq::View sourceView(const std::string& term) {
  return eq::view(xp::build_source_graph(csp::parse(term)));
}

TEST_CASE("bisimilarity is reflexive on source graphs") {
  for (const char* t : {"a -> STOP", "DIV", "a -> STOP |~| b -> STOP", "mu X . (a -> X)"}) {
    auto v = sourceView(t);
    INFO(t);
    CHECK(eq::weak_bisim_check(v, v, v.root, v.root).isTrue());
    CHECK(eq::coupled_sim_check(v, v, v.root, v.root).isTrue());
  }
}

TEST_CASE("distinct barbs are told apart") {
  auto a = sourceView("a -> STOP"), b = sourceView("b -> STOP");
  auto v = eq::weak_bisim_check(a, b, a.root, b.root);
  CHECK(v.result == eq::Verdict::False);
  CHECK(v.witness.find("signature mismatch") != std::string::npos);
  CHECK(eq::coupled_sim_check(a, b, a.root, b.root).result == eq::Verdict::False);
}

TEST_CASE("weakly equal processes with different syntax are bisimilar") {
  // duplicate branch collapses; a committed internal choice equals its body
  auto a = sourceView("a -> STOP"), aa = sourceView("a -> STOP [] a -> STOP");
  CHECK(eq::weak_bisim_check(a, aa, a.root, aa.root).isTrue());
  auto ia = sourceView("a -> STOP |~| a -> STOP");
  CHECK(eq::weak_bisim_check(a, ia, a.root, ia.root).isTrue());
}

TEST_CASE("success is part of the signature") {
  auto t = sourceView("TICK"), s = sourceView("STOP");
  CHECK(eq::weak_bisim_check(t, s, t.root, s.root).result == eq::Verdict::False);
}

TEST_CASE("truncated graphs give inconclusive verdicts") {
  auto v = sourceView("a -> STOP");
  auto w = v;
  w.truncated = true;
  CHECK(eq::weak_bisim_check(v, w, v.root, w.root).result == eq::Verdict::Inconclusive);
  CHECK(eq::coupled_sim_check(v, w, v.root, w.root).result == eq::Verdict::Inconclusive);
}

// A hand-built pair: gradual commitment.  The left graph resolves a
// three-way choice in one step; the right graph may first rule out only the
// middle option, passing through a state whose barbs {a,c} match no left
// state.  They are coupled similar but not weakly bisimilar.
static std::pair<eq::View, eq::View> gradualCommitment() {
  Name a = nm("a"), b = nm("b"), c = nm("c");
  eq::View l;
  l.succ = {{1, 2, 3}, {}, {}, {}};
  l.barbs = {{a, b, c}, {a}, {b}, {c}};
  l.success = {0, 0, 0, 0};
  eq::View r;
  r.succ = {{1, 3}, {2, 4}, {}, {}, {}};
  r.barbs = {{a, b, c}, {a, c}, {a}, {b}, {c}};
  r.success = {0, 0, 0, 0, 0};
  return {l, r};
}

TEST_CASE("partial commitment: coupled similar but not bisimilar") {
  auto [l, r] = gradualCommitment();
  CHECK(eq::weak_bisim_check(l, r, 0, 0).result == eq::Verdict::False);
  auto cs = eq::coupled_sim_check(l, r, 0, 0);
  REQUIRE(cs.isTrue());
  // the intermediate state pairs with no left state in the bisimulation
  auto m = eq::weak_bisim_matrix(l, r);
  for (size_t u = 0; u < l.size(); u++) CHECK_FALSE(m.at(u, 1));
}

TEST_CASE("matrix and single-pair checks agree") {
  auto x = sourceView("a -> STOP |~| b -> STOP");
  auto y = sourceView("a -> STOP [] b -> STOP");
  auto m = eq::weak_bisim_matrix(x, y);
  CHECK((bool)m.at(x.root, y.root) ==
        eq::weak_bisim_check(x, y, x.root, y.root).isTrue());
  // internal vs external choice over distinct actions: not bisimilar
  CHECK_FALSE(m.at(x.root, y.root));
}

TEST_CASE("bisimilarity implies coupled similarity") {
  std::vector<std::pair<std::string, std::string>> pairs = {
      {"a -> STOP", "a -> STOP [] a -> STOP"},
      {"DIV", "mu X . X"},
      {"a -> STOP |~| a -> STOP", "a -> STOP"},
  };
  for (auto& [s, t] : pairs) {
    auto v = sourceView(s), w = sourceView(t);
    INFO(s << "  vs  " << t);
    REQUIRE(eq::weak_bisim_check(v, w, v.root, w.root).isTrue());
    CHECK(eq::coupled_sim_check(v, w, v.root, w.root).isTrue());
  }
}

TEST_CASE("a true verdict carries its relation") {
  auto v = sourceView("a -> b -> STOP");
  auto r = eq::weak_bisim_check(v, v, v.root, v.root);
  REQUIRE(r.isTrue());
  CHECK(r.relation.size() >= v.size());  // at least the diagonal
  bool rootThere = false;
  for (auto& [u, w] : r.relation) rootThere |= (u == v.root && w == v.root);
  CHECK(rootThere);
}

TEST_CASE("source terms are bisimilar to small central encodings") {
  for (const char* id : {"prefix", "stop", "tick", "intchoice", "conceal"}) {
    csp::P p = corpusTerm(id);
    auto sg = xp::build_source_graph(p);
    auto tg = xp::build_target_graph(enc::encode_central(p), true);
    auto vs = eq::view(sg), vt = eq::view(tg);
    INFO(id);
    CHECK(eq::weak_bisim_check(vs, vt, sg.root, tg.root).isTrue());
  }
}
