// Reduction-graph exploration: source graphs, target graphs, step
// classification, divergence detection, budgets, and lock invariants.

#include <cstdio>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "cspccs/corpus.hpp"
#include "cspccs/graph.hpp"
#include "cspccs/parser.hpp"

using namespace cspccs;

static Name nm(const char* s) { return names().source(s); }

TEST_CASE("source graph of the two-sided choice term") {
  auto g = xp::build_source_graph(corpusTerm("E"));
  CHECK(g.terms.size() == 3);  // the o- and p-derivatives coincide
  CHECK(g.out[g.root].size() == 3);
  CHECK(g.reachBarbs[g.root] == std::set<Name>({nm("o"), nm("p"), nm("q")}));
  CHECK_FALSE(g.reachSuccess[g.root]);
  CHECK_FALSE(g.truncated);
}

TEST_CASE("source graph reachable predicates close over taus") {
  auto g = xp::build_source_graph(csp::parse("a -> TICK |~| b -> STOP"));
  CHECK(g.reachBarbs[g.root] == std::set<Name>({nm("a"), nm("b")}));
  CHECK(g.reachSuccess[g.root]);
}

TEST_CASE("divergence detection") {
  CHECK(xp::detect_divergence(xp::build_source_graph(csp::parse("DIV"))));
  CHECK(xp::detect_divergence(xp::build_source_graph(csp::parse("mu X . X"))));
  CHECK_FALSE(xp::detect_divergence(xp::build_source_graph(csp::parse("a -> STOP"))));
}

TEST_CASE("divergent encodings loop through simulation steps only") {
  for (const char* id : {"div", "rec-tau", "rec-a"}) {
    for (bool central : {true, false}) {
      auto e = central ? enc::encode_central(corpusTerm(id)) : enc::encode_decentral(corpusTerm(id));
      auto g = xp::build_target_graph(e, central);
      INFO(id << (central ? " central" : " decentral"));
      REQUIRE_FALSE(g.truncated);
      CHECK(xp::detect_divergence(g));
      CHECK(xp::auxOnlyCycleFree(g));
      CHECK(g.simEdgeCount() >= 1);
    }
  }
}

TEST_CASE("target graph of DIV is a single simulating self-loop") {
  auto g = xp::build_target_graph(enc::encode_central(corpusTerm("div")), true);
  REQUIRE(g.nodes.size() == 1);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].from == g.edges[0].to);
  CHECK(g.edges[0].cls == xp::StepClass::Sim);
}

TEST_CASE("translated barbs at the target root match the source") {
  for (const char* id : {"prefix", "sum2", "conceal", "rename", "sync-stop", "interleave"}) {
    csp::P p = corpusTerm(id);
    for (bool central : {true, false}) {
      auto e = central ? enc::encode_central(p) : enc::encode_decentral(p);
      auto g = xp::build_target_graph(e, central);
      INFO(id << (central ? " central" : " decentral"));
      auto sg = xp::build_source_graph(p);
      CHECK(g.barbs[g.root] == sg.reachBarbs[sg.root]);
      CHECK((bool)g.reachSuccess[g.root] == (bool)sg.reachSuccess[sg.root]);
    }
  }
}

TEST_CASE("budget truncation is reported") {
  xp::Budget tiny{4, 8};
  auto g = xp::build_target_graph(enc::encode_central(corpusTerm("sum2")), true, tiny);
  CHECK(g.truncated);
}

TEST_CASE("raw graphs expose free outputs as barbs") {
  Name a = nm("a"), b = nm("b");
  auto g = xp::build_raw_target_graph(ccs::par2(ccs::out(a), ccs::res({b}, ccs::out(b))));
  CHECK(g.barbs[g.root] == std::set<Name>{a});
}

TEST_CASE("pruning preserves raw-graph predicates") {
  RandomTargetGen gen(11);
  for (int i = 0; i < 5; i++) {
    ccs::T t = gen.gen();
    auto gp = xp::build_raw_target_graph(t, {}, true);
    auto gu = xp::build_raw_target_graph(t, {}, false);
    INFO("term " << i << ": " << ccs::print(t));
    CHECK(gp.barbs[gp.root] == gu.barbs[gu.root]);
    CHECK((bool)gp.reachSuccess[gp.root] == (bool)gu.reachSuccess[gu.root]);
  }
}

TEST_CASE("lock invariants hold on small corpus graphs") {
  for (const char* id : {"sum2", "sync-stop", "interleave", "intchoice"}) {
    for (bool central : {true, false}) {
      auto e = central ? enc::encode_central(corpusTerm(id)) : enc::encode_decentral(corpusTerm(id));
      auto g = xp::build_target_graph(e, central);
      INFO(id << (central ? " central" : " decentral"));
      CHECK(xp::check_lock_invariants(g).empty());
    }
  }
}

TEST_CASE("DOT export writes both graph kinds") {
  std::string sp = "test_src.dot", tp = "test_tgt.dot";
  xp::write_dot(xp::build_source_graph(corpusTerm("sum2")), sp);
  xp::write_dot(xp::build_target_graph(enc::encode_central(corpusTerm("div")), true), tp);
  auto slurp = [](const std::string& f) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string s = slurp(sp), t = slurp(tp);
  CHECK(s.find("digraph source") != std::string::npos);
  CHECK(s.find("label=\"a\"") != std::string::npos);
  CHECK(t.find("digraph target") != std::string::npos);
  CHECK(t.find("sim") != std::string::npos);
  std::remove(sp.c_str());
  std::remove(tp.c_str());
}
