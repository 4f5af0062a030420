// Source calculus: parsing, printing, labelled transitions, barbs.

#include <catch2/catch_amalgamated.hpp>

#include "cspccs/corpus.hpp"
#include "cspccs/csp.hpp"
#include "cspccs/parser.hpp"

using namespace cspccs;
using namespace cspccs::csp;

static Name nm(const char* s) { return names().source(s); }

TEST_CASE("print/parse round-trips on the corpus") {
  for (auto& e : corpus()) {
    P p = parse(e.text);
    P q = parse(print(p));
    INFO(e.id << ": " << print(p));
    CHECK(equal(p, q));
    CHECK(print(p) == print(q));
  }
}

TEST_CASE("parse failures raise ParseError") {
  CHECK_THROWS_AS(parse("a ->"), ParseError);
  CHECK_THROWS_AS(parse("a -> STOP ]"), ParseError);
  CHECK_THROWS_AS(parse("|[ a ]|"), ParseError);
  CHECK_THROWS_AS(parse("rn { a } STOP"), ParseError);
}

TEST_CASE("precedence and sugar") {
  // prefix binds tighter than [] binds tighter than |~| binds tighter than |[..]|
  P p = parse("a -> STOP [] b -> STOP |~| c -> STOP |[ a ]| d -> STOP");
  REQUIRE(p->k == SK::Par);
  REQUIRE(p->a->k == SK::IntChoice);
  REQUIRE(p->a->a->k == SK::ExtSum);
  CHECK(p->a->a->branches.size() == 2);
  CHECK(p->sync == std::vector<Name>{nm("a")});
}

TEST_CASE("transitions of the two-sided choice term") {
  P e = corpusTerm("E");
  auto ts = transitions(e);
  REQUIRE(ts.size() == 3);
  std::map<std::string, std::string> got;
  for (auto& t : ts) {
    REQUIRE_FALSE(t.label.tau);
    got[nameText(t.label.act)] = print(t.dest);
  }
  CHECK(got.at("o") == "STOP |[ o, p ]| STOP");
  CHECK(got.at("p") == "STOP |[ o, p ]| STOP");
  CHECK(got.at("q") == "(o -> STOP [] p -> STOP) |[ o, p ]| STOP");
}

TEST_CASE("basic transition rules") {
  CHECK(transitions(parse("STOP")).empty());
  CHECK(transitions(parse("TICK")).empty());

  auto dv = transitions(parse("DIV"));
  REQUIRE(dv.size() == 1);
  CHECK(dv[0].label.tau);
  CHECK(dv[0].dest->k == SK::Div);

  auto ic = transitions(parse("a -> STOP |~| b -> STOP"));
  REQUIRE(ic.size() == 2);
  CHECK(ic[0].label.tau);
  CHECK(ic[1].label.tau);

  auto mu = transitions(parse("mu X . (a -> X)"));
  REQUIRE(mu.size() == 1);
  CHECK(mu[0].label.tau);  // unfold
  auto after = transitions(mu[0].dest);
  REQUIRE(after.size() == 1);
  CHECK(after[0].label == actLabel(nm("a")));
}

TEST_CASE("concealment and renaming relabel transitions") {
  auto cc = transitions(parse("(a -> STOP) / a"));
  REQUIRE(cc.size() == 1);
  CHECK(cc[0].label.tau);

  auto rn = transitions(parse("rn { a -> b } (a -> STOP)"));
  REQUIRE(rn.size() == 1);
  CHECK(rn[0].label == actLabel(nm("b")));
}

TEST_CASE("parallel composition: interleaving vs synchronisation") {
  auto il = transitions(parse("a -> STOP |[]| b -> STOP"));
  REQUIRE(il.size() == 2);
  // disjoint resources: the two steps are distributable
  bool disjoint = true;
  for (auto* r : il[0].resources) disjoint &= !il[1].resources.count(r);
  CHECK(disjoint);

  auto sy = transitions(parse("a -> STOP |[ a ]| a -> STOP"));
  REQUIRE(sy.size() == 1);
  CHECK(sy[0].label == actLabel(nm("a")));
  CHECK(sy[0].resources.size() == 2);

  CHECK(transitions(parse("a -> STOP |[ a ]| STOP")).empty());
}

TEST_CASE("barbs and success") {
  CHECK(barbs(parse("a -> STOP")) == std::set<Name>{nm("a")});
  CHECK(barbs(parse("DIV")).empty());
  CHECK(barbs(corpusTerm("E")) == std::set<Name>({nm("o"), nm("p"), nm("q")}));

  CHECK(hasSuccess(parse("TICK")));
  CHECK(hasSuccess(parse("TICK |[]| STOP")));
  CHECK_FALSE(hasSuccess(parse("a -> TICK")));
}

TEST_CASE("free names, free variables, closedness") {
  CHECK(freeNames(parse("(a -> b -> STOP) / b")) == std::set<Name>{nm("a")});
  CHECK(freeNames(parse("rn { a -> b } (a -> STOP)")) == std::set<Name>{nm("b")});
  CHECK(closed(parse("mu X . (a -> X)")));
  P open = extsum({{nm("a"), var(names().sourceVar("Y"))}});
  CHECK_FALSE(closed(open));
}

TEST_CASE("injective renaming of source names") {
  std::map<Name, Name> sig{{nm("o"), nm("p")}, {nm("p"), nm("o")}};
  P e = applySigma(corpusTerm("E"), sig);
  CHECK(barbs(e) == std::set<Name>({nm("o"), nm("p"), nm("q")}));
  CHECK(print(e) == "(p -> STOP [] o -> STOP) |[ o, p ]| (p -> STOP [] o -> STOP [] q -> STOP)");
}

TEST_CASE("top-level components") {
  auto cs = components(parse("(a -> STOP |[]| b -> STOP) / a"));
  REQUIRE(cs.size() == 2);
  CHECK(cs[0]->k == SK::Conceal);
  CHECK(cs[1]->k == SK::Conceal);
}
