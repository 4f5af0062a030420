// Target calculus: term construction, substitution, printing, reductions,
// and the canonicalizer.

#include <catch2/catch_amalgamated.hpp>

#include "cspccs/canonical.hpp"
#include "cspccs/ccs.hpp"
#include "cspccs/corpus.hpp"

using namespace cspccs;
using namespace cspccs::ccs;

static Name nm(const char* s) { return names().source(s); }

TEST_CASE("parallel composition absorbs nil") {
  CHECK(par2(nil(), out(nm("a")))->k == TK::Output);
  CHECK(par2(out(nm("a")), nil())->k == TK::Output);
  CHECK(par({})->k == TK::Nil);
  CHECK(res({}, out(nm("a")))->k == TK::Output);
}

TEST_CASE("printing covers every constructor") {
  T t = res({nm("x")}, par({out(nm("x"), {nm("a"), nm("b")}),
                            in(nm("x"), {nm("y"), nm("z")}, out(nm("y"))),
                            repin(nm("a"), {}, success()),
                            match(nm("a"), nm("b"), nil())}));
  std::string s = print(t);
  CHECK(s.find("(new x)") != std::string::npos);
  CHECK(s.find("x<a,b>") != std::string::npos);
  CHECK(s.find("x(y,z).y<>") != std::string::npos);
  CHECK(s.find("!a().TICK") != std::string::npos);
  CHECK(s.find("[a=b]0") != std::string::npos);
}

TEST_CASE("free names respect binders") {
  T t = res({nm("a")}, par2(out(nm("a")), out(nm("b"))));
  CHECK(freeNames(t) == std::set<Name>{nm("b")});
  T u = in(nm("c"), {nm("x")}, out(nm("x"), {nm("d")}));
  CHECK(freeNames(u) == std::set<Name>({nm("c"), nm("d")}));
}

TEST_CASE("substitution is capture-avoiding") {
  // (x)(a(y). x<y>) { x := y }  must not capture the free y image
  Name a = nm("a"), x = nm("x"), y = nm("y");
  T t = in(a, {y}, out(x, {y}));
  T r = subst(t, {{x, y}});
  // the binder y must have been renamed away from the substituted image
  REQUIRE(r->k == TK::Input);
  REQUIRE(r->args.size() == 1);
  CHECK(r->args[0] != y);
  REQUIRE(r->a->k == TK::Output);
  CHECK(r->a->chan == y);        // image of x, still free
  CHECK(r->a->args[0] == r->args[0]);  // bound occurrence follows the binder
}

TEST_CASE("success detection under matching and restriction") {
  CHECK(hasSuccess(success()));
  CHECK(hasSuccess(res({nm("a")}, par2(nil(), success()))));
  CHECK(hasSuccess(match(nm("a"), nm("a"), success())));
  CHECK_FALSE(hasSuccess(match(nm("a"), nm("b"), success())));
  CHECK_FALSE(hasSuccess(in(nm("a"), {}, success())));
}

TEST_CASE("reductions: communication, replication, matching") {
  Name a = nm("a"), b = nm("b");
  {
    State st = canonicalize(par2(out(a), in(a, {}, out(b))));
    auto rs = reductions(st);
    REQUIRE(rs.size() == 1);
    State nx = canonicalizeStep(st, rs[0]);
    CHECK(nx.atoms.size() == 1);
    CHECK(print(nx.toTerm()) == "b<>");
  }
  {
    State st = canonicalize(par2(out(a), repin(a, {}, out(b))));
    auto rs = reductions(st);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].replicated);
    State nx = canonicalizeStep(st, rs[0]);
    // the replicated input survives the step
    CHECK(reductions(nx).empty());
    CHECK(nx.key != st.key);
  }
  {
    // an unsatisfied match blocks the guarded input
    State st = canonicalize(par2(out(a), match(a, b, in(a, {}, nil()))));
    CHECK(reductions(st).empty());
    State st2 = canonicalize(par2(out(a), match(a, a, in(a, {}, nil()))));
    CHECK(reductions(st2).size() == 1);
  }
}

TEST_CASE("canonical keys identify alpha-equivalent terms") {
  Name a = nm("a");
  Name x = names().fresh(Role::Source, "x");
  Name y = names().fresh(Role::Source, "y");
  T t1 = res({x}, par2(out(x), in(x, {}, out(a))));
  T t2 = res({y}, par2(out(y), in(y, {}, out(a))));
  CHECK(canonicalize(t1).key == canonicalize(t2).key);
}

TEST_CASE("canonical keys are order-independent for parallel components") {
  Name a = nm("a"), b = nm("b");
  T l = in(a, {}, out(b)), r = in(b, {}, out(a));
  CHECK(canonicalize(par2(l, r)).key == canonicalize(par2(r, l)).key);
}

TEST_CASE("canonicalize is idempotent on random terms") {
  RandomTargetGen gen(7);
  for (int i = 0; i < 100; i++) {
    T t = gen.gen();
    State s1 = canonicalize(t);
    State s2 = canonicalize(s1.toTerm());
    INFO("term " << i << ": " << print(t));
    REQUIRE(s1.key == s2.key);
  }
}
