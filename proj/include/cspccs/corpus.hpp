#pragma once
// The desk-scale corpus of source terms exercised by reports and tests, and
// a seeded random generator of small target terms for canonicalizer checks.

#include <random>
#include <string>
#include <vector>

#include "ccs.hpp"
#include "names.hpp"
#include "parser.hpp"

namespace cspccs {

struct CorpusEntry {
  std::string id;
  std::string text;
};

// E is the running two-sided choice with a three-way right sum; the rest
// covers every operator, recursion, and the distributability witnesses.
inline std::vector<CorpusEntry> corpus() {
  return {
      {"E", "(o -> STOP [] p -> STOP) |[ o, p ]| (o -> STOP [] p -> STOP [] q -> STOP)"},
      {"div", "DIV"},
      {"rec-a", "mu X . (a -> X)"},
      {"sync-tick", "a -> TICK |[ a ]| a -> STOP"},
      {"conceal", "(a -> STOP) / a"},
      {"rename", "rn { a -> b } (a -> STOP)"},
      {"intchoice", "a -> STOP |~| b -> STOP"},
      {"prefix", "a -> STOP"},
      {"stop", "STOP"},
      {"tick", "TICK"},
      {"interleave", "a -> STOP |[]| b -> STOP"},
      {"sync-stop", "a -> STOP |[ a ]| a -> STOP"},
      {"rec-tau", "mu X . X"},
      {"sum2", "a -> STOP [] b -> STOP"},
  };
}

inline csp::P corpusTerm(const std::string& id) {
  for (auto& e : corpus())
    if (e.id == id) return csp::parse(e.text);
  throw std::invalid_argument("unknown corpus id " + id);
}

// Random small closed-ish target terms over a fixed pool of free channels
// (all nullary, so reductions never hit arity errors).
class RandomTargetGen {
 public:
  explicit RandomTargetGen(uint32_t seed) : rng_(seed) {
    for (const char* n : {"a", "b", "c"}) free_.push_back(names().source(n));
  }

  ccs::T gen(int depth = 4) {
    std::vector<Name> scope = free_;
    return go(depth, scope);
  }

 private:
  std::mt19937 rng_;
  std::vector<Name> free_;
  int freshCtr_ = 0;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Name chan(const std::vector<Name>& scope) { return scope[pick((int)scope.size())]; }

  ccs::T go(int depth, std::vector<Name>& scope) {
    int k = depth <= 0 ? pick(3) : pick(8);
    switch (k) {
      case 0: return ccs::out(chan(scope));
      case 1: return ccs::nil();
      case 2: return pick(4) == 0 ? ccs::success() : ccs::out(chan(scope));
      case 3: return ccs::par2(go(depth - 1, scope), go(depth - 1, scope));
      case 4: {
        Name n = names().fresh(Role::Source, "x" + std::to_string(freshCtr_++));
        scope.push_back(n);
        ccs::T body = go(depth - 1, scope);
        scope.pop_back();
        return ccs::res({n}, body);
      }
      case 5: return ccs::in(chan(scope), {}, go(depth - 1, scope));
      case 6: {
        Name a = chan(scope), b = chan(scope);
        return ccs::match(a, b, go(depth - 1, scope));
      }
      default: return ccs::repin(chan(scope), {}, go(depth - 2, scope));
    }
  }
};

}  // namespace cspccs
