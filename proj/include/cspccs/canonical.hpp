#pragma once
// Canonical states and the reduction relation of the target calculus.
//
// A state is a prenex restriction over a multiset of atoms (outputs, inputs,
// replicated inputs, success markers).  Canonicalisation:
//   1. flatten parallel / open restrictions (alpha-renaming bound names),
//      resolve satisfied matches, drop dead matches and inert junk;
//   2. prune atoms that can provably never participate in any reduction:
//      their subject is restricted and non-rigid, and no complementary
//      capability of it occurs in any other atom (neither as a subject of
//      the opposite polarity nor transmitted as an output argument);
//   3. rename the remaining restricted non-rigid names canonically using
//      colour refinement over the atoms they occur in;
//   4. sort atoms by their canonical print; the joined print is the state key.
//
// Equal keys imply structurally congruent terms.  The converse is best
// effort (automorphic ties are broken arbitrarily), which can only enlarge
// the explored graph, never conflate distinct states.
//
// canonicalizeStep canonicalises a reduction successor incrementally: atoms
// untouched by the step keep their term and print, only the communicated
// continuation is flattened, and atoms whose names keep their canonical
// assignment are not rewritten.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ccs.hpp"
#include "names.hpp"

namespace cspccs::ccs {

struct State {
  std::vector<T> atoms;            // sorted by canonical print
  std::vector<std::string> prints; // canonical print per atom
  std::vector<Name> restricted;    // canonical (non-rigid) names, in index order
  std::vector<Name> rigidRes;      // rigid names restricted at the top level
  std::string key;
  bool success = false;

  // Rebuild a closed term equivalent to this state.
  T toTerm() const {
    std::vector<Name> ns = rigidRes;
    ns.insert(ns.end(), restricted.begin(), restricted.end());
    return res(std::move(ns), par(atoms));
  }
};

namespace detail {

inline uint64_t fnv(const std::string& s, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

// ---- atom body simplification ----
// Unwrap satisfied matches, delete matches between distinct names that are
// both concrete (not bound within the atom), drop nil branches.
inline T simplify(const T& t, std::set<Name>& bound) {
  switch (t->k) {
    case TK::Nil: case TK::Success: case TK::Output: return t;
    case TK::Par: {
      T a = simplify(t->a, bound), b = simplify(t->b, bound);
      return par2(std::move(a), std::move(b));
    }
    case TK::Res: {
      std::vector<Name> added;
      for (Name n : t->args)
        if (bound.insert(n).second) added.push_back(n);
      T body = simplify(t->a, bound);
      for (Name n : added) bound.erase(n);
      if (body->k == TK::Nil) return nil();
      return res(t->args, std::move(body));
    }
    case TK::Input: case TK::RepInput: {
      std::vector<Name> added;
      for (Name n : t->args)
        if (bound.insert(n).second) added.push_back(n);
      T body = simplify(t->a, bound);
      for (Name n : added) bound.erase(n);
      Term r{t->k};
      r.chan = t->chan;
      r.args = t->args;
      r.a = std::move(body);
      return mk(std::move(r));
    }
    case TK::Match: {
      if (t->chan == t->match2) return simplify(t->a, bound);
      if (!bound.count(t->chan) && !bound.count(t->match2)) return nil();
      T body = simplify(t->a, bound);
      if (body->k == TK::Nil) return nil();
      return match(t->chan, t->match2, std::move(body));
    }
  }
  return t;
}

// ---- occurrence counting (pruning + refinement occurrence lists) ----
struct Cnt {
  int outSubj = 0, inSubj = 0, trans = 0, other = 0;
  bool any() const { return outSubj || inSubj || trans || other; }
};

inline void scanAtom(const T& t, std::vector<Name>& bs,
                     std::unordered_map<uint32_t, Cnt>& m) {
  auto boundp = [&](Name n) {
    for (size_t i = bs.size(); i-- > 0;)
      if (bs[i] == n) return true;
    return false;
  };
  switch (t->k) {
    case TK::Nil: case TK::Success: return;
    case TK::Par:
      scanAtom(t->a, bs, m);
      scanAtom(t->b, bs, m);
      return;
    case TK::Res: {
      size_t b = bs.size();
      for (Name x : t->args) bs.push_back(x);
      scanAtom(t->a, bs, m);
      bs.resize(b);
      return;
    }
    case TK::Output:
      if (!boundp(t->chan)) m[t->chan.v].outSubj++;
      for (Name x : t->args)
        if (!boundp(x)) m[x.v].trans++;
      return;
    case TK::Input: case TK::RepInput: {
      if (!boundp(t->chan)) m[t->chan.v].inSubj++;
      size_t b = bs.size();
      for (Name x : t->args) bs.push_back(x);
      scanAtom(t->a, bs, m);
      bs.resize(b);
      return;
    }
    case TK::Match:
      if (!boundp(t->chan)) m[t->chan.v].other++;
      if (!boundp(t->match2)) m[t->match2.v].other++;
      scanAtom(t->a, bs, m);
      return;
  }
}

// Structure hash used during colour refinement.  Tracked names hash as their
// current colour, the highlighted name as a marker, binders by binding
// depth, untracked (free/rigid) names by identity.
inline uint64_t refHash(const T& t, const std::unordered_map<uint32_t, uint64_t>& colors,
                        Name highlight, std::vector<Name>& binders) {
  auto nameTok = [&](Name n) -> uint64_t {
    for (size_t i = binders.size(); i-- > 0;)
      if (binders[i] == n) return mix(2, i);
    if (n == highlight) return 3;
    auto c = colors.find(n.v);
    if (c != colors.end()) return mix(4, c->second);
    return mix(5, n.v);
  };
  switch (t->k) {
    case TK::Nil: return 11;
    case TK::Success: return 13;
    case TK::Par: {
      // parallel composition is commutative and associative: hash the
      // flattened group as a multiset so sibling order cannot leak into
      // refinement colours
      uint64_t h = 0;
      std::vector<const T*> stack{&t->a, &t->b};
      while (!stack.empty()) {
        const T* c = stack.back();
        stack.pop_back();
        if ((*c)->k == TK::Par) {
          stack.push_back(&(*c)->a);
          stack.push_back(&(*c)->b);
        } else {
          h += refHash(*c, colors, highlight, binders);
        }
      }
      return mix(17, h);
    }
    case TK::Output: {
      uint64_t h = mix(19, nameTok(t->chan));
      for (Name x : t->args) h = mix(h, nameTok(x));
      return h;
    }
    case TK::Input: case TK::RepInput: {
      uint64_t h = mix(t->k == TK::Input ? 23 : 29, nameTok(t->chan));
      h = mix(h, t->args.size());
      size_t base = binders.size();
      for (Name x : t->args) binders.push_back(x);
      h = mix(h, refHash(t->a, colors, highlight, binders));
      binders.resize(base);
      return h;
    }
    case TK::Res: {
      uint64_t h = mix(31, t->args.size());
      size_t base = binders.size();
      for (Name x : t->args) binders.push_back(x);
      h = mix(h, refHash(t->a, colors, highlight, binders));
      binders.resize(base);
      return h;
    }
    case TK::Match: {
      uint64_t h = mix(37, nameTok(t->chan));
      h = mix(h, nameTok(t->match2));
      return mix(h, refHash(t->a, colors, highlight, binders));
    }
  }
  return 0;
}

// Alpha-invariant atom print: occurrences of names bound within the atom
// print positionally (%k = k-th binder in preorder), so alpha-equivalent
// atoms print identically regardless of the identity of their binders.
inline std::string canonPrint(const T& t, std::vector<Name>& bs) {
  auto tok = [&](Name n) -> std::string {
    for (size_t i = bs.size(); i-- > 0;)
      if (bs[i] == n) return "%" + std::to_string(i);
    return nameText(n);
  };
  auto list = [&](const std::vector<Name>& ns) {
    std::string s;
    for (size_t i = 0; i < ns.size(); i++)
      s += (i ? "," : "") + ("%" + std::to_string(bs.size() + i));
    return s;
  };
  switch (t->k) {
    case TK::Nil: return "0";
    case TK::Success: return "TICK";
    case TK::Output: {
      std::string s = tok(t->chan) + "<";
      for (size_t i = 0; i < t->args.size(); i++) s += (i ? "," : "") + tok(t->args[i]);
      return s + ">";
    }
    case TK::Input: case TK::RepInput: {
      std::string head = std::string(t->k == TK::RepInput ? "!" : "") + tok(t->chan) + "(" +
                         list(t->args) + ").";
      size_t base = bs.size();
      for (Name x : t->args) bs.push_back(x);
      std::string body = canonPrint(t->a, bs);
      bs.resize(base);
      return head + (t->a->k == TK::Par ? "(" + body + ")" : body);
    }
    case TK::Match: {
      std::string head = "[" + tok(t->chan) + "=" + tok(t->match2) + "]";
      std::string body = canonPrint(t->a, bs);
      return head + (t->a->k == TK::Par ? "(" + body + ")" : body);
    }
    case TK::Res: {
      std::string head = "(new " + list(t->args) + ") ";
      size_t base = bs.size();
      for (Name x : t->args) bs.push_back(x);
      std::string body = canonPrint(t->a, bs);
      bs.resize(base);
      return head + (t->a->k == TK::Par ? "(" + body + ")" : body);
    }
    case TK::Par: {
      // print the flattened parallel group in sorted order: sibling order
      // is irrelevant and must not show up in the canonical key
      std::vector<const T*> stack{&t->a, &t->b};
      std::vector<std::string> parts;
      while (!stack.empty()) {
        const T* c = stack.back();
        stack.pop_back();
        if ((*c)->k == TK::Par) {
          stack.push_back(&(*c)->a);
          stack.push_back(&(*c)->b);
        } else {
          parts.push_back(canonPrint(*c, bs));
        }
      }
      std::sort(parts.begin(), parts.end());
      std::string s;
      for (size_t i = 0; i < parts.size(); i++) s += (i ? " | " : "") + parts[i];
      return s;
    }
  }
  return "?";
}

// One atom entering normalisation; print is carried over when already known
// and still valid (no name of the atom got a new canonical assignment).
struct AtomIn {
  T t;
  const std::string* print = nullptr;  // nullable
};

// Shared back half of canonicalisation: pruning, colour refinement,
// canonical renaming, sorting, key building.  `tracked` lists the names
// subject to canonical renaming in discovery order; `origOf` maps scratch
// names back to the bound name they alpha-renamed (identity if absent).
inline State finishState(std::vector<AtomIn> atoms, std::vector<Name> tracked,
                         const std::set<Name>& rigidResSet, bool success, bool prune,
                         const std::map<Name, Name>& origOf, std::map<Name, Name>* renOut) {
  State st;
  st.success = success;

  std::unordered_set<uint32_t> trackedSet;
  for (Name n : tracked) trackedSet.insert(n.v);

  // occurrence counts per atom and in total
  std::vector<std::unordered_map<uint32_t, Cnt>> contrib(atoms.size());
  std::unordered_map<uint32_t, Cnt> total;
  {
    std::vector<Name> bs;
    for (size_t i = 0; i < atoms.size(); i++) {
      scanAtom(atoms[i].t, bs, contrib[i]);
      for (auto& [n, c] : contrib[i]) {
        Cnt& tc = total[n];
        tc.outSubj += c.outSubj;
        tc.inSubj += c.inSubj;
        tc.trans += c.trans;
        tc.other += c.other;
      }
    }
  }

  // prune never-firing atoms
  std::vector<char> alive(atoms.size(), 1);
  if (prune) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < atoms.size(); i++) {
        if (!alive[i]) continue;
        const T& a = atoms[i].t;
        if (a->k == TK::Success) continue;
        Name subj = a->chan;
        if (!trackedSet.count(subj.v)) continue;  // free or rigid subject: keep
        Cnt own = contrib[i].count(subj.v) ? contrib[i][subj.v] : Cnt{};
        const Cnt& tot = total[subj.v];
        bool blocked =
            (tot.trans - own.trans) > 0 ||
            (a->k == TK::Output ? (tot.inSubj - own.inSubj) : (tot.outSubj - own.outSubj)) > 0;
        if (!blocked) {
          alive[i] = 0;
          for (auto& [n, c] : contrib[i]) {
            Cnt& tc = total[n];
            tc.outSubj -= c.outSubj;
            tc.inSubj -= c.inSubj;
            tc.trans -= c.trans;
            tc.other -= c.other;
          }
          changed = true;
        }
      }
    }
  }

  // drop restricted names that no longer occur; build occurrence lists
  std::vector<Name> used;
  std::vector<std::vector<int>> nameAtoms;
  {
    std::unordered_map<uint32_t, int> slot;
    for (Name n : tracked) {
      auto it = total.find(n.v);
      if (it == total.end() || !it->second.any()) continue;
      slot[n.v] = (int)used.size();
      used.push_back(n);
      nameAtoms.emplace_back();
    }
    for (size_t i = 0; i < atoms.size(); i++) {
      if (!alive[i]) continue;
      for (auto& [n, c] : contrib[i]) {
        auto it = slot.find(n);
        if (it != slot.end() && c.any()) nameAtoms[it->second].push_back((int)i);
      }
    }
  }

  // colour refinement
  std::unordered_map<uint32_t, uint64_t> colors;
  for (Name n : used) colors[n.v] = fnv(NameTable::roleTag(names().canonRole(n)));
  auto distinctColors = [&] {
    std::set<uint64_t> s;
    for (auto& [n, c] : colors) s.insert(c);
    return s.size();
  };
  std::vector<Name> binderStack;
  auto refineRound = [&] {
    std::unordered_map<uint32_t, uint64_t> next;
    std::vector<uint64_t> hs;
    for (size_t ni = 0; ni < used.size(); ni++) {
      Name n = used[ni];
      hs.clear();
      for (int ai : nameAtoms[ni]) hs.push_back(refHash(atoms[ai].t, colors, n, binderStack));
      std::sort(hs.begin(), hs.end());
      uint64_t h = colors[n.v];
      for (uint64_t x : hs) h = mix(h, x);
      next[n.v] = h;
    }
    colors = std::move(next);
  };
  size_t prev = distinctColors();
  for (size_t round = 0; round < used.size() + 1; round++) {
    refineRound();
    size_t now = distinctColors();
    if (now == prev) break;
    prev = now;
  }
  // individualise remaining ties (arbitrary but deterministic pick)
  for (;;) {
    std::map<uint64_t, std::vector<Name>> classes;
    for (Name n : used) classes[colors[n.v]].push_back(n);
    const std::vector<Name>* tied = nullptr;
    for (auto& [c, ns] : classes)
      if (ns.size() > 1) {
        tied = &ns;
        break;
      }
    if (!tied) break;
    colors[(*tied)[0].v] = mix(colors[(*tied)[0].v], 0xabcdef);
    size_t before = distinctColors();
    for (size_t round = 0; round < used.size() + 1; round++) {
      refineRound();
      size_t now = distinctColors();
      if (now == before) break;
      before = now;
    }
  }

  // assign canonical names in colour order, indexed per role
  std::vector<int> order(used.size());
  for (size_t i = 0; i < order.size(); i++) order[i] = (int)i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    uint64_t ca = colors[used[a].v], cb = colors[used[b].v];
    return ca != cb ? ca < cb : a < b;
  });
  std::map<Name, Name> toCanon;
  std::map<Role, int> roleCtr;
  bool anyChange = false;
  for (int oi : order) {
    Name n = used[oi];
    Role role = names().canonRole(n);
    Name c = names().canonical(role, roleCtr[role]++);
    toCanon[n] = c;
    if (c != n) anyChange = true;
    st.restricted.push_back(c);
  }
  (void)anyChange;

  // rewrite and print only the atoms whose names changed
  std::vector<std::pair<std::string, T>> keyed;
  for (size_t i = 0; i < atoms.size(); i++) {
    if (!alive[i]) continue;
    bool stable = atoms[i].print != nullptr;
    if (stable)
      for (auto& [n, c] : contrib[i])
        if (trackedSet.count(n)) {
          auto it = toCanon.find(Name{n});
          if (it == toCanon.end() || it->second != Name{n}) {
            stable = false;
            break;
          }
        }
    if (stable) {
      keyed.push_back({*atoms[i].print, atoms[i].t});
    } else {
      T a = subst(atoms[i].t, toCanon);
      std::vector<Name> bs;
      std::string p = canonPrint(a, bs);
      keyed.push_back({std::move(p), std::move(a)});
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](auto& x, auto& y) { return x.first < y.first; });
  std::string key;
  for (auto& [s, a] : keyed) {
    st.atoms.push_back(std::move(a));
    key += s;
    key += " ; ";
    st.prints.push_back(std::move(s));
  }
  st.rigidRes.assign(rigidResSet.begin(), rigidResSet.end());
  key += "||";
  for (Name n : st.rigidRes) key += " " + nameText(n);
  st.key = std::move(key);

  if (renOut) {
    renOut->clear();
    for (auto& [n, c] : toCanon) {
      auto o = origOf.find(n);
      (*renOut)[o == origOf.end() ? n : o->second] = c;
    }
  }
  return st;
}

// Flatten a term into atoms: open restrictions (renaming non-rigid binders
// to scratch names), split parallels, resolve top-level matches.
inline void flatten(const T& term, std::vector<AtomIn>& atoms, std::vector<Name>& opened,
                    std::map<Name, Name>& origOfScratch, std::set<Name>& rigidResSet,
                    bool& success) {
  struct Frame {
    T t;
    std::map<Name, Name> env;
  };
  std::vector<Frame> work{{term, {}}};
  while (!work.empty()) {
    Frame f = std::move(work.back());
    work.pop_back();
    const T& t = f.t;
    switch (t->k) {
      case TK::Nil: break;
      case TK::Success:
        success = true;
        atoms.push_back({ccs::success(), nullptr});
        break;
      case TK::Par:
        work.push_back({t->a, f.env});
        work.push_back({t->b, std::move(f.env)});
        break;
      case TK::Res: {
        for (Name n : t->args) {
          if (names().rigid(n)) {
            rigidResSet.insert(n);
          } else {
            Role r = names().canonRole(n);
            Name fr = names().scratch(r, names().text(n));
            f.env[n] = fr;
            opened.push_back(fr);
            origOfScratch[fr] = n;
          }
        }
        work.push_back({t->a, std::move(f.env)});
        break;
      }
      case TK::Match: {
        Name x = t->chan, y = t->match2;
        auto ix = f.env.find(x), iy = f.env.find(y);
        if (ix != f.env.end()) x = ix->second;
        if (iy != f.env.end()) y = iy->second;
        if (x == y) work.push_back({t->a, std::move(f.env)});
        break;  // distinct concrete names: dead
      }
      case TK::Output: case TK::Input: case TK::RepInput: {
        T a = subst(t, f.env);
        std::set<Name> bound;
        a = simplify(a, bound);
        if (a->k != TK::Nil) atoms.push_back({std::move(a), nullptr});
        break;
      }
    }
  }
}

}  // namespace detail

// Canonicalise a closed term.  renOut (optional) receives the mapping from
// the term's top-level restricted names (e.g. a predecessor state's canonical
// names) to the canonical names of the result; pruned names are absent.
inline State canonicalize(const T& term, bool prune = true,
                          std::map<Name, Name>* renOut = nullptr) {
  using namespace detail;
  names().scratchReset();
  std::vector<AtomIn> atoms;
  std::vector<Name> opened;
  std::map<Name, Name> origOfScratch;
  std::set<Name> rigidResSet;
  bool success = false;
  flatten(term, atoms, opened, origOfScratch, rigidResSet, success);
  return finishState(std::move(atoms), std::move(opened), rigidResSet, success, prune,
                     origOfScratch, renOut);
}

// ---- reductions ----

struct Redex {
  int outIdx, inIdx;    // indices into State::atoms
  bool replicated;      // the input side is a replicated input
  Name chan;
  T contribution;       // the receiving continuation, arguments substituted
};

inline std::vector<Redex> reductions(const State& st) {
  std::vector<Redex> out;
  for (size_t i = 0; i < st.atoms.size(); i++) {
    const T& o = st.atoms[i];
    if (o->k != TK::Output) continue;
    for (size_t j = 0; j < st.atoms.size(); j++) {
      const T& in = st.atoms[j];
      if (in->k != TK::Input && in->k != TK::RepInput) continue;
      if (in->chan != o->chan) continue;
      if (in->args.size() != o->args.size())
        throw std::runtime_error("arity mismatch on channel " + nameText(o->chan) + ": output/" +
                                 std::to_string(o->args.size()) + " vs input/" +
                                 std::to_string(in->args.size()));
      std::map<Name, Name> sub;
      for (size_t k = 0; k < in->args.size(); k++) sub[in->args[k]] = o->args[k];
      out.push_back({(int)i, (int)j, in->k == TK::RepInput, o->chan, subst(in->a, sub)});
    }
  }
  return out;
}

// The un-canonicalised successor term of a redex (for exhaustive-reduction
// oracles and debugging).
inline T successorTerm(const State& st, const Redex& rx) {
  std::vector<T> rest;
  for (size_t k = 0; k < st.atoms.size(); k++) {
    if ((int)k == rx.outIdx) continue;
    if ((int)k == rx.inIdx && !rx.replicated) continue;
    rest.push_back(st.atoms[k]);
  }
  rest.push_back(rx.contribution);
  std::vector<Name> ns = st.rigidRes;
  ns.insert(ns.end(), st.restricted.begin(), st.restricted.end());
  return res(std::move(ns), par(std::move(rest)));
}

// Canonicalise the successor of `rx` incrementally: retained atoms keep
// their term and print, and only names whose canonical assignment moved
// cause a rewrite.
inline State canonicalizeStep(const State& st, const Redex& rx, bool prune = true,
                              std::map<Name, Name>* renOut = nullptr) {
  using namespace detail;
  names().scratchReset();
  std::vector<AtomIn> atoms;
  for (size_t k = 0; k < st.atoms.size(); k++) {
    if ((int)k == rx.outIdx) continue;
    if ((int)k == rx.inIdx && !rx.replicated) continue;
    atoms.push_back({st.atoms[k], &st.prints[k]});
  }
  std::vector<Name> tracked = st.restricted;
  std::map<Name, Name> origOfScratch;
  std::set<Name> rigidResSet(st.rigidRes.begin(), st.rigidRes.end());
  bool success = st.success;
  flatten(rx.contribution, atoms, tracked, origOfScratch, rigidResSet, success);
  return finishState(std::move(atoms), std::move(tracked), rigidResSet, success, prune,
                     origOfScratch, renOut);
}

}  // namespace cspccs::ccs
