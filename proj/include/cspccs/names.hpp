#pragma once
// Interned names shared by the CSP and CCS term representations.
//
// Every name carries a role describing where it came from (user-written
// source name, one of the three per-source protocol names, a lock, a
// request channel, ...).  Roles drive step classification and junk pruning,
// and "rigid" names are exempt from canonical renaming so that barbs stay
// identifiable across states.

#include <cassert>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cspccs {

enum class Role : uint8_t {
  Source,    // user-written source channel name
  SrcVar,    // user-written source process variable
  Src1,      // phi1(a): action tag carried in announcements
  Src2,      // phi2(a): left synchronisation channel of a parallel
  Src3,      // phi3(a): right synchronisation channel of a parallel
  ActOuter,  // the outermost announcement channel read by a coordinator
  Act,       // an inner announcement channel (restricted at each operator)
  ActPrime,  // the per-operator forwarding channel act'
  Req,       // request channel r
  Lock,      // sum lock l
  RelockAux, // l' trigger inside Sim
  Simu,      // per-branch result channel s_i / sim
  Syn,       // synchronisation forwarding channels s, s'
  SynNext,   // mt: carries the channel the next left request reports to
  Carrier,   // t/f value carriers of the Boolean protocol
  Once,      // o: the centralised coordinator's busy token
  MuTok,     // internal-choice trigger
  RepTok,    // divergence trigger
  RecTok,    // phi'(X): recursion trigger
  TauTag,    // reserved name tagging internal announcements
  Param,     // bound input parameter placeholder (c, r, l, s, v, x~)
  Canon,     // canonical name assigned by state normalisation
  FreshRun,  // alpha-renaming freshener used during exploration
};

struct Name {
  uint32_t v = UINT32_MAX;
  bool valid() const { return v != UINT32_MAX; }
  bool operator==(const Name& o) const { return v == o.v; }
  bool operator!=(const Name& o) const { return v != o.v; }
  bool operator<(const Name& o) const { return v < o.v; }
};

class NameTable {
 public:
  struct Info {
    std::string text;
    Role role;
    Name srcLink;  // for Src1/Src2/Src3: the source name this projects
    bool rigid;
  };

  static NameTable& instance() {
    static NameTable t;
    return t;
  }

  // Source names and process variables are interned by spelling.
  Name source(const std::string& text) { return internKeyed("n:" + text, text, Role::Source, true); }
  Name sourceVar(const std::string& text) { return internKeyed("v:" + text, text, Role::SrcVar, true); }

  // phi projections are deterministic per source name.
  Name phi(Name src, int i) {
    assert(i >= 1 && i <= 3);
    Role r = i == 1 ? Role::Src1 : i == 2 ? Role::Src2 : Role::Src3;
    Name n = internKeyed("p" + std::to_string(i) + ":" + std::to_string(src.v),
                         info(src).text + "$" + std::to_string(i), r, true);
    infos_[n.v].srcLink = src;
    return n;
  }

  Name tauTag() { return internKeyed("tau", "tau$", Role::TauTag, true); }

  // Canonical names: one per (role, index), shared across all states.
  Name canonical(Role role, int index) {
    return internKeyed("c:" + std::to_string((int)role) + ":" + std::to_string(index),
                       "~" + std::string(roleTag(role)) + std::to_string(index), Role::Canon, false,
                       role);
  }

  // Non-interned fresh name (encoding-time plumbing, alpha-renaming).
  Name fresh(Role role, const std::string& base) {
    Name n{(uint32_t)infos_.size()};
    infos_.push_back({base + "@" + std::to_string(n.v), role, Name{}, false});
    return n;
  }

  // Scratch names recycled across canonicalisation passes.  They never
  // escape a pass (every survivor is renamed to a canonical name), so
  // reusing the slots keeps the table from growing with the explored graph.
  void scratchReset() { scratchUsed_ = 0; }
  Name scratch(Role role, const std::string& base) {
    if (scratchUsed_ < scratchPool_.size()) {
      Name n = scratchPool_[scratchUsed_++];
      infos_[n.v] = {base + "@s" + std::to_string(scratchUsed_), role, Name{}, false};
      return n;
    }
    Name n = fresh(role, base);
    scratchPool_.push_back(n);
    scratchUsed_++;
    return n;
  }

  const Info& info(Name n) const { return infos_[n.v]; }
  const std::string& text(Name n) const { return infos_[n.v].text; }
  Role role(Name n) const { return infos_[n.v].role; }
  bool rigid(Name n) const { return infos_[n.v].rigid; }
  Name srcLink(Name n) const { return infos_[n.v].srcLink; }
  // For canonical names: the role they stand in for.
  Role canonRole(Name n) const {
    return infos_[n.v].role == Role::Canon ? canonRoles_[n.v] : infos_[n.v].role;
  }
  size_t size() const { return infos_.size(); }

  static const char* roleTag(Role r) {
    switch (r) {
      case Role::Source: return "n";
      case Role::SrcVar: return "X";
      case Role::Src1: return "a1";
      case Role::Src2: return "a2";
      case Role::Src3: return "a3";
      case Role::ActOuter: return "act";
      case Role::Act: return "actI";
      case Role::ActPrime: return "actP";
      case Role::Req: return "r";
      case Role::Lock: return "l";
      case Role::RelockAux: return "lp";
      case Role::Simu: return "s";
      case Role::Syn: return "sy";
      case Role::SynNext: return "mt";
      case Role::Carrier: return "b";
      case Role::Once: return "o";
      case Role::MuTok: return "mu";
      case Role::RepTok: return "rep";
      case Role::RecTok: return "rec";
      case Role::TauTag: return "tau";
      case Role::Param: return "x";
      case Role::Canon: return "c";
      case Role::FreshRun: return "fr";
    }
    return "?";
  }

 private:
  Name internKeyed(const std::string& key, const std::string& text, Role role, bool rigid,
                   Role canonRole = Role::Canon) {
    auto it = keyed_.find(key);
    if (it != keyed_.end()) return it->second;
    Name n{(uint32_t)infos_.size()};
    infos_.push_back({text, role, Name{}, rigid});
    canonRoles_.resize(infos_.size(), Role::Canon);
    canonRoles_[n.v] = canonRole;
    keyed_[key] = n;
    return n;
  }

  std::vector<Info> infos_;
  std::vector<Role> canonRoles_;
  std::map<std::string, Name> keyed_;
  std::vector<Name> scratchPool_;
  size_t scratchUsed_ = 0;
};

inline NameTable& names() { return NameTable::instance(); }
inline std::string nameText(Name n) { return names().text(n); }

}  // namespace cspccs
