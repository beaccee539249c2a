#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptv/syntax.hpp"

namespace ptv {

// A higher-level atomic rule: an axiom (no premises) or a compound rule
// whose premises are themselves rules and whose conclusion is an atom.
// Construction canonicalizes: premises are sorted, duplicates removed, and
// a compound rule with no premises is identified with the axiom.
//
// level(axiom) = 0; level(compound) = 1 + max(level of premises).
class Rule {
public:
  static Rule axiom(Atom conclusion);
  static Rule compound(std::vector<Rule> premises, Atom conclusion);

  bool is_axiom() const { return n_->prems.empty(); }
  const Atom& conclusion() const { return n_->concl; }
  const std::vector<Rule>& premises() const { return n_->prems; }
  int level() const { return n_->level; }

  bool operator==(const Rule& o) const;
  // Canonical total order: by level, then conclusion, then premise count,
  // then premises pointwise. Determines premise order and base enumeration.
  std::strong_ordering operator<=>(const Rule& o) const { return compare(*this, o); }

private:
  struct Node {
    Atom concl;
    std::vector<Rule> prems;
    int level;
  };
  explicit Rule(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static std::strong_ordering compare(const Rule& a, const Rule& b);
  std::shared_ptr<const Node> n_;
};

// Grammar: rule := atom | "(" [ rule ("," rule)* ] "=>" atom ")".
// Conclusions of "bot" are rejected unless allow_bot_conclusions is set.
Rule parse_rule(std::string_view text, bool allow_bot_conclusions = false);
std::string print_rule(const Rule& r);

// A finite set of rules; equality is set equality after canonicalization.
class Base {
public:
  Base() = default;
  explicit Base(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; } // sorted, unique
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  bool contains(const Rule& r) const;
  bool subset_of(const Base& o) const;
  Base union_with(const Base& o) const;
  Base with(const Rule& r) const;

  bool operator==(const Base& o) const = default;
  std::strong_ordering operator<=>(const Base& o) const = default;

private:
  std::vector<Rule> rules_;
};

// "{p, (p => q)}"
std::string print_base(const Base& b);

// Parses one rule per line; '#' starts a comment. An optional header line
// "!allow-bot-conclusions" enables rules concluding bot.
Base parse_base_file(std::string_view text);

enum class BotPolicy { explosion, atom };

std::string_view to_string(BotPolicy p);

// One applied step of a derivation witness, already rendered.
using DerivationTrace = std::vector<std::string>;

// Memoized bottom-up derivability engine. derives() computes membership of
// the goal in the least relation closed under the rules of the base, where
// a compound premise (D => q) is satisfied iff q is derivable from the base
// extended with D. Under BotPolicy::atom a derivable bot makes every atom
// derivable; under BotPolicy::explosion no goal bot is ever derivable.
//
// Instances are not thread-safe; use one engine per worker.
class DerivEngine {
public:
  explicit DerivEngine(BotPolicy policy) : policy_(policy) {}

  BotPolicy policy() const { return policy_; }

  bool derives(const Base& base, const Atom& goal);
  std::set<Atom> derivable_atoms(const Base& base, const std::set<Atom>& universe_atoms);

  // Witness trace for a derivable goal (empty when not derivable).
  DerivationTrace trace(const Base& base, const Atom& goal);

  // --- id-level interface used by the semantics evaluators -----------------
  int intern_rule(const Rule& r);
  int intern_atom(const Atom& a); // falsum is id 0
  // base_ids must be sorted and unique. Returns the set of derivable atom
  // ids as a bitmask (atom ids are capped at 64 per engine).
  std::uint64_t closure(std::span<const int> base_ids);
  bool derivable(std::span<const int> base_ids, int atom_id);

  const Atom& atom_of(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
  const Rule& rule_of(int id) const { return rule_pool_[static_cast<std::size_t>(id)]; }

private:
  struct RuleRec {
    int concl;               // atom id
    std::vector<int> prems;  // rule ids, sorted
    int level;
  };

  std::uint64_t closure_uncached(const std::vector<int>& base_ids);

  BotPolicy policy_;
  std::vector<Atom> atoms_{Atom::falsum()};
  std::unordered_map<std::string, int> atom_ids_{{"bot", 0}};
  std::vector<RuleRec> rules_;
  std::vector<Rule> rule_pool_;
  std::unordered_map<std::string, int> rule_ids_; // keyed by printed form
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };
  std::unordered_map<std::vector<int>, std::uint64_t, VecHash> closure_memo_;
};

// One-shot conveniences (spec surface).
bool derives(const Base& base, const Atom& goal, BotPolicy policy = BotPolicy::explosion);
std::set<Atom> derivable_atoms(const Base& base, const std::set<Atom>& universe_atoms,
                               BotPolicy policy = BotPolicy::explosion);

} // namespace ptv
