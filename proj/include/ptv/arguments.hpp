#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptv/rules.hpp"
#include "ptv/semantics.hpp"
#include "ptv/syntax.hpp"
#include "ptv/systems.hpp"

namespace ptv {

// A natural-deduction argument tree. Leaves assume formulas; inner nodes
// apply connective rules or atomic rules from a base. Atomic-rule
// applications may cite an assumed rule by label instead of a ground rule;
// the label must be bound by the discharge list of an enclosing atomic
// application (higher-level rules discharge rules).
class Argument {
public:
  enum class NodeKind {
    Assume,
    AndI, AndE1, AndE2,
    OrI1, OrI2, OrE,
    ImpI, ImpE, BotE,
    AtomicApp,
    Step // an arbitrary inference: right form to be a proof, no logical shape
  };

  static Argument assume(std::string label, Formula f);
  static Argument infer(NodeKind kind, Formula conclusion,
                        std::vector<std::string> discharge, std::vector<Argument> children);
  static Argument atomic(Rule rule, std::vector<std::string> discharge,
                         std::vector<Argument> children);
  static Argument atomic_by_label(std::string via_label, Formula conclusion,
                                  std::vector<std::string> discharge,
                                  std::vector<Argument> children);

  NodeKind kind() const { return n_->kind; }
  const Formula& conclusion() const { return n_->conclusion; }
  const std::string& label() const { return n_->label; } // Assume binder / via-label
  const std::optional<Rule>& rule() const { return n_->rule; }
  const std::vector<std::string>& discharge() const { return n_->discharge; }
  const std::vector<Argument>& children() const { return n_->children; }

  bool operator==(const Argument& o) const;

private:
  struct Node {
    NodeKind kind;
    Formula conclusion;
    std::string label;
    std::optional<Rule> rule;
    std::vector<std::string> discharge;
    std::vector<Argument> children;
  };
  explicit Argument(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// S-expression syntax:
//   arg  := "(assume" label formula ")"
//         | "(" kind formula dis? arg* ")"
//         | "(atomic" ( "<rule>" | label ) formula dis? arg* ")"
//   dis  := "[" label* "]"
//   kind in {andI, andE1, andE2, orI1, orI2, orE, impI, impE, botE, step};
//   "step" is an arbitrary inference node (no shape constraints, no discharge).
// Kind words are reserved: a parenthesized subformula may not start with one.
// '#' starts a line comment.
Argument parse_argument(std::string_view text);
std::string print_argument(const Argument& a);

struct Violation {
  std::string path; // "/0/2" style child indices from the root
  std::string reason;
};

// Empty result iff the tree satisfies every local shape check, all cited
// labels are bound correctly and no label shadows an enclosing binder.
std::vector<Violation> check_wellformed(const Argument& a);

// Open assumption formulas in first-occurrence order (deduplicated).
std::vector<Formula> open_assumptions(const Argument& a);

struct IllFormedArgument : std::runtime_error {
  explicit IllFormedArgument(std::vector<Violation> vs);
  std::vector<Violation> violations;
};

struct ReductionStep {
  std::vector<int> path; // child indices from the root
  char connective;       // '&', '|' or '>'
};

struct NotADetour : std::runtime_error {
  NotADetour() : std::runtime_error("NotADetour: position is not a detour") {}
};

// Detour positions (an elimination whose major premise is the matching
// introduction), in preorder.
std::vector<ReductionStep> find_detours(const Argument& a);

// Applies one reduction at the given position. The conclusion is unchanged
// and open assumptions never grow. Throws NotADetour.
Argument reduce_once(const Argument& a, const ReductionStep& at);

enum class ReductionStrategy { leftmost_outermost, rightmost_innermost };

struct NormalizeResult {
  Argument argument;
  int steps = 0;
  bool complete = true; // false when fuel ran out
};

NormalizeResult normalize(const Argument& a, int fuel = 10000,
                          ReductionStrategy strategy = ReductionStrategy::leftmost_outermost);

// Argument-level validity (the four-case definition):
//   open arguments        -> consequence of the open assumptions
//   closed, atomic concl  -> derivability at the base
//   closed, ends in intro -> validity of the premise subarguments
//   closed, otherwise     -> formula-level validity of the conclusion
// Throws IllFormedArgument / BaseNotInSystem.
Verdict s_valid_argument(const System& sys, const Base& base, const Argument& a,
                         BotPolicy policy);

} // namespace ptv
