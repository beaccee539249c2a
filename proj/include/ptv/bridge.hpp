#pragma once

#include <vector>

#include "ptv/rules.hpp"
#include "ptv/syntax.hpp"

namespace ptv {

struct TranslationError : std::runtime_error {
  enum class Reason { DisjunctionPresent, BotPresent };
  TranslationError(Reason r, std::string msg) : std::runtime_error(std::move(msg)), reason(r) {}
  Reason reason;
};

// axiom p        |->  p
// (R1,..,Rn => q) |-> (t(R1) & ... & t(Rn)) -> q   (left-nested conjunction)
// The result is disjunction- and bot-free.
Formula rule_to_formula(const Rule& r);

// Inverse direction, defined on disjunction-free formulas:
//   rules(p)     = {axiom p}
//   rules(A & B) = rules(A) u rules(B)
//   rules(A -> B) = { (rules(A) ++ premises(R) => conclusion(R)) | R in rules(B) }
// Throws TranslationError when f contains | or bot.
std::vector<Rule> formula_to_rules(const Formula& f);

// formula_to_rules(rule_to_formula(r)) == {r} after canonicalization.
bool round_trip_check(const Rule& r);

} // namespace ptv
