#include "ptv/bridge.hpp"

#include <algorithm>

namespace ptv {

Formula rule_to_formula(const Rule& r) {
  if (r.is_axiom()) return Formula::mk_atom(r.conclusion());
  const auto& ps = r.premises();
  Formula lhs = rule_to_formula(ps[0]);
  for (std::size_t i = 1; i < ps.size(); ++i)
    lhs = Formula::mk_and(std::move(lhs), rule_to_formula(ps[i]));
  return Formula::mk_imp(std::move(lhs), Formula::mk_atom(r.conclusion()));
}

std::vector<Rule> formula_to_rules(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return {Rule::axiom(f.atom())};
    case Formula::Kind::Bot:
      throw TranslationError(TranslationError::Reason::BotPresent,
                             "BotPresent: bot has no rule translation");
    case Formula::Kind::Or:
      throw TranslationError(TranslationError::Reason::DisjunctionPresent,
                             "DisjunctionPresent: disjunctions have no rule translation");
    case Formula::Kind::And: {
      std::vector<Rule> out = formula_to_rules(f.left());
      std::vector<Rule> rhs = formula_to_rules(f.right());
      out.insert(out.end(), rhs.begin(), rhs.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    case Formula::Kind::Imp: {
      std::vector<Rule> antecedent = formula_to_rules(f.left());
      std::vector<Rule> out;
      for (const Rule& r : formula_to_rules(f.right())) {
        std::vector<Rule> prems = antecedent;
        prems.insert(prems.end(), r.premises().begin(), r.premises().end());
        out.push_back(Rule::compound(std::move(prems), r.conclusion()));
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

bool round_trip_check(const Rule& r) {
  std::vector<Rule> back = formula_to_rules(rule_to_formula(r));
  return back.size() == 1 && back[0] == r;
}

} // namespace ptv
