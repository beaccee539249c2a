#pragma once

#include <span>
#include <unordered_map>

#include "ptv/rules.hpp"
#include "ptv/syntax.hpp"
#include "ptv/systems.hpp"

namespace ptv {

struct EmptySystemList : std::runtime_error {
  EmptySystemList() : std::runtime_error("EmptySystemList: gptv needs at least one system") {}
};

// Evidence tree mirroring the evaluated clause structure. Bases and
// extensions are stored by value so a certificate can be replayed against
// its system later.
class Certificate {
public:
  enum class Kind { Atom, Bot, And, Or, Imp, Consequence, Ptv, Gptv, Argument };

  Kind kind = Kind::Atom;
  bool verdict = false;
  std::string subject;            // printed formula or query description
  std::optional<Formula> formula; // absent for Ptv/Gptv wrappers
  std::vector<Formula> assumptions; // Consequence only
  std::optional<Base> base;       // base the clause was evaluated at
  std::vector<std::string> notes; // derivation traces, atom checklists, ...

  struct ExtCheck {
    Base extension;
    bool antecedent_valid = false;
    bool consequent_valid = false;
    bool consequent_checked = false;
  };
  std::vector<ExtCheck> extensions; // Imp/Consequence: the checked extensions
  std::vector<Certificate> children; // sub-certificates (counterexamples, branches)

  std::string to_text() const; // indented, one clause per line
};

struct Verdict {
  bool valid = false;
  Certificate certificate;
};

// Re-evaluates a certificate against the system: every cited base must be a
// member, every cited extension a superset of its parent base, and every
// recorded verdict must match a fresh evaluation. Returns true iff the
// certificate replays cleanly (its root verdict then equals cert.verdict).
bool replay(const Certificate& cert, const System& sys, BotPolicy policy);

// Brute-force clause-by-clause evaluator for Definition-style validity:
//   atom p   : p derivable at the base
//   bot      : explosion: every atom of the system's atom universe derivable;
//              atom policy: bot itself derivable
//   A & B    : both valid at the base
//   A | B    : one valid at the base
//   A -> B   : for every extension S' of the base within the system,
//              A valid at S' implies B valid at S'
// Memoized per (base, formula); not thread-safe — use one per worker.
class Evaluator {
public:
  Evaluator(const System& sys, BotPolicy policy);

  const System& system() const { return sys_; }
  BotPolicy policy() const { return policy_; }

  bool valid(const Base& base, const Formula& f); // throws BaseNotInSystem
  bool valid_id(std::uint32_t base_id, const Formula& f);

  // Drops interned formulas and their memo but keeps derivability caches.
  // Lets sweeps over millions of formulas run in bounded memory.
  void reset_formulas();

  bool atom_valid(std::uint32_t base_id, const Atom& a);
  std::uint64_t closure_bits(std::uint32_t base_id);
  DerivEngine& deriv() { return deriv_; }

protected:
  struct FNode {
    Formula::Kind kind;
    int l = -1, r = -1;
    int atom_id = -1;
  };

  int intern(const Formula& f);
  bool eval(std::uint32_t base_id, int fid);
  virtual bool eval_imp(std::uint32_t base_id, int fid);
  bool eval_bot(std::uint32_t base_id);

  const System& sys_;
  BotPolicy policy_;
  DerivEngine deriv_;
  std::vector<int> universe_rule_ids_; // Generated: engine id per universe index
  std::vector<std::vector<int>> explicit_rule_ids_; // Explicit: per base, sorted
  std::vector<int> universe_atom_ids_;
  std::uint32_t full_mask_ = 0;
  std::size_t base_space_ = 0;

  std::vector<FNode> fnodes_;
  std::unordered_map<Formula, int, FormulaHash> fids_;
  std::vector<std::vector<std::int8_t>> memo_; // [fid][base_id] in {-1,0,1}
  std::vector<std::uint64_t> closure_cache_;
  std::vector<std::int8_t> closure_known_;
};

// Same verdicts as Evaluator on Generated systems, but the -> clause only
// evaluates the consequent at minimal antecedent-satisfying extensions; every
// extension above one is covered by superset-monotonicity of validity in
// powerset families. Throws std::invalid_argument for Explicit systems.
class MinimalWitnessEvaluator : public Evaluator {
public:
  MinimalWitnessEvaluator(const System& sys, BotPolicy policy);

protected:
  bool eval_imp(std::uint32_t base_id, int fid) override;
};

// --- spec surface (certificate-producing) -----------------------------------

Verdict valid(const System& sys, const Base& base, const Formula& f, BotPolicy policy);
Verdict consequence(const System& sys, const Base& base, std::span<const Formula> assumptions,
                    const Formula& conclusion, BotPolicy policy);
Verdict ptv_valid(const System& sys, const Formula& f, BotPolicy policy);
Verdict gptv_valid(std::span<const System> systems, const Formula& f, BotPolicy policy);
Verdict valid_optimized(const System& sys, const Base& base, const Formula& f, BotPolicy policy);

// --- fast boolean forms ------------------------------------------------------

// Serial reference: checks bases in enumeration order, reports the first
// failing base through *witness when given.
bool ptv_valid_fast(const System& sys, const Formula& f, BotPolicy policy,
                    Base* witness = nullptr);
// OpenMP-parallel sweep over bases; verdict and witness are identical to the
// serial form (the least failing base in enumeration order wins).
bool ptv_valid_parallel(const System& sys, const Formula& f, BotPolicy policy,
                        Base* witness = nullptr);

} // namespace ptv
