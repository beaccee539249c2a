#pragma once

#include <span>
#include <string>
#include <vector>

#include "ptv/bridge.hpp"
#include "ptv/ipc.hpp"
#include "ptv/semantics.hpp"
#include "ptv/systems.hpp"

namespace ptv {

struct SearchCaps {
  int max_atoms = 3;
  int max_depth = 3;          // leaves have depth 1
  long max_formulas = 200000; // enumeration cap
  bool include_bot = true;
  int findings_cap = 100;
};

struct Finding {
  Formula formula;
  std::string system_name;
  bool ptv = false;
  bool ipc = false;
  BotPolicy policy = BotPolicy::explosion;
  std::size_t universe_size = 0; // rules for Generated, bases for Explicit
};

struct FormulaEnumeration {
  std::vector<Formula> formulas;
  bool truncated = false;
};

// All formulas over the given atoms (plus bot when requested) up to
// max_depth, with commutative arguments of & and | in canonical order.
// Deterministic: by depth layer, then operator, then operand indices.
FormulaEnumeration enumerate_formulas(const std::vector<Atom>& atoms, int max_depth,
                                      bool include_bot, long max_count);

enum class Exec { serial, parallel };

struct SearchResult {
  std::vector<Finding> findings;
  long enumerated = 0;
  bool enumeration_truncated = false;
  bool findings_truncated = false;
};

// Enumerates formulas over the first max_atoms atoms of the system's atom
// universe and reports every one that is ptv-valid in the system but not an
// intuitionistic theorem. Exec::parallel fans the sweep out over OpenMP
// workers; results are identical to the serial reference.
SearchResult find_superintuitionistic(const System& sys, const SearchCaps& caps,
                                      BotPolicy policy, Exec exec = Exec::parallel);

struct HarropRow {
  Formula antecedent;
  std::vector<Rule> translation;
  Formula instance;
  bool ptv = false;
};

// For each disjunction-free antecedent A, the verdict of
// ptv_valid((A -> (q | r)) -> ((A -> q) | (A -> r))) and A's rule form.
std::vector<HarropRow> check_harrop_family(const System& sys,
                                           std::span<const Formula> antecedents,
                                           BotPolicy policy);

enum class ReportFormat { text, csv };

std::string report(const SearchResult& result, ReportFormat format);
std::string report_harrop(std::span<const HarropRow> rows, const System& sys,
                          BotPolicy policy, ReportFormat format);

} // namespace ptv
