#include "ptv/explorer.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptv {

FormulaEnumeration enumerate_formulas(const std::vector<Atom>& atoms, int max_depth,
                                      bool include_bot, long max_count) {
  FormulaEnumeration out;
  std::vector<Formula>& all = out.formulas;
  std::vector<long> layer_end; // index one past each depth layer
  for (const Atom& a : atoms) all.push_back(Formula::mk_atom(a));
  if (include_bot) all.push_back(Formula::mk_bot());
  if (static_cast<long>(all.size()) > max_count) {
    all.resize(static_cast<std::size_t>(max_count));
    out.truncated = true;
    return out;
  }
  layer_end.push_back(static_cast<long>(all.size()));
  for (int d = 2; d <= max_depth; ++d) {
    long prev = layer_end.back();
    long before = d == 2 ? 0 : layer_end[static_cast<std::size_t>(d - 3)];
    auto emit = [&](Formula f) {
      if (static_cast<long>(all.size()) >= max_count) {
        out.truncated = true;
        return false;
      }
      all.push_back(std::move(f));
      return true;
    };
    // one operand must come from the previous layer for depth to be exactly d
    for (long i = 0; i < prev; ++i) {
      for (long j = 0; j < prev; ++j) {
        if (i < before && j < before) continue;
        // copies: emit() grows the vector and would invalidate references
        Formula l = all[static_cast<std::size_t>(i)];
        Formula r = all[static_cast<std::size_t>(j)];
        if (l <= r) { // canonical commutative order
          if (!emit(Formula::mk_and(l, r))) return out;
          if (!emit(Formula::mk_or(l, r))) return out;
        }
        if (!emit(Formula::mk_imp(l, r))) return out;
      }
    }
    layer_end.push_back(static_cast<long>(all.size()));
  }
  return out;
}

namespace {

std::size_t universe_size_of(const System& sys) {
  return sys.kind() == System::Kind::Generated ? sys.universe().size() : sys.base_count();
}

std::vector<Atom> search_atoms(const System& sys, int max_atoms) {
  std::vector<Atom> atoms;
  for (const Atom& a : sys.atom_universe()) {
    if (static_cast<int>(atoms.size()) >= max_atoms) break;
    atoms.push_back(a);
  }
  return atoms;
}

// ptv check over all bases using a reusable evaluator whose formula memo is
// cleared between formulas (keeps derivability caches, bounds memory).
bool ptv_sweep_check(Evaluator& ev, const std::vector<std::uint32_t>& base_ids,
                     const Formula& f) {
  ev.reset_formulas();
  for (std::uint32_t id : base_ids)
    if (!ev.valid_id(id, f)) return false;
  return true;
}

} // namespace

SearchResult find_superintuitionistic(const System& sys, const SearchCaps& caps,
                                      BotPolicy policy, Exec exec) {
  SearchResult res;
  std::vector<Atom> atoms = search_atoms(sys, caps.max_atoms);
  FormulaEnumeration en =
      enumerate_formulas(atoms, caps.max_depth, caps.include_bot, caps.max_formulas);
  res.enumerated = static_cast<long>(en.formulas.size());
  res.enumeration_truncated = en.truncated;

  std::vector<std::uint32_t> base_ids;
  base_ids.reserve(sys.base_count());
  sys.for_each_base([&](const Base& b) {
    base_ids.push_back(*sys.base_id(b));
    return true;
  });

  const long n = res.enumerated;
  std::vector<std::uint8_t> is_finding(static_cast<std::size_t>(n), 0);

#ifdef _OPENMP
  bool parallel = exec == Exec::parallel;
#else
  bool parallel = false;
  (void)exec;
#endif

  if (!parallel) {
    Evaluator ev(sys, policy);
    IpcProver prover;
    for (long i = 0; i < n; ++i) {
      const Formula& f = en.formulas[static_cast<std::size_t>(i)];
      if (prover.provable(f)) continue;
      if (ptv_sweep_check(ev, base_ids, f)) is_finding[static_cast<std::size_t>(i)] = 1;
    }
  } else {
#ifdef _OPENMP
#pragma omp parallel
    {
      Evaluator ev(sys, policy);
      IpcProver prover;
#pragma omp for schedule(dynamic, 256)
      for (long i = 0; i < n; ++i) {
        const Formula& f = en.formulas[static_cast<std::size_t>(i)];
        if (prover.provable(f)) continue;
        if (ptv_sweep_check(ev, base_ids, f)) is_finding[static_cast<std::size_t>(i)] = 1;
      }
    }
#endif
  }

  for (long i = 0; i < n; ++i) {
    if (!is_finding[static_cast<std::size_t>(i)]) continue;
    if (static_cast<int>(res.findings.size()) >= caps.findings_cap) {
      res.findings_truncated = true;
      break;
    }
    Finding fd;
    fd.formula = en.formulas[static_cast<std::size_t>(i)];
    fd.system_name = sys.name();
    fd.ptv = true;
    fd.ipc = false;
    fd.policy = policy;
    fd.universe_size = universe_size_of(sys);
    res.findings.push_back(std::move(fd));
  }
  return res;
}

std::vector<HarropRow> check_harrop_family(const System& sys,
                                           std::span<const Formula> antecedents,
                                           BotPolicy policy) {
  std::vector<HarropRow> rows;
  Formula q = Formula::mk_atom("q");
  Formula r = Formula::mk_atom("r");
  for (const Formula& a : antecedents) {
    HarropRow row{a, formula_to_rules(a),
                  Formula::mk_imp(Formula::mk_imp(a, Formula::mk_or(q, r)),
                                  Formula::mk_or(Formula::mk_imp(a, q), Formula::mk_imp(a, r))),
                  false};
    row.ptv = ptv_valid_fast(sys, row.instance, policy);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

std::string report(const SearchResult& result, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    out << "formula,system,ptv,ipc,policy,universe-size\n";
    for (const Finding& f : result.findings)
      out << print_formula(f.formula) << ',' << f.system_name << ','
          << (f.ptv ? "true" : "false") << ',' << (f.ipc ? "true" : "false") << ','
          << to_string(f.policy) << ',' << f.universe_size << '\n';
    if (result.findings_truncated)
      out << "# truncated: findings capped\n";
    return out.str();
  }
  std::size_t w = 7;
  for (const Finding& f : result.findings) w = std::max(w, print_formula(f.formula).size());
  out << std::left << std::setw(static_cast<int>(w)) << "formula"
      << "  system        ptv    ipc    policy     universe-size\n";
  for (const Finding& f : result.findings) {
    out << std::left << std::setw(static_cast<int>(w)) << print_formula(f.formula) << "  "
        << std::setw(12) << f.system_name << "  " << std::setw(5)
        << (f.ptv ? "true" : "false") << "  " << std::setw(5) << (f.ipc ? "true" : "false")
        << "  " << std::setw(9) << to_string(f.policy) << "  " << f.universe_size << '\n';
  }
  out << result.findings.size() << " finding(s) among " << result.enumerated
      << " formulas\n";
  if (result.enumeration_truncated) out << "note: enumeration truncated at the formula cap\n";
  if (result.findings_truncated) out << "note: findings truncated at the findings cap\n";
  return out.str();
}

std::string report_harrop(std::span<const HarropRow> rows, const System& sys, BotPolicy policy,
                          ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    out << "antecedent,rules,instance,ptv,system,policy\n";
    for (const HarropRow& r : rows) {
      out << print_formula(r.antecedent) << ',';
      for (std::size_t i = 0; i < r.translation.size(); ++i) {
        if (i) out << "; ";
        out << print_rule(r.translation[i]);
      }
      out << ',' << print_formula(r.instance) << ',' << (r.ptv ? "true" : "false") << ','
          << sys.name() << ',' << to_string(policy) << '\n';
    }
    return out.str();
  }
  out << "generalised Harrop instances over system " << sys.name() << " (policy "
      << to_string(policy) << ")\n";
  for (const HarropRow& r : rows) {
    out << "  A = " << print_formula(r.antecedent) << "  ~  rules ";
    for (std::size_t i = 0; i < r.translation.size(); ++i) {
      if (i) out << ", ";
      out << print_rule(r.translation[i]);
    }
    out << "\n    " << print_formula(r.instance) << " : " << (r.ptv ? "VALID" : "INVALID")
        << '\n';
  }
  return out.str();
}

} // namespace ptv
