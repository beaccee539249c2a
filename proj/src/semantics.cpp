#include "ptv/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptv {

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

Evaluator::Evaluator(const System& sys, BotPolicy policy)
    : sys_(sys), policy_(policy), deriv_(policy) {
  if (sys.kind() == System::Kind::Generated) {
    for (const Rule& r : sys.universe()) universe_rule_ids_.push_back(deriv_.intern_rule(r));
    full_mask_ = sys.universe().size() == 32
                     ? ~std::uint32_t{0}
                     : (std::uint32_t{1} << sys.universe().size()) - 1;
    base_space_ = std::size_t{1} << sys.universe().size();
  } else {
    for (const Base& b : sys.listed_bases()) {
      std::vector<int> ids;
      for (const Rule& r : b.rules()) ids.push_back(deriv_.intern_rule(r));
      std::sort(ids.begin(), ids.end());
      explicit_rule_ids_.push_back(std::move(ids));
    }
    base_space_ = sys.listed_bases().size();
  }
  for (const Atom& a : sys.atom_universe()) universe_atom_ids_.push_back(deriv_.intern_atom(a));
  closure_cache_.assign(base_space_, 0);
  closure_known_.assign(base_space_, 0);
}

void Evaluator::reset_formulas() {
  fnodes_.clear();
  fids_.clear();
  memo_.clear();
}

int Evaluator::intern(const Formula& f) {
  auto it = fids_.find(f);
  if (it != fids_.end()) return it->second;
  FNode n;
  n.kind = f.kind();
  switch (f.kind()) {
    case Formula::Kind::Atom: n.atom_id = deriv_.intern_atom(f.atom()); break;
    case Formula::Kind::Bot: break;
    default:
      n.l = intern(f.left());
      n.r = intern(f.right());
  }
  int id = static_cast<int>(fnodes_.size());
  fnodes_.push_back(n);
  memo_.emplace_back(); // allocated lazily on first eval
  fids_.emplace(f, id);
  return id;
}

std::uint64_t Evaluator::closure_bits(std::uint32_t base_id) {
  if (closure_known_[base_id]) return closure_cache_[base_id];
  std::uint64_t bits;
  if (sys_.kind() == System::Kind::Generated) {
    std::vector<int> ids;
    std::uint32_t m = base_id;
    while (m) {
      ids.push_back(universe_rule_ids_[std::countr_zero(m)]);
      m &= m - 1;
    }
    std::sort(ids.begin(), ids.end());
    bits = deriv_.closure(ids);
  } else {
    bits = deriv_.closure(explicit_rule_ids_[base_id]);
  }
  closure_cache_[base_id] = bits;
  closure_known_[base_id] = 1;
  return bits;
}

bool Evaluator::atom_valid(std::uint32_t base_id, const Atom& a) {
  int aid = deriv_.intern_atom(a);
  if (policy_ == BotPolicy::explosion && aid == 0) return false;
  std::uint64_t bits = closure_bits(base_id);
  if (bits >> aid & 1) return true;
  return policy_ == BotPolicy::atom && (bits & 1) != 0;
}

bool Evaluator::eval_bot(std::uint32_t base_id) {
  std::uint64_t bits = closure_bits(base_id);
  if (policy_ == BotPolicy::atom) return (bits & 1) != 0;
  for (int aid : universe_atom_ids_)
    if (!(bits >> aid & 1)) return false;
  return true;
}

bool Evaluator::eval(std::uint32_t base_id, int fid) {
  std::vector<std::int8_t>& m = memo_[static_cast<std::size_t>(fid)];
  if (m.empty()) m.assign(base_space_, -1);
  if (m[base_id] >= 0) return m[base_id] != 0;
  const FNode& n = fnodes_[static_cast<std::size_t>(fid)];
  bool v = false;
  switch (n.kind) {
    case Formula::Kind::Atom: {
      if (policy_ == BotPolicy::explosion && n.atom_id == 0) {
        v = false;
      } else {
        std::uint64_t bits = closure_bits(base_id);
        v = (bits >> n.atom_id & 1) != 0 ||
            (policy_ == BotPolicy::atom && (bits & 1) != 0);
      }
      break;
    }
    case Formula::Kind::Bot: v = eval_bot(base_id); break;
    case Formula::Kind::And: v = eval(base_id, n.l) && eval(base_id, n.r); break;
    case Formula::Kind::Or: v = eval(base_id, n.l) || eval(base_id, n.r); break;
    case Formula::Kind::Imp: v = eval_imp(base_id, fid); break;
  }
  m[base_id] = v ? 1 : 0;
  return v;
}

bool Evaluator::eval_imp(std::uint32_t base_id, int fid) {
  const FNode& n = fnodes_[static_cast<std::size_t>(fid)];
  if (sys_.kind() == System::Kind::Generated) {
    std::uint32_t comp = full_mask_ & ~base_id;
    for (std::uint32_t t = comp;; t = (t - 1) & comp) {
      std::uint32_t ext = base_id | t;
      if (eval(ext, n.l) && !eval(ext, n.r)) return false;
      if (t == 0) break;
    }
    return true;
  }
  for (std::uint32_t j : sys_.explicit_supersets(base_id))
    if (eval(j, n.l) && !eval(j, n.r)) return false;
  return true;
}

bool Evaluator::valid_id(std::uint32_t base_id, const Formula& f) {
  return eval(base_id, intern(f));
}

bool Evaluator::valid(const Base& base, const Formula& f) {
  auto id = sys_.base_id(base);
  if (!id) throw BaseNotInSystem(base);
  return valid_id(*id, f);
}

// ---------------------------------------------------------------------------
// MinimalWitnessEvaluator
// ---------------------------------------------------------------------------

MinimalWitnessEvaluator::MinimalWitnessEvaluator(const System& sys, BotPolicy policy)
    : Evaluator(sys, policy) {
  if (sys.kind() != System::Kind::Generated)
    throw std::invalid_argument("minimal-witness evaluation needs a Generated system");
}

bool MinimalWitnessEvaluator::eval_imp(std::uint32_t base_id, int fid) {
  const FNode& n = fnodes_[static_cast<std::size_t>(fid)];
  // Visit extensions in (size, lex) order, keeping an antichain of minimal
  // antecedent-satisfying extensions. Anything above an antichain member
  // already has a valid consequent by superset-monotonicity.
  std::vector<int> comp;
  for (std::size_t i = 0; i < sys_.universe().size(); ++i)
    if (!(base_id >> i & 1)) comp.push_back(static_cast<int>(i));
  std::vector<std::uint32_t> antichain;
  const std::size_t cn = comp.size();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= cn; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::uint32_t ext = base_id;
      for (std::size_t i : idx) ext |= std::uint32_t{1} << comp[i];
      bool covered = false;
      for (std::uint32_t m : antichain)
        if ((ext & m) == m) { covered = true; break; }
      if (!covered && eval(ext, n.l)) {
        if (!eval(ext, n.r)) return false;
        antichain.push_back(ext);
      }
      // next k-combination
      if (k == 0) break;
      std::size_t i = k;
      bool advanced = false;
      while (i > 0) {
        --i;
        if (idx[i] != i + cn - k) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

namespace {

struct CertBuilder {
  Evaluator& eval;
  const System& sys;

  Certificate build(const Base& base, const Formula& f) {
    Certificate c;
    c.formula = f;
    c.subject = print_formula(f);
    c.base = base;
    std::uint32_t bid = *sys.base_id(base);
    c.verdict = eval.valid_id(bid, f);
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        c.kind = Certificate::Kind::Atom;
        if (c.verdict) {
          c.notes = eval.deriv().trace(base, f.atom());
        } else {
          c.notes.push_back("no derivation of " + f.atom().name() + " from " + print_base(base));
        }
        break;
      }
      case Formula::Kind::Bot: {
        c.kind = Certificate::Kind::Bot;
        if (eval.policy() == BotPolicy::atom) {
          c.notes.push_back(std::string("bot ") +
                            (c.verdict ? "derivable" : "not derivable") + " at " +
                            print_base(base));
        } else {
          for (const Atom& a : sys.atom_universe()) {
            bool d = eval.atom_valid(bid, a);
            c.notes.push_back(a.name() + (d ? ": derivable" : ": not derivable"));
            if (!d) break;
          }
          if (sys.atom_universe().empty())
            c.notes.push_back("atom universe empty; bot clause vacuously holds");
        }
        break;
      }
      case Formula::Kind::And: {
        c.kind = Certificate::Kind::And;
        Certificate l = build(base, f.left());
        if (!l.verdict) {
          c.children.push_back(std::move(l)); // failing branch
        } else {
          c.children.push_back(std::move(l));
          c.children.push_back(build(base, f.right()));
        }
        break;
      }
      case Formula::Kind::Or: {
        c.kind = Certificate::Kind::Or;
        Certificate l = build(base, f.left());
        if (l.verdict) {
          c.children.push_back(std::move(l)); // succeeding branch
        } else {
          c.children.push_back(std::move(l));
          c.children.push_back(build(base, f.right()));
        }
        break;
      }
      case Formula::Kind::Imp: {
        c.kind = Certificate::Kind::Imp;
        for (const Base& ext : sys.extensions_of(base)) {
          std::uint32_t eid = *sys.base_id(ext);
          Certificate::ExtCheck ck;
          ck.extension = ext;
          ck.antecedent_valid = eval.valid_id(eid, f.left());
          if (ck.antecedent_valid) {
            ck.consequent_checked = true;
            ck.consequent_valid = eval.valid_id(eid, f.right());
          }
          if (ck.antecedent_valid && !ck.consequent_valid) {
            // counterexample extension with sub-certificates
            c.children.push_back(build(ext, f.left()));
            c.children.push_back(build(ext, f.right()));
            c.extensions.push_back(std::move(ck));
            return c;
          }
          c.extensions.push_back(std::move(ck));
        }
        break;
      }
    }
    return c;
  }
};

void to_text_rec(const Certificate& c, int indent, std::ostringstream& out) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const char* kind = "";
  switch (c.kind) {
    case Certificate::Kind::Atom: kind = "atom"; break;
    case Certificate::Kind::Bot: kind = "bot"; break;
    case Certificate::Kind::And: kind = "and"; break;
    case Certificate::Kind::Or: kind = "or"; break;
    case Certificate::Kind::Imp: kind = "imp"; break;
    case Certificate::Kind::Consequence: kind = "consequence"; break;
    case Certificate::Kind::Ptv: kind = "ptv"; break;
    case Certificate::Kind::Gptv: kind = "gptv"; break;
    case Certificate::Kind::Argument: kind = "argument"; break;
  }
  out << pad << kind << ' ' << c.subject;
  if (c.base) out << " at " << print_base(*c.base);
  out << " : " << (c.verdict ? "VALID" : "INVALID") << '\n';
  for (const std::string& n : c.notes) out << pad << "  | " << n << '\n';
  for (const auto& e : c.extensions) {
    out << pad << "  ext " << print_base(e.extension) << ": antecedent "
        << (e.antecedent_valid ? "valid" : "invalid");
    if (e.consequent_checked)
      out << ", consequent " << (e.consequent_valid ? "valid" : "INVALID");
    out << '\n';
  }
  for (const Certificate& ch : c.children) to_text_rec(ch, indent + 1, out);
}

} // namespace

std::string Certificate::to_text() const {
  std::ostringstream out;
  to_text_rec(*this, 0, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Spec surface
// ---------------------------------------------------------------------------

Verdict valid(const System& sys, const Base& base, const Formula& f, BotPolicy policy) {
  if (!sys.member(base)) throw BaseNotInSystem(base);
  Evaluator ev(sys, policy);
  CertBuilder cb{ev, sys};
  Certificate c = cb.build(base, f);
  return Verdict{c.verdict, std::move(c)};
}

Verdict consequence(const System& sys, const Base& base, std::span<const Formula> assumptions,
                    const Formula& conclusion, BotPolicy policy) {
  if (!sys.member(base)) throw BaseNotInSystem(base);
  Evaluator ev(sys, policy);
  CertBuilder cb{ev, sys};
  Certificate c;
  c.kind = Certificate::Kind::Consequence;
  c.base = base;
  c.formula = conclusion;
  c.assumptions.assign(assumptions.begin(), assumptions.end());
  {
    std::string s;
    for (const Formula& a : assumptions) {
      if (!s.empty()) s += ", ";
      s += print_formula(a);
    }
    c.subject = "[" + s + "] entails " + print_formula(conclusion);
  }
  c.verdict = true;
  for (const Base& ext : sys.extensions_of(base)) {
    std::uint32_t eid = *sys.base_id(ext);
    Certificate::ExtCheck ck;
    ck.extension = ext;
    ck.antecedent_valid = true;
    for (const Formula& a : assumptions)
      if (!ev.valid_id(eid, a)) { ck.antecedent_valid = false; break; }
    if (ck.antecedent_valid) {
      ck.consequent_checked = true;
      ck.consequent_valid = ev.valid_id(eid, conclusion);
    }
    bool fails = ck.antecedent_valid && !ck.consequent_valid;
    c.extensions.push_back(std::move(ck));
    if (fails) {
      c.verdict = false;
      for (const Formula& a : assumptions) c.children.push_back(cb.build(ext, a));
      c.children.push_back(cb.build(ext, conclusion));
      break;
    }
  }
  return Verdict{c.verdict, std::move(c)};
}

Verdict ptv_valid(const System& sys, const Formula& f, BotPolicy policy) {
  Evaluator ev(sys, policy);
  Certificate c;
  c.kind = Certificate::Kind::Ptv;
  c.formula = f;
  c.subject = print_formula(f) + " over system " + sys.name();
  c.verdict = true;
  std::size_t checked = 0;
  std::optional<Base> witness;
  sys.for_each_base([&](const Base& b) {
    ++checked;
    if (!ev.valid_id(*sys.base_id(b), f)) {
      witness = b;
      return false;
    }
    return true;
  });
  if (witness) {
    c.verdict = false;
    c.notes.push_back("fails at base " + print_base(*witness) + " (base " +
                      std::to_string(checked - 1) + " in enumeration order)");
    CertBuilder cb{ev, sys};
    c.children.push_back(cb.build(*witness, f));
  } else {
    c.notes.push_back("valid at all " + std::to_string(checked) + " bases");
  }
  return Verdict{c.verdict, std::move(c)};
}

Verdict gptv_valid(std::span<const System> systems, const Formula& f, BotPolicy policy) {
  if (systems.empty()) throw EmptySystemList();
  Certificate c;
  c.kind = Certificate::Kind::Gptv;
  c.formula = f;
  c.subject = print_formula(f) + " over " + std::to_string(systems.size()) + " systems";
  c.verdict = true;
  for (const System& sys : systems) {
    Verdict v = ptv_valid(sys, f, policy);
    bool ok = v.valid;
    c.children.push_back(std::move(v.certificate));
    if (!ok) {
      c.verdict = false;
      c.notes.push_back("fails in system " + sys.name());
      break;
    }
  }
  return Verdict{c.verdict, std::move(c)};
}

Verdict valid_optimized(const System& sys, const Base& base, const Formula& f, BotPolicy policy) {
  if (!sys.member(base)) throw BaseNotInSystem(base);
  MinimalWitnessEvaluator ev(sys, policy);
  Certificate c;
  c.kind = Certificate::Kind::Imp;
  c.formula = f;
  c.base = base;
  c.subject = print_formula(f) + " (minimal-witness evaluation)";
  c.verdict = ev.valid(base, f);
  c.notes.push_back("evaluated with the minimal-witness strategy; replay uses brute force");
  return Verdict{c.verdict, std::move(c)};
}

// ---------------------------------------------------------------------------
// replay
// ---------------------------------------------------------------------------

namespace {

bool replay_rec(const Certificate& c, const System& sys, BotPolicy policy, Evaluator& ev) {
  if (c.base && !sys.member(*c.base)) return false;
  for (const auto& e : c.extensions) {
    if (!sys.member(e.extension)) return false;
    if (c.base && !c.base->subset_of(e.extension)) return false;
  }
  switch (c.kind) {
    case Certificate::Kind::Atom:
    case Certificate::Kind::Bot:
    case Certificate::Kind::And:
    case Certificate::Kind::Or:
    case Certificate::Kind::Imp: {
      if (!c.base || !c.formula) return false;
      auto bid = sys.base_id(*c.base);
      if (!bid) return false;
      if (ev.valid_id(*bid, *c.formula) != c.verdict) return false;
      for (const auto& e : c.extensions) {
        std::uint32_t eid = *sys.base_id(e.extension);
        if (c.formula->kind() == Formula::Kind::Imp) {
          if (ev.valid_id(eid, c.formula->left()) != e.antecedent_valid) return false;
          if (e.consequent_checked &&
              ev.valid_id(eid, c.formula->right()) != e.consequent_valid)
            return false;
        }
      }
      break;
    }
    case Certificate::Kind::Consequence: {
      if (!c.base || !c.formula) return false;
      bool all = true;
      for (const Base& ext : sys.extensions_of(*c.base)) {
        std::uint32_t eid = *sys.base_id(ext);
        bool ass = true;
        for (const Formula& a : c.assumptions)
          if (!ev.valid_id(eid, a)) { ass = false; break; }
        if (ass && !ev.valid_id(eid, *c.formula)) { all = false; break; }
      }
      if (all != c.verdict) return false;
      break;
    }
    case Certificate::Kind::Ptv: {
      if (!c.formula) return false;
      bool all = true;
      sys.for_each_base([&](const Base& b) {
        if (!ev.valid_id(*sys.base_id(b), *c.formula)) { all = false; return false; }
        return true;
      });
      if (all != c.verdict) return false;
      break;
    }
    case Certificate::Kind::Gptv:
      return false; // needs the full system list; handled by the span overload
    case Certificate::Kind::Argument: {
      // The recorded verdict is the conjunction of the sub-verdicts; the
      // children themselves replay below.
      bool all = true;
      for (const Certificate& ch : c.children) all = all && ch.verdict;
      if (all != c.verdict) return false;
      break;
    }
  }
  for (const Certificate& ch : c.children)
    if (!replay_rec(ch, sys, policy, ev)) return false;
  return true;
}

} // namespace

bool replay(const Certificate& cert, const System& sys, BotPolicy policy) {
  Evaluator ev(sys, policy);
  return replay_rec(cert, sys, policy, ev);
}

// ---------------------------------------------------------------------------
// fast boolean forms
// ---------------------------------------------------------------------------

bool ptv_valid_fast(const System& sys, const Formula& f, BotPolicy policy, Base* witness) {
  Evaluator ev(sys, policy);
  bool all = true;
  sys.for_each_base([&](const Base& b) {
    if (!ev.valid_id(*sys.base_id(b), f)) {
      if (witness) *witness = b;
      all = false;
      return false;
    }
    return true;
  });
  return all;
}

bool ptv_valid_parallel(const System& sys, const Formula& f, BotPolicy policy, Base* witness) {
#ifndef _OPENMP
  return ptv_valid_fast(sys, f, policy, witness);
#else
  std::vector<std::uint32_t> ids;
  ids.reserve(sys.base_count());
  sys.for_each_base([&](const Base& b) {
    ids.push_back(*sys.base_id(b));
    return true;
  });
  const long n = static_cast<long>(ids.size());
  std::atomic<long> first_fail{n};
#pragma omp parallel
  {
    Evaluator ev(sys, policy);
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      if (i >= first_fail.load(std::memory_order_relaxed)) continue;
      if (!ev.valid_id(ids[static_cast<std::size_t>(i)], f)) {
        long cur = first_fail.load(std::memory_order_relaxed);
        while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {
        }
      }
    }
  }
  long ff = first_fail.load();
  if (ff == n) return true;
  if (witness) *witness = sys.base_from_id(ids[static_cast<std::size_t>(ff)]);
  return false;
#endif
}

} // namespace ptv
