#include "ptv/rules.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ptv {

Rule Rule::axiom(Atom conclusion) {
  auto n = std::make_shared<Node>(Node{std::move(conclusion), {}, 0});
  return Rule(std::move(n));
}

Rule Rule::compound(std::vector<Rule> premises, Atom conclusion) {
  if (premises.empty()) return axiom(std::move(conclusion));
  std::sort(premises.begin(), premises.end());
  premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
  int lvl = 0;
  for (const Rule& p : premises) lvl = std::max(lvl, p.level());
  auto n = std::make_shared<Node>(Node{std::move(conclusion), std::move(premises), lvl + 1});
  return Rule(std::move(n));
}

bool Rule::operator==(const Rule& o) const {
  return n_ == o.n_ || compare(*this, o) == std::strong_ordering::equal;
}

std::strong_ordering Rule::compare(const Rule& a, const Rule& b) {
  if (a.n_ == b.n_) return std::strong_ordering::equal;
  if (auto c = a.level() <=> b.level(); c != 0) return c;
  const auto& ap = a.premises();
  const auto& bp = b.premises();
  for (std::size_t i = 0; i < std::min(ap.size(), bp.size()); ++i)
    if (auto c = compare(ap[i], bp[i]); c != 0) return c;
  if (auto c = ap.size() <=> bp.size(); c != 0) return c;
  return a.conclusion() <=> b.conclusion();
}

std::string print_rule(const Rule& r) {
  if (r.is_axiom()) return r.conclusion().name();
  std::string out = "(";
  bool first = true;
  for (const Rule& p : r.premises()) {
    if (!first) out += ", ";
    first = false;
    out += print_rule(p);
  }
  out += " => ";
  out += r.conclusion().name();
  out += ")";
  return out;
}

namespace {

struct RuleParser {
  std::string_view src;
  std::size_t pos = 0;
  bool allow_bot;

  void skip() {
    while (pos < src.size()) {
      if (src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(src[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) { ++pos; return true; }
    return false;
  }

  Atom head() {
    skip();
    std::size_t start = pos;
    if (pos + 2 < src.size() && src.substr(pos, 3) == "_|_") {
      pos += 3;
      if (!allow_bot) throw ParseError("rule concluding bot requires !allow-bot-conclusions", start);
      return Atom::falsum();
    }
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string name(src.substr(start, pos - start));
    if (name == "bot") {
      if (!allow_bot) throw ParseError("rule concluding bot requires !allow-bot-conclusions", start);
      return Atom::falsum();
    }
    if (!Atom::valid_name(name)) throw ParseError("expected an atom", start);
    return Atom(name);
  }

  Rule rule() {
    skip();
    if (pos >= src.size()) throw ParseError("expected a rule", pos);
    if (src[pos] != '(') return Rule::axiom(head());
    ++pos;
    std::vector<Rule> prems;
    skip();
    if (!(pos + 1 < src.size() && src[pos] == '=' && src[pos + 1] == '>')) {
      prems.push_back(rule());
      while (eat(',')) prems.push_back(rule());
    }
    skip();
    if (!(pos + 1 < src.size() && src[pos] == '=' && src[pos + 1] == '>'))
      throw ParseError("expected '=>'", pos);
    pos += 2;
    Atom c = head();
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return Rule::compound(std::move(prems), std::move(c));
  }

  Rule parse() {
    Rule r = rule();
    skip();
    if (pos != src.size()) throw ParseError("unexpected trailing input", pos);
    return r;
  }
};

} // namespace

Rule parse_rule(std::string_view text, bool allow_bot_conclusions) {
  RuleParser p{text, 0, allow_bot_conclusions};
  return p.parse();
}

Base::Base(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end());
  rules_.erase(std::unique(rules_.begin(), rules_.end()), rules_.end());
}

bool Base::contains(const Rule& r) const {
  return std::binary_search(rules_.begin(), rules_.end(), r);
}

bool Base::subset_of(const Base& o) const {
  return std::includes(o.rules_.begin(), o.rules_.end(), rules_.begin(), rules_.end());
}

Base Base::union_with(const Base& o) const {
  std::vector<Rule> merged;
  merged.reserve(rules_.size() + o.rules_.size());
  std::set_union(rules_.begin(), rules_.end(), o.rules_.begin(), o.rules_.end(),
                 std::back_inserter(merged));
  Base b;
  b.rules_ = std::move(merged);
  return b;
}

Base Base::with(const Rule& r) const {
  if (contains(r)) return *this;
  std::vector<Rule> v = rules_;
  v.push_back(r);
  return Base(std::move(v));
}

std::string print_base(const Base& b) {
  std::string out = "{";
  bool first = true;
  for (const Rule& r : b.rules()) {
    if (!first) out += ", ";
    first = false;
    out += print_rule(r);
  }
  out += "}";
  return out;
}

Base parse_base_file(std::string_view text) {
  bool allow_bot = false;
  std::vector<Rule> rules;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t nl = text.find('\n', line_start);
    std::string_view line = text.substr(line_start, nl == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : nl - line_start);
    std::size_t offset = line_start;
    line_start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    // strip comments and whitespace
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line[0] == '!') {
      if (line == "!allow-bot-conclusions") {
        allow_bot = true;
        continue;
      }
      throw ParseError("unknown header '" + std::string(line) + "'", offset + b);
    }
    try {
      rules.push_back(parse_rule(line, allow_bot));
    } catch (const ParseError& pe) {
      throw ParseError(std::string(pe.what()), offset + b + pe.position);
    }
  }
  return Base(std::move(rules));
}

std::string_view to_string(BotPolicy p) {
  return p == BotPolicy::explosion ? "explosion" : "atom";
}

// ---------------------------------------------------------------------------
// DerivEngine
// ---------------------------------------------------------------------------

std::size_t DerivEngine::VecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = 1469598103934665603ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b9;
    h *= 1099511628211ULL;
  }
  return h;
}

int DerivEngine::intern_atom(const Atom& a) {
  auto it = atom_ids_.find(a.name());
  if (it != atom_ids_.end()) return it->second;
  int id = static_cast<int>(atoms_.size());
  if (id >= 64) throw std::runtime_error("too many distinct atoms for the derivability engine");
  atoms_.push_back(a);
  atom_ids_.emplace(a.name(), id);
  return id;
}

int DerivEngine::intern_rule(const Rule& r) {
  std::string key = print_rule(r);
  auto it = rule_ids_.find(key);
  if (it != rule_ids_.end()) return it->second;
  RuleRec rec;
  rec.concl = intern_atom(r.conclusion());
  rec.level = r.level();
  for (const Rule& p : r.premises()) rec.prems.push_back(intern_rule(p));
  std::sort(rec.prems.begin(), rec.prems.end());
  int id = static_cast<int>(rules_.size());
  rules_.push_back(std::move(rec));
  rule_pool_.push_back(r);
  rule_ids_.emplace(std::move(key), id);
  return id;
}

namespace {
bool sorted_subset(const std::vector<int>& small, std::span<const int> big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}
std::vector<int> merge_ids(std::span<const int> a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
} // namespace

std::uint64_t DerivEngine::closure(std::span<const int> base_ids) {
  std::vector<int> key(base_ids.begin(), base_ids.end());
  auto it = closure_memo_.find(key);
  if (it != closure_memo_.end()) return it->second;
  std::uint64_t bits = closure_uncached(key);
  closure_memo_.emplace(std::move(key), bits);
  return bits;
}

std::uint64_t DerivEngine::closure_uncached(const std::vector<int>& base_ids) {
  const bool explosion = policy_ == BotPolicy::explosion;
  std::uint64_t bits = 0;
  auto holds = [&](std::uint64_t set, int atom_id) {
    if (explosion) return atom_id != 0 && (set >> atom_id & 1) != 0;
    return (set >> atom_id & 1) != 0 || (set & 1) != 0; // bot makes all atoms derivable
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int rid : base_ids) {
      const RuleRec& r = rules_[static_cast<std::size_t>(rid)];
      if (explosion && r.concl == 0) continue;
      if (bits >> r.concl & 1) continue;
      bool sat = true;
      for (int pid : r.prems) {
        const RuleRec& prem = rules_[static_cast<std::size_t>(pid)];
        if (sorted_subset(prem.prems, base_ids)) {
          if (!holds(bits, prem.concl)) { sat = false; break; }
        } else {
          std::uint64_t sub = closure(merge_ids(base_ids, prem.prems));
          if (!holds(sub, prem.concl)) { sat = false; break; }
        }
      }
      if (sat) {
        bits |= std::uint64_t{1} << r.concl;
        changed = true;
      }
    }
  }
  return bits;
}

bool DerivEngine::derivable(std::span<const int> base_ids, int atom_id) {
  if (policy_ == BotPolicy::explosion && atom_id == 0) return false;
  std::uint64_t bits = closure(base_ids);
  if (bits >> atom_id & 1) return true;
  return policy_ == BotPolicy::atom && (bits & 1) != 0;
}

bool DerivEngine::derives(const Base& base, const Atom& goal) {
  std::vector<int> ids;
  ids.reserve(base.size());
  for (const Rule& r : base.rules()) ids.push_back(intern_rule(r));
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return derivable(ids, intern_atom(goal));
}

std::set<Atom> DerivEngine::derivable_atoms(const Base& base, const std::set<Atom>& universe_atoms) {
  std::set<Atom> out;
  for (const Atom& a : universe_atoms)
    if (derives(base, a)) out.insert(a);
  return out;
}

DerivationTrace DerivEngine::trace(const Base& base, const Atom& goal) {
  if (!derives(base, goal)) return {};
  DerivationTrace out;
  // Replay the saturation at the rule-tree level, recording fires in order.
  std::function<void(const Base&, std::string)> replay = [&](const Base& b, std::string indent) {
    std::set<Atom> derived;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Rule& r : b.rules()) {
        if (policy_ == BotPolicy::explosion && r.conclusion().is_falsum()) continue;
        if (derived.count(r.conclusion())) continue;
        bool sat = true;
        for (const Rule& p : r.premises()) {
          Base ext = b;
          for (const Rule& d : p.premises()) ext = ext.with(d);
          if (!derives(ext, p.conclusion())) { sat = false; break; }
        }
        if (sat) {
          if (r.is_axiom())
            out.push_back(indent + r.conclusion().name() + "  [axiom " + print_rule(r) + "]");
          else
            out.push_back(indent + r.conclusion().name() + "  [by " + print_rule(r) + "]");
          for (const Rule& p : r.premises()) {
            if (p.premises().empty()) continue;
            Base ext = b;
            for (const Rule& d : p.premises()) ext = ext.with(d);
            out.push_back(indent + "  premise " + print_rule(p) + " checked in " + print_base(ext));
          }
          derived.insert(r.conclusion());
          changed = true;
        }
      }
    }
    if (!derived.count(goal) && policy_ == BotPolicy::atom && derived.count(Atom::falsum()))
      out.push_back(indent + goal.name() + "  [from bot by the explosion scheme]");
  };
  replay(base, "");
  return out;
}

bool derives(const Base& base, const Atom& goal, BotPolicy policy) {
  DerivEngine e(policy);
  return e.derives(base, goal);
}

std::set<Atom> derivable_atoms(const Base& base, const std::set<Atom>& universe_atoms,
                               BotPolicy policy) {
  DerivEngine e(policy);
  return e.derivable_atoms(base, universe_atoms);
}

} // namespace ptv
