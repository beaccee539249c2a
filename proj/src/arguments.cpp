#include "ptv/arguments.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace ptv {

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Argument Argument::assume(std::string label, Formula f) {
  auto n = std::make_shared<Node>(Node{NodeKind::Assume, std::move(f), std::move(label),
                                       std::nullopt, {}, {}});
  return Argument(std::move(n));
}

Argument Argument::infer(NodeKind kind, Formula conclusion, std::vector<std::string> discharge,
                         std::vector<Argument> children) {
  auto n = std::make_shared<Node>(Node{kind, std::move(conclusion), {}, std::nullopt,
                                       std::move(discharge), std::move(children)});
  return Argument(std::move(n));
}

Argument Argument::atomic(Rule rule, std::vector<std::string> discharge,
                          std::vector<Argument> children) {
  Formula concl = rule.conclusion().is_falsum() ? Formula::mk_bot()
                                                : Formula::mk_atom(rule.conclusion());
  auto n = std::make_shared<Node>(Node{NodeKind::AtomicApp, std::move(concl), {},
                                       std::move(rule), std::move(discharge),
                                       std::move(children)});
  return Argument(std::move(n));
}

Argument Argument::atomic_by_label(std::string via_label, Formula conclusion,
                                   std::vector<std::string> discharge,
                                   std::vector<Argument> children) {
  auto n = std::make_shared<Node>(Node{NodeKind::AtomicApp, std::move(conclusion),
                                       std::move(via_label), std::nullopt,
                                       std::move(discharge), std::move(children)});
  return Argument(std::move(n));
}

bool Argument::operator==(const Argument& o) const {
  if (n_ == o.n_) return true;
  if (kind() != o.kind() || !(conclusion() == o.conclusion()) || label() != o.label() ||
      discharge() != o.discharge() || children().size() != o.children().size())
    return false;
  if (rule().has_value() != o.rule().has_value()) return false;
  if (rule() && !(*rule() == *o.rule())) return false;
  for (std::size_t i = 0; i < children().size(); ++i)
    if (!(children()[i] == o.children()[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parsing / printing
// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, Argument::NodeKind, std::less<>> kKinds = {
    {"andI", Argument::NodeKind::AndI},   {"andE1", Argument::NodeKind::AndE1},
    {"andE2", Argument::NodeKind::AndE2}, {"orI1", Argument::NodeKind::OrI1},
    {"orI2", Argument::NodeKind::OrI2},   {"orE", Argument::NodeKind::OrE},
    {"impI", Argument::NodeKind::ImpI},   {"impE", Argument::NodeKind::ImpE},
    {"botE", Argument::NodeKind::BotE},   {"atomic", Argument::NodeKind::AtomicApp},
    {"step", Argument::NodeKind::Step},
};

const char* kind_word(Argument::NodeKind k) {
  switch (k) {
    case Argument::NodeKind::Assume: return "assume";
    case Argument::NodeKind::AndI: return "andI";
    case Argument::NodeKind::AndE1: return "andE1";
    case Argument::NodeKind::AndE2: return "andE2";
    case Argument::NodeKind::OrI1: return "orI1";
    case Argument::NodeKind::OrI2: return "orI2";
    case Argument::NodeKind::OrE: return "orE";
    case Argument::NodeKind::ImpI: return "impI";
    case Argument::NodeKind::ImpE: return "impE";
    case Argument::NodeKind::BotE: return "botE";
    case Argument::NodeKind::AtomicApp: return "atomic";
    case Argument::NodeKind::Step: return "step";
  }
  return "?";
}

struct ArgParser {
  std::string_view src;
  std::size_t pos = 0;

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

  void expect(char c) {
    skip();
    if (pos >= src.size() || src[pos] != c)
      throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  std::string symbol() {
    skip();
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected an identifier", pos);
    return std::string(src.substr(start, pos - start));
  }

  std::string quoted() {
    skip();
    if (pos >= src.size() || src[pos] != '"') throw ParseError("expected '\"'", pos);
    ++pos;
    std::size_t start = pos;
    while (pos < src.size() && src[pos] != '"') ++pos;
    if (pos >= src.size()) throw ParseError("unterminated string", start);
    std::string s(src.substr(start, pos - start));
    ++pos;
    return s;
  }

  // Peeks past '(' for a kind word; that marks the start of a child node.
  bool at_child_start() {
    std::size_t save = pos;
    ++pos; // consume '('
    skip();
    std::size_t s = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    std::string word(src.substr(s, pos - s));
    pos = save;
    return word == "assume" || kKinds.count(word) > 0;
  }

  // The conclusion formula runs until a discharge list, a child node or the
  // node's closing paren, all at bracket depth 0.
  Formula formula_text() {
    skip();
    std::size_t start = pos;
    std::string text;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      if (c == ')' || c == '[') break;
      if (c == '(') {
        if (at_child_start()) break;
        int depth = 0;
        do {
          char d = src[pos];
          if (d == '(') ++depth;
          if (d == ')') --depth;
          text += d;
          ++pos;
        } while (pos < src.size() && depth > 0);
        continue;
      }
      text += c;
      ++pos;
    }
    try {
      return parse_formula(text);
    } catch (const ParseError& pe) {
      throw ParseError(std::string("in conclusion formula: ") + pe.what(), start);
    }
  }

  std::vector<std::string> discharge_list() {
    std::vector<std::string> out;
    skip();
    if (pos < src.size() && src[pos] == '[') {
      ++pos;
      skip();
      while (pos < src.size() && src[pos] != ']') {
        out.push_back(symbol());
        skip();
      }
      expect(']');
    }
    return out;
  }

  Argument node() {
    expect('(');
    std::string word = symbol();
    if (word == "assume") {
      std::string label = symbol();
      Formula f = formula_text();
      expect(')');
      return Argument::assume(std::move(label), std::move(f));
    }
    auto it = kKinds.find(word);
    if (it == kKinds.end()) throw ParseError("unknown argument kind '" + word + "'", pos);
    if (it->second == Argument::NodeKind::AtomicApp) {
      skip();
      std::optional<Rule> rule;
      std::string via;
      if (pos < src.size() && src[pos] == '"') {
        std::size_t rule_at = pos;
        try {
          rule = parse_rule(quoted());
        } catch (const ParseError& pe) {
          throw ParseError(std::string("in rule: ") + pe.what(), rule_at);
        }
      } else {
        via = symbol();
      }
      Formula f = formula_text();
      std::vector<std::string> dis = discharge_list();
      std::vector<Argument> kids;
      skip();
      while (pos < src.size() && src[pos] == '(') {
        kids.push_back(node());
        skip();
      }
      expect(')');
      if (rule) {
        Argument a = Argument::atomic(*rule, std::move(dis), std::move(kids));
        if (!(a.conclusion() == f))
          throw ParseError("atomic node conclusion does not match the rule's conclusion", pos);
        return a;
      }
      return Argument::atomic_by_label(std::move(via), std::move(f), std::move(dis),
                                       std::move(kids));
    }
    Formula f = formula_text();
    std::vector<std::string> dis = discharge_list();
    std::vector<Argument> kids;
    skip();
    while (pos < src.size() && src[pos] == '(') {
      kids.push_back(node());
      skip();
    }
    expect(')');
    return Argument::infer(it->second, std::move(f), std::move(dis), std::move(kids));
  }

  Argument parse() {
    Argument a = node();
    skip();
    if (pos != src.size()) throw ParseError("unexpected trailing input", pos);
    return a;
  }
};

void print_rec(const Argument& a, int indent, std::string& out) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out += pad;
  out += '(';
  out += kind_word(a.kind());
  if (a.kind() == Argument::NodeKind::Assume) {
    out += ' ';
    out += a.label();
    out += ' ';
    out += print_formula(a.conclusion());
    out += ')';
    return;
  }
  if (a.kind() == Argument::NodeKind::AtomicApp) {
    out += ' ';
    if (a.rule()) {
      out += '"';
      out += print_rule(*a.rule());
      out += '"';
    } else {
      out += a.label();
    }
  }
  out += ' ';
  out += print_formula(a.conclusion());
  if (!a.discharge().empty()) {
    out += " [";
    for (std::size_t i = 0; i < a.discharge().size(); ++i) {
      if (i) out += ' ';
      out += a.discharge()[i];
    }
    out += ']';
  }
  for (const Argument& c : a.children()) {
    out += '\n';
    print_rec(c, indent + 1, out);
  }
  out += ')';
}

} // namespace

Argument parse_argument(std::string_view text) {
  ArgParser p{text, 0};
  return p.parse();
}

std::string print_argument(const Argument& a) {
  std::string out;
  print_rec(a, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness
// ---------------------------------------------------------------------------

namespace {

struct Binding {
  std::string label;
  std::optional<Formula> formula; // assumption binder
  std::optional<Rule> rule;       // assumed-rule binder
};

using Scope = std::vector<Binding>;

const Binding* find_binding(const Scope& sc, const std::string& label) {
  for (const Binding& b : sc)
    if (b.label == label) return &b;
  return nullptr;
}

std::string path_str(const std::vector<int>& path) {
  std::string s = "/";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '/';
    s += std::to_string(path[i]);
  }
  return s;
}

Formula head_formula(const Atom& a) {
  return a.is_falsum() ? Formula::mk_bot() : Formula::mk_atom(a);
}

// Flattened discharge slots of a rule application: one per rule discharged
// by a compound premise, grouped by premise in canonical order.
struct DischargeSlot {
  std::size_t premise_index;
  Rule discharged;
};

std::vector<DischargeSlot> discharge_slots(const Rule& r) {
  std::vector<DischargeSlot> out;
  const auto& ps = r.premises();
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (const Rule& d : ps[i].premises()) out.push_back({i, d});
  return out;
}

struct WfChecker {
  std::vector<Violation> out;

  void violation(const std::vector<int>& path, std::string reason) {
    out.push_back({path_str(path), std::move(reason)});
  }

  void check_shadow(const Scope& sc, const std::vector<std::string>& labels,
                    const std::vector<int>& path) {
    for (const std::string& l : labels) {
      if (find_binding(sc, l))
        violation(path, "label '" + l + "' shadows an enclosing binder");
      if (std::count(labels.begin(), labels.end(), l) > 1)
        violation(path, "label '" + l + "' repeated in one discharge list");
    }
  }

  void walk(const Argument& a, const Scope& sc, std::vector<int>& path) {
    using K = Argument::NodeKind;
    const Formula& c = a.conclusion();
    const auto& kids = a.children();
    auto arity = [&](std::size_t n) {
      if (kids.size() != n) {
        violation(path, std::string(kind_word(a.kind())) + " expects " + std::to_string(n) +
                            " premise(s), has " + std::to_string(kids.size()));
        return false;
      }
      return true;
    };
    auto walk_child = [&](std::size_t i, const Scope& child_scope) {
      path.push_back(static_cast<int>(i));
      walk(kids[i], child_scope, path);
      path.pop_back();
    };

    switch (a.kind()) {
      case K::Assume: {
        if (const Binding* b = find_binding(sc, a.label())) {
          if (!b->formula)
            violation(path, "label '" + a.label() + "' names an assumed rule, not a formula");
          else if (!(*b->formula == c))
            violation(path, "assumption '" + a.label() + "' has formula " + print_formula(c) +
                                " but the binder discharges " + print_formula(*b->formula));
        }
        return;
      }
      case K::AndI: {
        if (!arity(2)) break;
        if (c.kind() != Formula::Kind::And || !(c.left() == kids[0].conclusion()) ||
            !(c.right() == kids[1].conclusion()))
          violation(path, "andI conclusion must be the conjunction of its premises");
        break;
      }
      case K::AndE1:
      case K::AndE2: {
        if (!arity(1)) break;
        const Formula& m = kids[0].conclusion();
        if (m.kind() != Formula::Kind::And)
          violation(path, "major premise of andE must be a conjunction");
        else if (a.kind() == K::AndE1 ? !(m.left() == c) : !(m.right() == c))
          violation(path, "andE conclusion must be the matching conjunct");
        break;
      }
      case K::OrI1:
      case K::OrI2: {
        if (!arity(1)) break;
        if (c.kind() != Formula::Kind::Or)
          violation(path, "orI conclusion must be a disjunction");
        else if (a.kind() == K::OrI1 ? !(c.left() == kids[0].conclusion())
                                     : !(c.right() == kids[0].conclusion()))
          violation(path, "orI premise must be the matching disjunct");
        break;
      }
      case K::OrE: {
        if (!arity(3)) break;
        const Formula& m = kids[0].conclusion();
        if (m.kind() != Formula::Kind::Or) {
          violation(path, "major premise of orE must be a disjunction");
          break;
        }
        if (!(kids[1].conclusion() == c) || !(kids[2].conclusion() == c))
          violation(path, "orE branches must conclude the conclusion");
        if (a.discharge().size() != 2) {
          violation(path, "orE needs exactly two discharge labels");
          break;
        }
        check_shadow(sc, a.discharge(), path);
        walk_child(0, sc);
        Scope s1 = sc;
        s1.push_back({a.discharge()[0], m.left(), std::nullopt});
        walk_child(1, s1);
        Scope s2 = sc;
        s2.push_back({a.discharge()[1], m.right(), std::nullopt});
        walk_child(2, s2);
        return;
      }
      case K::ImpI: {
        if (!arity(1)) break;
        if (c.kind() != Formula::Kind::Imp) {
          violation(path, "impI conclusion must be an implication");
          break;
        }
        if (!(kids[0].conclusion() == c.right()))
          violation(path, "impI premise must conclude the consequent");
        if (a.discharge().size() > 1) {
          violation(path, "impI takes at most one discharge label");
          break;
        }
        check_shadow(sc, a.discharge(), path);
        Scope s = sc;
        if (!a.discharge().empty())
          s.push_back({a.discharge()[0], c.left(), std::nullopt});
        walk_child(0, s);
        return;
      }
      case K::ImpE: {
        if (!arity(2)) break;
        const Formula& m = kids[0].conclusion();
        if (m.kind() != Formula::Kind::Imp)
          violation(path, "major premise of impE must be an implication");
        else if (!(m.right() == c) || !(m.left() == kids[1].conclusion()))
          violation(path, "impE premises must match A -> B and A");
        break;
      }
      case K::BotE: {
        if (!arity(1)) break;
        if (kids[0].conclusion().kind() != Formula::Kind::Bot)
          violation(path, "botE premise must conclude bot");
        if (c.kind() != Formula::Kind::Atom)
          violation(path, "botE concludes an atomic formula");
        break;
      }
      case K::Step: {
        if (!a.discharge().empty())
          violation(path, "step nodes cannot discharge assumptions");
        break;
      }
      case K::AtomicApp: {
        std::optional<Rule> rule = a.rule();
        if (!rule) {
          const Binding* b = find_binding(sc, a.label());
          if (!b) {
            violation(path, "atomic step cites unbound rule label '" + a.label() + "'");
            break;
          }
          if (!b->rule) {
            violation(path, "label '" + a.label() + "' names a formula, not a rule");
            break;
          }
          rule = b->rule;
        }
        if (!(head_formula(rule->conclusion()) == c))
          violation(path, "atomic step conclusion must be the rule's conclusion");
        const auto& ps = rule->premises();
        if (kids.size() != ps.size()) {
          violation(path, "atomic step needs " + std::to_string(ps.size()) +
                              " premise derivation(s), has " + std::to_string(kids.size()));
          break;
        }
        std::vector<DischargeSlot> slots = discharge_slots(*rule);
        if (!a.discharge().empty() && a.discharge().size() != slots.size()) {
          violation(path, "atomic step discharges " + std::to_string(slots.size()) +
                              " rule(s); got " + std::to_string(a.discharge().size()) +
                              " label(s)");
          break;
        }
        check_shadow(sc, a.discharge(), path);
        for (std::size_t i = 0; i < kids.size(); ++i) {
          if (!(kids[i].conclusion() == head_formula(ps[i].conclusion())))
            violation(path, "premise derivation " + std::to_string(i) +
                                " must conclude " + ps[i].conclusion().name());
          Scope s = sc;
          if (!a.discharge().empty()) {
            for (std::size_t j = 0; j < slots.size(); ++j) {
              if (slots[j].premise_index != i) continue;
              const Rule& d = slots[j].discharged;
              if (d.is_axiom())
                s.push_back({a.discharge()[j], head_formula(d.conclusion()), std::nullopt});
              else
                s.push_back({a.discharge()[j], std::nullopt, d});
            }
          }
          walk_child(i, s);
        }
        return;
      }
    }
    // default child walk (no new bindings)
    for (std::size_t i = 0; i < kids.size(); ++i) walk_child(i, sc);
  }
};

} // namespace

std::vector<Violation> check_wellformed(const Argument& a) {
  WfChecker w;
  std::vector<int> path;
  w.walk(a, {}, path);
  return w.out;
}

std::vector<Formula> open_assumptions(const Argument& a) {
  std::vector<Formula> out;
  std::function<void(const Argument&, std::vector<std::string>)> walk =
      [&](const Argument& n, std::vector<std::string> bound) {
        if (n.kind() == Argument::NodeKind::Assume) {
          if (std::find(bound.begin(), bound.end(), n.label()) == bound.end()) {
            if (std::find(out.begin(), out.end(), n.conclusion()) == out.end())
              out.push_back(n.conclusion());
          }
          return;
        }
        std::vector<std::string> b2 = bound;
        for (const std::string& l : n.discharge()) b2.push_back(l);
        for (const Argument& c : n.children()) walk(c, b2);
      };
  walk(a, {});
  return out;
}

IllFormedArgument::IllFormedArgument(std::vector<Violation> vs)
    : std::runtime_error("IllFormed: " +
                         (vs.empty() ? std::string("unknown")
                                     : vs[0].path + " " + vs[0].reason) +
                         (vs.size() > 1 ? " (+" + std::to_string(vs.size() - 1) + " more)" : "")),
      violations(std::move(vs)) {}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

namespace {

std::optional<char> detour_at(const Argument& a) {
  using K = Argument::NodeKind;
  if (a.children().empty()) return std::nullopt;
  K mk = a.children()[0].kind();
  switch (a.kind()) {
    case K::ImpE: return mk == K::ImpI ? std::optional<char>('>') : std::nullopt;
    case K::AndE1:
    case K::AndE2: return mk == K::AndI ? std::optional<char>('&') : std::nullopt;
    case K::OrE: return mk == K::OrI1 || mk == K::OrI2 ? std::optional<char>('|') : std::nullopt;
    default: return std::nullopt;
  }
}

void find_rec(const Argument& a, std::vector<int>& path, std::vector<ReductionStep>& out) {
  if (auto c = detour_at(a)) out.push_back({path, *c});
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    path.push_back(static_cast<int>(i));
    find_rec(a.children()[i], path, out);
    path.pop_back();
  }
}

void collect_labels(const Argument& a, std::set<std::string>& out) {
  if (!a.label().empty()) out.insert(a.label());
  for (const std::string& l : a.discharge()) out.insert(l);
  for (const Argument& c : a.children()) collect_labels(c, out);
}

void free_labels(const Argument& a, std::vector<std::string> bound, std::set<std::string>& out) {
  if (a.kind() == Argument::NodeKind::Assume ||
      (a.kind() == Argument::NodeKind::AtomicApp && !a.rule())) {
    if (!a.label().empty() &&
        std::find(bound.begin(), bound.end(), a.label()) == bound.end())
      out.insert(a.label());
  }
  for (const std::string& l : a.discharge()) bound.push_back(l);
  for (const Argument& c : a.children()) free_labels(c, bound, out);
}

Argument rebuild(const Argument& a, std::vector<std::string> discharge,
                 std::vector<Argument> children) {
  using K = Argument::NodeKind;
  if (a.kind() == K::Assume) return a;
  if (a.kind() == K::AtomicApp) {
    if (a.rule()) return Argument::atomic(*a.rule(), std::move(discharge), std::move(children));
    return Argument::atomic_by_label(a.label(), a.conclusion(), std::move(discharge),
                                     std::move(children));
  }
  return Argument::infer(a.kind(), a.conclusion(), std::move(discharge), std::move(children));
}

// Renames one binder label and its bound occurrences within a subtree.
// Safe because well-formed trees have no shadowing.
Argument rename_label(const Argument& a, const std::string& from, const std::string& to) {
  using K = Argument::NodeKind;
  if (a.kind() == K::Assume)
    return a.label() == from ? Argument::assume(to, a.conclusion()) : a;
  std::vector<Argument> kids;
  kids.reserve(a.children().size());
  for (const Argument& c : a.children()) kids.push_back(rename_label(c, from, to));
  std::vector<std::string> dis = a.discharge();
  for (std::string& l : dis)
    if (l == from) l = to;
  if (a.kind() == K::AtomicApp && !a.rule() && a.label() == from)
    return Argument::atomic_by_label(to, a.conclusion(), std::move(dis), std::move(kids));
  return rebuild(a, std::move(dis), std::move(kids));
}

struct Substituter {
  std::string label;
  Argument repl;
  std::set<std::string> repl_free;
  std::set<std::string> used;
  int fresh_counter = 0;

  std::string fresh(const std::string& base) {
    std::string cand;
    do {
      cand = base + "_" + std::to_string(++fresh_counter);
    } while (used.count(cand));
    used.insert(cand);
    return cand;
  }

  Argument go(const Argument& a) {
    using K = Argument::NodeKind;
    if (a.kind() == K::Assume) return a.label() == label ? repl : a;
    // If this node re-binds the substituted label the leaves below are not
    // ours (cannot happen in well-formed trees; kept as a guard).
    for (const std::string& l : a.discharge())
      if (l == label) return a;
    // Avoid capturing the replacement's open labels.
    Argument cur = a;
    for (std::size_t di = 0; di < cur.discharge().size(); ++di) {
      std::string l = cur.discharge()[di];
      if (repl_free.count(l)) {
        std::string nl = fresh(l);
        std::vector<Argument> kids;
        kids.reserve(cur.children().size());
        for (const Argument& c : cur.children()) kids.push_back(rename_label(c, l, nl));
        std::vector<std::string> d2 = cur.discharge();
        for (std::string& x : d2)
          if (x == l) x = nl;
        cur = rebuild(cur, std::move(d2), std::move(kids));
      }
    }
    std::vector<Argument> kids;
    kids.reserve(cur.children().size());
    for (const Argument& c : cur.children()) kids.push_back(go(c));
    return rebuild(cur, cur.discharge(), std::move(kids));
  }
};

Argument substitute(const Argument& host, const std::string& label, const Argument& repl) {
  Substituter s{label, repl, {}, {}, 0};
  free_labels(repl, {}, s.repl_free);
  collect_labels(host, s.used);
  collect_labels(repl, s.used);
  return s.go(host);
}

Argument reduce_node(const Argument& a) {
  using K = Argument::NodeKind;
  auto con = detour_at(a);
  if (!con) throw NotADetour();
  const Argument& major = a.children()[0];
  switch (*con) {
    case '&':
      if (major.children().size() != 2) throw NotADetour();
      return a.kind() == K::AndE1 ? major.children()[0] : major.children()[1];
    case '>': {
      if (major.children().size() != 1 || a.children().size() != 2) throw NotADetour();
      const Argument& body = major.children()[0];
      if (major.discharge().empty()) return body; // vacuous discharge
      return substitute(body, major.discharge()[0], a.children()[1]);
    }
    case '|': {
      if (major.children().size() != 1 || a.children().size() != 3 ||
          a.discharge().size() != 2)
        throw NotADetour();
      bool left = major.kind() == K::OrI1;
      const Argument& branch = a.children()[left ? 1 : 2];
      const std::string& lab = a.discharge()[left ? 0 : 1];
      return substitute(branch, lab, major.children()[0]);
    }
  }
  throw NotADetour();
}

Argument replace_at(const Argument& a, const std::vector<int>& path, std::size_t i,
                    const std::function<Argument(const Argument&)>& f) {
  if (i == path.size()) return f(a);
  std::size_t k = static_cast<std::size_t>(path[i]);
  if (k >= a.children().size()) throw NotADetour();
  std::vector<Argument> kids = a.children();
  kids[k] = replace_at(kids[k], path, i + 1, f);
  return rebuild(a, a.discharge(), std::move(kids));
}

} // namespace

std::vector<ReductionStep> find_detours(const Argument& a) {
  std::vector<ReductionStep> out;
  std::vector<int> path;
  find_rec(a, path, out);
  return out;
}

Argument reduce_once(const Argument& a, const ReductionStep& at) {
  return replace_at(a, at.path, 0, [&](const Argument& n) {
    auto c = detour_at(n);
    if (!c || *c != at.connective) throw NotADetour();
    return reduce_node(n);
  });
}

NormalizeResult normalize(const Argument& a, int fuel, ReductionStrategy strategy) {
  NormalizeResult res{a, 0, true};
  while (res.steps < fuel) {
    std::vector<ReductionStep> ds = find_detours(res.argument);
    if (ds.empty()) return res;
    const ReductionStep* pick = &ds.front(); // preorder = leftmost-outermost
    if (strategy == ReductionStrategy::rightmost_innermost) {
      pick = &*std::max_element(ds.begin(), ds.end(),
                                [](const ReductionStep& x, const ReductionStep& y) {
                                  return std::lexicographical_compare(
                                      x.path.begin(), x.path.end(), y.path.begin(), y.path.end());
                                });
    }
    res.argument = reduce_once(res.argument, *pick);
    ++res.steps;
  }
  res.complete = find_detours(res.argument).empty();
  return res;
}

// ---------------------------------------------------------------------------
// Argument validity
// ---------------------------------------------------------------------------

namespace {

Verdict s_valid_rec(const System& sys, const Base& base, const Argument& a, BotPolicy policy) {
  using K = Argument::NodeKind;
  std::vector<Formula> opens = open_assumptions(a);
  const Formula& concl = a.conclusion();

  if (!opens.empty()) {
    Verdict v = consequence(sys, base, opens, concl, policy);
    v.certificate.notes.insert(v.certificate.notes.begin(),
                               "open case: argument read as consequence of its assumptions");
    return v;
  }
  if (concl.kind() == Formula::Kind::Atom || concl.kind() == Formula::Kind::Bot) {
    Verdict v = valid(sys, base, concl, policy);
    v.certificate.notes.insert(v.certificate.notes.begin(),
                               concl.kind() == Formula::Kind::Atom
                                   ? "atomic case: conclusion must be derivable in the base"
                                   : "closed case with falsum conclusion");
    return v;
  }
  bool intro = a.kind() == K::AndI || a.kind() == K::OrI1 || a.kind() == K::OrI2 ||
               a.kind() == K::ImpI;
  if (intro) {
    Certificate c;
    c.kind = Certificate::Kind::Argument;
    c.base = base;
    c.formula = concl;
    c.subject = "argument concluding " + print_formula(concl);
    c.notes.push_back("closed introduction case: premise subarguments must be valid");
    c.verdict = true;
    for (const Argument& child : a.children()) {
      Verdict v = s_valid_rec(sys, base, child, policy);
      c.verdict = c.verdict && v.valid;
      c.children.push_back(std::move(v.certificate));
      if (!c.verdict) break;
    }
    return Verdict{c.verdict, std::move(c)};
  }
  Verdict v = valid(sys, base, concl, policy);
  v.certificate.notes.insert(
      v.certificate.notes.begin(),
      "closed non-introductory case: some valid argument with this conclusion must end in an "
      "introduction; realized by the formula clauses");
  return v;
}

} // namespace

Verdict s_valid_argument(const System& sys, const Base& base, const Argument& a,
                         BotPolicy policy) {
  std::vector<Violation> vs = check_wellformed(a);
  if (!vs.empty()) throw IllFormedArgument(std::move(vs));
  if (!sys.member(base)) throw BaseNotInSystem(base);
  return s_valid_rec(sys, base, a, policy);
}

} // namespace ptv
