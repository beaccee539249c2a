#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ptv/arguments.hpp"
#include "ptv/bridge.hpp"
#include "ptv/explorer.hpp"
#include "ptv/ipc.hpp"
#include "ptv/semantics.hpp"
#include "ptv/systems.hpp"

using namespace ptv;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BotPolicy parse_policy(const std::string& s) {
  if (s == "explosion") return BotPolicy::explosion;
  if (s == "atom") return BotPolicy::atom;
  throw std::runtime_error("unknown policy '" + s + "' (expected explosion|atom)");
}

std::string system_summary(const System& sys) {
  std::ostringstream out;
  if (sys.kind() == System::Kind::Explicit)
    out << "explicit, " << sys.base_count() << " bases";
  else
    out << "generated, " << sys.universe().size() << " rules, " << sys.base_count() << " bases";
  return out.str();
}

Base base_at_index(const System& sys, long index) {
  long i = 0;
  std::optional<Base> found;
  sys.for_each_base([&](const Base& b) {
    if (i++ == index) {
      found = b;
      return false;
    }
    return true;
  });
  if (!found) throw std::runtime_error("base index " + std::to_string(index) + " out of range");
  return *found;
}

void emit(const std::string& line) { std::cout << line << '\n'; }

struct CommonOpts {
  std::string policy = "explosion";
  bool certificate = false;
  std::size_t cap = 20;
};

int run(int argc, char** argv) {
  CLI::App app{"proof-theoretic validity toolkit"};
  app.require_subcommand(1);

  CommonOpts common;

  // derive
  auto* cmd_derive = app.add_subcommand("derive", "atomic derivability in a base");
  std::string d_base_file, d_goal;
  cmd_derive->add_option("--base", d_base_file, "base file")->required();
  cmd_derive->add_option("--goal", d_goal, "goal atom (or 'bot')")->required();
  cmd_derive->add_option("--policy", common.policy, "bot policy (explosion|atom)");
  cmd_derive->add_flag("--certificate", common.certificate, "print a derivation witness");

  // translate
  auto* cmd_translate = app.add_subcommand("translate", "rule <-> formula translation");
  std::string t_rule, t_formula;
  cmd_translate->add_option("--rule", t_rule, "rule to turn into a formula");
  cmd_translate->add_option("--formula", t_formula, "disjunction-free formula to turn into rules");

  // check
  auto* cmd_check = app.add_subcommand("check", "formula validity at a base of a system");
  std::string c_system, c_formula;
  long c_base = 0;
  bool c_optimized = false;
  cmd_check->add_option("--system", c_system, "system file")->required();
  cmd_check->add_option("--base", c_base, "base index (enumeration order, default 0)");
  cmd_check->add_option("--formula", c_formula, "formula")->required();
  cmd_check->add_option("--policy", common.policy, "bot policy (explosion|atom)");
  cmd_check->add_flag("--certificate", common.certificate, "print the evaluation certificate");
  cmd_check->add_flag("--optimized", c_optimized, "minimal-witness evaluator (generated systems)");
  cmd_check->add_option("--universe-cap", common.cap, "generated-universe size cap");
  bool c_ptv = false;
  cmd_check->add_flag("--ptv", c_ptv, "quantify over all bases of the system");

  // entails
  auto* cmd_entails = app.add_subcommand("entails", "consequence at a base of a system");
  std::string e_system, e_formula;
  std::vector<std::string> e_assume;
  long e_base = 0;
  cmd_entails->add_option("--system", e_system, "system file")->required();
  cmd_entails->add_option("--base", e_base, "base index (default 0)");
  cmd_entails->add_option("--assume", e_assume, "assumption (repeatable)");
  cmd_entails->add_option("--formula", e_formula, "conclusion")->required();
  cmd_entails->add_option("--policy", common.policy, "bot policy (explosion|atom)");
  cmd_entails->add_flag("--certificate", common.certificate, "print the evaluation certificate");
  cmd_entails->add_option("--universe-cap", common.cap, "generated-universe size cap");

  // argcheck
  auto* cmd_argcheck = app.add_subcommand("argcheck", "argument well-formedness and validity");
  std::string a_system, a_file;
  long a_base = 0;
  cmd_argcheck->add_option("--system", a_system, "system file")->required();
  cmd_argcheck->add_option("--base", a_base, "base index (default 0)");
  cmd_argcheck->add_option("--arg", a_file, "argument file")->required();
  cmd_argcheck->add_option("--policy", common.policy, "bot policy (explosion|atom)");
  cmd_argcheck->add_flag("--certificate", common.certificate, "print the evaluation certificate");

  // normalize
  auto* cmd_normalize = app.add_subcommand("normalize", "reduce detours to normal form");
  std::string n_file, n_strategy = "leftmost-outermost";
  int n_fuel = 10000;
  cmd_normalize->add_option("--arg", n_file, "argument file")->required();
  cmd_normalize->add_option("--fuel", n_fuel, "maximum reduction steps");
  cmd_normalize->add_option("--strategy", n_strategy,
                            "leftmost-outermost|rightmost-innermost");

  // ipc
  auto* cmd_ipc = app.add_subcommand("ipc", "intuitionistic provability oracle");
  std::string i_formula;
  bool i_counter = false;
  int i_worlds = 4;
  cmd_ipc->add_option("--formula", i_formula, "formula")->required();
  cmd_ipc->add_flag("--countermodel", i_counter, "search for a Kripke countermodel");
  cmd_ipc->add_option("--max-worlds", i_worlds, "countermodel world bound");

  // search
  auto* cmd_search = app.add_subcommand("search", "superintuitionistic validity search");
  std::string s_system, s_format = "text", s_out;
  SearchCaps caps;
  bool s_serial = false, s_no_bot = false;
  cmd_search->add_option("--system", s_system, "system file")->required();
  cmd_search->add_option("--max-depth", caps.max_depth, "formula depth cap (leaf = 1)");
  cmd_search->add_option("--max-atoms", caps.max_atoms, "distinct atom cap");
  cmd_search->add_option("--max-formulas", caps.max_formulas, "enumeration cap");
  cmd_search->add_option("--findings-cap", caps.findings_cap, "findings cap");
  cmd_search->add_flag("--no-bot", s_no_bot, "exclude bot from enumeration");
  cmd_search->add_option("--policy", common.policy, "bot policy (explosion|atom)");
  cmd_search->add_option("--format", s_format, "text|csv");
  cmd_search->add_option("--out", s_out, "write the report to a file");
  cmd_search->add_flag("--serial", s_serial, "disable the parallel sweep");
  cmd_search->add_option("--universe-cap", common.cap, "generated-universe size cap");

  // harrop
  auto* cmd_harrop = app.add_subcommand("harrop", "generalised Harrop instances");
  std::string h_system, h_format = "text";
  std::vector<std::string> h_antecedents;
  cmd_harrop->add_option("--system", h_system, "system file")->required();
  cmd_harrop->add_option("--antecedent", h_antecedents, "disjunction-free antecedent (repeatable)")
      ->required();
  cmd_harrop->add_option("--policy", common.policy, "bot policy (explosion|atom)");
  cmd_harrop->add_option("--format", h_format, "text|csv");
  cmd_harrop->add_option("--universe-cap", common.cap, "generated-universe size cap");

  // report
  auto* cmd_report = app.add_subcommand("report", "re-render a findings CSV");
  std::string r_in, r_format = "text";
  cmd_report->add_option("--in", r_in, "findings CSV file")->required();
  cmd_report->add_option("--format", r_format, "text|csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }
  BotPolicy policy = parse_policy(common.policy);

  if (cmd_derive->parsed()) {
    Base base = parse_base_file(read_file(d_base_file));
    Atom goal = d_goal == "bot" || d_goal == "_|_" ? Atom::falsum() : Atom(d_goal);
    emit("config: cmd=derive base-file=" + d_base_file + " base=" + print_base(base) +
         " goal=" + goal.name() + " policy=" + std::string(to_string(policy)));
    DerivEngine engine(policy);
    bool ok = engine.derives(base, goal);
    emit(std::string("result: ") + (ok ? "derivable" : "not-derivable"));
    if (common.certificate && ok)
      for (const std::string& line : engine.trace(base, goal)) emit("  " + line);
    return ok ? kExitValid : kExitInvalid;
  }

  if (cmd_translate->parsed()) {
    if (t_rule.empty() == t_formula.empty())
      throw std::runtime_error("translate needs exactly one of --rule / --formula");
    if (!t_rule.empty()) {
      Rule r = parse_rule(t_rule);
      emit("config: cmd=translate direction=rule-to-formula rule=" + print_rule(r));
      emit("formula: " + print_formula(rule_to_formula(r)));
    } else {
      Formula f = parse_formula(t_formula);
      emit("config: cmd=translate direction=formula-to-rules formula=" + print_formula(f));
      for (const Rule& r : formula_to_rules(f)) emit("rule: " + print_rule(r));
    }
    return kExitValid;
  }

  if (cmd_check->parsed()) {
    System sys = build_system_from_file(c_system, common.cap);
    Formula f = parse_formula(c_formula);
    if (c_ptv) {
      emit("config: cmd=check mode=ptv system=" + c_system + " (" + system_summary(sys) +
           ") policy=" + std::string(to_string(policy)) + " formula=" + print_formula(f));
      Verdict v = ptv_valid(sys, f, policy);
      emit(std::string("result: ") + (v.valid ? "valid" : "invalid"));
      if (common.certificate) std::cout << v.certificate.to_text();
      return v.valid ? kExitValid : kExitInvalid;
    }
    Base base = base_at_index(sys, c_base);
    emit("config: cmd=check system=" + c_system + " (" + system_summary(sys) + ") base=" +
         std::to_string(c_base) + " " + print_base(base) + " policy=" +
         std::string(to_string(policy)) + " evaluator=" +
         (c_optimized ? "minimal-witness" : "brute-force") + " formula=" + print_formula(f));
    Verdict v = c_optimized ? valid_optimized(sys, base, f, policy) : valid(sys, base, f, policy);
    emit(std::string("result: ") + (v.valid ? "valid" : "invalid"));
    if (common.certificate) std::cout << v.certificate.to_text();
    return v.valid ? kExitValid : kExitInvalid;
  }

  if (cmd_entails->parsed()) {
    System sys = build_system_from_file(e_system, common.cap);
    Base base = base_at_index(sys, e_base);
    std::vector<Formula> assumptions;
    std::string assume_text;
    for (const std::string& s : e_assume) {
      assumptions.push_back(parse_formula(s));
      if (!assume_text.empty()) assume_text += ", ";
      assume_text += print_formula(assumptions.back());
    }
    Formula f = parse_formula(e_formula);
    emit("config: cmd=entails system=" + e_system + " (" + system_summary(sys) + ") base=" +
         std::to_string(e_base) + " " + print_base(base) + " policy=" +
         std::string(to_string(policy)) + " assume=[" + assume_text + "] formula=" +
         print_formula(f));
    Verdict v = consequence(sys, base, assumptions, f, policy);
    emit(std::string("result: ") + (v.valid ? "valid" : "invalid"));
    if (common.certificate) std::cout << v.certificate.to_text();
    return v.valid ? kExitValid : kExitInvalid;
  }

  if (cmd_argcheck->parsed()) {
    System sys = build_system_from_file(a_system, common.cap);
    Base base = base_at_index(sys, a_base);
    Argument arg = parse_argument(read_file(a_file));
    emit("config: cmd=argcheck system=" + a_system + " (" + system_summary(sys) + ") base=" +
         std::to_string(a_base) + " " + print_base(base) + " policy=" +
         std::string(to_string(policy)) + " arg=" + a_file);
    std::vector<Violation> vs = check_wellformed(arg);
    if (!vs.empty()) {
      for (const Violation& v : vs)
        std::cerr << "ill-formed at " << v.path << ": " << v.reason << '\n';
      return kExitError;
    }
    emit("well-formed: yes");
    Verdict v = s_valid_argument(sys, base, arg, policy);
    emit(std::string("result: ") + (v.valid ? "valid" : "invalid"));
    if (common.certificate) std::cout << v.certificate.to_text();
    return v.valid ? kExitValid : kExitInvalid;
  }

  if (cmd_normalize->parsed()) {
    Argument arg = parse_argument(read_file(n_file));
    ReductionStrategy st;
    if (n_strategy == "leftmost-outermost") st = ReductionStrategy::leftmost_outermost;
    else if (n_strategy == "rightmost-innermost") st = ReductionStrategy::rightmost_innermost;
    else throw std::runtime_error("unknown strategy '" + n_strategy + "'");
    emit("config: cmd=normalize arg=" + n_file + " fuel=" + std::to_string(n_fuel) +
         " strategy=" + n_strategy);
    NormalizeResult res = normalize(arg, n_fuel, st);
    emit("steps: " + std::to_string(res.steps));
    emit(res.complete ? "normal-form: reached" : "normal-form: fuel-exhausted");
    std::cout << print_argument(res.argument) << '\n';
    return res.complete ? kExitValid : kExitInvalid;
  }

  if (cmd_ipc->parsed()) {
    Formula f = parse_formula(i_formula);
    emit("config: cmd=ipc formula=" + print_formula(f) +
         (i_counter ? " countermodel=yes max-worlds=" + std::to_string(i_worlds) : ""));
    bool prov = ipc_provable(f);
    emit(std::string("result: ") + (prov ? "provable" : "unprovable"));
    if (i_counter && !prov) {
      auto m = kripke_counterexample(f, i_worlds);
      if (m)
        std::cout << m->to_text();
      else
        emit("no countermodel within " + std::to_string(i_worlds) + " worlds");
    }
    return prov ? kExitValid : kExitInvalid;
  }

  if (cmd_search->parsed()) {
    System sys = build_system_from_file(s_system, common.cap);
    caps.include_bot = !s_no_bot;
    emit("config: cmd=search system=" + s_system + " (" + system_summary(sys) + ") policy=" +
         std::string(to_string(policy)) + " max-atoms=" + std::to_string(caps.max_atoms) +
         " max-depth=" + std::to_string(caps.max_depth) + " max-formulas=" +
         std::to_string(caps.max_formulas) + " include-bot=" +
         (caps.include_bot ? "yes" : "no") + " findings-cap=" +
         std::to_string(caps.findings_cap) + " exec=" + (s_serial ? "serial" : "parallel"));
    SearchResult res =
        find_superintuitionistic(sys, caps, policy, s_serial ? Exec::serial : Exec::parallel);
    std::string doc = report(res, s_format == "csv" ? ReportFormat::csv : ReportFormat::text);
    if (s_out.empty()) {
      std::cout << doc;
    } else {
      std::ofstream out(s_out);
      out << doc;
      emit("written: " + s_out);
    }
    return kExitValid;
  }

  if (cmd_harrop->parsed()) {
    System sys = build_system_from_file(h_system, common.cap);
    std::vector<Formula> ants;
    for (const std::string& s : h_antecedents) ants.push_back(parse_formula(s));
    emit("config: cmd=harrop system=" + h_system + " (" + system_summary(sys) + ") policy=" +
         std::string(to_string(policy)) + " antecedents=" + std::to_string(ants.size()));
    std::vector<HarropRow> rows = check_harrop_family(sys, ants, policy);
    std::cout << report_harrop(rows, sys, policy,
                               h_format == "csv" ? ReportFormat::csv : ReportFormat::text);
    return kExitValid;
  }

  if (cmd_report->parsed()) {
    std::string text = read_file(r_in);
    emit("config: cmd=report in=" + r_in + " format=" + r_format);
    SearchResult res;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (first) { first = false; continue; } // header
      std::vector<std::string> cols;
      std::size_t start = 0;
      while (true) {
        std::size_t c = line.find(',', start);
        cols.push_back(line.substr(start, c == std::string::npos ? std::string::npos
                                                                 : c - start));
        if (c == std::string::npos) break;
        start = c + 1;
      }
      if (cols.size() != 6) throw std::runtime_error("malformed findings CSV row: " + line);
      Finding f;
      f.formula = parse_formula(cols[0]);
      f.system_name = cols[1];
      f.ptv = cols[2] == "true";
      f.ipc = cols[3] == "true";
      f.policy = parse_policy(cols[4]);
      f.universe_size = static_cast<std::size_t>(std::stoul(cols[5]));
      res.findings.push_back(std::move(f));
    }
    res.enumerated = static_cast<long>(res.findings.size());
    std::cout << report(res, r_format == "csv" ? ReportFormat::csv : ReportFormat::text);
    return kExitValid;
  }

  return kExitError;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
