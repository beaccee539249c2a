#include "doctest.h"

#include "ptv/arguments.hpp"

#include <fstream>
#include <random>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace ptv;

namespace {

Formula F(const char* s) { return parse_formula(s); }
std::string data(const char* name) { return std::string(PTV_TEST_DATA_DIR) + "/" + name; }

std::string corpus_file(int i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "c%02d.sx", i);
  return std::string(PTV_TEST_CORPUS_DIR) + "/" + buf;
}

Argument load(int i) {
  std::ifstream in(corpus_file(i));
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_argument(ss.str());
}

bool is_pure_ipc(const Argument& a) {
  if (a.kind() == Argument::NodeKind::AtomicApp || a.kind() == Argument::NodeKind::Step)
    return false;
  for (const Argument& c : a.children())
    if (!is_pure_ipc(c)) return false;
  return true;
}

bool subset(const std::vector<Formula>& small, const std::vector<Formula>& big) {
  for (const Formula& f : small)
    if (std::find(big.begin(), big.end(), f) == big.end()) return false;
  return true;
}

} // namespace

TEST_CASE("arguments: parsing pinned forms") {
  Argument ex1 = parse_argument("(impE q (assume h1 p -> q) (assume h2 p))");
  CHECK(ex1.kind() == Argument::NodeKind::ImpE);
  CHECK(ex1.conclusion() == F("q"));
  CHECK(ex1.children().size() == 2);
  CHECK(ex1.children()[0].conclusion() == F("p -> q"));

  Argument id = parse_argument("(impI p -> p [h] (assume h p))");
  CHECK(id.kind() == Argument::NodeKind::ImpI);
  CHECK(id.discharge() == std::vector<std::string>{"h"});

  Argument at = parse_argument("(atomic \"(p, q => r)\" r (assume a p) (assume b q))");
  CHECK(at.kind() == Argument::NodeKind::AtomicApp);
  REQUIRE(at.rule().has_value());
  CHECK(print_rule(*at.rule()) == "(p, q => r)");

  CHECK_THROWS_AS(parse_argument("(impE q (assume h p)"), ParseError);
  CHECK_THROWS_AS(parse_argument("(frobnicate p)"), ParseError);
}

TEST_CASE("arguments: corpus round trips") {
  for (int i = 1; i <= 25; ++i) {
    Argument a = load(i);
    CHECK(parse_argument(print_argument(a)) == a);
  }
}

TEST_CASE("arguments: corpus is well-formed") {
  for (int i = 1; i <= 25; ++i) {
    Argument a = load(i);
    std::vector<Violation> vs = check_wellformed(a);
    for (const Violation& v : vs) MESSAGE("c", i, " ", v.path, ": ", v.reason);
    CHECK(vs.empty());
  }
}

TEST_CASE("arguments: well-formedness violations") {
  // impE whose major premise concludes a conjunction
  Argument bad1 = parse_argument("(impE q (assume h p & q) (assume h2 p))");
  CHECK_FALSE(check_wellformed(bad1).empty());
  // orE discharging with too few labels
  Argument bad2 =
      parse_argument("(orE r [h] (assume d p | q) (assume a r) (assume b r))");
  CHECK_FALSE(check_wellformed(bad2).empty());
  // assumption bound to a different formula than the binder discharges
  Argument bad3 = parse_argument("(impI p -> q [h] (assume h q))");
  CHECK_FALSE(check_wellformed(bad3).empty());
  // label shadowing along a path
  Argument bad4 = parse_argument(
      "(impI p -> (p -> p) [h] (impI p -> p [h] (assume h p)))");
  CHECK_FALSE(check_wellformed(bad4).empty());
  // atomic step citing an unbound rule label
  Argument bad5 = parse_argument("(atomic nope q (assume a p))");
  CHECK_FALSE(check_wellformed(bad5).empty());
  // atomic arity mismatch
  Argument bad6 = parse_argument("(atomic \"(p, q => r)\" r (assume a p))");
  CHECK_FALSE(check_wellformed(bad6).empty());
  // botE concluding a compound formula
  Argument bad7 = parse_argument("(botE p & q (assume h bot))");
  CHECK_FALSE(check_wellformed(bad7).empty());
  // wrong conjunct from andE1
  Argument bad8 = parse_argument("(andE1 q (andI p & q (assume a p) (assume b q)))");
  CHECK_FALSE(check_wellformed(bad8).empty());
}

TEST_CASE("arguments: open assumptions") {
  CHECK(open_assumptions(load(2)) == std::vector<Formula>{F("p -> q"), F("p")});
  CHECK(open_assumptions(load(3)).empty());
  CHECK(open_assumptions(load(9)).empty());
  Argument one = parse_argument("(assume h p)");
  CHECK(open_assumptions(one) == std::vector<Formula>{F("p")});
}

TEST_CASE("arguments: pinned reductions") {
  // the displayed implication detour reduces in one step to the grafted tree
  Argument c1 = load(1);
  std::vector<ReductionStep> ds = find_detours(c1);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].connective == '>');
  Argument r = reduce_once(c1, ds[0]);
  CHECK(r == parse_argument("(orI2 q | p (assume u p))"));

  // andE1 over andI projects the left derivation
  Argument c6 = load(6);
  Argument r6 = reduce_once(c6, find_detours(c6)[0]);
  CHECK(r6 == parse_argument("(assume h1 p)"));

  // orE over orI1 substitutes into the left branch
  Argument c8 = load(8);
  Argument r8 = reduce_once(c8, find_detours(c8)[0]);
  CHECK(r8 == parse_argument("(impE r (assume f p -> r) (assume u p))"));

  // a non-detour position is rejected
  CHECK_THROWS_AS(reduce_once(c1, ReductionStep{{0}, '>'}), NotADetour);
  CHECK_THROWS_AS(reduce_once(load(2), ReductionStep{{}, '>'}), NotADetour);
}

TEST_CASE("arguments: normalization step counts") {
  const std::map<int, int> expected_steps = {
      {1, 1}, {2, 0}, {3, 0}, {4, 0}, {5, 0},  {6, 1}, {7, 2}, {8, 1},
      {9, 0}, {10, 0}, {11, 0}, {12, 1}, {13, 2}, {14, 1}, {15, 2}, {16, 0},
      {17, 0}, {18, 0}, {19, 3}, {20, 0}, {21, 0}, {22, 0}, {23, 0}, {24, 1},
      {25, 0}};
  for (const auto& [i, steps] : expected_steps) {
    NormalizeResult res = normalize(load(i));
    CHECK(res.complete);
    CHECK(res.steps == steps);
    CHECK(find_detours(res.argument).empty());
  }
}

TEST_CASE("arguments: reduction preserves conclusions and shrinks assumptions") {
  for (int i = 1; i <= 25; ++i) {
    Argument a = load(i);
    std::vector<Formula> opens_before = open_assumptions(a);
    Formula concl = a.conclusion();
    NormalizeResult res = normalize(a);
    CHECK(res.argument.conclusion() == concl);
    CHECK(subset(open_assumptions(res.argument), opens_before));
    CHECK(check_wellformed(res.argument).empty());
  }
}

TEST_CASE("arguments: capture avoidance in grafting") {
  Argument c15 = load(15);
  NormalizeResult res = normalize(c15);
  CHECK(res.steps == 2);
  CHECK(res.argument == parse_argument("(assume u p)"));
  // intermediate state must stay well-formed
  Argument once = reduce_once(c15, find_detours(c15)[0]);
  CHECK(check_wellformed(once).empty());
}

TEST_CASE("arguments: confluence of the two strategies on pure corpus trees") {
  for (int i = 1; i <= 25; ++i) {
    Argument a = load(i);
    if (!is_pure_ipc(a)) continue;
    NormalizeResult lo = normalize(a, 10000, ReductionStrategy::leftmost_outermost);
    NormalizeResult ri = normalize(a, 10000, ReductionStrategy::rightmost_innermost);
    CHECK(lo.complete);
    CHECK(ri.complete);
    CHECK(lo.argument == ri.argument);
  }
}

TEST_CASE("arguments: normal closed pure arguments end in an introduction") {
  for (int i = 1; i <= 25; ++i) {
    Argument a = normalize(load(i)).argument;
    if (!is_pure_ipc(a) || !open_assumptions(a).empty()) continue;
    bool intro = a.kind() == Argument::NodeKind::AndI || a.kind() == Argument::NodeKind::OrI1 ||
                 a.kind() == Argument::NodeKind::OrI2 || a.kind() == Argument::NodeKind::ImpI;
    CHECK(intro);
  }
}

TEST_CASE("arguments: fuel exhaustion is reported") {
  NormalizeResult res = normalize(load(19), 1);
  CHECK_FALSE(res.complete);
  CHECK(res.steps == 1);
  CHECK_FALSE(find_detours(res.argument).empty());
}

TEST_CASE("arguments: validity on the toy systems") {
  System toy1 = build_system_from_file(data("toy1.sys"));
  System toy2 = build_system_from_file(data("toy2.sys"));
  const BotPolicy kEx = BotPolicy::explosion;

  // Example 1's argument: open, so it is the consequence [p -> q, p] |- q
  CHECK(s_valid_argument(toy1, Base{}, load(2), kEx).valid);

  // the one-step argument p |- q | r as an arbitrary inference node
  Argument one_step = parse_argument("(step q | r (assume h p))");
  CHECK(check_wellformed(one_step).empty());
  CHECK(s_valid_argument(toy1, Base{}, one_step, kEx).valid);
  CHECK_FALSE(s_valid_argument(toy2, Base{}, one_step, kEx).valid);

  // a bare assumption is valid everywhere
  Argument bare = parse_argument("(assume h (p -> q) & r)");
  for (const System* sys : {&toy1, &toy2})
    for (const Base& b : enumerate_bases(*sys))
      CHECK(s_valid_argument(*sys, b, bare, kEx).valid);

  // closed atomic conclusions reduce to derivability
  Base b1 = Base({std::vector<Rule>{parse_rule("p"), parse_rule("(p => q)")}});
  CHECK(s_valid_argument(toy1, b1, load(16), kEx).valid); // concludes p & q
  CHECK_FALSE(s_valid_argument(toy1, Base{}, load(16), kEx).valid);

  // ill-formed arguments are rejected up front
  Argument bad = parse_argument("(impE q (assume h p & q) (assume h2 p))");
  CHECK_THROWS_AS(s_valid_argument(toy1, Base{}, bad, kEx), IllFormedArgument);
  CHECK_THROWS_AS(
      s_valid_argument(toy1, Base({std::vector<Rule>{parse_rule("q")}}), load(2), kEx),
      BaseNotInSystem);
}

TEST_CASE("arguments: validity is invariant under normalization (corpus)") {
  System toy1 = build_system_from_file(data("toy1.sys"));
  const BotPolicy kEx = BotPolicy::explosion;
  std::vector<Base> bases = enumerate_bases(toy1);
  for (int i = 1; i <= 25; ++i) {
    Argument a = load(i);
    Argument n = normalize(a).argument;
    for (const Base& b : bases) {
      CHECK(s_valid_argument(toy1, b, a, kEx).valid ==
            s_valid_argument(toy1, b, n, kEx).valid);
    }
  }
}

TEST_CASE("arguments: an assumed higher-level rule can itself discharge rules") {
  // the proof of t: the governing rule discharges the level-3 rule, whose
  // application in turn discharges the assumed step (p => q)
  Argument t_proof = parse_argument(
      "(atomic \"(((((p => q) => r) => s) => s) => t)\" t [hs6]\n"
      "  (atomic hs6 s [hpq]\n"
      "    (atomic \"(q => r)\" r\n"
      "      (atomic hpq q\n"
      "        (atomic \"p\" p)))))");
  CHECK(check_wellformed(t_proof).empty());
  CHECK(open_assumptions(t_proof).empty());
  CHECK(parse_argument(print_argument(t_proof)) == t_proof);

  GeneratorSpec spec;
  spec.explicit_universe = std::vector<Rule>{
      parse_rule("p"), parse_rule("(q => r)"),
      parse_rule("(((((p => q) => r) => s) => s) => t)")};
  System sys = System::generated(spec, "t_sys");
  Base full(*spec.explicit_universe);
  // closed argument with an atomic conclusion: validity is derivability of t
  CHECK(s_valid_argument(sys, full, t_proof, BotPolicy::explosion).valid);
  CHECK_FALSE(s_valid_argument(sys, Base{}, t_proof, BotPolicy::explosion).valid);
}

namespace {

// Wraps a subtree in a fresh detour; the wrapped tree is well-formed, stays
// pure when the seed is pure, and reduces back over the original.
Argument wrap_detour(const Argument& d, std::mt19937& rng, int& counter) {
  std::uniform_int_distribution<int> pick(0, 2);
  std::string u = "w" + std::to_string(++counter);
  std::string v = "w" + std::to_string(++counter);
  Formula side = Formula::mk_atom("z" + std::to_string(counter % 3 + 1));
  switch (pick(rng)) {
    case 0: { // impE over impI with vacuous discharge
      Formula impf = Formula::mk_imp(side, d.conclusion());
      return Argument::infer(Argument::NodeKind::ImpE, d.conclusion(), {},
                             {Argument::infer(Argument::NodeKind::ImpI, impf, {}, {d}),
                              Argument::assume(u, side)});
    }
    case 1: { // andE1 over andI
      Formula conj = Formula::mk_and(d.conclusion(), side);
      return Argument::infer(
          Argument::NodeKind::AndE1, d.conclusion(), {},
          {Argument::infer(Argument::NodeKind::AndI, conj, {},
                           {d, Argument::assume(u, side)})});
    }
    default: { // orE over orI1; both case binders end up vacuous
      Formula disj = Formula::mk_or(d.conclusion(), side);
      std::string w = "w" + std::to_string(++counter);
      return Argument::infer(
          Argument::NodeKind::OrE, d.conclusion(), {u, v},
          {Argument::infer(Argument::NodeKind::OrI1, disj, {}, {d}),
           Argument::assume(u, d.conclusion()),
           Argument::assume(w, d.conclusion())});
    }
  }
}

// Inserts the detour at a random position of the tree.
Argument wrap_somewhere(const Argument& a, std::mt19937& rng, int& counter, int depth) {
  if (a.children().empty() || depth <= 0 ||
      std::uniform_int_distribution<int>(0, 2)(rng) == 0)
    return wrap_detour(a, rng, counter);
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, a.children().size() - 1)(rng);
  std::vector<Argument> kids = a.children();
  kids[i] = wrap_somewhere(kids[i], rng, counter, depth - 1);
  if (a.kind() == Argument::NodeKind::Assume) return a;
  if (a.kind() == Argument::NodeKind::AtomicApp && a.rule())
    return Argument::atomic(*a.rule(), a.discharge(), std::move(kids));
  if (a.kind() == Argument::NodeKind::AtomicApp)
    return Argument::atomic_by_label(a.label(), a.conclusion(), a.discharge(),
                                     std::move(kids));
  return Argument::infer(a.kind(), a.conclusion(), a.discharge(), std::move(kids));
}

} // namespace

TEST_CASE("arguments: reduction properties on random wrapped trees") {
  std::mt19937 rng(424242); // pinned seed
  int counter = 0;
  int trees = 0;
  for (int seed_idx : {1, 2, 3, 6, 7, 11, 18, 23}) {
    Argument seed = load(seed_idx);
    for (int round = 0; round < 8; ++round) {
      Argument t = seed;
      int wraps = 1 + round % 3;
      for (int w = 0; w < wraps; ++w) t = wrap_somewhere(t, rng, counter, 4);
      if (!check_wellformed(t).empty()) continue; // guard; wraps should preserve WF
      ++trees;
      std::vector<Formula> opens = open_assumptions(t);
      NormalizeResult lo = normalize(t, 10000, ReductionStrategy::leftmost_outermost);
      CHECK(lo.complete);
      CHECK(lo.argument.conclusion() == t.conclusion());
      CHECK(subset(open_assumptions(lo.argument), opens));
      CHECK(check_wellformed(lo.argument).empty());
      if (is_pure_ipc(t)) {
        NormalizeResult ri = normalize(t, 10000, ReductionStrategy::rightmost_innermost);
        CHECK(ri.argument == lo.argument);
      }
    }
  }
  CHECK(trees == 64); // every wrapped tree must have stayed well-formed
}

TEST_CASE("arguments: garbage input only ever raises ParseError") {
  std::mt19937 rng(77003);
  const std::string alphabet = "pq (assume impI andE1 [h] -> | & ~ \" => ) atomic step bot";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 60);
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) s += alphabet[pick(rng)];
    try {
      (void)parse_argument(s);
    } catch (const ParseError&) {
    }
  }
  CHECK(true);
}
