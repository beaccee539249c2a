// Compares the serial reference evaluators with the OpenMP-parallel sweeps
// on two representative workloads and checks that the results agree.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptv/explorer.hpp"
#include "ptv/semantics.hpp"

using namespace ptv;
using Clock = std::chrono::steady_clock;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

System harrop_system() {
  GeneratorSpec spec;
  std::vector<Rule> universe;
  for (const char* s :
       {"p", "q", "r", "(p => q)", "(p => r)", "(q => r)", "((p => q) => r)"})
    universe.push_back(parse_rule(s));
  spec.explicit_universe = universe;
  return System::generated(spec, "harrop");
}

} // namespace

int main(int argc, char** argv) {
  int depth = argc > 1 ? std::atoi(argv[1]) : 4;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  {
    System sys = harrop_system();
    SearchCaps caps;
    caps.max_atoms = 3;
    caps.max_depth = depth;
    caps.include_bot = false;
    caps.max_formulas = 10000000;
    caps.findings_cap = 10000000;

    auto t0 = Clock::now();
    SearchResult serial = find_superintuitionistic(sys, caps, BotPolicy::explosion, Exec::serial);
    double ts = secs_since(t0);
    t0 = Clock::now();
    SearchResult par = find_superintuitionistic(sys, caps, BotPolicy::explosion, Exec::parallel);
    double tp = secs_since(t0);

    bool agree = serial.findings.size() == par.findings.size();
    for (std::size_t i = 0; agree && i < serial.findings.size(); ++i)
      agree = serial.findings[i].formula == par.findings[i].formula;
    std::printf("search depth=%d over %ld formulas: serial %.2fs, parallel %.2fs, "
                "speedup %.2fx, findings %zu, agree %s\n",
                depth, serial.enumerated, ts, tp, ts / tp, serial.findings.size(),
                agree ? "yes" : "NO");
    if (!agree) return 1;
  }

  {
    GeneratorSpec spec;
    for (const char* a : {"p", "q", "r", "s"}) spec.atoms.emplace_back(a);
    spec.max_level = 1;
    spec.max_premises = 1;
    System sys = System::generated(spec, "wide4"); // 16 rules, 65536 bases
    Formula f = parse_formula("~~p -> p");

    auto t0 = Clock::now();
    bool serial = ptv_valid_fast(sys, f, BotPolicy::explosion);
    double ts = secs_since(t0);
    t0 = Clock::now();
    bool par = ptv_valid_parallel(sys, f, BotPolicy::explosion);
    double tp = secs_since(t0);
    std::printf("ptv over %zu bases (%zu rules): serial %.2fs, parallel %.2fs, "
                "speedup %.2fx, verdicts %s/%s agree %s\n",
                sys.base_count(), sys.universe().size(), ts, tp, ts / tp,
                serial ? "valid" : "invalid", par ? "valid" : "invalid",
                serial == par ? "yes" : "NO");
    if (serial != par) return 1;
  }
  return 0;
}
