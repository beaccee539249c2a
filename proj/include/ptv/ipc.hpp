#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ptv/syntax.hpp"

namespace ptv {

// Decides intuitionistic propositional derivability with the contraction-free
// sequent calculus (G4ip). Terminating without loop checks; sequents are
// memoized across queries. Not thread-safe; use one prover per worker.
class IpcProver {
public:
  bool provable(const Formula& f);

private:
  int intern(const Formula& f);
  int mk_imp(int l, int r);
  bool prove(std::vector<int> ctx, int goal); // ctx sorted unique

  struct FNode {
    Formula::Kind kind;
    int l = -1, r = -1;
    std::string atom;
  };
  std::vector<FNode> fnodes_;
  std::unordered_map<Formula, int, FormulaHash> fids_;
  std::map<std::pair<int, int>, int> imp_ids_;
  struct SeqHash {
    std::size_t operator()(const std::pair<std::vector<int>, int>& s) const;
  };
  std::unordered_map<std::pair<std::vector<int>, int>, bool, SeqHash> memo_;
};

bool ipc_provable(const Formula& f);

// A finite Kripke model: worlds 0..n-1 with a reflexive-transitive order
// (world 0 is the root and lies below every world) and a persistent
// valuation (per-atom upward-closed sets of worlds).
struct KripkeModel {
  int worlds = 1;
  // reach[w] = bitmask of worlds v with w <= v (includes w)
  std::vector<std::uint32_t> reach;
  std::vector<Atom> atoms;
  std::vector<std::uint32_t> valuation; // per atom, upward-closed world mask

  bool forces(int world, const Formula& f) const;
  std::string to_text() const;
};

// Searches all root-pointed posets with at most max_worlds worlds and all
// persistent valuations over the atoms of f for a model whose root fails f.
// Deterministic: smallest model in the search order is returned.
std::optional<KripkeModel> kripke_counterexample(const Formula& f, int max_worlds);

} // namespace ptv
