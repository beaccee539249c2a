#include "ptv/ipc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace ptv {

// ---------------------------------------------------------------------------
// G4ip prover
// ---------------------------------------------------------------------------

std::size_t IpcProver::SeqHash::operator()(const std::pair<std::vector<int>, int>& s) const {
  std::size_t h = static_cast<std::size_t>(s.second) * 1099511628211ULL + 14695981039346656037ULL;
  for (int x : s.first) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

int IpcProver::intern(const Formula& f) {
  auto it = fids_.find(f);
  if (it != fids_.end()) return it->second;
  FNode n;
  n.kind = f.kind();
  switch (f.kind()) {
    case Formula::Kind::Atom: n.atom = f.atom().name(); break;
    case Formula::Kind::Bot: break;
    default:
      n.l = intern(f.left());
      n.r = intern(f.right());
  }
  if (n.kind == Formula::Kind::Imp) {
    int id = mk_imp(n.l, n.r); // share ids with prover-built implications
    fids_.emplace(f, id);
    return id;
  }
  int id = static_cast<int>(fnodes_.size());
  fnodes_.push_back(std::move(n));
  fids_.emplace(f, id);
  return id;
}

namespace {

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void erase_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

bool contains_sorted(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

} // namespace

bool IpcProver::prove(std::vector<int> ctx, int goal) {
  // Axioms. The general identity shortcut is admissible and prunes well.
  if (contains_sorted(ctx, goal)) return true;
  for (int c : ctx)
    if (fnodes_[static_cast<std::size_t>(c)].kind == Formula::Kind::Bot) return true;

  auto key = std::make_pair(ctx, goal);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  auto result = [&](bool v) {
    memo_[key] = v;
    return v;
  };

  // Invertible left rules: apply the first applicable one.
  for (int c : ctx) {
    const FNode n = fnodes_[static_cast<std::size_t>(c)];
    if (n.kind == Formula::Kind::And) {
      std::vector<int> g = ctx;
      erase_sorted(g, c);
      insert_sorted(g, n.l);
      insert_sorted(g, n.r);
      return result(prove(std::move(g), goal));
    }
    if (n.kind == Formula::Kind::Or) {
      std::vector<int> g1 = ctx, g2 = ctx;
      erase_sorted(g1, c);
      insert_sorted(g1, n.l);
      erase_sorted(g2, c);
      insert_sorted(g2, n.r);
      return result(prove(std::move(g1), goal) && prove(std::move(g2), goal));
    }
    if (n.kind == Formula::Kind::Imp) {
      const FNode a = fnodes_[static_cast<std::size_t>(n.l)];
      if (a.kind == Formula::Kind::Atom && contains_sorted(ctx, n.l)) {
        std::vector<int> g = ctx;
        erase_sorted(g, c);
        insert_sorted(g, n.r);
        return result(prove(std::move(g), goal));
      }
      if (a.kind == Formula::Kind::Bot) { // bot -> B is never usable
        std::vector<int> g = ctx;
        erase_sorted(g, c);
        return result(prove(std::move(g), goal));
      }
      if (a.kind == Formula::Kind::And) { // (C&D)->B  ~>  C->(D->B)
        std::vector<int> g = ctx;
        erase_sorted(g, c);
        insert_sorted(g, mk_imp(a.l, mk_imp(a.r, n.r)));
        return result(prove(std::move(g), goal));
      }
      if (a.kind == Formula::Kind::Or) { // (C|D)->B  ~>  C->B, D->B
        std::vector<int> g = ctx;
        erase_sorted(g, c);
        insert_sorted(g, mk_imp(a.l, n.r));
        insert_sorted(g, mk_imp(a.r, n.r));
        return result(prove(std::move(g), goal));
      }
      // implication head: non-invertible, handled below
    }
  }

  // Invertible right rules.
  const FNode gn = fnodes_[static_cast<std::size_t>(goal)];
  if (gn.kind == Formula::Kind::And)
    return result(prove(ctx, gn.l) && prove(ctx, gn.r));
  if (gn.kind == Formula::Kind::Imp) {
    std::vector<int> g = ctx;
    insert_sorted(g, gn.l);
    return result(prove(std::move(g), gn.r));
  }

  // Choice points: right disjunction and the (C->D)->B left rule.
  if (gn.kind == Formula::Kind::Or) {
    if (prove(ctx, gn.l) || prove(ctx, gn.r)) return result(true);
  }
  for (int c : ctx) {
    const FNode n = fnodes_[static_cast<std::size_t>(c)];
    if (n.kind != Formula::Kind::Imp) continue;
    const FNode a = fnodes_[static_cast<std::size_t>(n.l)];
    if (a.kind != Formula::Kind::Imp) continue;
    // Gamma, (C->D)->B |- G  if  Gamma, D->B |- C->D  and  Gamma, B |- G
    std::vector<int> g1 = ctx;
    erase_sorted(g1, c);
    insert_sorted(g1, mk_imp(a.r, n.r));
    if (prove(std::move(g1), n.l)) {
      std::vector<int> g2 = ctx;
      erase_sorted(g2, c);
      insert_sorted(g2, n.r);
      if (prove(std::move(g2), goal)) return result(true);
    }
  }
  return result(false);
}

int IpcProver::mk_imp(int l, int r) {
  auto it = imp_ids_.find({l, r});
  if (it != imp_ids_.end()) return it->second;
  FNode n;
  n.kind = Formula::Kind::Imp;
  n.l = l;
  n.r = r;
  fnodes_.push_back(n);
  int id = static_cast<int>(fnodes_.size() - 1);
  imp_ids_.emplace(std::make_pair(l, r), id);
  return id;
}

bool IpcProver::provable(const Formula& f) { return prove({}, intern(f)); }

bool ipc_provable(const Formula& f) {
  IpcProver p;
  return p.provable(f);
}

// ---------------------------------------------------------------------------
// Kripke models
// ---------------------------------------------------------------------------

bool KripkeModel::forces(int world, const Formula& f) const {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == f.atom()) return (valuation[i] >> world & 1) != 0;
      return false;
    }
    case Formula::Kind::Bot: return false;
    case Formula::Kind::And: return forces(world, f.left()) && forces(world, f.right());
    case Formula::Kind::Or: return forces(world, f.left()) || forces(world, f.right());
    case Formula::Kind::Imp: {
      std::uint32_t up = reach[static_cast<std::size_t>(world)];
      while (up) {
        int v = std::countr_zero(up);
        up &= up - 1;
        if (forces(v, f.left()) && !forces(v, f.right())) return false;
      }
      return true;
    }
  }
  return false;
}

std::string KripkeModel::to_text() const {
  std::ostringstream out;
  out << "worlds: " << worlds << '\n';
  out << "order:";
  bool any = false;
  for (int w = 0; w < worlds; ++w)
    for (int v = 0; v < worlds; ++v)
      if (v != w && (reach[static_cast<std::size_t>(w)] >> v & 1)) {
        out << ' ' << w << "<=" << v;
        any = true;
      }
  if (!any) out << " (discrete)";
  out << '\n';
  for (int w = 0; w < worlds; ++w) {
    out << 'w' << w << ": {";
    bool first = true;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (valuation[i] >> w & 1) {
        if (!first) out << ", ";
        first = false;
        out << atoms[i].name();
      }
    out << "}\n";
  }
  return out.str();
}

namespace {

// All root-pointed partial orders on k worlds (world 0 below everything),
// deduplicated up to isomorphism by the lexicographically least relabeling.
std::vector<std::vector<std::uint32_t>> frames_for_uncached(int k) {
  std::vector<std::vector<std::uint32_t>> out;
  if (k == 1) {
    out.push_back({1u});
    return out;
  }
  const int m = k - 1; // free worlds 1..k-1
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < k; ++i)
    for (int j = 1; j < k; ++j)
      if (i != j) pairs.emplace_back(i, j);
  std::set<std::vector<std::uint32_t>> seen;
  const std::uint32_t all = (std::uint32_t{1} << k) - 1;
  for (std::uint32_t rel = 0; rel < (std::uint32_t{1} << pairs.size()); ++rel) {
    std::vector<std::uint32_t> reach(static_cast<std::size_t>(k));
    for (int w = 0; w < k; ++w) reach[static_cast<std::size_t>(w)] = std::uint32_t{1} << w;
    reach[0] = all;
    bool anti = true;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (rel >> e & 1) reach[static_cast<std::size_t>(pairs[e].first)] |=
          std::uint32_t{1} << pairs[e].second;
    // antisymmetry
    for (int i = 1; i < k && anti; ++i)
      for (int j = i + 1; j < k; ++j)
        if ((reach[static_cast<std::size_t>(i)] >> j & 1) &&
            (reach[static_cast<std::size_t>(j)] >> i & 1)) {
          anti = false;
          break;
        }
    if (!anti) continue;
    // transitivity
    bool trans = true;
    for (int i = 1; i < k && trans; ++i) {
      std::uint32_t closure = reach[static_cast<std::size_t>(i)];
      std::uint32_t frontier = closure;
      while (frontier) {
        int j = std::countr_zero(frontier);
        frontier &= frontier - 1;
        closure |= reach[static_cast<std::size_t>(j)];
      }
      if (closure != reach[static_cast<std::size_t>(i)]) trans = false;
    }
    if (!trans) continue;
    // canonical form over relabelings of 1..k-1
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<std::uint32_t> best;
    do {
      std::vector<int> to(static_cast<std::size_t>(k));
      to[0] = 0;
      for (int i = 0; i < m; ++i) to[static_cast<std::size_t>(i + 1)] = perm[static_cast<std::size_t>(i)];
      std::vector<std::uint32_t> relab(static_cast<std::size_t>(k), 0);
      for (int w = 0; w < k; ++w) {
        std::uint32_t r = reach[static_cast<std::size_t>(w)];
        std::uint32_t nr = 0;
        while (r) {
          int v = std::countr_zero(r);
          r &= r - 1;
          nr |= std::uint32_t{1} << to[static_cast<std::size_t>(v)];
        }
        relab[static_cast<std::size_t>(to[static_cast<std::size_t>(w)])] = nr;
      }
      if (best.empty() || relab < best) best = std::move(relab);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen.insert(best).second) out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::vector<std::uint32_t>>& frames_for(int k) {
  thread_local std::map<int, std::vector<std::vector<std::uint32_t>>> cache;
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, frames_for_uncached(k)).first;
  return it->second;
}

// Upward-closed subsets of a frame, in increasing mask order.
std::vector<std::uint32_t> upsets_of(const std::vector<std::uint32_t>& reach, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << k); ++m) {
    bool ok = true;
    for (int w = 0; w < k && ok; ++w)
      if ((m >> w & 1) && (reach[static_cast<std::size_t>(w)] & ~m)) ok = false;
    if (ok) out.push_back(m);
  }
  return out;
}

} // namespace

std::optional<KripkeModel> kripke_counterexample(const Formula& f, int max_worlds) {
  if (max_worlds < 1) throw std::invalid_argument("max_worlds must be >= 1");
  std::set<Atom> atom_set = atoms_of(f);
  std::vector<Atom> atoms(atom_set.begin(), atom_set.end());
  const std::size_t na = atoms.size();
  for (int k = 1; k <= max_worlds; ++k) {
    for (const auto& frame : frames_for(k)) {
      std::vector<std::uint32_t> upsets = upsets_of(frame, k);
      // odometer over per-atom upset choices
      std::vector<std::size_t> pick(na, 0);
      while (true) {
        KripkeModel model;
        model.worlds = k;
        model.reach = frame;
        model.atoms = atoms;
        model.valuation.resize(na);
        for (std::size_t i = 0; i < na; ++i) model.valuation[i] = upsets[pick[i]];
        if (!model.forces(0, f)) return model;
        // advance
        std::size_t i = 0;
        for (; i < na; ++i) {
          if (++pick[i] < upsets.size()) break;
          pick[i] = 0;
        }
        if (i == na) break;
      }
    }
  }
  return std::nullopt;
}

} // namespace ptv
