#include "ptv/systems.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

namespace ptv {

namespace {

// Appends all size-k index combinations of [0, n) in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(const std::vector<std::size_t>&)>& fn,
                          bool& keep_going) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (keep_going) {
    if (!fn(idx)) { keep_going = false; return; }
    // advance
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

void collect_atoms(const Rule& r, std::set<Atom>& out) {
  if (!r.conclusion().is_falsum()) out.insert(r.conclusion());
  for (const Rule& p : r.premises()) collect_atoms(p, out);
}

bool is_inert(const std::vector<Rule>& premises, const Atom& concl) {
  Rule ax = Rule::axiom(concl);
  return std::find(premises.begin(), premises.end(), ax) != premises.end();
}

} // namespace

std::vector<Rule> enumerate_rules(const std::vector<Atom>& atoms, int max_level,
                                  int max_premises, bool skip_inert) {
  std::vector<Atom> as = atoms;
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());

  std::vector<Rule> pool;
  for (const Atom& a : as) pool.push_back(Rule::axiom(a));
  std::sort(pool.begin(), pool.end());

  for (int lvl = 1; lvl <= max_level; ++lvl) {
    std::vector<Rule> next = pool;
    bool keep = true;
    for (int k = 1; k <= max_premises; ++k) {
      for_each_combination(pool.size(), static_cast<std::size_t>(k),
                           [&](const std::vector<std::size_t>& idx) {
                             std::vector<Rule> prems;
                             prems.reserve(idx.size());
                             for (std::size_t i : idx) prems.push_back(pool[i]);
                             for (const Atom& c : as) {
                               if (skip_inert && is_inert(prems, c)) continue;
                               next.push_back(Rule::compound(prems, c));
                             }
                             return true;
                           },
                           keep);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next == pool) break; // fixpoint, higher levels add nothing
    pool = std::move(next);
  }
  return pool;
}

System System::explicit_family(std::vector<Base> bases, std::string name) {
  System s;
  s.kind_ = Kind::Explicit;
  s.name_ = std::move(name);
  for (Base& b : bases) {
    if (std::find(s.bases_.begin(), s.bases_.end(), b) == s.bases_.end())
      s.bases_.push_back(std::move(b));
  }
  for (const Base& b : s.bases_)
    for (const Rule& r : b.rules()) collect_atoms(r, s.atoms_);
  // precompute superset lists in (size, lex) order
  std::vector<std::uint32_t> order(s.bases_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (s.bases_[a].size() != s.bases_[b].size()) return s.bases_[a].size() < s.bases_[b].size();
    return s.bases_[a] < s.bases_[b];
  });
  s.superset_ids_.resize(s.bases_.size());
  for (std::uint32_t i = 0; i < s.bases_.size(); ++i)
    for (std::uint32_t j : order)
      if (s.bases_[i].subset_of(s.bases_[j])) s.superset_ids_[i].push_back(j);
  return s;
}

System System::generated(const GeneratorSpec& spec, std::string name) {
  System s;
  s.kind_ = Kind::Generated;
  s.name_ = std::move(name);
  if (spec.explicit_universe) {
    s.universe_ = *spec.explicit_universe;
    std::sort(s.universe_.begin(), s.universe_.end());
    s.universe_.erase(std::unique(s.universe_.begin(), s.universe_.end()), s.universe_.end());
  } else {
    s.universe_ = enumerate_rules(spec.atoms, spec.max_level, spec.max_premises);
  }
  if (s.universe_.size() > spec.cap) throw UniverseTooLarge(s.universe_.size(), spec.cap);
  if (s.universe_.size() > 31)
    throw UniverseTooLarge(s.universe_.size(), 31); // base ids are 32-bit masks
  for (const Rule& r : s.universe_) collect_atoms(r, s.atoms_);
  for (const Atom& a : spec.atoms) s.atoms_.insert(a);
  return s;
}

std::size_t System::base_count() const {
  if (kind_ == Kind::Explicit) return bases_.size();
  return std::size_t{1} << universe_.size();
}

std::optional<std::uint32_t> System::base_id(const Base& b) const {
  if (kind_ == Kind::Explicit) {
    for (std::uint32_t i = 0; i < bases_.size(); ++i)
      if (bases_[i] == b) return i;
    return std::nullopt;
  }
  std::uint32_t mask = 0;
  for (const Rule& r : b.rules()) {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), r);
    if (it == universe_.end() || !(*it == r)) return std::nullopt;
    mask |= std::uint32_t{1} << (it - universe_.begin());
  }
  return mask;
}

Base System::base_from_id(std::uint32_t id) const {
  if (kind_ == Kind::Explicit) return bases_.at(id);
  std::vector<Rule> rs;
  for (std::size_t i = 0; i < universe_.size(); ++i)
    if (id >> i & 1) rs.push_back(universe_[i]);
  return Base(std::move(rs));
}

const std::vector<std::uint32_t>& System::explicit_supersets(std::uint32_t id) const {
  return superset_ids_.at(id);
}

bool System::member(const Base& b) const { return base_id(b).has_value(); }

void System::for_each_base(const std::function<bool(const Base&)>& fn) const {
  if (kind_ == Kind::Explicit) {
    for (const Base& b : bases_)
      if (!fn(b)) return;
    return;
  }
  std::size_t n = universe_.size();
  bool keep = true;
  for (std::size_t k = 0; k <= n && keep; ++k) {
    for_each_combination(n, k,
                         [&](const std::vector<std::size_t>& idx) {
                           std::vector<Rule> rs;
                           rs.reserve(idx.size());
                           for (std::size_t i : idx) rs.push_back(universe_[i]);
                           return fn(Base(std::move(rs)));
                         },
                         keep);
  }
}

std::vector<Base> System::enumerate_bases() const {
  std::vector<Base> out;
  out.reserve(std::min<std::size_t>(base_count(), 1u << 20));
  for_each_base([&](const Base& b) {
    out.push_back(b);
    return true;
  });
  return out;
}

std::vector<Base> System::extensions_of(const Base& b) const {
  auto id = base_id(b);
  if (!id) throw BaseNotInSystem(b);
  std::vector<Base> out;
  if (kind_ == Kind::Explicit) {
    for (std::uint32_t j : superset_ids_[*id]) out.push_back(bases_[j]);
    return out;
  }
  // Supersets of the mask: b plus any combination of the complement indices,
  // enumerated by size then lexicographically (which matches the canonical
  // base order; the fixed part is common to all results).
  std::vector<std::size_t> comp;
  for (std::size_t i = 0; i < universe_.size(); ++i)
    if (!(*id >> i & 1)) comp.push_back(i);
  bool keep = true;
  for (std::size_t k = 0; k <= comp.size(); ++k) {
    for_each_combination(comp.size(), k,
                         [&](const std::vector<std::size_t>& idx) {
                           std::vector<Rule> rs = b.rules();
                           for (std::size_t i : idx) rs.push_back(universe_[comp[i]]);
                           out.push_back(Base(std::move(rs)));
                           return true;
                         },
                         keep);
  }
  return out;
}

bool member(const System& sys, const Base& b) { return sys.member(b); }
std::vector<Base> enumerate_bases(const System& sys) { return sys.enumerate_bases(); }
std::vector<Base> extensions_of(const System& sys, const Base& b) { return sys.extensions_of(b); }

// ---------------------------------------------------------------------------
// System files
// ---------------------------------------------------------------------------

namespace {

std::string strip(std::string_view line) {
  if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
  std::size_t b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = line.find_last_not_of(" \t\r");
  return std::string(line.substr(b, e - b + 1));
}

std::vector<std::string> to_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_stem(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

std::string dir_of(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? "." : path.substr(0, slash);
}

} // namespace

System build_system_from_text(std::string_view text, std::string name,
                              const std::string& dir, std::size_t cap) {
  std::vector<std::string> lines = to_lines(text);
  std::size_t i = 0;
  auto next_nonempty = [&]() -> std::string {
    while (i < lines.size()) {
      std::string s = strip(lines[i]);
      if (!s.empty()) return s;
      ++i;
    }
    return "";
  };
  std::string header = next_nonempty();
  ++i;
  if (header == "!explicit") {
    bool allow_bot = false;
    std::vector<Base> bases;
    std::vector<Rule> current;
    bool any_content = false;
    for (; i <= lines.size(); ++i) {
      std::string s = i < lines.size() ? strip(lines[i]) : "---";
      bool at_end = i == lines.size();
      if (s.empty()) continue;
      if (s == "---" || at_end) {
        bases.emplace_back(std::move(current));
        current.clear();
        if (at_end) break;
        continue;
      }
      if (s[0] == '!') {
        if (s == "!allow-bot-conclusions") { allow_bot = true; continue; }
        throw std::runtime_error("unknown header '" + s + "' in system file");
      }
      any_content = true;
      current.push_back(parse_rule(s, allow_bot));
    }
    (void)any_content;
    return System::explicit_family(std::move(bases), std::move(name));
  }
  if (header == "!generate") {
    GeneratorSpec spec;
    spec.cap = cap;
    for (; i < lines.size(); ++i) {
      std::string s = strip(lines[i]);
      if (s.empty()) continue;
      std::size_t colon = s.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("expected 'key: value' in generate section: " + s);
      std::string key = strip(s.substr(0, colon));
      std::string val = strip(s.substr(colon + 1));
      if (key == "atoms") {
        std::istringstream ss(val);
        std::string a;
        while (ss >> a) spec.atoms.emplace_back(a);
      } else if (key == "max-level") {
        spec.max_level = std::stoi(val);
      } else if (key == "max-premises") {
        spec.max_premises = std::stoi(val);
      } else if (key == "universe-file") {
        std::string upath = dir + "/" + val;
        Base univ = parse_base_file(read_file(upath));
        spec.explicit_universe = univ.rules();
      } else {
        throw std::runtime_error("unknown generate key '" + key + "'");
      }
    }
    return System::generated(spec, std::move(name));
  }
  throw std::runtime_error("system file must start with !explicit or !generate");
}

System build_system_from_file(const std::string& path, std::size_t cap) {
  return build_system_from_text(read_file(path), file_stem(path), dir_of(path), cap);
}

} // namespace ptv
