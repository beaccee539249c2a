#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptv/rules.hpp"

namespace ptv {

struct UniverseTooLarge : std::runtime_error {
  UniverseTooLarge(std::size_t size, std::size_t cap)
      : std::runtime_error("UniverseTooLarge: universe has " + std::to_string(size) +
                           " rules, cap is " + std::to_string(cap)),
        size(size), cap(cap) {}
  std::size_t size, cap;
};

struct BaseNotInSystem : std::runtime_error {
  explicit BaseNotInSystem(const Base& b)
      : std::runtime_error("BaseNotInSystem: " + print_base(b)) {}
};

// Enumerates all canonical rules over the given atoms with level <= max_level
// and at most max_premises premises at every nesting depth. With skip_inert,
// compound rules whose premises contain the axiom of their own conclusion are
// dropped (they can never derive anything new).
std::vector<Rule> enumerate_rules(const std::vector<Atom>& atoms, int max_level,
                                  int max_premises, bool skip_inert = true);

struct GeneratorSpec {
  std::vector<Atom> atoms;
  int max_level = 1;
  int max_premises = 2;
  std::optional<std::vector<Rule>> explicit_universe;
  std::size_t cap = 20;
};

// A proof-theoretic system: a finite family of bases ordered by superset
// inclusion. Either an explicit list or the full powerset of a generated
// rule universe. Immutable after construction.
class System {
public:
  enum class Kind { Explicit, Generated };

  static System explicit_family(std::vector<Base> bases, std::string name);
  static System generated(const GeneratorSpec& spec, std::string name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t base_count() const;
  bool member(const Base& b) const;

  const std::vector<Rule>& universe() const { return universe_; } // Generated only
  const std::vector<Base>& listed_bases() const { return bases_; } // Explicit only

  // Atoms occurring in any rule of the family (or universe).
  const std::set<Atom>& atom_universe() const { return atoms_; }

  // Enumeration order: Explicit systems in listed (file) order; Generated
  // systems by base size, then lexicographically on the canonical rule
  // sequence. fn returns false to stop early.
  void for_each_base(const std::function<bool(const Base&)>& fn) const;
  std::vector<Base> enumerate_bases() const;

  // All bases of the family that are supersets of b (b included), ordered by
  // size then lexicographic canonical form. Throws BaseNotInSystem.
  std::vector<Base> extensions_of(const Base& b) const;

  // --- compact ids used by the evaluators ----------------------------------
  // Generated: id is a bitmask over universe indices. Explicit: list index.
  std::optional<std::uint32_t> base_id(const Base& b) const;
  Base base_from_id(std::uint32_t id) const;
  // Explicit only: ids of the members that are supersets of the given member.
  const std::vector<std::uint32_t>& explicit_supersets(std::uint32_t id) const;

private:
  System() = default;
  Kind kind_ = Kind::Explicit;
  std::string name_;
  std::vector<Base> bases_;           // Explicit
  std::vector<Rule> universe_;        // Generated, canonical order
  std::set<Atom> atoms_;
  std::vector<std::vector<std::uint32_t>> superset_ids_; // Explicit
};

bool member(const System& sys, const Base& b);
std::vector<Base> enumerate_bases(const System& sys);
std::vector<Base> extensions_of(const System& sys, const Base& b);

// System files: header "!explicit" followed by base sections separated by
// "---" lines, or header "!generate" followed by "atoms:", "max-level:",
// "max-premises:" and optionally "universe-file:" (relative to the system
// file). The system name is the file stem.
System build_system_from_file(const std::string& path, std::size_t cap = 20);
System build_system_from_text(std::string_view text, std::string name,
                              const std::string& dir = ".", std::size_t cap = 20);

} // namespace ptv
