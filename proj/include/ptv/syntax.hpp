#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptv {

// Raised by all parsers in this library. `position` is a 0-based offset
// into the input text.
struct ParseError : std::runtime_error {
  ParseError(std::string msg, std::size_t pos);
  std::size_t position;
};

// A propositional atom. Names match [a-z][a-zA-Z0-9_]* and "bot" is
// reserved for falsum; the checked constructor rejects it. Falsum itself
// is representable only through the falsum() factory (the rules engine
// uses it as the head of bot-concluding rules).
class Atom {
public:
  explicit Atom(std::string name);
  static Atom falsum();

  const std::string& name() const { return name_; }
  bool is_falsum() const { return name_ == "bot"; }

  bool operator==(const Atom& o) const { return name_ == o.name_; }
  std::strong_ordering operator<=>(const Atom& o) const { return name_ <=> o.name_; }

  static bool valid_name(std::string_view s);

private:
  struct unchecked {};
  Atom(std::string name, unchecked) : name_(std::move(name)) {}
  std::string name_;
};

// Immutable propositional formula over atoms, bot, &, |, ->.
// Negation is surface syntax only: ~A parses to Imp(A, Bot).
class Formula {
public:
  enum class Kind { Atom, Bot, And, Or, Imp };

  Formula() : Formula(mk_bot()) {} // default: bot (container convenience)

  static Formula mk_atom(Atom a);
  static Formula mk_atom(const std::string& name) { return mk_atom(Atom(name)); }
  static Formula mk_bot();
  static Formula mk_and(Formula l, Formula r);
  static Formula mk_or(Formula l, Formula r);
  static Formula mk_imp(Formula l, Formula r);
  static Formula mk_neg(Formula a) { return mk_imp(std::move(a), mk_bot()); }

  Kind kind() const;
  const Atom& atom() const;    // Kind::Atom only
  const Formula& left() const; // binary kinds only
  const Formula& right() const;

  bool is_binary() const;
  // Number of nodes on the longest root-to-leaf path; a leaf has depth 1.
  int depth() const;
  std::size_t hash() const;

  bool operator==(const Formula& o) const;
  // Total structural order, used for canonical argument order of & and |.
  std::strong_ordering operator<=>(const Formula& o) const { return compare(*this, o); }

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula mk(Kind k, std::optional<Atom> at, std::optional<Formula> l,
                    std::optional<Formula> r);
  static std::strong_ordering compare(const Formula& a, const Formula& b);
  std::shared_ptr<const Node> n_;
};

struct Formula::Node {
  Kind kind;
  std::optional<Atom> at;
  std::optional<Formula> l, r;
  int depth;
  std::size_t hash;
};

inline Formula::Kind Formula::kind() const { return n_->kind; }
inline const Atom& Formula::atom() const { return *n_->at; }
inline const Formula& Formula::left() const { return *n_->l; }
inline const Formula& Formula::right() const { return *n_->r; }
inline int Formula::depth() const { return n_->depth; }
inline std::size_t Formula::hash() const { return n_->hash; }
inline bool Formula::is_binary() const {
  return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Imp;
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Grammar (whitespace insignificant, '#' starts a line comment):
//   formula := imp ; imp := or ( "->" imp )? ; or := and ( "|" and )* ;
//   and := neg ( "&" neg )* ; neg := "~" neg | "bot" | "_|_" | atom | "(" formula ")" ;
//   atom := [a-z][a-zA-Z0-9_]* .
Formula parse_formula(std::string_view text);

// Minimal-parenthesis printer; Imp(A, Bot) prints as ~A.
// parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

std::set<Atom> atoms_of(const Formula& f);

// True iff f contains no Or node and no Bot node.
bool is_disjunction_free(const Formula& f);

} // namespace ptv
