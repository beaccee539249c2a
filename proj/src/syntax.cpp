#include "ptv/syntax.hpp"

#include <cctype>
#include <functional>

namespace ptv {

ParseError::ParseError(std::string msg, std::size_t pos)
    : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}

bool Atom::valid_name(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return s != "bot";
}

Atom::Atom(std::string name) : name_(std::move(name)) {
  if (!valid_name(name_))
    throw std::invalid_argument("invalid atom name: '" + name_ + "'");
}

Atom Atom::falsum() { return Atom("bot", unchecked{}); }

namespace {
std::size_t combine(std::size_t a, std::size_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}
} // namespace

Formula Formula::mk(Kind k, std::optional<Atom> at, std::optional<Formula> l,
                    std::optional<Formula> r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->at = std::move(at);
  n->l = std::move(l);
  n->r = std::move(r);
  switch (k) {
    case Kind::Atom:
      n->depth = 1;
      n->hash = combine(1, std::hash<std::string>{}(n->at->name()));
      break;
    case Kind::Bot:
      n->depth = 1;
      n->hash = 2;
      break;
    default:
      n->depth = 1 + std::max(n->l->depth(), n->r->depth());
      n->hash = combine(combine(static_cast<std::size_t>(k) + 3, n->l->hash()), n->r->hash());
  }
  return Formula(std::move(n));
}

Formula Formula::mk_atom(Atom a) { return mk(Kind::Atom, std::move(a), {}, {}); }
Formula Formula::mk_bot() { return mk(Kind::Bot, {}, {}, {}); }
Formula Formula::mk_and(Formula l, Formula r) { return mk(Kind::And, {}, std::move(l), std::move(r)); }
Formula Formula::mk_or(Formula l, Formula r) { return mk(Kind::Or, {}, std::move(l), std::move(r)); }
Formula Formula::mk_imp(Formula l, Formula r) { return mk(Kind::Imp, {}, std::move(l), std::move(r)); }

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (n_->hash != o.n_->hash || n_->kind != o.n_->kind) return false;
  return compare(*this, o) == std::strong_ordering::equal;
}

std::strong_ordering Formula::compare(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return std::strong_ordering::equal;
  if (auto c = static_cast<int>(a.kind()) <=> static_cast<int>(b.kind()); c != 0) return c;
  switch (a.kind()) {
    case Kind::Bot: return std::strong_ordering::equal;
    case Kind::Atom: return a.atom() <=> b.atom();
    default:
      if (auto c = compare(a.left(), b.left()); c != 0) return c;
      return compare(a.right(), b.right());
  }
}

std::set<Atom> atoms_of(const Formula& f) {
  std::set<Atom> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind()) {
      case Formula::Kind::Atom: out.insert(g.atom()); break;
      case Formula::Kind::Bot: break;
      default:
        walk(g.left());
        walk(g.right());
    }
  };
  walk(f);
  return out;
}

bool is_disjunction_free(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Or:
    case Formula::Kind::Bot: return false;
    case Formula::Kind::Atom: return true;
    default: return is_disjunction_free(f.left()) && is_disjunction_free(f.right());
  }
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Atom, Bot, And, Or, Imp, Neg, LParen, RParen, End };

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  std::string text; // atom name
  std::size_t tok_pos = 0;

  explicit Lexer(std::string_view s) : src(s) { advance(); }

  void skip_space() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space();
    tok_pos = pos;
    if (pos >= src.size()) { tok = Tok::End; return; }
    char c = src[pos];
    if (c == '(') { ++pos; tok = Tok::LParen; return; }
    if (c == ')') { ++pos; tok = Tok::RParen; return; }
    if (c == '&') { ++pos; tok = Tok::And; return; }
    if (c == '|') { ++pos; tok = Tok::Or; return; }
    if (c == '~') { ++pos; tok = Tok::Neg; return; }
    if (c == '-') {
      if (pos + 1 < src.size() && src[pos + 1] == '>') { pos += 2; tok = Tok::Imp; return; }
      throw ParseError("expected '->'", pos);
    }
    if (c == '_') {
      if (src.substr(pos, 3) == "_|_") { pos += 3; tok = Tok::Bot; return; }
      throw ParseError("unexpected '_'", pos);
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      text = std::string(src.substr(start, pos - start));
      tok = text == "bot" ? Tok::Bot : Tok::Atom;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }
};

struct FormulaParser {
  Lexer lx;
  explicit FormulaParser(std::string_view s) : lx(s) {}

  Formula parse() {
    Formula f = imp();
    if (lx.tok != Tok::End)
      throw ParseError("unexpected trailing input", lx.tok_pos);
    return f;
  }

  Formula imp() {
    Formula l = disj();
    if (lx.tok == Tok::Imp) {
      lx.advance();
      return Formula::mk_imp(std::move(l), imp()); // right-associative
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (lx.tok == Tok::Or) {
      lx.advance();
      l = Formula::mk_or(std::move(l), conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = neg();
    while (lx.tok == Tok::And) {
      lx.advance();
      l = Formula::mk_and(std::move(l), neg());
    }
    return l;
  }

  Formula neg() {
    switch (lx.tok) {
      case Tok::Neg: lx.advance(); return Formula::mk_neg(neg());
      case Tok::Bot: lx.advance(); return Formula::mk_bot();
      case Tok::Atom: {
        std::string name = lx.text;
        lx.advance();
        return Formula::mk_atom(name);
      }
      case Tok::LParen: {
        lx.advance();
        Formula f = imp();
        if (lx.tok != Tok::RParen) throw ParseError("expected ')'", lx.tok_pos);
        lx.advance();
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", lx.tok_pos);
      default: throw ParseError("expected a formula", lx.tok_pos);
    }
  }
};

// Precedence levels for printing: -> = 1, | = 2, & = 3, ~/leaf = 4.
int prec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Imp: return f.right().kind() == Formula::Kind::Bot ? 4 : 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

void print_rec(const Formula& f, int min_prec, std::string& out) {
  int p = prec(f);
  bool paren = p < min_prec;
  if (paren) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Atom: out += f.atom().name(); break;
    case Formula::Kind::Bot: out += "bot"; break;
    case Formula::Kind::Imp:
      if (f.right().kind() == Formula::Kind::Bot) { // negation sugar
        out += '~';
        print_rec(f.left(), 4, out);
      } else {
        print_rec(f.left(), 2, out);
        out += " -> ";
        print_rec(f.right(), 1, out);
      }
      break;
    case Formula::Kind::Or:
      print_rec(f.left(), 2, out);
      out += " | ";
      print_rec(f.right(), 3, out);
      break;
    case Formula::Kind::And:
      print_rec(f.left(), 3, out);
      out += " & ";
      print_rec(f.right(), 4, out);
      break;
  }
  if (paren) out += ')';
}

} // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, 1, out);
  return out;
}

} // namespace ptv
