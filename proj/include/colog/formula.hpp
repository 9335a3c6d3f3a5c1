#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "colog/sexpr.hpp"

namespace colog {

// Superscript label on a formula: quantifiers over worlds of the current
// sphere (bullet/star) and over the model's spheres (circ/allsph).
enum class Label {
  SomeWorld,  // bullet
  AllWorlds,  // star
  SomeSphere, // circ
  AllSpheres, // allsph
};

inline const char *label_keyword(Label l) {
  switch (l) {
  case Label::SomeWorld:
    return "bullet";
  case Label::AllWorlds:
    return "star";
  case Label::SomeSphere:
    return "circ";
  case Label::AllSpheres:
    return "allsph";
  }
  return "?";
}

// Immutable formula handle with structural equality. Copies share nodes.
//
// Constants: TopN is true, BotN and BotW are both false. The two falsum
// forms are kept apart syntactically so proof objects can mention either,
// but no semantic difference exists between them.
class Formula {
public:
  enum class Kind {
    Atom,
    TopN,
    BotN,
    BotW,
    Not,
    And,
    Or,
    Imp,
    Labeled,
    Obl, // O(body / condition)
    Perm // P(body / condition)
  };

  Formula() : Formula(top_n()) {}

  Kind kind() const { return node_->kind; }
  const std::string &atom_name() const { return node_->name; }
  Label label() const { return node_->label; }
  Formula lhs() const { return Formula(node_->a); }
  Formula rhs() const { return Formula(node_->b); }
  // Labeled payload / Obl-Perm body and condition aliases.
  Formula body() const { return Formula(node_->a); }
  Formula condition() const { return Formula(node_->b); }

  static Formula atom(std::string name) {
    return make(Kind::Atom, std::move(name));
  }
  static Formula top_n() { return make(Kind::TopN); }
  static Formula bot_n() { return make(Kind::BotN); }
  static Formula bot_w() { return make(Kind::BotW); }
  static Formula negate(Formula f) {
    return make(Kind::Not, "", Label::SomeWorld, f.node_, nullptr);
  }
  static Formula conj(Formula a, Formula b) {
    return make(Kind::And, "", Label::SomeWorld, a.node_, b.node_);
  }
  static Formula disj(Formula a, Formula b) {
    return make(Kind::Or, "", Label::SomeWorld, a.node_, b.node_);
  }
  static Formula imp(Formula a, Formula b) {
    return make(Kind::Imp, "", Label::SomeWorld, a.node_, b.node_);
  }
  static Formula labeled(Formula f, Label l) {
    return make(Kind::Labeled, "", l, f.node_, nullptr);
  }
  static Formula obl(Formula body, Formula cond) {
    return make(Kind::Obl, "", Label::SomeWorld, body.node_, cond.node_);
  }
  static Formula perm(Formula body, Formula cond) {
    return make(Kind::Perm, "", Label::SomeWorld, body.node_, cond.node_);
  }

  friend bool operator==(const Formula &x, const Formula &y) {
    return equal(x.node_.get(), y.node_.get());
  }
  friend bool operator!=(const Formula &x, const Formula &y) {
    return !(x == y);
  }

  // Total order (by canonical text shape); handy for map keys.
  friend bool operator<(const Formula &x, const Formula &y) {
    return compare(x.node_.get(), y.node_.get()) < 0;
  }

private:
  struct Node {
    Kind kind;
    std::string name;
    Label label;
    std::shared_ptr<const Node> a, b;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static Formula make(Kind k, std::string name = "",
                      Label l = Label::SomeWorld, NodePtr a = nullptr,
                      NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->label = l;
    n->a = std::move(a);
    n->b = std::move(b);
    return Formula(std::move(n));
  }

  static bool equal(const Node *x, const Node *y) {
    if (x == y)
      return true;
    if (!x || !y || x->kind != y->kind)
      return false;
    switch (x->kind) {
    case Kind::Atom:
      return x->name == y->name;
    case Kind::TopN:
    case Kind::BotN:
    case Kind::BotW:
      return true;
    case Kind::Not:
      return equal(x->a.get(), y->a.get());
    case Kind::Labeled:
      return x->label == y->label && equal(x->a.get(), y->a.get());
    default:
      return equal(x->a.get(), y->a.get()) && equal(x->b.get(), y->b.get());
    }
  }

  static int compare(const Node *x, const Node *y) {
    if (x == y)
      return 0;
    if (static_cast<int>(x->kind) != static_cast<int>(y->kind))
      return static_cast<int>(x->kind) < static_cast<int>(y->kind) ? -1 : 1;
    switch (x->kind) {
    case Kind::Atom:
      return x->name.compare(y->name);
    case Kind::TopN:
    case Kind::BotN:
    case Kind::BotW:
      return 0;
    case Kind::Not:
      return compare(x->a.get(), y->a.get());
    case Kind::Labeled: {
      if (x->label != y->label)
        return x->label < y->label ? -1 : 1;
      return compare(x->a.get(), y->a.get());
    }
    default: {
      int c = compare(x->a.get(), y->a.get());
      return c != 0 ? c : compare(x->b.get(), y->b.get());
    }
    }
  }

  NodePtr node_;
};

using Bindings = std::map<std::string, Formula>;

// ---------------------------------------------------------------------
// Concrete grammar (s-expressions)
//
//   atom    := [a-z][a-z0-9_]*
//   formula := atom | topn | botn | botw
//            | (not f) | (and f f) | (or f f) | (imp f f)
//            | (lab L f) | (O f f) | (P f f)
//   L       := bullet | star | circ | allsph
//
// "(O a b)" is the conditional obligation O(a/b). The bare identifiers
// topn/botn/botw are reserved and never parse as atoms.
// ---------------------------------------------------------------------

inline bool is_atom_name(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z')
    return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
      return false;
  return s != "topn" && s != "botn" && s != "botw";
}

namespace detail {

inline Formula formula_from_sexpr(const SExpr &node) {
  if (node.is_symbol()) {
    if (node.sym == "topn")
      return Formula::top_n();
    if (node.sym == "botn")
      return Formula::bot_n();
    if (node.sym == "botw")
      return Formula::bot_w();
    if (!is_atom_name(node.sym))
      throw SyntaxError(node.offset, "an atom or constant");
    return Formula::atom(node.sym);
  }

  if (node.items.empty() || !node.items[0].is_symbol())
    throw SyntaxError(node.offset, "a connective");
  const std::string &op = node.items[0].sym;
  auto arity = [&](std::size_t n) {
    if (node.items.size() != n + 1)
      throw SyntaxError(node.offset,
                        "'" + op + "' with " + std::to_string(n) + " operands");
  };

  if (op == "not") {
    arity(1);
    return Formula::negate(formula_from_sexpr(node.items[1]));
  }
  if (op == "and") {
    arity(2);
    return Formula::conj(formula_from_sexpr(node.items[1]),
                         formula_from_sexpr(node.items[2]));
  }
  if (op == "or") {
    arity(2);
    return Formula::disj(formula_from_sexpr(node.items[1]),
                         formula_from_sexpr(node.items[2]));
  }
  if (op == "imp") {
    arity(2);
    return Formula::imp(formula_from_sexpr(node.items[1]),
                        formula_from_sexpr(node.items[2]));
  }
  if (op == "lab") {
    arity(2);
    const SExpr &lnode = node.items[1];
    Label l;
    if (lnode.is_symbol("bullet"))
      l = Label::SomeWorld;
    else if (lnode.is_symbol("star"))
      l = Label::AllWorlds;
    else if (lnode.is_symbol("circ"))
      l = Label::SomeSphere;
    else if (lnode.is_symbol("allsph"))
      l = Label::AllSpheres;
    else
      throw SyntaxError(lnode.offset, "a label (bullet|star|circ|allsph)");
    return Formula::labeled(formula_from_sexpr(node.items[2]), l);
  }
  if (op == "O") {
    arity(2);
    return Formula::obl(formula_from_sexpr(node.items[1]),
                        formula_from_sexpr(node.items[2]));
  }
  if (op == "P") {
    arity(2);
    return Formula::perm(formula_from_sexpr(node.items[1]),
                         formula_from_sexpr(node.items[2]));
  }
  throw SyntaxError(node.items[0].offset, "a connective");
}

inline void print_formula_to(const Formula &f, std::string &out) {
  switch (f.kind()) {
  case Formula::Kind::Atom:
    out += f.atom_name();
    return;
  case Formula::Kind::TopN:
    out += "topn";
    return;
  case Formula::Kind::BotN:
    out += "botn";
    return;
  case Formula::Kind::BotW:
    out += "botw";
    return;
  case Formula::Kind::Not:
    out += "(not ";
    print_formula_to(f.lhs(), out);
    out += ')';
    return;
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Imp:
  case Formula::Kind::Obl:
  case Formula::Kind::Perm: {
    const char *op = f.kind() == Formula::Kind::And  ? "and"
                     : f.kind() == Formula::Kind::Or ? "or"
                     : f.kind() == Formula::Kind::Imp
                         ? "imp"
                         : (f.kind() == Formula::Kind::Obl ? "O" : "P");
    out += '(';
    out += op;
    out += ' ';
    print_formula_to(f.lhs(), out);
    out += ' ';
    print_formula_to(f.rhs(), out);
    out += ')';
    return;
  }
  case Formula::Kind::Labeled:
    out += "(lab ";
    out += label_keyword(f.label());
    out += ' ';
    print_formula_to(f.body(), out);
    out += ')';
    return;
  }
}

} // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::formula_from_sexpr(read_sexpr(text));
}

inline std::string print_formula(const Formula &f) {
  std::string out;
  detail::print_formula_to(f, out);
  return out;
}

// Simultaneous substitution of atoms by formulas. Atoms without a
// binding are left alone. Metavariables of axiom schemas are represented
// as atoms with uppercase names, which the concrete grammar can never
// produce, so schema instantiation cannot capture parsed atoms.
inline Formula substitute(const Formula &f, const Bindings &bindings) {
  switch (f.kind()) {
  case Formula::Kind::Atom: {
    auto it = bindings.find(f.atom_name());
    return it == bindings.end() ? f : it->second;
  }
  case Formula::Kind::TopN:
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
    return f;
  case Formula::Kind::Not:
    return Formula::negate(substitute(f.lhs(), bindings));
  case Formula::Kind::And:
    return Formula::conj(substitute(f.lhs(), bindings),
                         substitute(f.rhs(), bindings));
  case Formula::Kind::Or:
    return Formula::disj(substitute(f.lhs(), bindings),
                         substitute(f.rhs(), bindings));
  case Formula::Kind::Imp:
    return Formula::imp(substitute(f.lhs(), bindings),
                        substitute(f.rhs(), bindings));
  case Formula::Kind::Labeled:
    return Formula::labeled(substitute(f.body(), bindings), f.label());
  case Formula::Kind::Obl:
    return Formula::obl(substitute(f.lhs(), bindings),
                        substitute(f.rhs(), bindings));
  case Formula::Kind::Perm:
    return Formula::perm(substitute(f.lhs(), bindings),
                         substitute(f.rhs(), bindings));
  }
  return f;
}

// Label-form body of O(a/c): (c^bullet and (c -> a)^star)^circ.
inline Formula obligation_in_labels(const Formula &body,
                                    const Formula &cond) {
  return Formula::labeled(
      Formula::conj(
          Formula::labeled(cond, Label::SomeWorld),
          Formula::labeled(Formula::imp(cond, body), Label::AllWorlds)),
      Label::SomeSphere);
}

// Rewrites every O and P into its label form:
//   O(a/c)  ~>  (c^bullet and (c -> a)^star)^circ
//   P(a/c)  ~>  not O(not a / c)
// The result contains no Obl/Perm nodes, and the rewrite is idempotent.
inline Formula translate_deontic(const Formula &f) {
  switch (f.kind()) {
  case Formula::Kind::Atom:
  case Formula::Kind::TopN:
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
    return f;
  case Formula::Kind::Not:
    return Formula::negate(translate_deontic(f.lhs()));
  case Formula::Kind::And:
    return Formula::conj(translate_deontic(f.lhs()),
                         translate_deontic(f.rhs()));
  case Formula::Kind::Or:
    return Formula::disj(translate_deontic(f.lhs()),
                         translate_deontic(f.rhs()));
  case Formula::Kind::Imp:
    return Formula::imp(translate_deontic(f.lhs()),
                        translate_deontic(f.rhs()));
  case Formula::Kind::Labeled:
    return Formula::labeled(translate_deontic(f.body()), f.label());
  case Formula::Kind::Obl:
    return obligation_in_labels(translate_deontic(f.lhs()),
                                translate_deontic(f.rhs()));
  case Formula::Kind::Perm:
    return Formula::negate(
        obligation_in_labels(Formula::negate(translate_deontic(f.lhs())),
                             translate_deontic(f.rhs())));
  }
  return f;
}

inline void collect_atoms(const Formula &f, std::set<std::string> &out) {
  switch (f.kind()) {
  case Formula::Kind::Atom:
    out.insert(f.atom_name());
    return;
  case Formula::Kind::TopN:
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
    return;
  case Formula::Kind::Not:
  case Formula::Kind::Labeled:
    collect_atoms(f.lhs(), out);
    return;
  default:
    collect_atoms(f.lhs(), out);
    collect_atoms(f.rhs(), out);
  }
}

inline std::set<std::string> formula_atoms(const Formula &f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

inline bool contains_deontic(const Formula &f) {
  switch (f.kind()) {
  case Formula::Kind::Obl:
  case Formula::Kind::Perm:
    return true;
  case Formula::Kind::Atom:
  case Formula::Kind::TopN:
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
    return false;
  case Formula::Kind::Not:
  case Formula::Kind::Labeled:
    return contains_deontic(f.lhs());
  default:
    return contains_deontic(f.lhs()) || contains_deontic(f.rhs());
  }
}

} // namespace colog
