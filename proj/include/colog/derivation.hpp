#pragma once

#include <optional>
#include <string>
#include <vector>

#include "colog/formula.hpp"
#include "colog/sexpr.hpp"

namespace colog {

// One binder in a labeled-deduction context: a named sphere, a named
// world, the witness world of the enclosing sphere (from a bullet
// elimination), or the generic sphere (facts proved under it hold in
// every named sphere).
struct ContextItem {
  enum class Kind { Sphere, World, Witness, Generic };
  Kind kind = Kind::Sphere;
  std::string name; // Sphere and World only

  static ContextItem sphere(std::string n) {
    return {Kind::Sphere, std::move(n)};
  }
  static ContextItem world(std::string n) { return {Kind::World, std::move(n)}; }
  static ContextItem witness() { return {Kind::Witness, ""}; }
  static ContextItem generic() { return {Kind::Generic, ""}; }

  bool sphere_like() const { return kind == Kind::Sphere || kind == Kind::Generic; }
  bool world_like() const { return kind == Kind::World || kind == Kind::Witness; }

  friend bool operator==(const ContextItem &a, const ContextItem &b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator!=(const ContextItem &a, const ContextItem &b) {
    return !(a == b);
  }
};

using Context = std::vector<ContextItem>;

inline bool context_is_prefix(const Context &a, const Context &b) {
  if (a.size() > b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i])
      return false;
  return true;
}

// A judgment is either a formula or a sphere-inclusion assumption ⊱N
// ("the current sphere is included in N"), held under a context.
struct Judgment {
  enum class Kind { Formula, Inclusion };
  Kind kind = Kind::Formula;
  Formula formula;        // Kind::Formula
  std::string incl_outer; // Kind::Inclusion: the enclosing sphere's name
  Context ctx;

  static Judgment of(Formula f, Context c) {
    Judgment j;
    j.kind = Kind::Formula;
    j.formula = std::move(f);
    j.ctx = std::move(c);
    return j;
  }
  static Judgment inclusion(std::string outer, Context c) {
    Judgment j;
    j.kind = Kind::Inclusion;
    j.incl_outer = std::move(outer);
    j.ctx = std::move(c);
    return j;
  }

  bool is_formula() const { return kind == Kind::Formula; }

  friend bool operator==(const Judgment &a, const Judgment &b) {
    if (a.kind != b.kind || a.ctx != b.ctx)
      return false;
    return a.kind == Kind::Formula ? a.formula == b.formula
                                   : a.incl_outer == b.incl_outer;
  }
  friend bool operator!=(const Judgment &a, const Judgment &b) {
    return !(a == b);
  }
};

// Natural-deduction tree node. Hypothesis leaves use rule "hyp" (formula)
// or "hyp-inc" (sphere inclusion) and carry the discharge index that
// closes them; inner nodes carry a rule tag, their conclusion, optional
// discharge index and premise subtrees.
struct DerivNode {
  std::string rule;
  Judgment conclusion;
  std::optional<int> discharge;
  int hyp_index = -1; // hyp / hyp-inc leaves only
  std::vector<DerivNode> children;
};

struct Derivation {
  DerivNode root;
};

// ---------------------------------------------------------------------
// Derivation file format:
//   (node <rule> (ctx <item>*) <formula-or-(incl N)> (discharge k)? <child>*)
//   (hyp k <formula> (ctx <item>*))
//   (hyp-inc k N (ctx <item>*))
// with context items (sph N) | (wld u) | wit | gen.
// ---------------------------------------------------------------------

namespace detail {

inline bool is_label_name(std::string_view s) {
  if (s.empty())
    return false;
  char c0 = s[0];
  if (!((c0 >= 'a' && c0 <= 'z') || (c0 >= 'A' && c0 <= 'Z')))
    return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
          (c >= '0' && c <= '9') || c == '_'))
      return false;
  return true;
}

inline Context context_from_sexpr(const SExpr &node) {
  if (!node.is_list() || node.head() != "ctx")
    throw SyntaxError(node.offset, "(ctx ...)");
  Context ctx;
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const SExpr &item = node.items[i];
    if (item.is_symbol("wit")) {
      ctx.push_back(ContextItem::witness());
    } else if (item.is_symbol("gen")) {
      ctx.push_back(ContextItem::generic());
    } else if (item.is_list() && item.items.size() == 2 &&
               (item.head() == "sph" || item.head() == "wld") &&
               item.items[1].is_symbol() &&
               is_label_name(item.items[1].sym)) {
      ctx.push_back(item.head() == "sph"
                        ? ContextItem::sphere(item.items[1].sym)
                        : ContextItem::world(item.items[1].sym));
    } else {
      throw SyntaxError(item.offset, "(sph n) | (wld u) | wit | gen");
    }
  }
  return ctx;
}

inline DerivNode derivation_from_sexpr(const SExpr &node) {
  if (!node.is_list())
    throw SyntaxError(node.offset, "(node ...) | (hyp ...) | (hyp-inc ...)");
  std::string_view head = node.head();

  DerivNode out;
  if (head == "hyp") {
    if (node.items.size() != 4)
      throw SyntaxError(node.offset, "(hyp k <formula> (ctx ...))");
    out.rule = "hyp";
    out.hyp_index = sexpr_int(node.items[1], "a hypothesis index");
    out.conclusion = Judgment::of(formula_from_sexpr(node.items[2]),
                                  context_from_sexpr(node.items[3]));
    return out;
  }
  if (head == "hyp-inc") {
    if (node.items.size() != 4 || !node.items[2].is_symbol() ||
        !is_label_name(node.items[2].sym))
      throw SyntaxError(node.offset, "(hyp-inc k N (ctx ...))");
    out.rule = "hyp-inc";
    out.hyp_index = sexpr_int(node.items[1], "a hypothesis index");
    out.conclusion = Judgment::inclusion(node.items[2].sym,
                                         context_from_sexpr(node.items[3]));
    return out;
  }
  if (head != "node" || node.items.size() < 4 || !node.items[1].is_symbol())
    throw SyntaxError(node.offset, "(node <rule> (ctx ...) <judgment> ...)");

  out.rule = node.items[1].sym;
  Context ctx = context_from_sexpr(node.items[2]);

  const SExpr &body = node.items[3];
  if (body.is_list() && body.head() == "incl") {
    if (body.items.size() != 2 || !body.items[1].is_symbol() ||
        !is_label_name(body.items[1].sym))
      throw SyntaxError(body.offset, "(incl N)");
    out.conclusion = Judgment::inclusion(body.items[1].sym, std::move(ctx));
  } else {
    out.conclusion = Judgment::of(formula_from_sexpr(body), std::move(ctx));
  }

  std::size_t child_from = 4;
  if (node.items.size() > 4 && node.items[4].head() == "discharge") {
    const SExpr &d = node.items[4];
    if (d.items.size() != 2)
      throw SyntaxError(d.offset, "(discharge k)");
    out.discharge = sexpr_int(d.items[1], "a discharge index");
    child_from = 5;
  }
  for (std::size_t i = child_from; i < node.items.size(); ++i)
    out.children.push_back(derivation_from_sexpr(node.items[i]));
  return out;
}

inline void print_context_to(const Context &ctx, std::string &out) {
  out += "(ctx";
  for (const ContextItem &item : ctx) {
    switch (item.kind) {
    case ContextItem::Kind::Sphere:
      out += " (sph " + item.name + ")";
      break;
    case ContextItem::Kind::World:
      out += " (wld " + item.name + ")";
      break;
    case ContextItem::Kind::Witness:
      out += " wit";
      break;
    case ContextItem::Kind::Generic:
      out += " gen";
      break;
    }
  }
  out += ")";
}

inline void print_derivation_to(const DerivNode &n, std::string &out,
                                int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out += pad;
  if (n.rule == "hyp" || n.rule == "hyp-inc") {
    out += "(" + n.rule + " " + std::to_string(n.hyp_index) + " ";
    if (n.rule == "hyp")
      out += print_formula(n.conclusion.formula);
    else
      out += n.conclusion.incl_outer;
    out += " ";
    print_context_to(n.conclusion.ctx, out);
    out += ")";
    return;
  }
  out += "(node " + n.rule + " ";
  print_context_to(n.conclusion.ctx, out);
  out += " ";
  if (n.conclusion.is_formula())
    out += print_formula(n.conclusion.formula);
  else
    out += "(incl " + n.conclusion.incl_outer + ")";
  if (n.discharge)
    out += " (discharge " + std::to_string(*n.discharge) + ")";
  for (const DerivNode &child : n.children) {
    out += "\n";
    print_derivation_to(child, out, depth + 1);
  }
  out += ")";
}

} // namespace detail

inline Derivation parse_derivation(std::string_view text) {
  return {detail::derivation_from_sexpr(read_sexpr(text))};
}

inline std::string print_derivation(const Derivation &d) {
  std::string out;
  detail::print_derivation_to(d.root, out, 0);
  out += "\n";
  return out;
}

} // namespace colog
