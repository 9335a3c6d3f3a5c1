#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "colog/derivation.hpp"
#include "colog/formula.hpp"
#include "colog/nd_check.hpp"

namespace colog {

// Derivation templates for the CO axioms and congruence rules, emitted as
// checkable trees. A2 splits into its two implication directions; A1 needs
// no tree (it is the definition of P).
enum class TemplateId { R3, R4, A2L, A2R, A3, A4, A5, A6, A7, A8 };

inline const char *template_name(TemplateId id) {
  static const char *names[] = {"r3", "r4", "a2l", "a2r", "a3",
                                "a4", "a5", "a6",  "a7",  "a8"};
  return names[static_cast<int>(id)];
}

inline std::optional<TemplateId> template_from_name(std::string_view s) {
  for (int i = 0; i < 10; ++i) {
    TemplateId id = static_cast<TemplateId>(i);
    if (s == template_name(id))
      return id;
  }
  return std::nullopt;
}

inline std::vector<TemplateId> all_templates() {
  return {TemplateId::R3, TemplateId::R4, TemplateId::A2L, TemplateId::A2R,
          TemplateId::A3, TemplateId::A4, TemplateId::A5,  TemplateId::A6,
          TemplateId::A7, TemplateId::A8};
}

class MissingAux : public std::runtime_error {
public:
  MissingAux() : std::runtime_error("template requires an aux derivation") {}
};

class NameCollision : public std::runtime_error {
public:
  explicit NameCollision(const std::string &name)
      : std::runtime_error("name '" + name + "' already occurs in the derivation") {}
};

class NotClosed : public std::runtime_error {
public:
  NotClosed() : std::runtime_error("derivation has open hypotheses") {}
};

// Root formula a template derives: the label translation of the axiom
// (direction) instantiated at a, b, c.
inline Formula template_root_formula(TemplateId id, const Formula &a,
                                     const Formula &b, const Formula &c) {
  using F = Formula;
  auto TO = [](const F &body, const F &cond) {
    return obligation_in_labels(body, cond);
  };
  switch (id) {
  case TemplateId::R3:
    return F::imp(TO(a, c), TO(b, c));
  case TemplateId::R4:
    return F::imp(TO(a, c), TO(a, b));
  case TemplateId::A2L:
    return F::imp(TO(F::conj(a, b), c), F::conj(TO(a, c), TO(b, c)));
  case TemplateId::A2R:
    return F::imp(F::conj(TO(a, c), TO(b, c)), TO(F::conj(a, b), c));
  case TemplateId::A3:
    return F::imp(TO(a, c), F::negate(TO(F::negate(a), c)));
  case TemplateId::A4:
    return F::imp(TO(F::top_n(), c), TO(c, c));
  case TemplateId::A5:
    return F::imp(TO(F::top_n(), c), TO(F::top_n(), F::disj(b, c)));
  case TemplateId::A6:
    return F::imp(F::conj(TO(a, b), TO(a, c)), TO(a, F::disj(b, c)));
  case TemplateId::A7:
    return F::imp(F::conj(F::negate(TO(F::negate(F::bot_n()), c)),
                          TO(a, F::disj(b, c))),
                  TO(a, b));
  case TemplateId::A8:
    return F::imp(F::conj(F::negate(TO(F::negate(b), F::disj(b, c))),
                          TO(a, F::disj(b, c))),
                  TO(a, b));
  }
  return Formula::top_n();
}

namespace tpl {

// Small builders that infer each node's conclusion from its premises, so
// the generators below read like the trees they produce.

inline DerivNode hyp(int k, Formula f, Context ctx) {
  DerivNode n;
  n.rule = "hyp";
  n.hyp_index = k;
  n.conclusion = Judgment::of(std::move(f), std::move(ctx));
  return n;
}

inline DerivNode hyp_inc(int k, std::string outer, Context ctx) {
  DerivNode n;
  n.rule = "hyp-inc";
  n.hyp_index = k;
  n.conclusion = Judgment::inclusion(std::move(outer), std::move(ctx));
  return n;
}

inline DerivNode make(std::string rule, Judgment concl,
                      std::vector<DerivNode> children,
                      std::optional<int> discharge = std::nullopt) {
  DerivNode n;
  n.rule = std::move(rule);
  n.conclusion = std::move(concl);
  n.discharge = discharge;
  n.children = std::move(children);
  return n;
}

inline Context drop_last(const Context &ctx) {
  return Context(ctx.begin(), ctx.end() - 1);
}

inline DerivNode and_i(DerivNode a, DerivNode b) {
  Judgment c = Judgment::of(
      Formula::conj(a.conclusion.formula, b.conclusion.formula),
      a.conclusion.ctx);
  return make("and-i", std::move(c), {std::move(a), std::move(b)});
}

inline DerivNode and_e1(DerivNode p) {
  Judgment c = Judgment::of(p.conclusion.formula.lhs(), p.conclusion.ctx);
  return make("and-e1", std::move(c), {std::move(p)});
}

inline DerivNode and_e2(DerivNode p) {
  Judgment c = Judgment::of(p.conclusion.formula.rhs(), p.conclusion.ctx);
  return make("and-e2", std::move(c), {std::move(p)});
}

inline DerivNode or_i1(DerivNode p, Formula right) {
  Judgment c = Judgment::of(
      Formula::disj(p.conclusion.formula, std::move(right)),
      p.conclusion.ctx);
  return make("or-i1", std::move(c), {std::move(p)});
}

inline DerivNode or_i2(Formula left, DerivNode p) {
  Judgment c = Judgment::of(
      Formula::disj(std::move(left), p.conclusion.formula),
      p.conclusion.ctx);
  return make("or-i2", std::move(c), {std::move(p)});
}

inline DerivNode or_e(DerivNode major, int discharge, DerivNode left,
                      DerivNode right) {
  Judgment c = left.conclusion;
  return make("or-e", std::move(c),
              {std::move(major), std::move(left), std::move(right)},
              discharge);
}

inline DerivNode imp_i(Formula antecedent, int discharge, DerivNode p) {
  Judgment c = Judgment::of(
      Formula::imp(std::move(antecedent), p.conclusion.formula),
      p.conclusion.ctx);
  return make("imp-i", std::move(c), {std::move(p)}, discharge);
}

inline DerivNode imp_e(DerivNode minor, DerivNode major) {
  Judgment c =
      Judgment::of(major.conclusion.formula.rhs(), major.conclusion.ctx);
  return make("imp-e", std::move(c), {std::move(minor), std::move(major)});
}

inline DerivNode neg_i(Formula hypothesis, int discharge, DerivNode falsum) {
  Judgment c = Judgment::of(Formula::negate(std::move(hypothesis)),
                            falsum.conclusion.ctx);
  return make("neg-i", std::move(c), {std::move(falsum)}, discharge);
}

inline DerivNode neg_e(DerivNode pos, DerivNode neg, Formula falsum) {
  Judgment c = Judgment::of(std::move(falsum), pos.conclusion.ctx);
  return make("neg-e", std::move(c), {std::move(pos), std::move(neg)});
}

inline DerivNode efq(DerivNode falsum, Formula target) {
  Judgment c = Judgment::of(std::move(target), falsum.conclusion.ctx);
  return make("efq", std::move(c), {std::move(falsum)});
}

inline DerivNode raa(Formula target, int discharge, DerivNode falsum) {
  Judgment c = Judgment::of(std::move(target), falsum.conclusion.ctx);
  return make("raa", std::move(c), {std::move(falsum)}, discharge);
}

inline DerivNode top_i(Context ctx) {
  return make("top-i", Judgment::of(Formula::top_n(), std::move(ctx)), {});
}

inline DerivNode weaken(DerivNode p, Context to) {
  Judgment c = p.conclusion;
  c.ctx = std::move(to);
  return make("weaken", std::move(c), {std::move(p)});
}

inline DerivNode lower(DerivNode p) {
  Judgment c = Judgment::of(p.conclusion.formula, drop_last(p.conclusion.ctx));
  return make("lower", std::move(c), {std::move(p)});
}

inline DerivNode circ_i(DerivNode p) {
  Judgment c = Judgment::of(
      Formula::labeled(p.conclusion.formula, Label::SomeSphere),
      drop_last(p.conclusion.ctx));
  return make("circ-i", std::move(c), {std::move(p)});
}

inline DerivNode circ_e(DerivNode major, int discharge, DerivNode sub) {
  Judgment c = sub.conclusion;
  return make("circ-e", std::move(c), {std::move(major), std::move(sub)},
              discharge);
}

inline DerivNode star_i(DerivNode p) {
  Judgment c = Judgment::of(
      Formula::labeled(p.conclusion.formula, Label::AllWorlds),
      drop_last(p.conclusion.ctx));
  return make("star-i", std::move(c), {std::move(p)});
}

inline DerivNode star_e(DerivNode p, ContextItem world) {
  Context ctx = p.conclusion.ctx;
  ctx.push_back(std::move(world));
  Judgment c = Judgment::of(p.conclusion.formula.body(), std::move(ctx));
  return make("star-e", std::move(c), {std::move(p)});
}

inline DerivNode bullet_i(DerivNode p) {
  Judgment c = Judgment::of(
      Formula::labeled(p.conclusion.formula, Label::SomeWorld),
      drop_last(p.conclusion.ctx));
  return make("bullet-i", std::move(c), {std::move(p)});
}

inline DerivNode bullet_e(DerivNode major, int discharge, DerivNode sub) {
  Judgment c = sub.conclusion;
  return make("bullet-e", std::move(c), {std::move(major), std::move(sub)},
              discharge);
}

inline DerivNode bullet_wit(DerivNode p) {
  Context ctx = p.conclusion.ctx;
  ctx.push_back(ContextItem::witness());
  Judgment c = Judgment::of(p.conclusion.formula.body(), std::move(ctx));
  return make("bullet-wit", std::move(c), {std::move(p)});
}

inline DerivNode gen_inst(DerivNode p, std::string sphere) {
  Context ctx = drop_last(p.conclusion.ctx);
  ctx.push_back(ContextItem::sphere(std::move(sphere)));
  Judgment c = Judgment::of(p.conclusion.formula, std::move(ctx));
  return make("gen-inst", std::move(c), {std::move(p)});
}

inline DerivNode case_split(int discharge, DerivNode left, DerivNode right) {
  Judgment c = left.conclusion;
  return make("case-split", std::move(c), {std::move(left), std::move(right)},
              discharge);
}

inline DerivNode mono_star(DerivNode starred, DerivNode incl) {
  Judgment c = Judgment::of(starred.conclusion.formula, incl.conclusion.ctx);
  return make("mono-star", std::move(c), {std::move(starred), std::move(incl)});
}

inline DerivNode mono_bullet(DerivNode dotted, DerivNode incl) {
  Context ctx = drop_last(dotted.conclusion.ctx);
  ctx.push_back(ContextItem::sphere(incl.conclusion.incl_outer));
  Judgment c = Judgment::of(dotted.conclusion.formula, std::move(ctx));
  return make("mono-bullet", std::move(c),
              {std::move(dotted), std::move(incl)});
}

inline void collect_names(const DerivNode &n, std::set<std::string> &out) {
  nd::judgment_names(n.conclusion, out);
  for (const DerivNode &child : n.children)
    collect_names(child, out);
}

inline DerivNode rename_context_names(const DerivNode &n,
                                      const std::string &from_sphere,
                                      const std::string &to_sphere,
                                      const std::string &from_world,
                                      const std::string &to_world) {
  DerivNode out = n;
  out.children.clear();
  for (ContextItem &item : out.conclusion.ctx) {
    if (item.kind == ContextItem::Kind::Sphere && item.name == from_sphere)
      item.name = to_sphere;
    else if (item.kind == ContextItem::Kind::World && item.name == from_world)
      item.name = to_world;
  }
  if (out.conclusion.kind == Judgment::Kind::Inclusion &&
      out.conclusion.incl_outer == from_sphere)
    out.conclusion.incl_outer = to_sphere;
  for (const DerivNode &child : n.children)
    out.children.push_back(rename_context_names(child, from_sphere, to_sphere,
                                                from_world, to_world));
  return out;
}

} // namespace tpl

// Proof of (f -> f) and (f -> f) with no premises and no binder names;
// transfer it to obtain the aux equivalence R3/R4 need for a = b.
inline Derivation reflexive_equivalence(const Formula &f) {
  using namespace tpl;
  DerivNode left = imp_i(f, 1, hyp(1, f, {}));
  DerivNode right = imp_i(f, 2, hyp(2, f, {}));
  return {and_i(std::move(left), std::move(right))};
}

// Lemma-1 transfer: lifts a closed derivation of a theorem into the
// context (sphere N, world u). The fixed names must not occur anywhere in
// the input, so every rule keeps checking after the prefix is added.
inline Derivation transfer(const Derivation &d) {
  if (!d.root.conclusion.ctx.empty())
    throw std::invalid_argument("transfer expects a root in the empty context");
  if (!open_hypotheses(d.root).empty())
    throw NotClosed();

  std::set<std::string> names;
  tpl::collect_names(d.root, names);
  for (const char *reserved : {"N", "u"})
    if (names.count(reserved))
      throw NameCollision(reserved);

  Context prefix = {ContextItem::sphere("N"), ContextItem::world("u")};
  struct Prefixer {
    const Context &prefix;
    DerivNode apply(const DerivNode &n) const {
      DerivNode out = n;
      out.children.clear();
      Context ctx = prefix;
      ctx.insert(ctx.end(), n.conclusion.ctx.begin(), n.conclusion.ctx.end());
      out.conclusion.ctx = std::move(ctx);
      for (const DerivNode &child : n.children)
        out.children.push_back(apply(child));
      return out;
    }
  } prefixer{prefix};
  return {prefixer.apply(d.root)};
}

namespace tpl {

// Binder names used by the generated trees. Distinct from the transfer
// names N/u so every emitted template stays transferable.
inline ContextItem sph1() { return ContextItem::sphere("m1"); }
inline ContextItem sph2() { return ContextItem::sphere("m2"); }
inline ContextItem wld1() { return ContextItem::world("w1"); }
inline ContextItem wld2() { return ContextItem::world("w2"); }

// Validates and re-roots the aux equivalence at (sphere, world) binders of
// the template being generated.
inline DerivNode splice_aux(const Derivation &aux, const Formula &x,
                            const Formula &y, const std::string &sphere,
                            const std::string &world) {
  Formula want = Formula::conj(Formula::imp(x, y), Formula::imp(y, x));
  Judgment expected = Judgment::of(
      want, {ContextItem::sphere("N"), ContextItem::world("u")});
  if (aux.root.conclusion != expected)
    throw std::invalid_argument(
        "aux must derive the equivalence in the context (sph N) (wld u)");
  std::set<std::string> names;
  collect_names(aux.root, names);
  for (const std::string &taken : {sphere, world})
    if (taken != "N" && taken != "u" && names.count(taken))
      throw NameCollision(taken);
  return rename_context_names(aux.root, "N", sphere, "u", world);
}

inline Formula ob_body(const Formula &body, const Formula &cond) {
  return Formula::conj(
      Formula::labeled(cond, Label::SomeWorld),
      Formula::labeled(Formula::imp(cond, body), Label::AllWorlds));
}

inline DerivNode gen_r3(const Formula &a, const Formula &b, const Formula &c,
                        const Derivation &aux) {
  Formula to_ac = obligation_in_labels(a, c);
  Context s = {sph1()};
  Context sw = {sph1(), wld1()};

  DerivNode aux_here = splice_aux(aux, a, b, "m1", "w1");
  DerivNode body_hyp = hyp(2, ob_body(a, c), s);

  DerivNode a_at = imp_e(hyp(3, c, sw), star_e(and_e2(body_hyp), wld1()));
  DerivNode b_at = imp_e(std::move(a_at), and_e1(std::move(aux_here)));
  DerivNode star_part = star_i(imp_i(c, 3, std::move(b_at)));
  DerivNode new_body =
      and_i(and_e1(hyp(2, ob_body(a, c), s)), std::move(star_part));
  DerivNode sub = circ_i(std::move(new_body));
  DerivNode opened = circ_e(hyp(1, to_ac, {}), 2, std::move(sub));
  return imp_i(to_ac, 1, std::move(opened));
}

inline DerivNode gen_r4(const Formula &a, const Formula &b, const Formula &c,
                        const Derivation &aux) {
  Formula to_ac = obligation_in_labels(a, c);
  Context s = {sph1()};
  Context sw1 = {sph1(), wld1()};
  Context sw2 = {sph1(), wld2()};

  // Witness: from some c-world and c -> b, a b-world of the same sphere.
  DerivNode b_at = imp_e(hyp(3, c, sw1),
                         and_e2(splice_aux(aux, b, c, "m1", "w1")));
  DerivNode witness =
      bullet_e(and_e1(hyp(2, ob_body(a, c), s)), 3, bullet_i(std::move(b_at)));

  // (b -> a)^star: b gives c by the aux equivalence, c gives a.
  DerivNode c_at = imp_e(hyp(4, b, sw2),
                         and_e1(splice_aux(aux, b, c, "m1", "w2")));
  DerivNode a_at = imp_e(
      std::move(c_at), star_e(and_e2(hyp(2, ob_body(a, c), s)), wld2()));
  DerivNode star_part = star_i(imp_i(b, 4, std::move(a_at)));

  DerivNode sub = circ_i(and_i(std::move(witness), std::move(star_part)));
  DerivNode opened = circ_e(hyp(1, to_ac, {}), 2, std::move(sub));
  return imp_i(to_ac, 1, std::move(opened));
}

inline DerivNode gen_a2l(const Formula &a, const Formula &b,
                         const Formula &c) {
  Formula ab = Formula::conj(a, b);
  Formula to_ab_c = obligation_in_labels(ab, c);
  Context s = {sph1()};
  Context sw = {sph1(), wld1()};

  // One direction of the projection; `first` picks the conjunct.
  auto project = [&](bool first, int d_circ, int d_imp) {
    DerivNode ab_at = imp_e(hyp(d_imp, c, sw),
                            star_e(and_e2(hyp(d_circ, ob_body(ab, c), s)),
                                   wld1()));
    DerivNode tgt = first ? and_e1(std::move(ab_at)) : and_e2(std::move(ab_at));
    DerivNode star_part = star_i(imp_i(c, d_imp, std::move(tgt)));
    DerivNode new_body =
        and_i(and_e1(hyp(d_circ, ob_body(ab, c), s)), std::move(star_part));
    return circ_e(hyp(1, to_ab_c, {}), d_circ, circ_i(std::move(new_body)));
  };

  DerivNode both = and_i(project(true, 2, 3), project(false, 4, 5));
  return imp_i(to_ab_c, 1, std::move(both));
}

inline DerivNode gen_a2r(const Formula &a, const Formula &b,
                         const Formula &c) {
  Formula to_ac = obligation_in_labels(a, c);
  Formula to_bc = obligation_in_labels(b, c);
  Formula antecedent = Formula::conj(to_ac, to_bc);
  Context s1 = {sph1()}, s2 = {sph2()};

  // Build the a-and-b sphere inside the inner of the two witnessing
  // spheres; `at_first` says which sphere is inner.
  auto branch = [&](bool at_first, int d_imp) {
    Context inner = at_first ? s1 : s2;
    Context inner_w = inner;
    inner_w.push_back(wld1());
    int h_inner = at_first ? 2 : 3;
    int h_outer = at_first ? 3 : 2;
    Formula f_inner = at_first ? ob_body(a, c) : ob_body(b, c);
    Formula f_outer = at_first ? ob_body(b, c) : ob_body(a, c);
    std::string outer_name = at_first ? "m2" : "m1";
    Context outer = at_first ? s2 : s1;

    // The outer sphere's star-formula transfers down the inclusion.
    DerivNode transferred = mono_star(
        and_e2(hyp(h_outer, f_outer, outer)), hyp_inc(4, outer_name, inner));
    DerivNode from_outer =
        imp_e(hyp(d_imp, c, inner_w), star_e(std::move(transferred), wld1()));
    DerivNode from_inner =
        imp_e(hyp(d_imp, c, inner_w),
              star_e(and_e2(hyp(h_inner, f_inner, inner)), wld1()));
    DerivNode pair = at_first
                         ? and_i(std::move(from_inner), std::move(from_outer))
                         : and_i(std::move(from_outer), std::move(from_inner));
    DerivNode star_part = star_i(imp_i(c, d_imp, std::move(pair)));
    DerivNode new_body =
        and_i(and_e1(hyp(h_inner, f_inner, inner)), std::move(star_part));
    return circ_i(std::move(new_body));
  };

  DerivNode split = case_split(4, branch(true, 5), branch(false, 6));
  DerivNode open_b = circ_e(and_e2(hyp(1, antecedent, {})), 3, std::move(split));
  DerivNode open_a = circ_e(and_e1(hyp(1, antecedent, {})), 2, std::move(open_b));
  return imp_i(antecedent, 1, std::move(open_a));
}

inline DerivNode gen_a3(const Formula &a, const Formula &c) {
  Formula na = Formula::negate(a);
  Formula to_ac = obligation_in_labels(a, c);
  Formula to_nac = obligation_in_labels(na, c);
  Context s1 = {sph1()}, s2 = {sph2()};

  // Contradiction inside the inner sphere: its c-witness satisfies both a
  // and not a once the outer star-formula is transferred down.
  auto clash = [&](bool second_inner, int d_world) {
    Context inner = second_inner ? s2 : s1;
    Context inner_w = inner;
    inner_w.push_back(wld1());
    int h_inner = second_inner ? 4 : 3;
    int h_outer = second_inner ? 3 : 4;
    Formula f_inner = second_inner ? ob_body(na, c) : ob_body(a, c);
    Formula f_outer = second_inner ? ob_body(a, c) : ob_body(na, c);
    std::string outer_name = second_inner ? "m1" : "m2";
    Context outer = second_inner ? s1 : s2;

    DerivNode transferred = mono_star(
        and_e2(hyp(h_outer, f_outer, outer)), hyp_inc(5, outer_name, inner));
    DerivNode from_outer =
        imp_e(hyp(d_world, c, inner_w), star_e(std::move(transferred), wld1()));
    DerivNode from_inner =
        imp_e(hyp(d_world, c, inner_w),
              star_e(and_e2(hyp(h_inner, f_inner, inner)), wld1()));
    DerivNode pos = second_inner ? std::move(from_outer) : std::move(from_inner);
    DerivNode neg = second_inner ? std::move(from_inner) : std::move(from_outer);
    DerivNode falsum = neg_e(std::move(pos), std::move(neg), Formula::bot_n());
    DerivNode witnessed = bullet_e(and_e1(hyp(h_inner, f_inner, inner)),
                                   d_world, lower(std::move(falsum)));
    return lower(std::move(witnessed));
  };

  DerivNode split = case_split(5, clash(true, 6), clash(false, 7));
  DerivNode open_n = circ_e(hyp(2, to_nac, {}), 4, std::move(split));
  DerivNode open_a = circ_e(hyp(1, to_ac, {}), 3, std::move(open_n));
  DerivNode negated = neg_i(to_nac, 2, std::move(open_a));
  return imp_i(to_ac, 1, std::move(negated));
}

inline DerivNode gen_a4(const Formula &c) {
  Formula to_top_c = obligation_in_labels(Formula::top_n(), c);
  Context s = {sph1()};
  Context gw = {ContextItem::generic(), wld1()};

  // c -> c holds at every world of every sphere; instantiate at m1.
  DerivNode refl = star_i(imp_i(c, 3, hyp(3, c, gw)));
  DerivNode star_part = gen_inst(std::move(refl), "m1");
  DerivNode new_body = and_i(
      and_e1(hyp(2, ob_body(Formula::top_n(), c), s)), std::move(star_part));
  DerivNode opened = circ_e(hyp(1, to_top_c, {}), 2, circ_i(std::move(new_body)));
  return imp_i(to_top_c, 1, std::move(opened));
}

inline DerivNode gen_a5(const Formula &b, const Formula &c) {
  Formula to_top_c = obligation_in_labels(Formula::top_n(), c);
  Formula bc = Formula::disj(b, c);
  Context s = {sph1()};
  Context sw = {sph1(), wld1()};

  DerivNode witness = bullet_i(
      or_i2(b, bullet_wit(and_e1(hyp(2, ob_body(Formula::top_n(), c), s)))));
  DerivNode star_part = star_i(imp_i(bc, 3, top_i(sw)));
  DerivNode opened =
      circ_e(hyp(1, to_top_c, {}), 2,
             circ_i(and_i(std::move(witness), std::move(star_part))));
  return imp_i(to_top_c, 1, std::move(opened));
}

inline DerivNode gen_a6(const Formula &a, const Formula &b,
                        const Formula &c) {
  Formula to_ab = obligation_in_labels(a, b);
  Formula to_ac = obligation_in_labels(a, c);
  Formula antecedent = Formula::conj(to_ab, to_ac);
  Formula bc = Formula::disj(b, c);
  Context s1 = {sph1()}, s2 = {sph2()};

  // Build the (b or c) sphere inside the inner witnessing sphere. The
  // inner witness injects into b or c; a follows by cases on b or c.
  auto branch = [&](bool first_inner, int d_or, int d_case) {
    Context inner = first_inner ? s1 : s2;
    Context inner_w = inner;
    inner_w.push_back(wld1());
    int h_inner = first_inner ? 2 : 3;
    int h_outer = first_inner ? 3 : 2;
    Formula f_inner = first_inner ? ob_body(a, b) : ob_body(a, c);
    Formula f_outer = first_inner ? ob_body(a, c) : ob_body(a, b);
    std::string outer_name = first_inner ? "m2" : "m1";
    Context outer = first_inner ? s2 : s1;

    DerivNode wit_inj =
        first_inner
            ? or_i1(bullet_wit(and_e1(hyp(h_inner, f_inner, inner))), c)
            : or_i2(b, bullet_wit(and_e1(hyp(h_inner, f_inner, inner))));
    DerivNode witness = bullet_i(std::move(wit_inj));

    DerivNode transferred = mono_star(
        and_e2(hyp(h_outer, f_outer, outer)), hyp_inc(4, outer_name, inner));
    DerivNode from_inner =
        imp_e(hyp(d_case, first_inner ? b : c, inner_w),
              star_e(and_e2(hyp(h_inner, f_inner, inner)), wld1()));
    DerivNode from_outer =
        imp_e(hyp(d_case, first_inner ? c : b, inner_w),
              star_e(std::move(transferred), wld1()));
    DerivNode case_b = first_inner ? std::move(from_inner) : std::move(from_outer);
    DerivNode case_c = first_inner ? std::move(from_outer) : std::move(from_inner);
    DerivNode cases = or_e(hyp(d_or, bc, inner_w), d_case, std::move(case_b),
                           std::move(case_c));
    DerivNode star_part = star_i(imp_i(bc, d_or, std::move(cases)));
    return circ_i(and_i(std::move(witness), std::move(star_part)));
  };

  DerivNode split = case_split(4, branch(true, 5, 6), branch(false, 7, 8));
  DerivNode open_c = circ_e(and_e2(hyp(1, antecedent, {})), 3, std::move(split));
  DerivNode open_b = circ_e(and_e1(hyp(1, antecedent, {})), 2, std::move(open_c));
  return imp_i(antecedent, 1, std::move(open_b));
}

inline DerivNode gen_a7(const Formula &a, const Formula &b,
                        const Formula &c) {
  Formula nbot = Formula::negate(Formula::bot_n());
  Formula to_perm = obligation_in_labels(nbot, c); // O(not botn / c)
  Formula bc = Formula::disj(b, c);
  Formula antecedent =
      Formula::conj(Formula::negate(to_perm), obligation_in_labels(a, bc));
  Formula goal = obligation_in_labels(a, b);
  Context s = {sph1()};
  Context s_wit = {sph1(), ContextItem::witness()};
  Context sw = {sph1(), wld1()};

  // Witness world satisfies b: rebuild the obligation at condition b.
  DerivNode b_case = [&] {
    DerivNode a_at = imp_e(or_i1(hyp(4, b, sw), c),
                           star_e(and_e2(hyp(2, ob_body(a, bc), s)), wld1()));
    DerivNode star_part = star_i(imp_i(b, 4, std::move(a_at)));
    DerivNode built =
        circ_i(and_i(bullet_i(hyp(3, b, s_wit)), std::move(star_part)));
    return weaken(std::move(built), s_wit);
  }();

  // Witness world satisfies c: then some sphere permits botn's negation's
  // condition, contradicting the first conjunct, and anything follows.
  DerivNode c_case = [&] {
    DerivNode not_bot = neg_i(Formula::bot_n(), 6,
                              hyp(6, Formula::bot_n(), sw));
    DerivNode star_part = star_i(imp_i(c, 5, std::move(not_bot)));
    DerivNode perm_built =
        circ_i(and_i(bullet_i(hyp(3, c, s_wit)), std::move(star_part)));
    DerivNode falsum = neg_e(std::move(perm_built),
                             and_e1(hyp(1, antecedent, {})), Formula::bot_n());
    return weaken(efq(std::move(falsum), goal), s_wit);
  }();

  DerivNode cases =
      or_e(bullet_wit(and_e1(hyp(2, ob_body(a, bc), s))), 3,
           std::move(b_case), std::move(c_case));
  DerivNode opened =
      circ_e(and_e2(hyp(1, antecedent, {})), 2, lower(lower(std::move(cases))));
  return imp_i(antecedent, 1, std::move(opened));
}

inline DerivNode gen_a8(const Formula &a, const Formula &b,
                        const Formula &c) {
  Formula bc = Formula::disj(b, c);
  Formula nb = Formula::negate(b);
  Formula to_forbid = obligation_in_labels(nb, bc); // O(not b / b or c)
  Formula antecedent =
      Formula::conj(Formula::negate(to_forbid), obligation_in_labels(a, bc));
  Formula goal = obligation_in_labels(a, b);
  Formula b_dot = Formula::labeled(b, Label::SomeWorld);
  Formula em = Formula::disj(b_dot, Formula::negate(b_dot));
  Context s = {sph1()};
  Context sw = {sph1(), wld1()};

  // Excluded middle for b^bullet via double reductio (botw).
  DerivNode excluded_middle = [&] {
    DerivNode inner_em = or_i1(hyp(5, b_dot, s), Formula::negate(b_dot));
    DerivNode inner_falsum = neg_e(std::move(inner_em),
                                   hyp(4, Formula::negate(em), s),
                                   Formula::bot_w());
    DerivNode nb_dot = neg_i(b_dot, 5, std::move(inner_falsum));
    DerivNode outer_em = or_i2(b_dot, std::move(nb_dot));
    DerivNode outer_falsum = neg_e(std::move(outer_em),
                                   hyp(4, Formula::negate(em), s),
                                   Formula::bot_w());
    return raa(em, 4, std::move(outer_falsum));
  }();

  // If some world of the sphere satisfies b, rebuild the obligation at b.
  DerivNode yes_case = [&] {
    DerivNode a_at = imp_e(or_i1(hyp(6, b, sw), c),
                           star_e(and_e2(hyp(2, ob_body(a, bc), s)), wld1()));
    DerivNode star_part = star_i(imp_i(b, 6, std::move(a_at)));
    DerivNode built = circ_i(and_i(hyp(3, b_dot, s), std::move(star_part)));
    return weaken(std::move(built), s);
  }();

  // Otherwise every world refutes b, so the sphere forbids b over b or c,
  // contradicting the permission conjunct.
  DerivNode no_case = [&] {
    DerivNode b_dot_up = weaken(bullet_i(hyp(8, b, sw)), sw);
    DerivNode falsum_w =
        neg_e(std::move(b_dot_up),
              weaken(hyp(3, Formula::negate(b_dot), s), sw),
              Formula::bot_n());
    DerivNode not_b = neg_i(b, 8, std::move(falsum_w));
    DerivNode star_part = star_i(imp_i(bc, 7, std::move(not_b)));
    DerivNode forbid_built = circ_i(
        and_i(and_e1(hyp(2, ob_body(a, bc), s)), std::move(star_part)));
    DerivNode falsum = neg_e(std::move(forbid_built),
                             and_e1(hyp(1, antecedent, {})), Formula::bot_n());
    return weaken(efq(std::move(falsum), goal), s);
  }();

  DerivNode cases = or_e(std::move(excluded_middle), 3, std::move(yes_case),
                         std::move(no_case));
  DerivNode opened =
      circ_e(and_e2(hyp(1, antecedent, {})), 2, lower(std::move(cases)));
  return imp_i(antecedent, 1, std::move(opened));
}

} // namespace tpl

// Instantiates the paper-shaped derivation tree for one template id at
// a, b, c. R3 derives TO(a,c) -> TO(b,c) from aux |- a ≡ b @ (N,u);
// R4 derives TO(a,c) -> TO(a,b) from aux |- b ≡ c @ (N,u).
inline Derivation
generate_template(TemplateId id, const Formula &a, const Formula &b,
                  const Formula &c,
                  const std::optional<Derivation> &aux = std::nullopt) {
  switch (id) {
  case TemplateId::R3:
    if (!aux)
      throw MissingAux();
    return {tpl::gen_r3(a, b, c, *aux)};
  case TemplateId::R4:
    if (!aux)
      throw MissingAux();
    return {tpl::gen_r4(a, b, c, *aux)};
  case TemplateId::A2L:
    return {tpl::gen_a2l(a, b, c)};
  case TemplateId::A2R:
    return {tpl::gen_a2r(a, b, c)};
  case TemplateId::A3:
    return {tpl::gen_a3(a, c)};
  case TemplateId::A4:
    return {tpl::gen_a4(c)};
  case TemplateId::A5:
    return {tpl::gen_a5(b, c)};
  case TemplateId::A6:
    return {tpl::gen_a6(a, b, c)};
  case TemplateId::A7:
    return {tpl::gen_a7(a, b, c)};
  case TemplateId::A8:
    return {tpl::gen_a8(a, b, c)};
  }
  throw std::invalid_argument("unknown template id");
}

struct TemplateSuiteEntry {
  TemplateId id;
  long instances = 0;
  long ok = 0;
};

struct TemplateSuiteReport {
  std::vector<TemplateSuiteEntry> entries;
  bool all_ok() const {
    for (const auto &e : entries)
      if (e.ok != e.instances)
        return false;
    return true;
  }
};

// Generates and checks every template over the pool. The axiom templates
// range over pool³; R3 and R4 need an equivalence, so they range over the
// derivable reflexive instances (a = b resp. b = c) with a transferred
// aux proof.
inline TemplateSuiteReport
check_all_axiom_templates(const std::vector<Formula> &pool) {
  TemplateSuiteReport report;
  for (TemplateId id : all_templates()) {
    TemplateSuiteEntry entry;
    entry.id = id;
    auto run = [&](const Formula &a, const Formula &b, const Formula &c,
                   const std::optional<Derivation> &aux) {
      ++entry.instances;
      if (check_derivation(generate_template(id, a, b, c, aux)).ok)
        ++entry.ok;
    };
    if (id == TemplateId::R3) {
      for (const Formula &x : pool)
        for (const Formula &c : pool)
          run(x, x, c, transfer(reflexive_equivalence(x)));
    } else if (id == TemplateId::R4) {
      for (const Formula &a : pool)
        for (const Formula &x : pool)
          run(a, x, x, transfer(reflexive_equivalence(x)));
    } else {
      for (const Formula &a : pool)
        for (const Formula &b : pool)
          for (const Formula &c : pool)
            run(a, b, c, std::nullopt);
    }
    report.entries.push_back(entry);
  }
  return report;
}

} // namespace colog
