#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "colog/derivation.hpp"
#include "colog/formula.hpp"

namespace colog {

enum class NdReason {
  BadContext,
  FreshnessViolation,
  UndischargedHypothesis,
  RuleShapeMismatch,
  UnknownRule
};

inline const char *to_string(NdReason r) {
  switch (r) {
  case NdReason::BadContext:
    return "BadContext";
  case NdReason::FreshnessViolation:
    return "FreshnessViolation";
  case NdReason::UndischargedHypothesis:
    return "UndischargedHypothesis";
  case NdReason::RuleShapeMismatch:
    return "RuleShapeMismatch";
  case NdReason::UnknownRule:
    return "UnknownRule";
  }
  return "?";
}

struct NdError {
  std::vector<int> path; // child indices from the root
  NdReason reason = NdReason::RuleShapeMismatch;
  std::string detail;
};

struct NdCheckResult {
  bool ok = false;
  std::optional<NdError> error;
};

// A hypothesis leaf still open at some node, with its location.
struct OpenHyp {
  int index = 0;
  Judgment judgment;
  std::vector<int> path;
};

namespace nd {

// Rule inventory of the labeled calculus. The context conventions:
// S below stands for the last context item being a named sphere or the
// generic sphere; world items may be named worlds or the witness item.
//
//   classical core (fixed context): and-i/e, or-i/e, imp-i/e, neg-i/e,
//     efq, raa, top-i
//   weaken:     X @ G  =>  X @ G'          (G a prefix of G')
//   lower:      X @ G,d  =>  X @ G          (X rigid: truth ignores context)
//   circ-i:     X @ G,S  =>  X^circ @ G
//   circ-e:     X^circ @ G  +  [X @ G,sph n |- C @ G]  =>  C @ G   (n fresh)
//   star-i:     X @ G,S,wld u  =>  X^star @ G,S        (u fresh)
//   star-e:     X^star @ G,S  =>  X @ G,S,w
//   bullet-i:   X @ G,S,w  =>  X^bullet @ G,S
//   bullet-e:   X^bullet @ G,S + [X @ G,S,wld u |- C @ G,S] => C @ G,S (u fresh)
//   bullet-wit: X^bullet @ G,S  =>  X @ G,S,wit
//   gen-inst:   X @ G,gen  =>  X @ G,sph n
//   case-split: [incl n2 @ G,sph n1 |- C @ G] + [incl n1 @ G,sph n2 |- C @ G]
//               =>  C @ G       (any two spheres in a chain are comparable)
//   mono-star:  X^star @ G,sph n  +  incl n @ G,sph m  =>  X^star @ G,sph m
//   mono-bullet: X^bullet @ G,sph m + incl n @ G,sph m  =>  X^bullet @ G,sph n
//
// Freshness for circ-e / bullet-e / star-i: the bound name must not occur
// in the conclusion's context nor in any hypothesis still open at the node.

inline bool known_rule(const std::string &r) {
  static const std::set<std::string> rules = {
      "hyp",      "hyp-inc",  "and-i",    "and-e1",     "and-e2",
      "or-i1",    "or-i2",    "or-e",     "imp-i",      "imp-e",
      "neg-i",    "neg-e",    "efq",      "raa",        "top-i",
      "weaken",   "lower",    "circ-i",   "circ-e",     "star-i",
      "star-e",   "bullet-i", "bullet-e", "bullet-wit", "gen-inst",
      "case-split", "mono-star", "mono-bullet"};
  return rules.count(r) > 0;
}

inline bool is_falsum(const Formula &f) {
  return f.kind() == Formula::Kind::BotN || f.kind() == Formula::Kind::BotW;
}

// Rigid formulas are those whose truth ignores the current sphere and
// world entirely: constants, sphere-quantified formulas and the deontic
// operators, closed under the Boolean connectives. Only these may move
// across a binder with `lower`.
inline bool is_rigid(const Formula &f) {
  switch (f.kind()) {
  case Formula::Kind::TopN:
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
  case Formula::Kind::Obl:
  case Formula::Kind::Perm:
    return true;
  case Formula::Kind::Atom:
    return false;
  case Formula::Kind::Labeled:
    return f.label() == Label::SomeSphere || f.label() == Label::AllSpheres;
  case Formula::Kind::Not:
    return is_rigid(f.lhs());
  default:
    return is_rigid(f.lhs()) && is_rigid(f.rhs());
  }
}

// World and witness items make sense only under some sphere binder.
inline bool context_well_formed(const Context &ctx) {
  bool sphere_seen = false;
  for (const ContextItem &item : ctx) {
    if (item.sphere_like())
      sphere_seen = true;
    else if (!sphere_seen)
      return false;
  }
  return true;
}

inline void judgment_names(const Judgment &j, std::set<std::string> &out) {
  for (const ContextItem &item : j.ctx)
    if (!item.name.empty())
      out.insert(item.name);
  if (j.kind == Judgment::Kind::Inclusion)
    out.insert(j.incl_outer);
}

struct Checker {
  std::vector<NdError> failures;

  void fail(const std::vector<int> &path, NdReason reason,
            std::string detail) {
    failures.push_back({path, reason, std::move(detail)});
  }

  // Removes and returns the open hypotheses carrying `index`.
  static std::vector<OpenHyp> extract(std::vector<OpenHyp> &open, int index) {
    std::vector<OpenHyp> captured;
    auto keep = open.begin();
    for (auto &h : open) {
      if (h.index == index)
        captured.push_back(std::move(h));
      else
        *keep++ = std::move(h);
    }
    open.erase(keep, open.end());
    return captured;
  }

  // All captured hypotheses must coincide with `expected` (vacuous
  // discharge, capturing nothing, is fine).
  bool captured_match(const std::vector<int> &path,
                      const std::vector<OpenHyp> &captured,
                      const Judgment &expected, const char *rule) {
    for (const OpenHyp &h : captured) {
      if (h.judgment != expected) {
        fail(path, NdReason::RuleShapeMismatch,
             std::string(rule) + ": discharged hypothesis does not match "
                                 "the rule's assumption shape");
        return false;
      }
    }
    return true;
  }

  void check_freshness(const std::vector<int> &path, const std::string &name,
                       const Judgment &conclusion,
                       const std::vector<OpenHyp> &open_after,
                       const char *rule) {
    std::set<std::string> names;
    judgment_names(conclusion, names);
    for (const OpenHyp &h : open_after)
      judgment_names(h.judgment, names);
    if (names.count(name))
      fail(path, NdReason::FreshnessViolation,
           std::string(rule) + ": bound name '" + name +
               "' occurs in the conclusion or an open hypothesis");
  }

  // Checks one node and returns the hypotheses left open above it.
  std::vector<OpenHyp> check(const DerivNode &n, std::vector<int> &path) {
    const Judgment &c = n.conclusion;
    const Context &ctx = c.ctx;

    if (!known_rule(n.rule)) {
      fail(path, NdReason::UnknownRule, "unknown rule '" + n.rule + "'");
      return {};
    }
    if (!context_well_formed(ctx))
      fail(path, NdReason::BadContext,
           "world item with no enclosing sphere item");

    // Leaves.
    if (n.rule == "hyp" || n.rule == "hyp-inc") {
      if (!n.children.empty() || n.hyp_index < 1)
        fail(path, NdReason::RuleShapeMismatch,
             "hypothesis leaves take no premises and a positive index");
      if (n.rule == "hyp" && !c.is_formula())
        fail(path, NdReason::RuleShapeMismatch, "hyp concludes a formula");
      if (n.rule == "hyp-inc") {
        if (c.is_formula())
          fail(path, NdReason::RuleShapeMismatch,
               "hyp-inc concludes a sphere inclusion");
        else if (ctx.empty() || ctx.back().kind != ContextItem::Kind::Sphere)
          fail(path, NdReason::BadContext,
               "inclusion hypotheses live under a named sphere");
      }
      return {{n.hyp_index, c, path}};
    }

    // Premises first (collect their open hypotheses).
    std::vector<std::vector<OpenHyp>> child_open;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      child_open.push_back(check(n.children[i], path));
      path.pop_back();
    }

    auto shape_fail = [&](std::string detail) -> void {
      fail(path, NdReason::RuleShapeMismatch, std::move(detail));
    };
    auto ctx_fail = [&](std::string detail) -> void {
      fail(path, NdReason::BadContext, std::move(detail));
    };
    auto finish = [&](std::initializer_list<int> skip = {}) {
      std::vector<OpenHyp> open;
      for (std::size_t i = 0; i < child_open.size(); ++i) {
        (void)skip;
        for (auto &h : child_open[i])
          open.push_back(std::move(h));
      }
      return open;
    };

    const std::size_t arity = n.children.size();
    auto expect_arity = [&](std::size_t want) {
      if (arity != want) {
        shape_fail(n.rule + " takes " + std::to_string(want) + " premise(s)");
        return false;
      }
      return true;
    };
    auto premise = [&](std::size_t i) -> const Judgment & {
      return n.children[i].conclusion;
    };
    auto formula_premises = [&]() {
      for (std::size_t i = 0; i < arity; ++i)
        if (!premise(i).is_formula()) {
          shape_fail(n.rule + ": premises must be formula judgments");
          return false;
        }
      return true;
    };

    const std::string &r = n.rule;
    if (r != "weaken" && !c.is_formula())
      shape_fail(r + " concludes a formula judgment");
    const bool discharging =
        r == "imp-i" || r == "neg-i" || r == "raa" || r == "or-e" ||
        r == "circ-e" || r == "bullet-e" || r == "case-split";
    if (n.discharge && !discharging)
      shape_fail(r + " does not discharge hypotheses");
    if (!n.discharge && discharging)
      shape_fail(r + " requires a discharge index");

    if (r == "top-i") {
      if (expect_arity(0) &&
          (!c.is_formula() || c.formula.kind() != Formula::Kind::TopN))
        shape_fail("top-i concludes topn");
      return finish();
    }

    if (r == "and-i") {
      if (expect_arity(2) && formula_premises() && c.is_formula()) {
        if (premise(0).ctx != ctx || premise(1).ctx != ctx)
          ctx_fail("and-i premises share the conclusion's context");
        else if (c.formula.kind() != Formula::Kind::And ||
                 c.formula.lhs() != premise(0).formula ||
                 c.formula.rhs() != premise(1).formula)
          shape_fail("and-i concludes the conjunction of its premises");
      }
      return finish();
    }

    if (r == "and-e1" || r == "and-e2") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        const Formula &p = premise(0).formula;
        if (premise(0).ctx != ctx)
          ctx_fail(r + " keeps the premise context");
        else if (p.kind() != Formula::Kind::And)
          shape_fail(r + " eliminates a conjunction");
        else if (c.formula != (r == "and-e1" ? p.lhs() : p.rhs()))
          shape_fail(r + " concludes the matching conjunct");
      }
      return finish();
    }

    if (r == "or-i1" || r == "or-i2") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        if (premise(0).ctx != ctx)
          ctx_fail(r + " keeps the premise context");
        else if (c.formula.kind() != Formula::Kind::Or ||
                 (r == "or-i1" ? c.formula.lhs() : c.formula.rhs()) !=
                     premise(0).formula)
          shape_fail(r + " concludes a disjunction containing its premise");
      }
      return finish();
    }

    if (r == "or-e") {
      if (expect_arity(3) && formula_premises() && c.is_formula()) {
        const Formula &major = premise(0).formula;
        if (premise(0).ctx != ctx || premise(1).ctx != ctx ||
            premise(2).ctx != ctx)
          ctx_fail("or-e works at one fixed context");
        else if (major.kind() != Formula::Kind::Or)
          shape_fail("or-e eliminates a disjunction");
        else if (premise(1).formula != c.formula ||
                 premise(2).formula != c.formula)
          shape_fail("or-e branches conclude the conclusion");
        else if (n.discharge) {
          if (!extract(child_open[0], *n.discharge).empty())
            shape_fail("or-e: discharge index used in the major premise");
          auto left = extract(child_open[1], *n.discharge);
          auto right = extract(child_open[2], *n.discharge);
          captured_match(path, left, Judgment::of(major.lhs(), ctx), "or-e");
          captured_match(path, right, Judgment::of(major.rhs(), ctx), "or-e");
        }
      }
      return finish();
    }

    if (r == "imp-i") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        if (c.formula.kind() != Formula::Kind::Imp)
          shape_fail("imp-i concludes an implication");
        else if (premise(0).ctx != ctx)
          ctx_fail("imp-i keeps the premise context");
        else if (premise(0).formula != c.formula.rhs())
          shape_fail("imp-i premise is the conclusion's consequent");
        else if (n.discharge) {
          auto captured = extract(child_open[0], *n.discharge);
          captured_match(path, captured,
                         Judgment::of(c.formula.lhs(), ctx), "imp-i");
        }
      }
      return finish();
    }

    if (r == "imp-e") {
      if (expect_arity(2) && formula_premises() && c.is_formula()) {
        const Formula &fn = premise(1).formula;
        if (premise(0).ctx != ctx || premise(1).ctx != ctx)
          ctx_fail("imp-e works at one fixed context");
        else if (fn.kind() != Formula::Kind::Imp ||
                 fn.lhs() != premise(0).formula || fn.rhs() != c.formula)
          shape_fail("imp-e: second premise implies the conclusion from "
                     "the first");
      }
      return finish();
    }

    if (r == "neg-i") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        if (c.formula.kind() != Formula::Kind::Not)
          shape_fail("neg-i concludes a negation");
        else if (premise(0).ctx != ctx)
          ctx_fail("neg-i keeps the premise context");
        else if (!is_falsum(premise(0).formula))
          shape_fail("neg-i premise is a falsum constant");
        else if (n.discharge) {
          auto captured = extract(child_open[0], *n.discharge);
          captured_match(path, captured,
                         Judgment::of(c.formula.lhs(), ctx), "neg-i");
        }
      }
      return finish();
    }

    if (r == "neg-e") {
      if (expect_arity(2) && formula_premises() && c.is_formula()) {
        const Formula &neg = premise(1).formula;
        if (premise(0).ctx != ctx || premise(1).ctx != ctx)
          ctx_fail("neg-e works at one fixed context");
        else if (neg.kind() != Formula::Kind::Not ||
                 neg.lhs() != premise(0).formula)
          shape_fail("neg-e premises are a formula and its negation");
        else if (!is_falsum(c.formula))
          shape_fail("neg-e concludes a falsum constant");
      }
      return finish();
    }

    if (r == "efq") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        if (premise(0).ctx != ctx)
          ctx_fail("efq keeps the premise context");
        else if (!is_falsum(premise(0).formula))
          shape_fail("efq premise is a falsum constant");
      }
      return finish();
    }

    if (r == "raa") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        if (premise(0).ctx != ctx)
          ctx_fail("raa keeps the premise context");
        else if (!is_falsum(premise(0).formula))
          shape_fail("raa premise is a falsum constant");
        else if (n.discharge) {
          auto captured = extract(child_open[0], *n.discharge);
          captured_match(path, captured,
                         Judgment::of(Formula::negate(c.formula), ctx),
                         "raa");
        }
      }
      return finish();
    }

    if (r == "weaken") {
      if (expect_arity(1)) {
        const Judgment &p = premise(0);
        bool same_content =
            p.kind == c.kind &&
            (c.is_formula() ? p.formula == c.formula
                            : p.incl_outer == c.incl_outer);
        if (!same_content)
          shape_fail("weaken repeats its premise");
        else if (!context_is_prefix(p.ctx, ctx))
          ctx_fail("weaken only extends the context");
      }
      return finish();
    }

    if (r == "lower") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        const Judgment &p = premise(0);
        if (p.ctx.size() != ctx.size() + 1 || !context_is_prefix(ctx, p.ctx))
          ctx_fail("lower strips exactly the innermost context item");
        else if (p.formula != c.formula)
          shape_fail("lower repeats its premise");
        else if (!is_rigid(c.formula))
          shape_fail("lower applies to context-insensitive formulas only");
      }
      return finish();
    }

    if (r == "circ-i") {
      if (expect_arity(1) && formula_premises() && c.is_formula()) {
        const Judgment &p = premise(0);
        if (p.ctx.size() != ctx.size() + 1 ||
            !context_is_prefix(ctx, p.ctx) || !p.ctx.back().sphere_like())
          ctx_fail("circ-i closes the innermost sphere item");
        else if (c.formula != Formula::labeled(p.formula, Label::SomeSphere))
          shape_fail("circ-i concludes the circ-labeled premise");
      }
      return finish();
    }

    if (r == "circ-e") {
      std::vector<OpenHyp> open;
      if (expect_arity(2) && formula_premises() && c.is_formula()) {
        const Formula &major = premise(0).formula;
        if (premise(0).ctx != ctx || premise(1).ctx != ctx)
          ctx_fail("circ-e works at the conclusion's context");
        else if (major.kind() != Formula::Kind::Labeled ||
                 major.label() != Label::SomeSphere)
          shape_fail("circ-e eliminates a circ-labeled formula");
        else if (premise(1).formula != c.formula)
          shape_fail("circ-e subderivation concludes the conclusion");
        else if (n.discharge) {
          if (!extract(child_open[0], *n.discharge).empty())
            shape_fail("circ-e: discharge index used in the major premise");
          auto captured = extract(child_open[1], *n.discharge);
          std::string name;
          bool good = true;
          for (const OpenHyp &h : captured) {
            const Context &hctx = h.judgment.ctx;
            if (h.judgment.kind != Judgment::Kind::Formula ||
                h.judgment.formula != major.body() ||
                hctx.size() != ctx.size() + 1 ||
                !context_is_prefix(ctx, hctx) ||
                hctx.back().kind != ContextItem::Kind::Sphere ||
                (!name.empty() && hctx.back().name != name)) {
              good = false;
              break;
            }
            name = hctx.back().name;
          }
          if (!good)
            shape_fail("circ-e: hypotheses must open the eliminated body "
                       "under one fresh sphere");
          else if (!name.empty()) {
            open = finish();
            check_freshness(path, name, c, open, "circ-e");
            return open;
          }
        }
      }
      return finish();
    }

    if (r == "star-i") {
      std::vector<OpenHyp> open = finish();
      if (expect_arity(1) && premise(0).is_formula() && c.is_formula()) {
        const Judgment &p = premise(0);
        if (ctx.empty() || !ctx.back().sphere_like())
          ctx_fail("star-i concludes under a sphere item");
        else if (p.ctx.size() != ctx.size() + 1 ||
                 !context_is_prefix(ctx, p.ctx) ||
                 p.ctx.back().kind != ContextItem::Kind::World)
          ctx_fail("star-i closes an innermost named world");
        else if (c.formula != Formula::labeled(p.formula, Label::AllWorlds))
          shape_fail("star-i concludes the star-labeled premise");
        else
          check_freshness(path, p.ctx.back().name, c, open, "star-i");
      }
      return open;
    }

    if (r == "star-e") {
      if (expect_arity(1) && premise(0).is_formula() && c.is_formula()) {
        const Judgment &p = premise(0);
        if (ctx.size() != p.ctx.size() + 1 || !context_is_prefix(p.ctx, ctx) ||
            !ctx.back().world_like() || p.ctx.empty() ||
            !p.ctx.back().sphere_like())
          ctx_fail("star-e instantiates at a world item of the premise's "
                   "sphere");
        else if (p.formula.kind() != Formula::Kind::Labeled ||
                 p.formula.label() != Label::AllWorlds ||
                 c.formula != p.formula.body())
          shape_fail("star-e eliminates a star-labeled formula");
      }
      return finish();
    }

    if (r == "bullet-i") {
      if (expect_arity(1) && premise(0).is_formula() && c.is_formula()) {
        const Judgment &p = premise(0);
        if (ctx.empty() || !ctx.back().sphere_like() ||
            p.ctx.size() != ctx.size() + 1 ||
            !context_is_prefix(ctx, p.ctx) || !p.ctx.back().world_like())
          ctx_fail("bullet-i closes an innermost world item");
        else if (c.formula != Formula::labeled(p.formula, Label::SomeWorld))
          shape_fail("bullet-i concludes the bullet-labeled premise");
      }
      return finish();
    }

    if (r == "bullet-e") {
      std::vector<OpenHyp> open;
      if (expect_arity(2) && formula_premises() && c.is_formula()) {
        const Formula &major = premise(0).formula;
        if (premise(0).ctx != ctx || premise(1).ctx != ctx ||
            ctx.empty() || !ctx.back().sphere_like())
          ctx_fail("bullet-e works under the witnessing sphere");
        else if (major.kind() != Formula::Kind::Labeled ||
                 major.label() != Label::SomeWorld)
          shape_fail("bullet-e eliminates a bullet-labeled formula");
        else if (premise(1).formula != c.formula)
          shape_fail("bullet-e subderivation concludes the conclusion");
        else if (n.discharge) {
          if (!extract(child_open[0], *n.discharge).empty())
            shape_fail("bullet-e: discharge index used in the major premise");
          auto captured = extract(child_open[1], *n.discharge);
          std::string name;
          bool good = true;
          for (const OpenHyp &h : captured) {
            const Context &hctx = h.judgment.ctx;
            if (h.judgment.kind != Judgment::Kind::Formula ||
                h.judgment.formula != major.body() ||
                hctx.size() != ctx.size() + 1 ||
                !context_is_prefix(ctx, hctx) ||
                hctx.back().kind != ContextItem::Kind::World ||
                (!name.empty() && hctx.back().name != name)) {
              good = false;
              break;
            }
            name = hctx.back().name;
          }
          if (!good)
            shape_fail("bullet-e: hypotheses must open the witness under "
                       "one fresh world");
          else if (!name.empty()) {
            open = finish();
            check_freshness(path, name, c, open, "bullet-e");
            return open;
          }
        }
      }
      return finish();
    }

    if (r == "bullet-wit") {
      if (expect_arity(1) && premise(0).is_formula() && c.is_formula()) {
        const Judgment &p = premise(0);
        if (ctx.size() != p.ctx.size() + 1 || !context_is_prefix(p.ctx, ctx) ||
            ctx.back().kind != ContextItem::Kind::Witness ||
            p.ctx.empty() || !p.ctx.back().sphere_like())
          ctx_fail("bullet-wit steps into the witness world of the "
                   "premise's sphere");
        else if (p.formula.kind() != Formula::Kind::Labeled ||
                 p.formula.label() != Label::SomeWorld ||
                 c.formula != p.formula.body())
          shape_fail("bullet-wit eliminates a bullet-labeled formula");
      }
      return finish();
    }

    if (r == "gen-inst") {
      if (expect_arity(1) && premise(0).is_formula() && c.is_formula()) {
        const Judgment &p = premise(0);
        bool shapes_ok =
            !p.ctx.empty() && !ctx.empty() && p.ctx.size() == ctx.size() &&
            p.ctx.back().kind == ContextItem::Kind::Generic &&
            ctx.back().kind == ContextItem::Kind::Sphere &&
            std::equal(ctx.begin(), ctx.end() - 1, p.ctx.begin());
        if (!shapes_ok)
          ctx_fail("gen-inst replaces an innermost generic sphere by a "
                   "named one");
        else if (p.formula != c.formula)
          shape_fail("gen-inst repeats its premise");
      }
      return finish();
    }

    if (r == "case-split") {
      if (expect_arity(2) && formula_premises() && c.is_formula()) {
        if (premise(0).ctx != ctx || premise(1).ctx != ctx)
          ctx_fail("case-split branches conclude at the split's context");
        else if (premise(0).formula != c.formula ||
                 premise(1).formula != c.formula)
          shape_fail("case-split branches conclude the conclusion");
        else if (n.discharge) {
          auto left = extract(child_open[0], *n.discharge);
          auto right = extract(child_open[1], *n.discharge);
          // Branch hypotheses: [incl n2 under sphere n1] vs the mirrored
          // [incl n1 under sphere n2].
          auto side = [&](const std::vector<OpenHyp> &caps, std::string &sph,
                          std::string &outer) {
            for (const OpenHyp &h : caps) {
              const Context &hctx = h.judgment.ctx;
              if (h.judgment.kind != Judgment::Kind::Inclusion ||
                  hctx.size() != ctx.size() + 1 ||
                  !context_is_prefix(ctx, hctx) ||
                  hctx.back().kind != ContextItem::Kind::Sphere)
                return false;
              if (!sph.empty() && (hctx.back().name != sph ||
                                   h.judgment.incl_outer != outer))
                return false;
              sph = hctx.back().name;
              outer = h.judgment.incl_outer;
            }
            return true;
          };
          std::string s1, o1, s2, o2;
          if (!side(left, s1, o1) || !side(right, s2, o2))
            shape_fail("case-split: hypotheses are sphere inclusions under "
                       "a named sphere");
          else if (!s1.empty() && !s2.empty() && (s1 != o2 || s2 != o1))
            shape_fail("case-split: branch assumptions must mirror each "
                       "other");
        }
      }
      return finish();
    }

    if (r == "mono-star" || r == "mono-bullet") {
      if (expect_arity(2) && c.is_formula() && premise(0).is_formula()) {
        const Judgment &pf = premise(0);
        const Judgment &pi = premise(1);
        Label want = r == "mono-star" ? Label::AllWorlds : Label::SomeWorld;
        if (pi.kind != Judgment::Kind::Inclusion)
          shape_fail(r + ": second premise is a sphere inclusion");
        else if (pf.formula.kind() != Formula::Kind::Labeled ||
                 pf.formula.label() != want || c.formula != pf.formula)
          shape_fail(r + ": transfers a " +
                     (want == Label::AllWorlds ? "star" : "bullet") +
                     "-labeled formula unchanged");
        else {
          bool ctx_ok =
              !pf.ctx.empty() && !ctx.empty() &&
              pf.ctx.size() == ctx.size() &&
              pf.ctx.back().kind == ContextItem::Kind::Sphere &&
              ctx.back().kind == ContextItem::Kind::Sphere &&
              std::equal(ctx.begin(), ctx.end() - 1, pf.ctx.begin());
          if (r == "mono-star") {
            // X^star @ sph n; incl n @ sph m  =>  X^star @ sph m
            ctx_ok = ctx_ok && pi.ctx == ctx &&
                     pi.incl_outer == pf.ctx.back().name;
          } else {
            // X^bullet @ sph m; incl n @ sph m  =>  X^bullet @ sph n
            ctx_ok = ctx_ok && pi.ctx == pf.ctx &&
                     ctx.back().name == pi.incl_outer;
          }
          if (!ctx_ok)
            ctx_fail(r + ": inclusion and contexts do not line up");
        }
      }
      return finish();
    }

    shape_fail("unhandled rule '" + r + "'");
    return finish();
  }
};

} // namespace nd

// Open hypotheses of a subtree under the checker's discharge bookkeeping
// (shape errors are ignored here; see check_derivation for validation).
inline std::vector<OpenHyp> open_hypotheses(const DerivNode &node) {
  nd::Checker checker;
  std::vector<int> path;
  return checker.check(node, path);
}

// Validates every node against the rule inventory: premise shapes,
// context discipline, freshness and discharge bookkeeping. A derivation
// is Ok when all nodes pass and no hypothesis is left open at the root.
// On failure, reports the first failing node in preorder.
inline NdCheckResult check_derivation(const Derivation &d) {
  nd::Checker checker;
  std::vector<int> path;
  std::vector<OpenHyp> open = checker.check(d.root, path);

  for (const OpenHyp &h : open)
    checker.failures.push_back(
        {h.path, NdReason::UndischargedHypothesis,
         "hypothesis " + std::to_string(h.index) + " is never discharged"});

  NdCheckResult result;
  if (checker.failures.empty()) {
    result.ok = true;
    return result;
  }
  auto preorder_less = [](const NdError &a, const NdError &b) {
    return std::lexicographical_compare(a.path.begin(), a.path.end(),
                                        b.path.begin(), b.path.end());
  };
  result.error =
      *std::min_element(checker.failures.begin(), checker.failures.end(),
                        preorder_less);
  return result;
}

inline std::string path_to_string(const std::vector<int> &path) {
  std::string out = "root";
  for (int i : path)
    out += "." + std::to_string(i);
  return out;
}

} // namespace colog
