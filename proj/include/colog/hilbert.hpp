#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colog/axioms.hpp"
#include "colog/formula.hpp"
#include "colog/sexpr.hpp"

namespace colog {

// ---------------------------------------------------------------------
// R1: propositional tautology check with opaque modal atoms.
//
// Every maximal non-Boolean subformula (atom, labeled formula, O, P) is
// treated as a propositional variable keyed by its printed form; the
// constants are fixed (topn true, botn/botw false). No reasoning happens
// inside O — O(p/q) and O(q/p) are distinct opaque atoms.
// ---------------------------------------------------------------------

namespace detail {

struct BoolNode {
  enum class Op { Var, Const, Not, And, Or, Imp };
  Op op;
  int var = 0;       // Op::Var
  bool value = false; // Op::Const
  int a = -1, b = -1;
};

struct BoolSkeleton {
  std::vector<BoolNode> nodes;
  int var_count = 0;
  int root = -1;
};

inline int compile_bool(const Formula &f, BoolSkeleton &sk,
                        std::map<std::string, int> &vars) {
  BoolNode node;
  switch (f.kind()) {
  case Formula::Kind::TopN:
    node = {BoolNode::Op::Const, 0, true, -1, -1};
    break;
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
    node = {BoolNode::Op::Const, 0, false, -1, -1};
    break;
  case Formula::Kind::Not:
    node = {BoolNode::Op::Not, 0, false, compile_bool(f.lhs(), sk, vars), -1};
    break;
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Imp: {
    BoolNode::Op op = f.kind() == Formula::Kind::And  ? BoolNode::Op::And
                      : f.kind() == Formula::Kind::Or ? BoolNode::Op::Or
                                                      : BoolNode::Op::Imp;
    int a = compile_bool(f.lhs(), sk, vars);
    int b = compile_bool(f.rhs(), sk, vars);
    node = {op, 0, false, a, b};
    break;
  }
  default: { // opaque: atom, labeled, O, P
    auto [it, fresh] = vars.emplace(print_formula(f), sk.var_count);
    if (fresh)
      ++sk.var_count;
    node = {BoolNode::Op::Var, it->second, false, -1, -1};
  }
  }
  sk.nodes.push_back(node);
  return static_cast<int>(sk.nodes.size()) - 1;
}

inline bool eval_bool(const BoolSkeleton &sk, int idx, std::uint32_t assign) {
  const BoolNode &n = sk.nodes[idx];
  switch (n.op) {
  case BoolNode::Op::Var:
    return (assign >> n.var) & 1u;
  case BoolNode::Op::Const:
    return n.value;
  case BoolNode::Op::Not:
    return !eval_bool(sk, n.a, assign);
  case BoolNode::Op::And:
    return eval_bool(sk, n.a, assign) && eval_bool(sk, n.b, assign);
  case BoolNode::Op::Or:
    return eval_bool(sk, n.a, assign) || eval_bool(sk, n.b, assign);
  case BoolNode::Op::Imp:
    return !eval_bool(sk, n.a, assign) || eval_bool(sk, n.b, assign);
  }
  return false;
}

} // namespace detail

inline bool is_tautology(const Formula &f) {
  detail::BoolSkeleton sk;
  std::map<std::string, int> vars;
  sk.root = detail::compile_bool(f, sk, vars);
  std::uint64_t total = std::uint64_t(1) << sk.var_count;
  for (std::uint64_t assign = 0; assign < total; ++assign)
    if (!detail::eval_bool(sk, sk.root, static_cast<std::uint32_t>(assign)))
      return false;
  return true;
}

// Structural first-order-free matching of f against an axiom schema.
// Returns the metavariable bindings when f is an instance, nullopt
// otherwise. Matching is deterministic: left-to-right, first occurrence
// of a metavariable binds it.
inline std::optional<Bindings> match_axiom(AxiomId id, const Formula &f) {
  struct Matcher {
    Bindings b;
    bool match(const Formula &schema, const Formula &target) {
      if (schema.kind() == Formula::Kind::Atom &&
          schema.atom_name()[0] >= 'A' && schema.atom_name()[0] <= 'Z') {
        auto [it, fresh] = b.emplace(schema.atom_name(), target);
        return fresh ? true : it->second == target;
      }
      if (schema.kind() != target.kind())
        return false;
      switch (schema.kind()) {
      case Formula::Kind::Atom:
        return schema.atom_name() == target.atom_name();
      case Formula::Kind::TopN:
      case Formula::Kind::BotN:
      case Formula::Kind::BotW:
        return true;
      case Formula::Kind::Not:
        return match(schema.lhs(), target.lhs());
      case Formula::Kind::Labeled:
        return schema.label() == target.label() &&
               match(schema.body(), target.body());
      default:
        return match(schema.lhs(), target.lhs()) &&
               match(schema.rhs(), target.rhs());
      }
    }
  } m;
  if (!m.match(axiom_schema(id), f))
    return std::nullopt;
  return m.b;
}

// ---------------------------------------------------------------------
// Hilbert proofs for the CO system: R1 (taut), R2 (mp), axiom instances,
// and the congruence rules R3 (cong-body) and R4 (cong-cond). Cited lines
// are 1-based and must point strictly backwards.
// ---------------------------------------------------------------------

struct Justification {
  enum class Kind { Taut, Mp, Axiom, CongBody, CongCond };
  Kind kind = Kind::Taut;
  int i = 0, j = 0; // cited lines: Mp uses i and j, Cong* uses i
  AxiomId axiom = AxiomId::A1;
  Bindings bindings;

  static Justification taut() { return {}; }
  static Justification mp(int i, int j) {
    Justification js;
    js.kind = Kind::Mp;
    js.i = i;
    js.j = j;
    return js;
  }
  static Justification axiom_use(AxiomId id, Bindings b) {
    Justification js;
    js.kind = Kind::Axiom;
    js.axiom = id;
    js.bindings = std::move(b);
    return js;
  }
  static Justification cong_body(int i) {
    Justification js;
    js.kind = Kind::CongBody;
    js.i = i;
    return js;
  }
  static Justification cong_cond(int i) {
    Justification js;
    js.kind = Kind::CongCond;
    js.i = i;
    return js;
  }
};

struct HilbertLine {
  Formula formula;
  Justification just;
};

struct HilbertProof {
  std::vector<HilbertLine> lines;
};

enum class ProofErrorReason {
  NotTautology,
  BadMPShape,
  SchemaMismatch,
  BadCongruence,
  ForwardReference,
  EmptyProof
};

inline const char *to_string(ProofErrorReason r) {
  switch (r) {
  case ProofErrorReason::NotTautology:
    return "NotTautology";
  case ProofErrorReason::BadMPShape:
    return "BadMPShape";
  case ProofErrorReason::SchemaMismatch:
    return "SchemaMismatch";
  case ProofErrorReason::BadCongruence:
    return "BadCongruence";
  case ProofErrorReason::ForwardReference:
    return "ForwardReference";
  case ProofErrorReason::EmptyProof:
    return "EmptyProof";
  }
  return "?";
}

struct ProofCheckResult {
  bool ok = false;
  Formula theorem;    // last line, when ok
  int error_line = 0; // 1-based, when not ok
  ProofErrorReason reason = ProofErrorReason::EmptyProof;
};

namespace detail {

// Splits (x -> y) and (y -> x) into (x, y).
inline std::optional<std::pair<Formula, Formula>>
equiv_parts(const Formula &f) {
  if (f.kind() != Formula::Kind::And ||
      f.lhs().kind() != Formula::Kind::Imp ||
      f.rhs().kind() != Formula::Kind::Imp)
    return std::nullopt;
  Formula x = f.lhs().lhs(), y = f.lhs().rhs();
  if (f.rhs().lhs() != y || f.rhs().rhs() != x)
    return std::nullopt;
  return std::make_pair(x, y);
}

} // namespace detail

inline ProofCheckResult check_proof(const HilbertProof &pf) {
  ProofCheckResult res;
  if (pf.lines.empty())
    return res;

  auto fail = [&](int line1, ProofErrorReason r) {
    res.ok = false;
    res.error_line = line1;
    res.reason = r;
    return res;
  };

  for (std::size_t k = 0; k < pf.lines.size(); ++k) {
    const int line1 = static_cast<int>(k) + 1;
    const Formula &f = pf.lines[k].formula;
    const Justification &js = pf.lines[k].just;
    auto cited_ok = [&](int ref) { return ref >= 1 && ref <= static_cast<int>(k); };

    switch (js.kind) {
    case Justification::Kind::Taut:
      if (!is_tautology(f))
        return fail(line1, ProofErrorReason::NotTautology);
      break;

    case Justification::Kind::Mp: {
      if (!cited_ok(js.i) || !cited_ok(js.j))
        return fail(line1, ProofErrorReason::ForwardReference);
      const Formula &minor = pf.lines[js.i - 1].formula;
      const Formula &major = pf.lines[js.j - 1].formula;
      if (major.kind() != Formula::Kind::Imp || major.lhs() != minor ||
          major.rhs() != f)
        return fail(line1, ProofErrorReason::BadMPShape);
      break;
    }

    case Justification::Kind::Axiom: {
      std::vector<std::string> vars = axiom_metavars(js.axiom);
      if (js.bindings.size() != vars.size())
        return fail(line1, ProofErrorReason::SchemaMismatch);
      for (const std::string &v : vars)
        if (!js.bindings.count(v))
          return fail(line1, ProofErrorReason::SchemaMismatch);
      if (substitute(axiom_schema(js.axiom), js.bindings) != f)
        return fail(line1, ProofErrorReason::SchemaMismatch);
      break;
    }

    case Justification::Kind::CongBody: {
      // From A ≡ B derive O(A/C) ≡ O(B/C).
      if (!cited_ok(js.i))
        return fail(line1, ProofErrorReason::ForwardReference);
      auto ab = detail::equiv_parts(pf.lines[js.i - 1].formula);
      auto oo = detail::equiv_parts(f);
      if (!ab || !oo)
        return fail(line1, ProofErrorReason::BadCongruence);
      const auto &[a, b] = *ab;
      const auto &[oa, ob] = *oo;
      if (oa.kind() != Formula::Kind::Obl || ob.kind() != Formula::Kind::Obl ||
          oa.lhs() != a || ob.lhs() != b || oa.rhs() != ob.rhs())
        return fail(line1, ProofErrorReason::BadCongruence);
      break;
    }

    case Justification::Kind::CongCond: {
      // From B ≡ C derive O(A/B) ≡ O(A/C).
      if (!cited_ok(js.i))
        return fail(line1, ProofErrorReason::ForwardReference);
      auto bc = detail::equiv_parts(pf.lines[js.i - 1].formula);
      auto oo = detail::equiv_parts(f);
      if (!bc || !oo)
        return fail(line1, ProofErrorReason::BadCongruence);
      const auto &[b, c] = *bc;
      const auto &[ob, oc] = *oo;
      if (ob.kind() != Formula::Kind::Obl || oc.kind() != Formula::Kind::Obl ||
          ob.lhs() != oc.lhs() || ob.rhs() != b || oc.rhs() != c)
        return fail(line1, ProofErrorReason::BadCongruence);
      break;
    }
    }
  }

  res.ok = true;
  res.theorem = pf.lines.back().formula;
  return res;
}

// ---------------------------------------------------------------------
// Proof file format: a sequence of top-level forms
//   (line <formula> (taut))
//   (line <formula> (mp i j))
//   (line <formula> (axiom A6 (A <f>) (B <f>) (C <f>)))
//   (line <formula> (cong-body i))
//   (line <formula> (cong-cond i))
// ---------------------------------------------------------------------

inline HilbertProof proof_from_sexprs(const std::vector<SExpr> &forms) {
  HilbertProof pf;
  for (const SExpr &form : forms) {
    if (!form.is_list() || form.head() != "line" || form.items.size() != 3)
      throw SyntaxError(form.offset, "(line <formula> <justification>)");
    HilbertLine line;
    line.formula = detail::formula_from_sexpr(form.items[1]);

    const SExpr &js = form.items[2];
    std::string_view head = js.head();
    if (head == "taut") {
      if (js.items.size() != 1)
        throw SyntaxError(js.offset, "(taut)");
      line.just = Justification::taut();
    } else if (head == "mp") {
      if (js.items.size() != 3)
        throw SyntaxError(js.offset, "(mp i j)");
      line.just = Justification::mp(sexpr_int(js.items[1], "a line index"),
                                    sexpr_int(js.items[2], "a line index"));
    } else if (head == "axiom") {
      if (js.items.size() < 2 || !js.items[1].is_symbol())
        throw SyntaxError(js.offset, "(axiom <id> (<var> <formula>) ...)");
      auto id = axiom_from_name(js.items[1].sym);
      if (!id)
        throw SyntaxError(js.items[1].offset, "an axiom id A1..A8");
      Bindings b;
      for (std::size_t i = 2; i < js.items.size(); ++i) {
        const SExpr &pair = js.items[i];
        if (!pair.is_list() || pair.items.size() != 2 ||
            !pair.items[0].is_symbol())
          throw SyntaxError(pair.offset, "(<var> <formula>)");
        b[pair.items[0].sym] = detail::formula_from_sexpr(pair.items[1]);
      }
      line.just = Justification::axiom_use(*id, std::move(b));
    } else if (head == "cong-body" || head == "cong-cond") {
      if (js.items.size() != 2)
        throw SyntaxError(js.offset, "(cong-body i) or (cong-cond i)");
      int i = sexpr_int(js.items[1], "a line index");
      line.just = head == "cong-body" ? Justification::cong_body(i)
                                      : Justification::cong_cond(i);
    } else {
      throw SyntaxError(js.offset, "taut|mp|axiom|cong-body|cong-cond");
    }
    pf.lines.push_back(std::move(line));
  }
  if (pf.lines.empty())
    throw SyntaxError(0, "at least one (line ...)");
  return pf;
}

inline HilbertProof parse_proof(std::string_view text) {
  return proof_from_sexprs(read_sexpr_seq(text));
}

inline std::string print_proof(const HilbertProof &pf) {
  std::string out;
  for (const HilbertLine &line : pf.lines) {
    out += "(line " + print_formula(line.formula) + " ";
    switch (line.just.kind) {
    case Justification::Kind::Taut:
      out += "(taut)";
      break;
    case Justification::Kind::Mp:
      out += "(mp " + std::to_string(line.just.i) + " " +
             std::to_string(line.just.j) + ")";
      break;
    case Justification::Kind::Axiom: {
      out += "(axiom ";
      out += axiom_name(line.just.axiom);
      for (const auto &[var, val] : line.just.bindings)
        out += " (" + var + " " + print_formula(val) + ")";
      out += ")";
      break;
    }
    case Justification::Kind::CongBody:
      out += "(cong-body " + std::to_string(line.just.i) + ")";
      break;
    case Justification::Kind::CongCond:
      out += "(cong-cond " + std::to_string(line.just.i) + ")";
      break;
    }
    out += ")\n";
  }
  return out;
}

} // namespace colog
