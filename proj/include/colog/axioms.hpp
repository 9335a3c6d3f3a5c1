#pragma once

#include <optional>
#include <string>
#include <vector>

#include "colog/enumerate.hpp"
#include "colog/formula.hpp"

namespace colog {

// Axiom schemas of the CO system. Metavariables are the uppercase atoms
// A, B, C; equivalences are expanded left-to-right into the conjunction
// of both implications.
enum class AxiomId { A1, A2, A3, A4, A5, A6, A7, A8 };

inline const char *axiom_name(AxiomId id) {
  static const char *names[] = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"};
  return names[static_cast<int>(id)];
}

inline std::optional<AxiomId> axiom_from_name(std::string_view s) {
  for (int i = 0; i < 8; ++i) {
    AxiomId id = static_cast<AxiomId>(i);
    if (s == axiom_name(id))
      return id;
  }
  return std::nullopt;
}

inline std::vector<AxiomId> all_axioms() {
  return {AxiomId::A1, AxiomId::A2, AxiomId::A3, AxiomId::A4,
          AxiomId::A5, AxiomId::A6, AxiomId::A7, AxiomId::A8};
}

// (x -> y) and (y -> x)
inline Formula iff_expansion(const Formula &x, const Formula &y) {
  return Formula::conj(Formula::imp(x, y), Formula::imp(y, x));
}

inline Formula axiom_schema(AxiomId id) {
  Formula A = Formula::atom("A");
  Formula B = Formula::atom("B");
  Formula C = Formula::atom("C");
  switch (id) {
  case AxiomId::A1: // P(A/C) ≡ not O(not A / C)
    return iff_expansion(Formula::perm(A, C),
                         Formula::negate(Formula::obl(Formula::negate(A), C)));
  case AxiomId::A2: // O(A and B / C) ≡ O(A/C) and O(B/C)
    return iff_expansion(Formula::obl(Formula::conj(A, B), C),
                         Formula::conj(Formula::obl(A, C), Formula::obl(B, C)));
  case AxiomId::A3: // O(A/C) -> P(A/C)
    return Formula::imp(Formula::obl(A, C), Formula::perm(A, C));
  case AxiomId::A4: // O(topn/C) -> O(C/C)
    return Formula::imp(Formula::obl(Formula::top_n(), C), Formula::obl(C, C));
  case AxiomId::A5: // O(topn/C) -> O(topn / B or C)
    return Formula::imp(Formula::obl(Formula::top_n(), C),
                        Formula::obl(Formula::top_n(), Formula::disj(B, C)));
  case AxiomId::A6: // (O(A/B) and O(A/C)) -> O(A / B or C)
    return Formula::imp(Formula::conj(Formula::obl(A, B), Formula::obl(A, C)),
                        Formula::obl(A, Formula::disj(B, C)));
  case AxiomId::A7: // (P(botn/C) and O(A / B or C)) -> O(A/B)
    return Formula::imp(
        Formula::conj(Formula::perm(Formula::bot_n(), C),
                      Formula::obl(A, Formula::disj(B, C))),
        Formula::obl(A, B));
  case AxiomId::A8: // (P(B / B or C) and O(A / B or C)) -> O(A/B)
    return Formula::imp(
        Formula::conj(Formula::perm(B, Formula::disj(B, C)),
                      Formula::obl(A, Formula::disj(B, C))),
        Formula::obl(A, B));
  }
  return Formula::top_n();
}

// Metavariables actually used by a schema, in A,B,C order.
inline std::vector<std::string> axiom_metavars(AxiomId id) {
  std::vector<std::string> vars;
  auto used = formula_atoms(axiom_schema(id));
  for (const char *v : {"A", "B", "C"})
    if (used.count(v))
      vars.push_back(v);
  return vars;
}

// Default instantiation pool for the semantic suite: p, q, r and the
// negations of the first two.
inline std::vector<Formula> default_instance_pool() {
  Formula p = Formula::atom("p"), q = Formula::atom("q"), r = Formula::atom("r");
  return {p, q, r, Formula::negate(p), Formula::negate(q)};
}

struct SchemaFailure {
  Bindings bindings;
  SphereModel countermodel;
};

struct SchemaReport {
  AxiomId id;
  long instances = 0;
  std::vector<SchemaFailure> failures;
  bool all_valid() const { return failures.empty(); }
};

struct SuiteReport {
  std::vector<SchemaReport> schemas;
  bool all_valid() const {
    for (const auto &s : schemas)
      if (!s.all_valid())
        return false;
    return true;
  }
};

// Instantiates every schema over the pool (one pool choice per used
// metavariable) and model-checks each instance exhaustively.
inline SuiteReport
axiom_validity_suite(int max_worlds,
                     const std::vector<Formula> &pool = default_instance_pool(),
                     const std::vector<std::string> &atoms = default_atoms()) {
  SuiteReport report;
  for (AxiomId id : all_axioms()) {
    SchemaReport sr;
    sr.id = id;
    Formula schema = axiom_schema(id);
    std::vector<std::string> vars = axiom_metavars(id);

    std::vector<std::size_t> pick(vars.size(), 0);
    for (;;) {
      Bindings b;
      for (std::size_t i = 0; i < vars.size(); ++i)
        b[vars[i]] = pool[pick[i]];
      Formula instance = substitute(schema, b);
      ++sr.instances;
      ValidityResult v = check_validity(instance, atoms, max_worlds);
      if (!v.valid)
        sr.failures.push_back({b, std::move(*v.countermodel)});

      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < pool.size())
          break;
        pick[i] = 0;
      }
      if (i == pick.size())
        break;
    }
    report.schemas.push_back(std::move(sr));
  }
  return report;
}

} // namespace colog
