#include <gtest/gtest.h>

#include <random>

#include "colog/formula.hpp"
#include "test_support.hpp"

using colog::Formula;
using colog::Label;

namespace {

Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }
Formula r() { return Formula::atom("r"); }

} // namespace

TEST(Parse, GrammarClauses) {
  EXPECT_EQ(colog::parse_formula("(O p q)"), Formula::obl(p(), q()));
  EXPECT_EQ(colog::parse_formula("(P p q)"), Formula::perm(p(), q()));
  EXPECT_EQ(colog::parse_formula("topn"), Formula::top_n());
  EXPECT_EQ(colog::parse_formula("(not botn)"),
            Formula::negate(Formula::bot_n()));
  EXPECT_EQ(colog::parse_formula("(imp q p)"), Formula::imp(q(), p()));
  EXPECT_EQ(colog::parse_formula("  (and p   q ) "),
            Formula::conj(p(), q()));
}

TEST(Parse, LabelFormOfObligationBody) {
  Formula expected = colog::obligation_in_labels(p(), q());
  EXPECT_EQ(colog::parse_formula(
                "(lab circ (and (lab bullet q) (lab star (imp q p))))"),
            expected);
}

TEST(Parse, ErrorsCarryOffset) {
  try {
    colog::parse_formula("(O p");
    FAIL() << "expected SyntaxError";
  } catch (const colog::SyntaxError &e) {
    EXPECT_EQ(e.offset, 4u); // end of input
  }
  EXPECT_THROW(colog::parse_formula("(lab foo p)"), colog::SyntaxError);
  EXPECT_THROW(colog::parse_formula("(and p)"), colog::SyntaxError);
  EXPECT_THROW(colog::parse_formula("Upper"), colog::SyntaxError);
  EXPECT_THROW(colog::parse_formula("(O p q) extra"), colog::SyntaxError);
}

TEST(Print, CanonicalForms) {
  EXPECT_EQ(colog::print_formula(Formula::obl(p(), q())), "(O p q)");
  EXPECT_EQ(colog::print_formula(Formula::labeled(p(), Label::SomeWorld)),
            "(lab bullet p)");
  EXPECT_EQ(colog::print_formula(Formula::negate(Formula::bot_n())),
            "(not botn)");
}

TEST(Print, ParseRoundTripOnRandomFormulas) {
  std::mt19937 rng(20240811);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testsup::random_formula(rng, 6);
    EXPECT_EQ(colog::parse_formula(colog::print_formula(f)), f);
  }
}

TEST(Translate, DefinitionClauses) {
  // O(p/q) becomes (q^bullet and (q -> p)^star)^circ.
  Formula o = colog::translate_deontic(Formula::obl(p(), q()));
  EXPECT_EQ(colog::print_formula(o),
            "(lab circ (and (lab bullet q) (lab star (imp q p))))");
  // P(p/q) is the negated obligation of the negated body.
  Formula perm = colog::translate_deontic(Formula::perm(p(), q()));
  EXPECT_EQ(colog::print_formula(perm),
            "(not (lab circ (and (lab bullet q) (lab star (imp q (not p))))))");
  EXPECT_EQ(colog::translate_deontic(p()), p());
}

TEST(Translate, IdempotentAndDeonticFree) {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = testsup::random_formula(rng, 5);
    Formula t = colog::translate_deontic(f);
    EXPECT_FALSE(colog::contains_deontic(t));
    EXPECT_EQ(colog::translate_deontic(t), t);
  }
}

TEST(Substitute, SchemaInstantiation) {
  Formula schema = Formula::obl(Formula::atom("A"), Formula::atom("C"));
  colog::Bindings b{{"A", Formula::conj(p(), r())}, {"C", q()}};
  EXPECT_EQ(colog::substitute(schema, b),
            Formula::obl(Formula::conj(p(), r()), q()));

  Formula lone = Formula::atom("A");
  EXPECT_EQ(colog::substitute(lone, {}), lone);

  // A2 at A = B = p, C = q: both conjuncts of the expansion agree.
  Formula a2 = colog::axiom_schema(colog::AxiomId::A2);
  colog::Bindings b2{{"A", p()}, {"B", p()}, {"C", q()}};
  Formula inst = colog::substitute(a2, b2);
  Formula opp_q = Formula::obl(Formula::conj(p(), p()), q());
  Formula both = Formula::conj(Formula::obl(p(), q()), Formula::obl(p(), q()));
  EXPECT_EQ(inst, colog::iff_expansion(opp_q, both));
}

TEST(Substitute, ComposesOnDisjointDomains) {
  std::mt19937 rng(99);
  for (int i = 0; i < 200; ++i) {
    Formula f = testsup::random_formula(rng, 4);
    Formula g = testsup::random_formula(rng, 3, false);
    Formula h = testsup::random_formula(rng, 3, false);
    // m1 maps p; m2 maps q; g and h avoid introducing p or q captures by
    // construction only when their atoms are disjoint from the domains.
    auto g_atoms = colog::formula_atoms(g);
    auto h_atoms = colog::formula_atoms(h);
    if (g_atoms.count("q") || h_atoms.count("p") || h_atoms.count("q"))
      continue;
    colog::Bindings m1{{"p", g}};
    colog::Bindings m2{{"q", h}};
    colog::Bindings composed{{"p", colog::substitute(g, m2)}, {"q", h}};
    EXPECT_EQ(colog::substitute(colog::substitute(f, m1), m2),
              colog::substitute(f, composed));
  }
}
