// colog command line: evaluate, search, translate and check proof objects
// for conditional-obligation logic over sphere models.
//
// Exit codes: 0 for Ok/valid results, 1 for countermodels and failed
// checks, 2 for unreadable input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "colog/axioms.hpp"
#include "colog/enumerate.hpp"
#include "colog/formula.hpp"
#include "colog/hilbert.hpp"
#include "colog/model.hpp"
#include "colog/nd_check.hpp"
#include "colog/nd_templates.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_atoms(const std::string &arg) {
  std::vector<std::string> atoms;
  std::string cur;
  for (char c : arg) {
    if (c == ',' || c == ' ') {
      if (!cur.empty())
        atoms.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty())
    atoms.push_back(cur);
  for (const std::string &a : atoms)
    if (!colog::is_atom_name(a))
      throw std::runtime_error("'" + a + "' is not an atom name");
  return atoms;
}

int run_eval(const std::string &model_path, const std::string &formula_text) {
  colog::SphereModel m = colog::parse_model(read_file(model_path));
  if (!m.well_formed())
    throw std::runtime_error("model violates its invariants");
  colog::Formula f = colog::parse_formula(formula_text);
  bool value = colog::eval(m, f);
  std::cout << (value ? "true" : "false") << "\n";
  return value ? kExitOk : kExitFail;
}

int run_validity(const std::string &formula_text,
                 const std::string &atoms_arg, int max_worlds) {
  colog::Formula f = colog::parse_formula(formula_text);
  std::vector<std::string> atoms =
      atoms_arg.empty() ? colog::default_atoms() : split_atoms(atoms_arg);
  for (const std::string &a : colog::formula_atoms(f)) {
    bool covered = false;
    for (const std::string &b : atoms)
      covered = covered || a == b;
    if (!covered)
      throw std::runtime_error("atom '" + a + "' not covered by --atoms");
  }
  colog::ValidityResult r = colog::check_validity(f, atoms, max_worlds);
  if (r.valid) {
    std::cout << "valid (bounds: " << max_worlds << " worlds)\n";
    return kExitOk;
  }
  std::cout << colog::print_model(*r.countermodel) << "\n";
  return kExitFail;
}

int run_translate(const std::string &formula_text) {
  colog::Formula f = colog::parse_formula(formula_text);
  std::cout << colog::print_formula(colog::translate_deontic(f)) << "\n";
  return kExitOk;
}

int run_check_hilbert(const std::string &path) {
  colog::HilbertProof pf = colog::parse_proof(read_file(path));
  colog::ProofCheckResult r = colog::check_proof(pf);
  if (r.ok) {
    std::cout << "ok " << colog::print_formula(r.theorem) << "\n";
    return kExitOk;
  }
  std::cout << "error line " << r.error_line << ": " << to_string(r.reason)
            << "\n";
  return kExitFail;
}

int run_check_nd(const std::string &path) {
  colog::Derivation d = colog::parse_derivation(read_file(path));
  colog::NdCheckResult r = colog::check_derivation(d);
  if (r.ok) {
    std::cout << "ok " << colog::print_formula(d.root.conclusion.formula)
              << "\n";
    return kExitOk;
  }
  std::cout << "error at " << colog::path_to_string(r.error->path) << ": "
            << to_string(r.error->reason) << " (" << r.error->detail << ")\n";
  return kExitFail;
}

int run_gen_template(const std::string &id_arg, const std::string &a_text,
                     const std::string &b_text, const std::string &c_text,
                     const std::string &out_path) {
  auto id = colog::template_from_name(id_arg);
  if (!id)
    throw std::runtime_error("unknown template id '" + id_arg +
                             "' (r3 r4 a2l a2r a3 a4 a5 a6 a7 a8)");
  colog::Formula a = colog::parse_formula(a_text);
  colog::Formula b = colog::parse_formula(b_text);
  colog::Formula c = colog::parse_formula(c_text);

  // R3 needs a proof of a ≡ b and R4 of b ≡ c; only the reflexive
  // equivalence can be synthesized here, so the matching slots must agree.
  std::optional<colog::Derivation> aux;
  if (*id == colog::TemplateId::R3) {
    if (a != b)
      throw std::runtime_error(
          "gen-template r3 synthesizes only reflexive aux proofs (a = b)");
    aux = colog::transfer(colog::reflexive_equivalence(a));
  } else if (*id == colog::TemplateId::R4) {
    if (b != c)
      throw std::runtime_error(
          "gen-template r4 synthesizes only reflexive aux proofs (b = c)");
    aux = colog::transfer(colog::reflexive_equivalence(b));
  }

  colog::Derivation d = colog::generate_template(*id, a, b, c, aux);
  std::string text = colog::print_derivation(d);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
  }
  return kExitOk;
}

int run_axiom_suite(int max_worlds) {
  colog::SuiteReport report = colog::axiom_validity_suite(max_worlds);
  for (const colog::SchemaReport &s : report.schemas) {
    if (s.all_valid()) {
      std::cout << colog::axiom_name(s.id) << " pass (" << s.instances
                << " instances)\n";
    } else {
      std::cout << colog::axiom_name(s.id) << " FAIL ("
                << s.failures.size() << "/" << s.instances << " refuted)\n";
      const colog::SchemaFailure &first = s.failures.front();
      for (const auto &[var, val] : first.bindings)
        std::cout << "  " << var << " = " << colog::print_formula(val) << "\n";
      std::cout << "  " << colog::print_model(first.countermodel) << "\n";
    }
  }
  return report.all_valid() ? kExitOk : kExitFail;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"conditional-obligation logic over sphere models"};
  app.require_subcommand(1);

  std::string model_path, formula_text, proof_path, id_arg;
  std::string a_text, b_text, c_text;
  std::string atoms_arg, out_path;
  int max_worlds = 3;

  CLI::App *eval_cmd =
      app.add_subcommand("eval", "evaluate a formula in a model file");
  eval_cmd->add_option("model", model_path, "model file")->required();
  eval_cmd->add_option("formula", formula_text, "formula text")->required();

  CLI::App *validity_cmd = app.add_subcommand(
      "validity", "exhaustive bounded validity / countermodel search");
  validity_cmd->add_option("formula", formula_text, "formula text")
      ->required();
  validity_cmd->add_option("--atoms", atoms_arg,
                           "comma-separated atom list (default p,q,r)");
  validity_cmd->add_option("--max-worlds", max_worlds,
                           "world-count bound (default 3)");

  CLI::App *translate_cmd =
      app.add_subcommand("translate", "rewrite O/P into label form");
  translate_cmd->add_option("formula", formula_text, "formula text")
      ->required();

  CLI::App *hilbert_cmd =
      app.add_subcommand("check-hilbert", "check a Hilbert proof file");
  hilbert_cmd->add_option("proof", proof_path, "proof file")->required();

  CLI::App *nd_cmd =
      app.add_subcommand("check-nd", "check a natural-deduction file");
  nd_cmd->add_option("derivation", proof_path, "derivation file")->required();

  CLI::App *gen_cmd = app.add_subcommand(
      "gen-template", "emit a derivation template instantiated at a, b, c");
  gen_cmd->add_option("id", id_arg, "r3|r4|a2l|a2r|a3|a4|a5|a6|a7|a8")
      ->required();
  gen_cmd->add_option("a", a_text, "formula for A")->required();
  gen_cmd->add_option("b", b_text, "formula for B")->required();
  gen_cmd->add_option("c", c_text, "formula for C")->required();
  gen_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI::App *suite_cmd = app.add_subcommand(
      "axiom-suite", "model-check every axiom schema over the default pool");
  suite_cmd->add_option("--max-worlds", max_worlds,
                        "world-count bound (default 3)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed())
      return run_eval(model_path, formula_text);
    if (validity_cmd->parsed())
      return run_validity(formula_text, atoms_arg, max_worlds);
    if (translate_cmd->parsed())
      return run_translate(formula_text);
    if (hilbert_cmd->parsed())
      return run_check_hilbert(proof_path);
    if (nd_cmd->parsed())
      return run_check_nd(proof_path);
    if (gen_cmd->parsed())
      return run_gen_template(id_arg, a_text, b_text, c_text, out_path);
    if (suite_cmd->parsed())
      return run_axiom_suite(max_worlds);
  } catch (const colog::SyntaxError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const colog::UnboundSphere &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
