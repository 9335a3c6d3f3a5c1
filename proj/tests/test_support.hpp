#pragma once

#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "colog/formula.hpp"
#include "colog/model.hpp"

namespace testsup {

inline std::string fixture_path(const std::string &rel) {
  return std::string(COLOG_FIXTURES_DIR) + "/" + rel;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------
// Independent evaluation oracle: direct recursion over explicit world
// sets with an explicit evaluation point, kept deliberately apart from
// the library's bitmask evaluator.
// ---------------------------------------------------------------------

inline std::set<int> mask_to_set(std::uint32_t mask, int n) {
  std::set<int> s;
  for (int w = 0; w < n; ++w)
    if ((mask >> w) & 1u)
      s.insert(w);
  return s;
}

inline bool oracle_eval_at(const colog::SphereModel &m,
                           const colog::Formula &f,
                           const std::optional<std::set<int>> &sphere,
                           int world) {
  using K = colog::Formula::Kind;
  switch (f.kind()) {
  case K::Atom: {
    auto it = m.valuation.find(f.atom_name());
    if (it == m.valuation.end())
      return false;
    return mask_to_set(it->second, m.world_count).count(world) > 0;
  }
  case K::TopN:
    return true;
  case K::BotN:
  case K::BotW:
    return false;
  case K::Not:
    return !oracle_eval_at(m, f.lhs(), sphere, world);
  case K::And:
    return oracle_eval_at(m, f.lhs(), sphere, world) &&
           oracle_eval_at(m, f.rhs(), sphere, world);
  case K::Or:
    return oracle_eval_at(m, f.lhs(), sphere, world) ||
           oracle_eval_at(m, f.rhs(), sphere, world);
  case K::Imp:
    return !oracle_eval_at(m, f.lhs(), sphere, world) ||
           oracle_eval_at(m, f.rhs(), sphere, world);
  case K::Labeled: {
    switch (f.label()) {
    case colog::Label::SomeWorld: {
      if (!sphere)
        throw std::runtime_error("oracle: unbound sphere");
      for (int w : *sphere)
        if (oracle_eval_at(m, f.body(), sphere, w))
          return true;
      return false;
    }
    case colog::Label::AllWorlds: {
      if (!sphere)
        throw std::runtime_error("oracle: unbound sphere");
      for (int w : *sphere)
        if (!oracle_eval_at(m, f.body(), sphere, w))
          return false;
      return true;
    }
    case colog::Label::SomeSphere: {
      for (std::uint32_t s : m.spheres)
        if (oracle_eval_at(m, f.body(), mask_to_set(s, m.world_count), world))
          return true;
      return false;
    }
    case colog::Label::AllSpheres: {
      for (std::uint32_t s : m.spheres)
        if (!oracle_eval_at(m, f.body(), mask_to_set(s, m.world_count), world))
          return false;
      return true;
    }
    }
    return false;
  }
  case K::Obl: {
    for (std::uint32_t smask : m.spheres) {
      std::set<int> s = mask_to_set(smask, m.world_count);
      bool witness = false;
      bool closed = true;
      for (int w : s) {
        bool cond = oracle_eval_at(m, f.condition(), s, w);
        witness = witness || cond;
        if (cond && !oracle_eval_at(m, f.body(), s, w))
          closed = false;
      }
      if (witness && closed)
        return true;
    }
    return false;
  }
  case K::Perm:
    return !oracle_eval_at(
        m, colog::Formula::obl(colog::Formula::negate(f.body()), f.condition()),
        sphere, world);
  }
  return false;
}

inline bool oracle_eval(const colog::SphereModel &m, const colog::Formula &f) {
  return oracle_eval_at(m, f, std::nullopt, m.designated);
}

// ---------------------------------------------------------------------
// Random formula generation for the round-trip and oracle-parity suites.
// ---------------------------------------------------------------------

inline colog::Formula random_formula(std::mt19937 &rng, int depth,
                                     bool with_deontic = true) {
  using F = colog::Formula;
  static const char *atoms[] = {"p", "q", "r", "s", "t_1"};
  std::uniform_int_distribution<int> leaf_pick(0, 7);
  if (depth <= 0) {
    switch (leaf_pick(rng)) {
    case 5:
      return F::top_n();
    case 6:
      return F::bot_n();
    case 7:
      return F::bot_w();
    default:
      return F::atom(atoms[leaf_pick(rng) % 5]);
    }
  }
  std::uniform_int_distribution<int> pick(0, with_deontic ? 9 : 7);
  switch (pick(rng)) {
  case 0:
    return F::negate(random_formula(rng, depth - 1, with_deontic));
  case 1:
    return F::conj(random_formula(rng, depth - 1, with_deontic),
                   random_formula(rng, depth - 1, with_deontic));
  case 2:
    return F::disj(random_formula(rng, depth - 1, with_deontic),
                   random_formula(rng, depth - 1, with_deontic));
  case 3:
    return F::imp(random_formula(rng, depth - 1, with_deontic),
                  random_formula(rng, depth - 1, with_deontic));
  case 4:
  case 5: {
    std::uniform_int_distribution<int> lab(0, 3);
    colog::Label l = static_cast<colog::Label>(lab(rng));
    return F::labeled(random_formula(rng, depth - 1, with_deontic), l);
  }
  case 6:
  case 7:
    return random_formula(rng, 0, with_deontic);
  case 8:
    return F::obl(random_formula(rng, depth - 1, with_deontic),
                  random_formula(rng, depth - 1, with_deontic));
  default:
    return F::perm(random_formula(rng, depth - 1, with_deontic),
                   random_formula(rng, depth - 1, with_deontic));
  }
}

// Boolean skeleton over opaque leaves (atoms, deontic and labeled chunks).
inline colog::Formula random_bool_skeleton(std::mt19937 &rng, int depth) {
  using F = colog::Formula;
  static const char *atoms[] = {"p", "q", "r"};
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
  switch (pick(rng)) {
  case 0:
    return F::atom(atoms[std::uniform_int_distribution<int>(0, 2)(rng)]);
  case 1: {
    F a = F::atom(atoms[std::uniform_int_distribution<int>(0, 2)(rng)]);
    F b = F::atom(atoms[std::uniform_int_distribution<int>(0, 2)(rng)]);
    return F::obl(a, b); // opaque leaf
  }
  case 2:
    return std::uniform_int_distribution<int>(0, 1)(rng) ? F::top_n()
                                                         : F::bot_n();
  case 3:
    return F::negate(random_bool_skeleton(rng, depth - 1));
  case 4:
    return F::conj(random_bool_skeleton(rng, depth - 1),
                   random_bool_skeleton(rng, depth - 1));
  case 5:
    return F::disj(random_bool_skeleton(rng, depth - 1),
                   random_bool_skeleton(rng, depth - 1));
  default:
    return F::imp(random_bool_skeleton(rng, depth - 1),
                  random_bool_skeleton(rng, depth - 1));
  }
}

// Truth-table oracle for the tautology checker: collects opaque leaves by
// printed form, then evaluates the formula recursively under every
// assignment. Independent of the checker's compiled skeleton.
inline void collect_opaque(const colog::Formula &f,
                           std::set<std::string> &keys) {
  using K = colog::Formula::Kind;
  switch (f.kind()) {
  case K::TopN:
  case K::BotN:
  case K::BotW:
    return;
  case K::Not:
    collect_opaque(f.lhs(), keys);
    return;
  case K::And:
  case K::Or:
  case K::Imp:
    collect_opaque(f.lhs(), keys);
    collect_opaque(f.rhs(), keys);
    return;
  default:
    keys.insert(colog::print_formula(f));
  }
}

inline bool eval_opaque(const colog::Formula &f,
                        const std::set<std::string> &true_keys) {
  using K = colog::Formula::Kind;
  switch (f.kind()) {
  case K::TopN:
    return true;
  case K::BotN:
  case K::BotW:
    return false;
  case K::Not:
    return !eval_opaque(f.lhs(), true_keys);
  case K::And:
    return eval_opaque(f.lhs(), true_keys) && eval_opaque(f.rhs(), true_keys);
  case K::Or:
    return eval_opaque(f.lhs(), true_keys) || eval_opaque(f.rhs(), true_keys);
  case K::Imp:
    return !eval_opaque(f.lhs(), true_keys) || eval_opaque(f.rhs(), true_keys);
  default:
    return true_keys.count(colog::print_formula(f)) > 0;
  }
}

inline bool oracle_is_tautology(const colog::Formula &f) {
  std::set<std::string> keys;
  collect_opaque(f, keys);
  std::vector<std::string> ordered(keys.begin(), keys.end());
  std::uint64_t total = std::uint64_t(1) << ordered.size();
  for (std::uint64_t assign = 0; assign < total; ++assign) {
    std::set<std::string> true_keys;
    for (std::size_t i = 0; i < ordered.size(); ++i)
      if ((assign >> i) & 1u)
        true_keys.insert(ordered[i]);
    if (!eval_opaque(f, true_keys))
      return false;
  }
  return true;
}

} // namespace testsup
