#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "colog/formula.hpp"
#include "colog/sexpr.hpp"

namespace colog {

// Raised when a bullet/star label is evaluated with no sphere in scope,
// i.e. the formula uses a world quantifier outside any sphere quantifier.
class UnboundSphere : public std::runtime_error {
public:
  UnboundSphere() : std::runtime_error("world label outside any sphere") {}
};

// Finite Lewis sphere model. Worlds are indices 0..world_count-1 and sets
// of worlds are bitmasks. The sphere sequence must be a ⊆-chain; it may be
// empty, and individual spheres may be empty sets. Atoms missing from the
// valuation evaluate to false everywhere.
struct SphereModel {
  int world_count = 1;
  std::vector<std::uint32_t> spheres;
  std::map<std::string, std::uint32_t> valuation;
  int designated = 0;

  std::uint32_t full_mask() const {
    return world_count >= 32 ? ~0u : ((1u << world_count) - 1);
  }

  bool nesting_ok() const {
    for (std::size_t i = 0; i + 1 < spheres.size(); ++i)
      if ((spheres[i] & spheres[i + 1]) != spheres[i])
        return false;
    return true;
  }

  bool well_formed() const {
    if (world_count < 1 || designated < 0 || designated >= world_count)
      return false;
    std::uint32_t full = full_mask();
    for (std::uint32_t s : spheres)
      if ((s & ~full) != 0)
        return false;
    for (const auto &[name, mask] : valuation)
      if (!is_atom_name(name) || (mask & ~full) != 0)
        return false;
    return nesting_ok();
  }
};

namespace detail {

// Evaluates f pointwise over all worlds at once: the result is the mask of
// worlds at which f holds, given the current sphere (when one is bound).
// Truth of the deontic and circ/allsph clauses does not depend on the
// current world or sphere, so those cases yield all-or-nothing masks; this
// is what makes eval(f) == eval(translate_deontic(f)) an exact identity.
inline std::uint32_t eval_mask(const SphereModel &m, const Formula &f,
                               std::optional<std::uint32_t> sphere) {
  const std::uint32_t full = m.full_mask();
  switch (f.kind()) {
  case Formula::Kind::Atom: {
    auto it = m.valuation.find(f.atom_name());
    return it == m.valuation.end() ? 0u : it->second;
  }
  case Formula::Kind::TopN:
    return full;
  case Formula::Kind::BotN:
  case Formula::Kind::BotW:
    return 0u;
  case Formula::Kind::Not:
    return full & ~eval_mask(m, f.lhs(), sphere);
  case Formula::Kind::And:
    return eval_mask(m, f.lhs(), sphere) & eval_mask(m, f.rhs(), sphere);
  case Formula::Kind::Or:
    return eval_mask(m, f.lhs(), sphere) | eval_mask(m, f.rhs(), sphere);
  case Formula::Kind::Imp:
    return (full & ~eval_mask(m, f.lhs(), sphere)) |
           eval_mask(m, f.rhs(), sphere);
  case Formula::Kind::Labeled: {
    switch (f.label()) {
    case Label::SomeWorld: {
      if (!sphere)
        throw UnboundSphere();
      std::uint32_t t = eval_mask(m, f.body(), sphere);
      return (t & *sphere) != 0 ? full : 0u;
    }
    case Label::AllWorlds: {
      if (!sphere)
        throw UnboundSphere();
      std::uint32_t t = eval_mask(m, f.body(), sphere);
      return (*sphere & ~t) == 0 ? full : 0u;
    }
    case Label::SomeSphere: {
      std::uint32_t acc = 0;
      for (std::uint32_t s : m.spheres)
        acc |= eval_mask(m, f.body(), s);
      return acc;
    }
    case Label::AllSpheres: {
      std::uint32_t acc = full;
      for (std::uint32_t s : m.spheres)
        acc &= eval_mask(m, f.body(), s);
      return acc;
    }
    }
    return 0u;
  }
  case Formula::Kind::Obl: {
    // Some sphere contains a condition-world and all its condition-worlds
    // satisfy the body. Matches the label form of Definition 1 exactly.
    for (std::uint32_t s : m.spheres) {
      std::uint32_t c = eval_mask(m, f.condition(), s);
      if ((c & s) == 0)
        continue;
      std::uint32_t a = eval_mask(m, f.body(), s);
      if ((c & s & ~a) == 0)
        return full;
    }
    return 0u;
  }
  case Formula::Kind::Perm: {
    Formula dual = Formula::obl(Formula::negate(f.body()), f.condition());
    return full & ~eval_mask(m, dual, sphere);
  }
  }
  return 0u;
}

} // namespace detail

// Truth of f at the model's designated world, with no sphere in scope.
inline bool eval(const SphereModel &m, const Formula &f) {
  return (detail::eval_mask(m, f, std::nullopt) >> m.designated) & 1u;
}

// ---------------------------------------------------------------------
// Model text format (canonical, emitted for countermodels):
//   (model (worlds n) (spheres (s i j ...) ...) (val a i ...) ... (designated d))
// Worlds are 0-based indices; each sphere lists its members in ascending
// order; valuation entries are sorted by atom name.
// ---------------------------------------------------------------------

inline std::string print_model(const SphereModel &m) {
  std::string out = "(model (worlds " + std::to_string(m.world_count) + ")";
  out += " (spheres";
  for (std::uint32_t s : m.spheres) {
    out += " (s";
    for (int w = 0; w < m.world_count; ++w)
      if ((s >> w) & 1u)
        out += ' ' + std::to_string(w);
    out += ')';
  }
  out += ')';
  for (const auto &[name, mask] : m.valuation) {
    out += " (val " + name;
    for (int w = 0; w < m.world_count; ++w)
      if ((mask >> w) & 1u)
        out += ' ' + std::to_string(w);
    out += ')';
  }
  out += " (designated " + std::to_string(m.designated) + "))";
  return out;
}

inline SphereModel model_from_sexpr(const SExpr &node) {
  if (!node.is_list() || node.head() != "model")
    throw SyntaxError(node.offset, "(model ...)");

  SphereModel m;
  m.world_count = 0;
  bool saw_worlds = false, saw_designated = false;

  auto world_set = [&](const SExpr &list, std::size_t from) {
    std::uint32_t mask = 0;
    for (std::size_t i = from; i < list.items.size(); ++i) {
      int w = sexpr_int(list.items[i], "a world index");
      if (w < 0 || w >= m.world_count)
        throw SyntaxError(list.items[i].offset, "an index below (worlds n)");
      mask |= 1u << w;
    }
    return mask;
  };

  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const SExpr &part = node.items[i];
    std::string_view head = part.head();
    if (head == "worlds") {
      if (part.items.size() != 2)
        throw SyntaxError(part.offset, "(worlds n)");
      m.world_count = sexpr_int(part.items[1], "a world count");
      if (m.world_count < 1 || m.world_count > 30)
        throw SyntaxError(part.items[1].offset, "a world count in 1..30");
      saw_worlds = true;
    } else if (head == "spheres") {
      if (!saw_worlds)
        throw SyntaxError(part.offset, "(worlds n) before (spheres ...)");
      for (std::size_t j = 1; j < part.items.size(); ++j) {
        if (part.items[j].head() != "s")
          throw SyntaxError(part.items[j].offset, "(s i ...)");
        m.spheres.push_back(world_set(part.items[j], 1));
      }
    } else if (head == "val") {
      if (!saw_worlds || part.items.size() < 2 ||
          !part.items[1].is_symbol() || !is_atom_name(part.items[1].sym))
        throw SyntaxError(part.offset, "(val atom i ...)");
      m.valuation[part.items[1].sym] = world_set(part, 2);
    } else if (head == "designated") {
      if (!saw_worlds || part.items.size() != 2)
        throw SyntaxError(part.offset, "(designated d)");
      m.designated = sexpr_int(part.items[1], "a world index");
      if (m.designated < 0 || m.designated >= m.world_count)
        throw SyntaxError(part.items[1].offset, "an index below (worlds n)");
      saw_designated = true;
    } else {
      throw SyntaxError(part.offset, "worlds|spheres|val|designated");
    }
  }
  if (!saw_worlds || !saw_designated)
    throw SyntaxError(node.offset, "(worlds n) and (designated d)");
  if (!m.nesting_ok())
    throw SyntaxError(node.offset, "spheres forming a ⊆-chain");
  return m;
}

inline SphereModel parse_model(std::string_view text) {
  return model_from_sexpr(read_sexpr(text));
}

} // namespace colog
