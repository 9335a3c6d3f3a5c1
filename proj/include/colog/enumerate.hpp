#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "colog/model.hpp"

namespace colog {

namespace detail {

// All ⊆-chains of distinct nonempty subsets of {0..n-1}, plus the empty
// chain, in a fixed order: empty chain first, then depth-first extension
// with members in ascending bitmask order. Distinctness plus the chain
// condition make the sequences strictly increasing.
inline std::vector<std::vector<std::uint32_t>> sphere_chains(int n) {
  std::uint32_t full = (1u << n) - 1;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> chain;
  std::function<void()> extend = [&] {
    out.push_back(chain);
    std::uint32_t last = chain.empty() ? 0u : chain.back();
    for (std::uint32_t next = last + 1; next <= full; ++next) {
      if ((last & next) != last || next == last)
        continue;
      chain.push_back(next);
      extend();
      chain.pop_back();
    }
  };
  extend();
  return out;
}

} // namespace detail

// Exhaustive, deterministic stream of sphere models: for each world count
// n in 1..max_worlds, every valuation of the given atoms (first atom's
// mask varies fastest), every sphere chain (order of sphere_chains), every
// designated world — nested in that order, innermost last.
class ModelEnumerator {
public:
  ModelEnumerator(std::vector<std::string> atoms, int max_worlds)
      : atoms_(std::move(atoms)), max_worlds_(max_worlds) {
    start_size(1);
  }

  std::optional<SphereModel> next() {
    if (n_ > max_worlds_)
      return std::nullopt;

    SphereModel m;
    m.world_count = n_;
    m.spheres = chains_[chain_index_];
    m.designated = designated_;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      m.valuation[atoms_[i]] = val_[i];
    advance();
    return m;
  }

private:
  void start_size(int n) {
    n_ = n;
    if (n_ > max_worlds_)
      return;
    chains_ = detail::sphere_chains(n_);
    val_.assign(atoms_.size(), 0u);
    chain_index_ = 0;
    designated_ = 0;
  }

  void advance() {
    if (++designated_ < n_)
      return;
    designated_ = 0;
    if (++chain_index_ < chains_.size())
      return;
    chain_index_ = 0;
    std::uint32_t full = (1u << n_) - 1;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (val_[i] < full) {
        ++val_[i];
        return;
      }
      val_[i] = 0;
    }
    start_size(n_ + 1);
  }

  std::vector<std::string> atoms_;
  int max_worlds_;
  int n_ = 1;
  std::vector<std::vector<std::uint32_t>> chains_;
  std::vector<std::uint32_t> val_;
  std::size_t chain_index_ = 0;
  int designated_ = 0;
};

struct ValidityResult {
  bool valid = true;
  std::optional<SphereModel> countermodel;
  long models_checked = 0;
};

// Bounded validity: returns the first enumerated model falsifying f, or
// Valid relative to the bounds. `atoms` must cover the atoms of f.
inline ValidityResult check_validity(const Formula &f,
                                     const std::vector<std::string> &atoms,
                                     int max_worlds) {
  ValidityResult r;
  ModelEnumerator en(atoms, max_worlds);
  while (auto m = en.next()) {
    ++r.models_checked;
    if (!eval(*m, f)) {
      r.valid = false;
      r.countermodel = std::move(*m);
      return r;
    }
  }
  return r;
}

inline std::vector<std::string> default_atoms() { return {"p", "q", "r"}; }

} // namespace colog
