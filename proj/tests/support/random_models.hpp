#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "generators.hpp"
#include "pald/models.hpp"

namespace pald::testing {

struct ModelOptions {
  std::size_t max_worlds = 4;
  std::vector<Atom> vocab = first_atoms(3);
  std::vector<Agent> agents = {Agent("i")};
  std::size_t max_def_length = 5;
  double edge_probability = 0.4;
};

/// A random model satisfying both constraints. Each world picks a nonempty
/// set of self-evident atoms; every other atom is defined over that set.
Model random_model(Rng& rng, const ModelOptions& opts);

/// Like random_model but without enforcing the valuation constraint: each
/// valuation is drawn freely. Definitions stay well-founded.
PreModel random_premodel(Rng& rng, const ModelOptions& opts);

std::filesystem::path fixture_dir();
Model fixture(const std::string& name);

}  // namespace pald::testing

namespace pald::testing {

/// Checks the first model constraint literally at world w: any two formulas
/// of length <= max_length with the same unravelling have the same value.
/// Returns a violating pair if there is one.
std::optional<std::pair<BoolForm, BoolForm>> quantified_constraint1(const PreModel& pm,
                                                                    std::size_t w,
                                                                    std::size_t max_length);

}  // namespace pald::testing
