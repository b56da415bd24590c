#pragma once

// Truth of full-language formulas on validated models.

#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "pald/models.hpp"
#include "pald/syntax.hpp"

namespace pald {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws EvalError if the formula mentions an atom or agent the model does
/// not declare.
void check_signature(const Model& m, const Form& f);

/// Truth at world w. Throws EvalError for an unknown world, atom or agent.
bool eval(const Model& m, std::size_t w, const Form& f);

/// Worlds where f holds.
std::set<std::size_t> eval_global(const Model& m, const Form& f);

/// Extension of every distinct subformula, innermost first. Scopes of
/// announcements are listed as evaluated in the original model.
struct ExtensionRow {
  Form formula;
  std::set<std::size_t> worlds;
};
std::vector<ExtensionRow> extension_table(const Model& m, const Form& f);

}  // namespace pald
