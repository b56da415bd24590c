#pragma once

// Hilbert proofs, the announcement reduction and a tableau for the
// announcement-free fragment.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pald/defcore.hpp"
#include "pald/models.hpp"
#include "pald/syntax.hpp"

namespace pald {

// ---------------------------------------------------------------------------
// Axioms

/// Raised when a tautology check would need more than 20 abstracted leaves.
class TautologyLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxTautologyLeaves = 20;

/// Propositional tautology after abstracting every non-boolean subformula
/// (atoms, ==, box, announcements, kd, :=) to a letter.
bool is_tautology(const Form& f);

/// Names of the axiom schemas (other than "taut") the formula instantiates.
/// Schema names: K, ann-atom, ann-equiv, ann-neg, ann-and, ann-box, ann-ann,
/// refl, sym, trans, equiv, occ-subst, pattern-neg, pattern-and,
/// pattern-mismatch, non-circularity.
std::vector<std::string> matching_schemas(const Form& f);

/// The first matching schema, then "taut"; nullopt if none. Throws
/// TautologyLimitError if no schema matches and the tautology check is
/// refused.
std::optional<std::string> is_axiom_instance(const Form& f);

/// True if `name` is a schema name or "taut" and the formula instantiates it.
bool instance_of(const Form& f, std::string_view name);

// ---------------------------------------------------------------------------
// Proofs

struct ProofLine {
  enum class Rule { Axiom, Taut, MP, Nec, Unknown };
  Form formula;
  Rule rule;
  std::vector<std::size_t> refs;      // 1-based line numbers
  std::optional<Agent> agent;         // Nec only
  std::optional<std::string> name;    // optional schema name for Axiom
  std::string unknown_rule;           // the rule text when Rule::Unknown
};

struct Proof {
  std::vector<ProofLine> lines;
};

struct ProofFailure {
  std::size_t line;  // 1-based
  std::string reason;
};

std::optional<ProofFailure> verify_proof(const Proof& proof);

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Proof parse_proof(std::string_view json_text);
std::string dump_proof(const Proof& proof);

/// (L1 & (L2 & ...)) for the literals, as full-language formulas.
Form conjunction(const std::vector<EquivLiteral>& premises);

/// A proof whose last line is H -> X, where H is the conjunction of the
/// derivation's premises and X its last fact.
Proof derivation_proof(const Derivation& d);

/// Proofs ending in ~H: the premises are jointly contradictory.
Proof refutation(const CircularWitness& w);
Proof refutation(const ClashWitness& w);
/// Ends in ~(H & N) with N the violated negative literal.
Proof refutation(const Disequality& d, const EquivLiteral& negative);

// ---------------------------------------------------------------------------
// Reduction

class ReduceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An announcement-free equivalent. Throws ReduceError when an announcement
/// scope contains kd or :=.
Form reduce(const Form& f);

// ---------------------------------------------------------------------------
// Satisfiability

class TableauError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sat {
  Model model;  // the root world is index 0 and the actual world
};
struct Unsat {};
using SatResult = std::variant<Sat, Unsat>;

/// Tableau for multi-agent K with definitional literals. Throws TableauError
/// for formulas with announcements, kd or :=.
SatResult satisfiable(const Form& f);

/// unsat(~reduce(f)). Throws ReduceError or TableauError as those do.
bool valid(const Form& f);

}  // namespace pald
