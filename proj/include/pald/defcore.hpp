#pragma once

// Decision procedures for definitional equivalence.
//
// Atoms are treated as unification variables and ~, & as constructors. Every
// binding and union the unifier performs is justified by a derived fact in
// the state's trail, so failures (pattern mismatch, circularity) come with a
// derivation that can be replayed and turned into a Hilbert refutation.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pald/syntax.hpp"

namespace pald {

/// (left == right) when positive, (left != right) otherwise.
struct EquivLiteral {
  bool positive = true;
  BoolForm left;
  BoolForm right;

  friend bool operator==(const EquivLiteral&, const EquivLiteral&) = default;
};

Form to_form(const EquivLiteral& lit);
std::string to_string(const EquivLiteral& lit);

/// Undefined (nullopt) when a negation meets a conjunction.
std::optional<BoolForm> merge(const BoolForm& p, const BoolForm& q);

/// Occurrence substitutions on `p` whose simultaneous application yields
/// merge(p, q). Each replacement R for atom a satisfies a == R given p == q.
std::optional<std::vector<OccSubst>> merge_substitution(const BoolForm& p, const BoolForm& q);

/// Longest element, ties broken by the smallest in lex_compare.
/// Throws std::invalid_argument on an empty input.
BoolForm pick(const std::vector<BoolForm>& candidates);

// ---------------------------------------------------------------------------
// Derivations

enum class Rule {
  Premise,        // an asserted literal
  Reflexivity,    // P == P
  Symmetry,       // P == Q  |-  Q == P
  Transitivity,   // P == Q, Q == R  |-  P == R
  PatternNeg,     // ~P == ~Q  |-  P == Q
  PatternAndLeft, // (P & Q) == (R & S)  |-  P == R
  PatternAndRight,// (P & Q) == (R & S)  |-  Q == S
  OccSubst,       // p == Q, R == S  |-  R == [k:p -> Q]S
};

std::string to_string(Rule r);

/// A derived positive literal left == right.
struct Fact {
  BoolForm left;
  BoolForm right;
  Rule rule;
  std::vector<std::size_t> from;    // indices of earlier facts
  std::optional<OccSubst> subst;    // OccSubst only
  std::size_t premise = 0;          // Premise only: index into the premise list
};

struct Derivation {
  std::vector<EquivLiteral> premises;
  std::vector<Fact> facts;
};

/// Checks that every fact follows from its sources by its rule; returns the
/// index of the first bad fact, or nullopt if the derivation replays.
std::optional<std::size_t> first_invalid_fact(const Derivation& d);

/// The facts needed for `goal`, renumbered so the goal is the last fact.
Derivation extract(const Derivation& d, std::size_t goal);

/// A circular formula derived from the premises.
struct CircularWitness {
  EquivLiteral conclusion;
  /// The first premise of the chain and the occurrence substitutions applied
  /// to its right-hand side, each justified by the listed literal.
  EquivLiteral start;
  std::vector<std::pair<EquivLiteral, OccSubst>> steps;
  /// Full justification; the last fact is the conclusion.
  Derivation derivation;
};

/// Replays start + steps and checks the result is the circular conclusion.
bool replay_steps(const CircularWitness& w);

/// ~P == (Q & R) derived from the premises.
struct ClashWitness {
  EquivLiteral mismatch;
  Derivation derivation;
};

// ---------------------------------------------------------------------------
// Unification state

class DefState {
 public:
  Atom representative(const Atom& a) const;
  /// Binding of a class representative, if any.
  std::optional<BoolForm> binding(const Atom& rep) const;

  /// Atoms replaced by their fully unravelled binding, unbound atoms by their
  /// class representative.
  BoolForm resolve(const BoolForm& f) const;

  /// Atoms that have been merged, bound, or mentioned.
  std::set<Atom> known_atoms() const;

  const std::vector<EquivLiteral>& premises() const { return premises_; }
  const std::vector<Fact>& trail() const { return trail_; }
  Derivation derivation() const { return {premises_, trail_}; }

  /// Index of a fact proving f == resolve(f); extends the trail.
  std::size_t prove_resolution(const BoolForm& f);

  /// Checks that the trail replays and justifies every current link and binding.
  bool consistent_with_trail() const;

 private:
  friend class Unifier;

  struct Link {
    Atom parent;
    std::size_t fact;  // child == parent
  };
  struct Binding {
    BoolForm term;
    std::size_t fact;  // rep == term
  };

  std::map<Atom, Link> parent_;
  std::map<Atom, Binding> binding_;
  std::set<Atom> mentioned_;
  std::vector<EquivLiteral> premises_;
  std::vector<Fact> trail_;
  std::map<Atom, std::size_t> resolution_memo_;
};

struct Clash {
  ClashWitness witness;
};
struct Circularity {
  CircularWitness witness;
};

using AssertOutcome = std::variant<DefState, Clash, Circularity>;

/// Asserts left == right. The state is taken by value; the caller's copy is
/// untouched.
AssertOutcome assert_equiv(DefState state, const BoolForm& left, const BoolForm& right);

// ---------------------------------------------------------------------------
// Literal sets

struct LiteralSet {
  std::vector<EquivLiteral> equivalences;
  /// Boolean formulas that must be true (use ~p for a negative literal).
  std::vector<BoolForm> propositions;
};

/// Single-world model: every atom gets a definition and a truth value.
struct ModelSeed {
  std::map<Atom, BoolForm> def;
  std::map<Atom, bool> valuation;
};

struct Disequality {
  std::size_t literal;      // index into equivalences
  Derivation derivation;    // last fact proves left == right
};
struct BooleanUnsat {};

using UnsatReason = std::variant<Clash, Circularity, Disequality, BooleanUnsat>;

struct Satisfiable {
  ModelSeed seed;
  DefState state;
};
struct Unsatisfiable {
  UnsatReason reason;
};

using LiteralSatResult = std::variant<Satisfiable, Unsatisfiable>;

/// `vocabulary` lists extra atoms the seed must cover.
LiteralSatResult literal_sat(const LiteralSet& lits, const std::set<Atom>& vocabulary = {});

std::string describe(const UnsatReason& reason);

}  // namespace pald
