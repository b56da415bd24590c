#pragma once

// Abstract syntax for the two-layer language: boolean formulas (atoms,
// negation, parenthesised conjunction) and the full language built on top of
// them (definitional equivalence, box, public announcement, Kd and :=).
//
// Both formula types are immutable values backed by shared nodes. Equality is
// structural; (p & (q & r)) and ((p & q) & r) are different formulas.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pald {

/// A propositional letter. Names match [a-z][a-z0-9_]* and may not be one of
/// the reserved keywords `box`, `kd`, `kx`.
class Atom {
 public:
  explicit Atom(std::string name);

  const std::string& name() const { return name_; }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    return a.name_ <=> b.name_;
  }

 private:
  std::string name_;
};

class Agent {
 public:
  explicit Agent(std::string name);

  const std::string& name() const { return name_; }

  friend bool operator==(const Agent&, const Agent&) = default;
  friend std::strong_ordering operator<=>(const Agent& a, const Agent& b) {
    return a.name_ <=> b.name_;
  }

 private:
  std::string name_;
};

bool is_identifier(std::string_view text);
bool is_reserved_word(std::string_view text);

// ---------------------------------------------------------------------------
// Boolean layer

class BoolForm {
 public:
  enum class Kind : std::uint8_t { Atom, Neg, And };

  static BoolForm atom(Atom a);
  static BoolForm atom(std::string name) { return atom(Atom(std::move(name))); }
  static BoolForm neg(BoolForm inner);
  static BoolForm conj(BoolForm left, BoolForm right);

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return node_->kind == Kind::Atom; }
  bool is_neg() const { return node_->kind == Kind::Neg; }
  bool is_and() const { return node_->kind == Kind::And; }

  /// Only valid for atoms.
  const Atom& atom() const;
  /// Operand of a negation.
  BoolForm inner() const;
  BoolForm left() const;
  BoolForm right() const;

  /// l(p) = 1, l(~P) = l(P) + 1, l((P & Q)) = l(P) + l(Q) + 3.
  std::size_t length() const { return node_->length; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const BoolForm& a, const BoolForm& b);
  /// Structural lexicographic order: Atom < Neg < And, atoms alphabetically,
  /// operands compared left to right.
  friend std::strong_ordering operator<=>(const BoolForm& a, const BoolForm& b);

 private:
  struct Node {
    Kind kind;
    std::optional<Atom> name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t length;
    std::size_t hash;
  };
  explicit BoolForm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static std::strong_ordering compare(const Node* a, const Node* b);
  static bool equal(const Node* a, const Node* b);

  std::shared_ptr<const Node> node_;
};

std::strong_ordering lex_compare(const BoolForm& a, const BoolForm& b);
std::size_t length(const BoolForm& f);
std::set<Atom> vocabulary(const BoolForm& f);
bool occurs_in(const Atom& p, const BoolForm& f);

/// Leaves of f in left-to-right order (which is also printed order).
std::vector<Atom> leaves(const BoolForm& f);

/// Number of leaves of `in` labelled `p`.
std::size_t occurrences(const Atom& p, const BoolForm& in);

/// [k:p -> R]: replace the k-th (1-based) occurrence of p.
struct OccSubst {
  std::size_t index;
  Atom atom;
  BoolForm replacement;

  friend bool operator==(const OccSubst&, const OccSubst&) = default;
};

class SubstitutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws SubstitutionError when `in` has fewer than s.index occurrences.
BoolForm apply_occ_subst(const OccSubst& s, const BoolForm& in);

/// Simultaneous application. Indices refer to occurrences in the original
/// formula; two substitutions may not target the same occurrence.
BoolForm apply_simultaneous(const std::vector<OccSubst>& ss, const BoolForm& in);

/// P == Q is circular iff one side is an atom p, the other side is not p and
/// contains p.
bool is_circular(const BoolForm& lhs, const BoolForm& rhs);

// ---------------------------------------------------------------------------
// Full language

class Form {
 public:
  enum class Kind : std::uint8_t { Atom, Equiv, Neg, And, Box, Ann, Kd, DefIs };

  static Form atom(Atom a);
  static Form atom(std::string name) { return atom(Atom(std::move(name))); }
  static Form equiv(BoolForm lhs, BoolForm rhs);
  static Form neg(Form inner);
  static Form conj(Form left, Form right);
  static Form box(Agent agent, Form inner);
  static Form announce(Form announced, Form inner);
  static Form kd(Agent agent, BoolForm operand);
  static Form def_is(Atom atom, BoolForm definition);

  Kind kind() const { return node_->kind; }

  const Atom& atom() const;      // Atom, DefIs
  const Agent& agent() const;    // Box, Kd
  const BoolForm& bool_lhs() const;  // Equiv lhs, Kd operand, DefIs definition
  const BoolForm& bool_rhs() const;  // Equiv rhs
  Form inner() const;            // Neg, Box, and the scope of Ann
  Form left() const;             // And
  Form right() const;            // And
  Form announced() const;        // Ann

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Form& a, const Form& b);
  friend std::strong_ordering operator<=>(const Form& a, const Form& b);

 private:
  struct Node {
    Kind kind;
    std::optional<Atom> name;
    std::optional<Agent> agent;
    std::optional<BoolForm> p;
    std::optional<BoolForm> q;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t hash;
  };
  explicit Form(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static std::strong_ordering compare(const Node* a, const Node* b);

  std::shared_ptr<const Node> node_;
};

// Derived connectives. The tree only stores primitives:
//   a | b   := ~(~a & ~b)
//   a -> b  := ~a | b = ~(~~a & ~b)
//   a <-> b := (a -> b) & (b -> a)
//   P != Q  := ~(P == Q)
//   kx i P  := box i P & kd i P
Form disj(const Form& a, const Form& b);
Form implies(const Form& a, const Form& b);
Form iff(const Form& a, const Form& b);
Form nequiv(const BoolForm& a, const BoolForm& b);
Form kx(const Agent& agent, const BoolForm& operand);

std::optional<std::pair<Form, Form>> match_disj(const Form& f);
std::optional<std::pair<Form, Form>> match_implies(const Form& f);
std::optional<std::pair<Form, Form>> match_iff(const Form& f);

/// Homomorphic embedding of the boolean layer into the full language.
Form to_form(const BoolForm& f);
/// Inverse of to_form for formulas built only from atoms, ~ and &.
std::optional<BoolForm> as_bool(const Form& f);

std::set<Atom> atoms_of(const Form& f);
std::set<Agent> agents_of(const Form& f);
/// Nesting depth of box (and Kd, which also quantifies over successors).
std::size_t modal_depth(const Form& f);
std::size_t announcement_depth(const Form& f);
/// Node count, counting the boolean nodes inside ==, kd and := operands.
std::size_t size(const Form& f);
bool contains_kind(const Form& f, Form::Kind k);

}  // namespace pald

template <>
struct std::hash<pald::BoolForm> {
  std::size_t operator()(const pald::BoolForm& f) const noexcept { return f.hash(); }
};

template <>
struct std::hash<pald::Form> {
  std::size_t operator()(const pald::Form& f) const noexcept { return f.hash(); }
};
