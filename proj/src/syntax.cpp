#include "pald/syntax.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

namespace pald {

namespace {

constexpr std::array<std::string_view, 3> kReserved = {"box", "kd", "kx"};

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || text.front() < 'a' || text.front() > 'z') return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

bool is_reserved_word(std::string_view text) {
  return std::find(kReserved.begin(), kReserved.end(), text) != kReserved.end();
}

Atom::Atom(std::string name) : name_(std::move(name)) {
  if (!is_identifier(name_) || is_reserved_word(name_))
    throw std::invalid_argument("invalid atom name '" + name_ + "'");
}

Agent::Agent(std::string name) : name_(std::move(name)) {
  if (!is_identifier(name_) || is_reserved_word(name_))
    throw std::invalid_argument("invalid agent name '" + name_ + "'");
}

// ---------------------------------------------------------------------------
// BoolForm

BoolForm BoolForm::atom(Atom a) {
  std::size_t h = mix(1, std::hash<std::string>{}(a.name()));
  return BoolForm(std::make_shared<const Node>(
      Node{Kind::Atom, std::move(a), nullptr, nullptr, 1, h}));
}

BoolForm BoolForm::neg(BoolForm inner) {
  std::size_t h = mix(2, inner.hash());
  std::size_t len = inner.length() + 1;
  return BoolForm(std::make_shared<const Node>(
      Node{Kind::Neg, std::nullopt, std::move(inner.node_), nullptr, len, h}));
}

BoolForm BoolForm::conj(BoolForm left, BoolForm right) {
  std::size_t h = mix(mix(3, left.hash()), right.hash());
  std::size_t len = left.length() + right.length() + 3;
  return BoolForm(std::make_shared<const Node>(Node{
      Kind::And, std::nullopt, std::move(left.node_), std::move(right.node_), len, h}));
}

const Atom& BoolForm::atom() const {
  if (!node_->name) throw std::logic_error("BoolForm::atom on non-atom");
  return *node_->name;
}

BoolForm BoolForm::inner() const {
  if (node_->kind != Kind::Neg) throw std::logic_error("BoolForm::inner on non-negation");
  return BoolForm(node_->lhs);
}

BoolForm BoolForm::left() const {
  if (node_->kind != Kind::And) throw std::logic_error("BoolForm::left on non-conjunction");
  return BoolForm(node_->lhs);
}

BoolForm BoolForm::right() const {
  if (node_->kind != Kind::And) throw std::logic_error("BoolForm::right on non-conjunction");
  return BoolForm(node_->rhs);
}

bool BoolForm::equal(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->length != b->length) return false;
  switch (a->kind) {
    case Kind::Atom:
      return *a->name == *b->name;
    case Kind::Neg:
      return equal(a->lhs.get(), b->lhs.get());
    case Kind::And:
      return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
  }
  return false;
}

std::strong_ordering BoolForm::compare(const Node* a, const Node* b) {
  if (a == b) return std::strong_ordering::equal;
  if (a->kind != b->kind) return a->kind <=> b->kind;
  switch (a->kind) {
    case Kind::Atom:
      return *a->name <=> *b->name;
    case Kind::Neg:
      return compare(a->lhs.get(), b->lhs.get());
    case Kind::And:
      if (auto c = compare(a->lhs.get(), b->lhs.get()); c != 0) return c;
      return compare(a->rhs.get(), b->rhs.get());
  }
  return std::strong_ordering::equal;
}

bool operator==(const BoolForm& a, const BoolForm& b) {
  return BoolForm::equal(a.node_.get(), b.node_.get());
}

std::strong_ordering operator<=>(const BoolForm& a, const BoolForm& b) {
  return BoolForm::compare(a.node_.get(), b.node_.get());
}

std::strong_ordering lex_compare(const BoolForm& a, const BoolForm& b) { return a <=> b; }

std::size_t length(const BoolForm& f) { return f.length(); }

namespace {

void collect_leaves(const BoolForm& f, std::vector<Atom>& out) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom:
      out.push_back(f.atom());
      return;
    case BoolForm::Kind::Neg:
      collect_leaves(f.inner(), out);
      return;
    case BoolForm::Kind::And:
      collect_leaves(f.left(), out);
      collect_leaves(f.right(), out);
      return;
  }
}

}  // namespace

std::vector<Atom> leaves(const BoolForm& f) {
  std::vector<Atom> out;
  collect_leaves(f, out);
  return out;
}

std::set<Atom> vocabulary(const BoolForm& f) {
  auto ls = leaves(f);
  return {ls.begin(), ls.end()};
}

bool occurs_in(const Atom& p, const BoolForm& f) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom:
      return f.atom() == p;
    case BoolForm::Kind::Neg:
      return occurs_in(p, f.inner());
    case BoolForm::Kind::And:
      return occurs_in(p, f.left()) || occurs_in(p, f.right());
  }
  return false;
}

std::size_t occurrences(const Atom& p, const BoolForm& in) {
  auto ls = leaves(in);
  return static_cast<std::size_t>(std::count(ls.begin(), ls.end(), p));
}

namespace {

// Rebuilds `f`, replacing leaf number `leaf` (global left-to-right index)
// according to `repl`. `next` tracks the running leaf index.
BoolForm rebuild(const BoolForm& f, std::size_t& next,
                 const std::map<std::size_t, BoolForm>& repl) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom: {
      auto it = repl.find(next++);
      return it == repl.end() ? f : it->second;
    }
    case BoolForm::Kind::Neg: {
      auto in = rebuild(f.inner(), next, repl);
      return in == f.inner() ? f : BoolForm::neg(std::move(in));
    }
    case BoolForm::Kind::And: {
      auto l = rebuild(f.left(), next, repl);
      auto r = rebuild(f.right(), next, repl);
      return BoolForm::conj(std::move(l), std::move(r));
    }
  }
  return f;
}

}  // namespace

BoolForm apply_simultaneous(const std::vector<OccSubst>& ss, const BoolForm& in) {
  if (ss.empty()) return in;
  auto ls = leaves(in);
  // occurrence (atom, k) -> leaf position
  std::map<std::pair<Atom, std::size_t>, std::size_t> position;
  std::map<Atom, std::size_t> seen;
  for (std::size_t i = 0; i < ls.size(); ++i) position.emplace(std::pair{ls[i], ++seen[ls[i]]}, i);

  std::map<std::size_t, BoolForm> repl;
  for (const auto& s : ss) {
    auto it = position.find({s.atom, s.index});
    if (s.index == 0 || it == position.end())
      throw SubstitutionError("occurrence " + std::to_string(s.index) + " of '" +
                              s.atom.name() + "' out of range");
    if (!repl.emplace(it->second, s.replacement).second)
      throw SubstitutionError("occurrence " + std::to_string(s.index) + " of '" +
                              s.atom.name() + "' targeted twice");
  }
  std::size_t next = 0;
  return rebuild(in, next, repl);
}

BoolForm apply_occ_subst(const OccSubst& s, const BoolForm& in) {
  return apply_simultaneous({s}, in);
}

bool is_circular(const BoolForm& lhs, const BoolForm& rhs) {
  auto one_way = [](const BoolForm& a, const BoolForm& b) {
    return a.is_atom() && b != a && occurs_in(a.atom(), b);
  };
  return one_way(lhs, rhs) || one_way(rhs, lhs);
}

// ---------------------------------------------------------------------------
// Form

namespace {

std::size_t form_hash(Form::Kind k, std::initializer_list<std::size_t> parts) {
  std::size_t h = 100 + static_cast<std::size_t>(k);
  for (auto p : parts) h = mix(h, p);
  return h;
}

}  // namespace

Form Form::atom(Atom a) {
  std::size_t h = form_hash(Kind::Atom, {std::hash<std::string>{}(a.name())});
  return Form(std::make_shared<const Node>(
      Node{Kind::Atom, std::move(a), std::nullopt, std::nullopt, std::nullopt, nullptr, nullptr, h}));
}

Form Form::equiv(BoolForm lhs, BoolForm rhs) {
  std::size_t h = form_hash(Kind::Equiv, {lhs.hash(), rhs.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::Equiv, std::nullopt, std::nullopt,
                                                std::move(lhs), std::move(rhs), nullptr,
                                                nullptr, h}));
}

Form Form::neg(Form inner) {
  std::size_t h = form_hash(Kind::Neg, {inner.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::Neg, std::nullopt, std::nullopt,
                                                std::nullopt, std::nullopt,
                                                std::move(inner.node_), nullptr, h}));
}

Form Form::conj(Form left, Form right) {
  std::size_t h = form_hash(Kind::And, {left.hash(), right.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::And, std::nullopt, std::nullopt,
                                                std::nullopt, std::nullopt,
                                                std::move(left.node_),
                                                std::move(right.node_), h}));
}

Form Form::box(Agent agent, Form inner) {
  std::size_t h = form_hash(Kind::Box, {std::hash<std::string>{}(agent.name()), inner.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::Box, std::nullopt, std::move(agent),
                                                std::nullopt, std::nullopt,
                                                std::move(inner.node_), nullptr, h}));
}

Form Form::announce(Form announced, Form inner) {
  std::size_t h = form_hash(Kind::Ann, {announced.hash(), inner.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::Ann, std::nullopt, std::nullopt,
                                                std::nullopt, std::nullopt,
                                                std::move(inner.node_),
                                                std::move(announced.node_), h}));
}

Form Form::kd(Agent agent, BoolForm operand) {
  std::size_t h =
      form_hash(Kind::Kd, {std::hash<std::string>{}(agent.name()), operand.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::Kd, std::nullopt, std::move(agent),
                                                std::move(operand), std::nullopt, nullptr,
                                                nullptr, h}));
}

Form Form::def_is(Atom atom, BoolForm definition) {
  std::size_t h =
      form_hash(Kind::DefIs, {std::hash<std::string>{}(atom.name()), definition.hash()});
  return Form(std::make_shared<const Node>(Node{Kind::DefIs, std::move(atom), std::nullopt,
                                                std::move(definition), std::nullopt,
                                                nullptr, nullptr, h}));
}

const Atom& Form::atom() const {
  if (!node_->name) throw std::logic_error("Form::atom on a formula without an atom");
  return *node_->name;
}

const Agent& Form::agent() const {
  if (!node_->agent) throw std::logic_error("Form::agent on a formula without an agent");
  return *node_->agent;
}

const BoolForm& Form::bool_lhs() const {
  if (!node_->p) throw std::logic_error("Form::bool_lhs on a formula without boolean operand");
  return *node_->p;
}

const BoolForm& Form::bool_rhs() const {
  if (!node_->q) throw std::logic_error("Form::bool_rhs on a non-equivalence");
  return *node_->q;
}

Form Form::inner() const {
  auto k = node_->kind;
  if (k != Kind::Neg && k != Kind::Box && k != Kind::Ann)
    throw std::logic_error("Form::inner on a formula without a scope");
  return Form(node_->lhs);
}

Form Form::left() const {
  if (node_->kind != Kind::And) throw std::logic_error("Form::left on non-conjunction");
  return Form(node_->lhs);
}

Form Form::right() const {
  if (node_->kind != Kind::And) throw std::logic_error("Form::right on non-conjunction");
  return Form(node_->rhs);
}

Form Form::announced() const {
  if (node_->kind != Kind::Ann) throw std::logic_error("Form::announced on non-announcement");
  return Form(node_->rhs);
}

std::strong_ordering Form::compare(const Node* a, const Node* b) {
  if (a == b) return std::strong_ordering::equal;
  if (a->kind != b->kind) return a->kind <=> b->kind;
  if (a->name != b->name) return a->name <=> b->name;
  if (a->agent != b->agent) return a->agent <=> b->agent;
  if (a->p) {
    if (auto c = *a->p <=> *b->p; c != 0) return c;
  }
  if (a->q) {
    if (auto c = *a->q <=> *b->q; c != 0) return c;
  }
  if (a->rhs) {  // announced formula first
    if (auto c = compare(a->rhs.get(), b->rhs.get()); c != 0) return c;
  }
  if (a->lhs) return compare(a->lhs.get(), b->lhs.get());
  return std::strong_ordering::equal;
}

bool operator==(const Form& a, const Form& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return Form::compare(a.node_.get(), b.node_.get()) == 0;
}

std::strong_ordering operator<=>(const Form& a, const Form& b) {
  return Form::compare(a.node_.get(), b.node_.get());
}

// ---------------------------------------------------------------------------
// Sugar

Form disj(const Form& a, const Form& b) {
  return Form::neg(Form::conj(Form::neg(a), Form::neg(b)));
}

Form implies(const Form& a, const Form& b) { return disj(Form::neg(a), b); }

Form iff(const Form& a, const Form& b) { return Form::conj(implies(a, b), implies(b, a)); }

Form nequiv(const BoolForm& a, const BoolForm& b) { return Form::neg(Form::equiv(a, b)); }

Form kx(const Agent& agent, const BoolForm& operand) {
  return Form::conj(Form::box(agent, to_form(operand)), Form::kd(agent, operand));
}

std::optional<std::pair<Form, Form>> match_disj(const Form& f) {
  if (f.kind() != Form::Kind::Neg) return std::nullopt;
  auto c = f.inner();
  if (c.kind() != Form::Kind::And) return std::nullopt;
  auto l = c.left(), r = c.right();
  if (l.kind() != Form::Kind::Neg || r.kind() != Form::Kind::Neg) return std::nullopt;
  return std::pair{l.inner(), r.inner()};
}

std::optional<std::pair<Form, Form>> match_implies(const Form& f) {
  auto d = match_disj(f);
  if (!d || d->first.kind() != Form::Kind::Neg) return std::nullopt;
  return std::pair{d->first.inner(), d->second};
}

std::optional<std::pair<Form, Form>> match_iff(const Form& f) {
  if (f.kind() != Form::Kind::And) return std::nullopt;
  auto a = match_implies(f.left());
  auto b = match_implies(f.right());
  if (!a || !b || a->first != b->second || a->second != b->first) return std::nullopt;
  return a;
}

Form to_form(const BoolForm& f) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom:
      return Form::atom(f.atom());
    case BoolForm::Kind::Neg:
      return Form::neg(to_form(f.inner()));
    case BoolForm::Kind::And:
      return Form::conj(to_form(f.left()), to_form(f.right()));
  }
  throw std::logic_error("unreachable");
}

std::optional<BoolForm> as_bool(const Form& f) {
  switch (f.kind()) {
    case Form::Kind::Atom:
      return BoolForm::atom(f.atom());
    case Form::Kind::Neg:
      if (auto in = as_bool(f.inner())) return BoolForm::neg(*in);
      return std::nullopt;
    case Form::Kind::And: {
      auto l = as_bool(f.left());
      if (!l) return std::nullopt;
      auto r = as_bool(f.right());
      if (!r) return std::nullopt;
      return BoolForm::conj(*l, *r);
    }
    default:
      return std::nullopt;
  }
}

namespace {

template <class Visit>
void walk(const Form& f, Visit&& visit) {
  visit(f);
  switch (f.kind()) {
    case Form::Kind::Neg:
    case Form::Kind::Box:
      walk(f.inner(), visit);
      break;
    case Form::Kind::And:
      walk(f.left(), visit);
      walk(f.right(), visit);
      break;
    case Form::Kind::Ann:
      walk(f.announced(), visit);
      walk(f.inner(), visit);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<Atom> atoms_of(const Form& f) {
  std::set<Atom> out;
  walk(f, [&](const Form& g) {
    switch (g.kind()) {
      case Form::Kind::Atom:
        out.insert(g.atom());
        break;
      case Form::Kind::Equiv:
        for (auto& a : vocabulary(g.bool_lhs())) out.insert(a);
        for (auto& a : vocabulary(g.bool_rhs())) out.insert(a);
        break;
      case Form::Kind::Kd:
        for (auto& a : vocabulary(g.bool_lhs())) out.insert(a);
        break;
      case Form::Kind::DefIs:
        out.insert(g.atom());
        for (auto& a : vocabulary(g.bool_lhs())) out.insert(a);
        break;
      default:
        break;
    }
  });
  return out;
}

std::set<Agent> agents_of(const Form& f) {
  std::set<Agent> out;
  walk(f, [&](const Form& g) {
    if (g.kind() == Form::Kind::Box || g.kind() == Form::Kind::Kd) out.insert(g.agent());
  });
  return out;
}

std::size_t modal_depth(const Form& f) {
  switch (f.kind()) {
    case Form::Kind::Neg:
      return modal_depth(f.inner());
    case Form::Kind::And:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
    case Form::Kind::Box:
      return 1 + modal_depth(f.inner());
    case Form::Kind::Ann:
      return std::max(modal_depth(f.announced()), modal_depth(f.inner()));
    case Form::Kind::Kd:
      return 1;
    default:
      return 0;
  }
}

std::size_t announcement_depth(const Form& f) {
  switch (f.kind()) {
    case Form::Kind::Neg:
    case Form::Kind::Box:
      return announcement_depth(f.inner());
    case Form::Kind::And:
      return std::max(announcement_depth(f.left()), announcement_depth(f.right()));
    case Form::Kind::Ann:
      return 1 + std::max(announcement_depth(f.announced()), announcement_depth(f.inner()));
    default:
      return 0;
  }
}

namespace {

std::size_t bool_size(const BoolForm& f) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom:
      return 1;
    case BoolForm::Kind::Neg:
      return 1 + bool_size(f.inner());
    case BoolForm::Kind::And:
      return 1 + bool_size(f.left()) + bool_size(f.right());
  }
  return 0;
}

}  // namespace

std::size_t size(const Form& f) {
  std::size_t n = 0;
  walk(f, [&](const Form& g) {
    ++n;
    switch (g.kind()) {
      case Form::Kind::Equiv:
        n += bool_size(g.bool_lhs()) + bool_size(g.bool_rhs());
        break;
      case Form::Kind::Kd:
      case Form::Kind::DefIs:
        n += bool_size(g.bool_lhs());
        break;
      default:
        break;
    }
  });
  return n;
}

bool contains_kind(const Form& f, Form::Kind k) {
  bool found = false;
  walk(f, [&](const Form& g) { found = found || g.kind() == k; });
  return found;
}

}  // namespace pald
