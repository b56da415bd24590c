#include "pald/defcore.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "pald/text.hpp"

namespace pald {

Form to_form(const EquivLiteral& lit) {
  return lit.positive ? Form::equiv(lit.left, lit.right) : nequiv(lit.left, lit.right);
}

std::string to_string(const EquivLiteral& lit) { return to_string(to_form(lit)); }

std::optional<BoolForm> merge(const BoolForm& p, const BoolForm& q) {
  if (p.is_atom() && q.is_atom()) return p.atom() < q.atom() ? p : q;
  if (p.is_atom()) return q;
  if (q.is_atom()) return p;
  if (p.is_neg() && q.is_neg()) {
    auto in = merge(p.inner(), q.inner());
    if (!in) return std::nullopt;
    return BoolForm::neg(*in);
  }
  if (p.is_and() && q.is_and()) {
    auto l = merge(p.left(), q.left());
    if (!l) return std::nullopt;
    auto r = merge(p.right(), q.right());
    if (!r) return std::nullopt;
    return BoolForm::conj(*l, *r);
  }
  return std::nullopt;
}

namespace {

// Collects (leaf position in p, replacement) pairs.
bool merge_positions(const BoolForm& p, const BoolForm& q, std::size_t& offset,
                     std::vector<std::pair<std::size_t, BoolForm>>& out) {
  if (p.is_atom()) {
    if (q.is_atom()) {
      if (q.atom() < p.atom()) out.emplace_back(offset, q);
    } else {
      out.emplace_back(offset, q);
    }
    ++offset;
    return true;
  }
  if (q.is_atom()) {
    offset += leaves(p).size();
    return true;
  }
  if (p.is_neg() && q.is_neg()) return merge_positions(p.inner(), q.inner(), offset, out);
  if (p.is_and() && q.is_and())
    return merge_positions(p.left(), q.left(), offset, out) &&
           merge_positions(p.right(), q.right(), offset, out);
  return false;
}

// Occurrence index of the leaf at `position`.
std::size_t occurrence_at(const std::vector<Atom>& ls, std::size_t position) {
  std::size_t k = 0;
  for (std::size_t i = 0; i <= position; ++i)
    if (ls[i] == ls[position]) ++k;
  return k;
}

}  // namespace

std::optional<std::vector<OccSubst>> merge_substitution(const BoolForm& p, const BoolForm& q) {
  std::vector<std::pair<std::size_t, BoolForm>> positions;
  std::size_t offset = 0;
  if (!merge_positions(p, q, offset, positions)) return std::nullopt;
  auto ls = leaves(p);
  std::vector<OccSubst> out;
  for (auto& [pos, repl] : positions) out.push_back({occurrence_at(ls, pos), ls[pos], repl});
  return out;
}

BoolForm pick(const std::vector<BoolForm>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("pick of an empty set");
  const BoolForm* best = &candidates.front();
  for (auto& c : candidates) {
    if (c.length() > best->length() ||
        (c.length() == best->length() && lex_compare(c, *best) < 0))
      best = &c;
  }
  return *best;
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::Premise: return "premise";
    case Rule::Reflexivity: return "refl";
    case Rule::Symmetry: return "sym";
    case Rule::Transitivity: return "trans";
    case Rule::PatternNeg: return "pattern-neg";
    case Rule::PatternAndLeft: return "pattern-and-left";
    case Rule::PatternAndRight: return "pattern-and-right";
    case Rule::OccSubst: return "occ-subst";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

bool fact_follows(const Derivation& d, std::size_t i) {
  const Fact& f = d.facts[i];
  for (auto j : f.from)
    if (j >= i) return false;
  auto src = [&](std::size_t n) -> const Fact& { return d.facts[f.from[n]]; };
  switch (f.rule) {
    case Rule::Premise: {
      if (f.premise >= d.premises.size() || !f.from.empty()) return false;
      const auto& lit = d.premises[f.premise];
      return lit.positive && lit.left == f.left && lit.right == f.right;
    }
    case Rule::Reflexivity:
      return f.from.empty() && f.left == f.right;
    case Rule::Symmetry:
      return f.from.size() == 1 && src(0).left == f.right && src(0).right == f.left;
    case Rule::Transitivity:
      return f.from.size() == 2 && src(0).left == f.left && src(0).right == src(1).left &&
             src(1).right == f.right;
    case Rule::PatternNeg:
      return f.from.size() == 1 && src(0).left.is_neg() && src(0).right.is_neg() &&
             src(0).left.inner() == f.left && src(0).right.inner() == f.right;
    case Rule::PatternAndLeft:
    case Rule::PatternAndRight: {
      if (f.from.size() != 1 || !src(0).left.is_and() || !src(0).right.is_and()) return false;
      bool left = f.rule == Rule::PatternAndLeft;
      return (left ? src(0).left.left() : src(0).left.right()) == f.left &&
             (left ? src(0).right.left() : src(0).right.right()) == f.right;
    }
    case Rule::OccSubst: {
      if (f.from.size() != 2 || !f.subst) return false;
      const Fact& def = src(0);
      const Fact& base = src(1);
      if (!def.left.is_atom() || def.left.atom() != f.subst->atom ||
          def.right != f.subst->replacement)
        return false;
      if (base.left != f.left) return false;
      if (f.subst->index == 0 || occurrences(f.subst->atom, base.right) < f.subst->index)
        return false;
      return apply_occ_subst(*f.subst, base.right) == f.right;
    }
  }
  return false;
}

}  // namespace

std::optional<std::size_t> first_invalid_fact(const Derivation& d) {
  for (std::size_t i = 0; i < d.facts.size(); ++i)
    if (!fact_follows(d, i)) return i;
  return std::nullopt;
}

Derivation extract(const Derivation& d, std::size_t goal) {
  std::vector<bool> needed(d.facts.size(), false);
  std::vector<std::size_t> stack{goal};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    if (needed[i]) continue;
    needed[i] = true;
    for (auto j : d.facts[i].from) stack.push_back(j);
  }
  Derivation out;
  std::vector<std::size_t> fact_map(d.facts.size());
  std::vector<std::optional<std::size_t>> premise_map(d.premises.size());
  for (std::size_t i = 0; i < d.facts.size(); ++i) {
    if (!needed[i]) continue;
    Fact f = d.facts[i];
    for (auto& j : f.from) j = fact_map[j];
    if (f.rule == Rule::Premise) {
      auto& slot = premise_map[f.premise];
      if (!slot) {
        slot = out.premises.size();
        out.premises.push_back(d.premises[f.premise]);
      }
      f.premise = *slot;
    }
    fact_map[i] = out.facts.size();
    out.facts.push_back(std::move(f));
  }
  return out;
}

bool replay_steps(const CircularWitness& w) {
  if (!w.start.positive || !w.conclusion.positive) return false;
  BoolForm cur = w.start.right;
  for (auto& [lit, s] : w.steps) {
    if (!lit.positive || !lit.left.is_atom() || lit.left.atom() != s.atom ||
        lit.right != s.replacement)
      return false;
    if (s.index == 0 || occurrences(s.atom, cur) < s.index) return false;
    cur = apply_occ_subst(s, cur);
  }
  return w.start.left == w.conclusion.left && cur == w.conclusion.right &&
         is_circular(w.conclusion.left, w.conclusion.right);
}

// ---------------------------------------------------------------------------

Atom DefState::representative(const Atom& a) const {
  Atom cur = a;
  for (auto it = parent_.find(cur); it != parent_.end(); it = parent_.find(cur))
    cur = it->second.parent;
  return cur;
}

std::optional<BoolForm> DefState::binding(const Atom& rep) const {
  auto it = binding_.find(rep);
  if (it == binding_.end()) return std::nullopt;
  return it->second.term;
}

BoolForm DefState::resolve(const BoolForm& f) const {
  switch (f.kind()) {
    case BoolForm::Kind::Atom: {
      Atom r = representative(f.atom());
      if (auto b = binding_.find(r); b != binding_.end()) return resolve(b->second.term);
      return BoolForm::atom(r);
    }
    case BoolForm::Kind::Neg:
      return BoolForm::neg(resolve(f.inner()));
    case BoolForm::Kind::And:
      return BoolForm::conj(resolve(f.left()), resolve(f.right()));
  }
  return f;
}

std::set<Atom> DefState::known_atoms() const { return mentioned_; }

bool DefState::consistent_with_trail() const {
  auto d = derivation();
  if (first_invalid_fact(d)) return false;
  for (auto& [child, link] : parent_) {
    if (link.fact >= trail_.size()) return false;
    const Fact& f = trail_[link.fact];
    if (f.left != BoolForm::atom(child) || f.right != BoolForm::atom(link.parent)) return false;
    if (!(link.parent < child)) return false;
  }
  for (auto& [rep, b] : binding_) {
    if (parent_.count(rep) || b.fact >= trail_.size()) return false;
    const Fact& f = trail_[b.fact];
    if (f.left != BoolForm::atom(rep) || f.right != b.term) return false;
  }
  return true;
}

class Unifier {
 public:
  explicit Unifier(DefState& s) : s_(s) {}

  struct Failure {
    std::variant<Clash, Circularity> what;
  };

  const Fact& fact(std::size_t i) const { return s_.trail_[i]; }

  std::size_t add(Fact f) {
    s_.trail_.push_back(std::move(f));
    return s_.trail_.size() - 1;
  }

  std::size_t add(BoolForm l, BoolForm r, Rule rule, std::vector<std::size_t> from,
                  std::optional<OccSubst> sub = std::nullopt, std::size_t premise = 0) {
    return add(Fact{std::move(l), std::move(r), rule, std::move(from), std::move(sub), premise});
  }

  std::size_t premise(const BoolForm& l, const BoolForm& r) {
    s_.resolution_memo_.clear();
    s_.premises_.push_back({true, l, r});
    for (auto& a : vocabulary(l)) s_.mentioned_.insert(a);
    for (auto& a : vocabulary(r)) s_.mentioned_.insert(a);
    return add(l, r, Rule::Premise, {}, std::nullopt, s_.premises_.size() - 1);
  }

  std::size_t refl(const BoolForm& f) { return add(f, f, Rule::Reflexivity, {}); }

  std::size_t sym(std::size_t f) {
    if (fact(f).left == fact(f).right) return f;
    return add(fact(f).right, fact(f).left, Rule::Symmetry, {f});
  }

  std::size_t trans(std::size_t f, std::size_t g) {
    if (fact(f).left == fact(f).right) return g;
    if (fact(g).left == fact(g).right) return f;
    return add(fact(f).left, fact(g).right, Rule::Transitivity, {f, g});
  }

  // f: a == X, composed with g: X == Y when present.
  std::size_t compose(std::optional<std::size_t> f, std::size_t g) { return f ? trans(*f, g) : g; }

  // Representative of `a` and a fact a == rep (none when a is its own rep).
  std::pair<Atom, std::optional<std::size_t>> chain(const Atom& a) {
    Atom cur = a;
    std::optional<std::size_t> acc;
    for (auto it = s_.parent_.find(cur); it != s_.parent_.end(); it = s_.parent_.find(cur)) {
      acc = acc ? trans(*acc, it->second.fact) : it->second.fact;
      cur = it->second.parent;
    }
    return {cur, acc};
  }

  std::size_t occ_subst(std::size_t def, std::size_t base, std::size_t position) {
    const BoolForm& s = fact(base).right;
    auto ls = leaves(s);
    OccSubst sub{occurrence_at(ls, position), fact(def).left.atom(), fact(def).right};
    auto rhs = apply_occ_subst(sub, s);
    return add(fact(base).left, rhs, Rule::OccSubst, {def, base}, sub);
  }

  // Rewrites the left side of f: X == Y to its representative or binding.
  std::size_t walk_left(std::size_t f) {
    if (!fact(f).left.is_atom()) return f;
    auto [r, c] = chain(fact(f).left.atom());
    if (c) f = trans(sym(*c), f);
    if (auto b = s_.binding_.find(r); b != s_.binding_.end()) f = trans(sym(b->second.fact), f);
    return f;
  }

  std::size_t walk_right(std::size_t f) {
    if (!fact(f).right.is_atom()) return f;
    auto [r, c] = chain(fact(f).right.atom());
    if (c) f = trans(f, *c);
    if (auto b = s_.binding_.find(r); b != s_.binding_.end()) f = trans(f, b->second.fact);
    return f;
  }

  bool reaches_atom(const Atom& a, const Atom& target) {
    Atom r = s_.representative(a);
    if (r == target) return true;
    auto b = s_.binding_.find(r);
    if (b == s_.binding_.end()) return false;
    if (auto m = reach_memo_.find(r); m != reach_memo_.end()) return m->second;
    bool out = reaches(b->second.term, target);
    reach_memo_[r] = out;
    return out;
  }

  bool reaches(const BoolForm& t, const Atom& target) {
    for (auto& a : leaves(t))
      if (reaches_atom(a, target)) return true;
    return false;
  }

  std::optional<Failure> unify(std::size_t f) {
    f = walk_right(walk_left(f));
    const BoolForm l = fact(f).left;
    const BoolForm r = fact(f).right;
    if (l == r) return std::nullopt;
    if (l.is_atom() && r.is_atom()) {
      if (l.atom() < r.atom())
        s_.parent_.emplace(r.atom(), DefState::Link{l.atom(), sym(f)});
      else
        s_.parent_.emplace(l.atom(), DefState::Link{r.atom(), f});
      return std::nullopt;
    }
    if (l.is_atom()) return bind(l.atom(), f);
    if (r.is_atom()) return bind(r.atom(), sym(f));
    if (l.is_neg() && r.is_neg())
      return unify(add(l.inner(), r.inner(), Rule::PatternNeg, {f}));
    if (l.is_and() && r.is_and()) {
      if (auto bad = unify(add(l.left(), r.left(), Rule::PatternAndLeft, {f}))) return bad;
      return unify(add(l.right(), r.right(), Rule::PatternAndRight, {f}));
    }
    if (l.is_and()) f = sym(f);
    ClashWitness w{{true, fact(f).left, fact(f).right}, extract(s_.derivation(), f)};
    return Failure{Clash{std::move(w)}};
  }

  // f: r == t with r an unbound representative and t compound.
  std::optional<Failure> bind(const Atom& r, std::size_t f) {
    reach_memo_.clear();
    if (reaches(fact(f).right, r)) return Failure{Circularity{witness(r, f)}};
    s_.binding_.emplace(r, DefState::Binding{fact(f).right, f});
    return std::nullopt;
  }

  // Follows the first binding chain from a leaf of t back to r.
  CircularWitness witness(const Atom& r, std::size_t c) {
    const BoolForm t = fact(c).right;
    auto first_reaching = [&](const BoolForm& in) {
      auto ls = leaves(in);
      for (std::size_t i = 0; i < ls.size(); ++i)
        if (reaches_atom(ls[i], r)) return i;
      throw std::logic_error("occurs check without a reaching leaf");
    };
    auto as_literal = [&](std::size_t i) { return EquivLiteral{true, fact(i).left, fact(i).right}; };

    auto tl = leaves(t);
    Atom a1 = tl[first_reaching(t)];
    auto [s, ca] = chain(a1);
    std::size_t current;
    std::vector<std::pair<EquivLiteral, OccSubst>> steps;
    std::optional<EquivLiteral> start;
    if (s == r) {
      current = compose(ca, c);
      start = as_literal(current);
    } else {
      std::size_t b = s_.binding_.at(s).fact;
      current = compose(ca, b);
      start = as_literal(current);
      std::size_t offset = 0;
      BoolForm sub = fact(b).right;
      for (;;) {
        auto sl = leaves(sub);
        std::size_t j = first_reaching(sub);
        std::size_t pos = offset + j;
        auto [rep, cj] = chain(sl[j]);
        bool last = rep == r;
        std::size_t def = last ? compose(cj, c) : compose(cj, s_.binding_.at(rep).fact);
        current = occ_subst(def, current, pos);
        steps.emplace_back(as_literal(def), *fact(current).subst);
        if (last) break;
        offset = pos;
        sub = fact(def).right;
      }
    }
    return CircularWitness{as_literal(current), *start, std::move(steps),
                           extract(s_.derivation(), current)};
  }

  bool final_atom(const Atom& a) const {
    return !s_.parent_.count(a) && !s_.binding_.count(a);
  }

  std::size_t atom_resolution(const Atom& a) {
    if (auto m = s_.resolution_memo_.find(a); m != s_.resolution_memo_.end()) return m->second;
    auto [r, c] = chain(a);
    std::size_t out;
    if (auto b = s_.binding_.find(r); b != s_.binding_.end())
      out = rewrite(compose(c, b->second.fact));
    else
      out = c ? *c : refl(BoolForm::atom(a));
    s_.resolution_memo_[a] = out;
    return out;
  }

  // f: X == S, extended to X == resolve(S) one leaf at a time.
  std::size_t rewrite(std::size_t f) {
    for (;;) {
      auto ls = leaves(fact(f).right);
      auto it = std::find_if(ls.begin(), ls.end(), [&](const Atom& a) { return !final_atom(a); });
      if (it == ls.end()) return f;
      std::size_t def = atom_resolution(*it);
      f = occ_subst(def, f, static_cast<std::size_t>(it - ls.begin()));
    }
  }

  std::size_t resolution(const BoolForm& t) {
    if (t.is_atom()) return atom_resolution(t.atom());
    return rewrite(refl(t));
  }

 private:
  DefState& s_;
  std::map<Atom, bool> reach_memo_;
};

std::size_t DefState::prove_resolution(const BoolForm& f) { return Unifier(*this).resolution(f); }

AssertOutcome assert_equiv(DefState state, const BoolForm& left, const BoolForm& right) {
  Unifier u(state);
  auto f = u.premise(left, right);
  if (auto bad = u.unify(f)) {
    return std::visit([](auto&& w) -> AssertOutcome { return std::move(w); }, std::move(bad->what));
  }
  return state;
}

// ---------------------------------------------------------------------------

namespace {

bool eval_under(const BoolForm& f, const std::map<Atom, bool>& v) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom: return v.at(f.atom());
    case BoolForm::Kind::Neg: return !eval_under(f.inner(), v);
    case BoolForm::Kind::And: return eval_under(f.left(), v) && eval_under(f.right(), v);
  }
  return false;
}

constexpr std::size_t kMaxFinalAtoms = 24;

}  // namespace

LiteralSatResult literal_sat(const LiteralSet& lits, const std::set<Atom>& vocabulary_extra) {
  DefState state;
  for (auto& lit : lits.equivalences) {
    if (!lit.positive) continue;
    auto out = assert_equiv(std::move(state), lit.left, lit.right);
    if (auto* c = std::get_if<Clash>(&out)) return Unsatisfiable{std::move(*c)};
    if (auto* c = std::get_if<Circularity>(&out)) return Unsatisfiable{std::move(*c)};
    state = std::move(std::get<DefState>(out));
  }

  for (std::size_t i = 0; i < lits.equivalences.size(); ++i) {
    const auto& lit = lits.equivalences[i];
    if (lit.positive || state.resolve(lit.left) != state.resolve(lit.right)) continue;
    Unifier u(state);
    auto fl = u.resolution(lit.left);
    auto fr = u.resolution(lit.right);
    auto f = u.trans(fl, u.sym(fr));
    if (u.fact(f).left != lit.left) f = u.refl(lit.left);  // left and right coincide
    return Unsatisfiable{Disequality{i, extract(state.derivation(), f)}};
  }

  std::set<Atom> vocab = vocabulary_extra;
  for (auto& lit : lits.equivalences) {
    for (auto& a : vocabulary(lit.left)) vocab.insert(a);
    for (auto& a : vocabulary(lit.right)) vocab.insert(a);
  }
  for (auto& p : lits.propositions)
    for (auto& a : vocabulary(p)) vocab.insert(a);

  std::map<Atom, BoolForm> def;
  std::set<Atom> finals;
  for (auto& a : vocab) {
    auto r = state.resolve(BoolForm::atom(a));
    for (auto& b : vocabulary(r)) finals.insert(b);
    def.emplace(a, r);
  }
  if (finals.size() > kMaxFinalAtoms)
    throw std::runtime_error("literal_sat: too many undefined atoms for truth-table search");

  std::vector<BoolForm> resolved_props;
  for (auto& p : lits.propositions) resolved_props.push_back(state.resolve(p));

  std::vector<Atom> order(finals.begin(), finals.end());
  std::map<Atom, bool> v;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << order.size()); ++mask) {
    for (std::size_t i = 0; i < order.size(); ++i) v[order[i]] = (mask >> i) & 1;
    bool ok = std::all_of(resolved_props.begin(), resolved_props.end(),
                          [&](const BoolForm& p) { return eval_under(p, v); });
    if (!ok) continue;
    ModelSeed seed;
    for (auto& [a, d] : def) {
      seed.valuation[a] = eval_under(d, v);
      seed.def.emplace(a, d);
    }
    return Satisfiable{std::move(seed), std::move(state)};
  }
  return Unsatisfiable{BooleanUnsat{}};
}

std::string describe(const UnsatReason& reason) {
  struct {
    std::string operator()(const Clash& c) const {
      return "pattern mismatch: " + to_string(c.witness.mismatch);
    }
    std::string operator()(const Circularity& c) const {
      return "circular definition: " + to_string(c.witness.conclusion);
    }
    std::string operator()(const Disequality& d) const {
      return "disequality " + std::to_string(d.literal + 1) + " contradicts the definitions";
    }
    std::string operator()(const BooleanUnsat&) const {
      return "no truth assignment satisfies the boolean literals";
    }
  } v;
  return std::visit(v, reason);
}

}  // namespace pald
