#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "json.hpp"
#include "pald/proof.hpp"
#include "pald/text.hpp"

namespace pald {

namespace {

using K = Form::Kind;

// Propositional skeleton: Neg/And nodes over numbered leaves.
struct Skeleton {
  struct Node {
    int kind;  // 0 leaf, 1 neg, 2 and
    int a = -1, b = -1;
  };
  std::vector<Node> nodes;
  std::unordered_map<Form, int> leaves;

  int build(const Form& f) {
    if (f.kind() == K::Neg) {
      int in = build(f.inner());
      nodes.push_back({1, in});
      return static_cast<int>(nodes.size()) - 1;
    }
    if (f.kind() == K::And) {
      int l = build(f.left());
      int r = build(f.right());
      nodes.push_back({2, l, r});
      return static_cast<int>(nodes.size()) - 1;
    }
    auto [it, fresh] = leaves.try_emplace(f, static_cast<int>(leaves.size()));
    nodes.push_back({0, it->second});
    return static_cast<int>(nodes.size()) - 1;
  }
};

}  // namespace

bool is_tautology(const Form& f) {
  Skeleton sk;
  sk.build(f);
  std::size_t n = sk.leaves.size();
  if (n > kMaxTautologyLeaves)
    throw TautologyLimitError("tautology check refused: " + std::to_string(n) +
                              " abstracted leaves (limit " + std::to_string(kMaxTautologyLeaves) + ")");
  // nodes are in post-order, so one forward sweep evaluates a row
  std::vector<char> val(sk.nodes.size());
  for (std::uint32_t row = 0; row < (std::uint32_t{1} << n); ++row) {
    for (std::size_t i = 0; i < sk.nodes.size(); ++i) {
      auto& nd = sk.nodes[i];
      switch (nd.kind) {
        case 0: val[i] = (row >> nd.a) & 1; break;
        case 1: val[i] = !val[nd.a]; break;
        default: val[i] = val[nd.a] && val[nd.b]; break;
      }
    }
    if (!val.back()) return false;
  }
  return true;
}

namespace {

struct Equiv {
  BoolForm lhs, rhs;
};

std::optional<Equiv> as_equiv(const Form& f) {
  if (f.kind() != K::Equiv) return std::nullopt;
  return Equiv{f.bool_lhs(), f.bool_rhs()};
}

std::optional<std::pair<Form, Form>> as_conj(const Form& f) {
  if (f.kind() != K::And) return std::nullopt;
  return std::pair{f.left(), f.right()};
}

bool k_axiom(const Form& f) {
  auto m = match_implies(f);
  if (!m || m->first.kind() != K::Box) return false;
  auto inner = match_implies(m->first.inner());
  if (!inner) return false;
  const Agent& i = m->first.agent();
  return m->second == implies(Form::box(i, inner->first), Form::box(i, inner->second));
}

// [phi]scope <-> rhs, with rhs determined by phi and scope.
std::optional<std::string> reduction_axiom(const Form& f) {
  auto m = match_iff(f);
  if (!m || m->first.kind() != K::Ann) return std::nullopt;
  const Form phi = m->first.announced();
  const Form s = m->first.inner();
  const Form& rhs = m->second;
  switch (s.kind()) {
    case K::Atom:
      if (rhs == implies(phi, s)) return "ann-atom";
      break;
    case K::Equiv:
      if (rhs == implies(phi, s)) return "ann-equiv";
      break;
    case K::Neg:
      if (rhs == implies(phi, Form::neg(Form::announce(phi, s.inner())))) return "ann-neg";
      break;
    case K::And:
      if (rhs == Form::conj(Form::announce(phi, s.left()), Form::announce(phi, s.right())))
        return "ann-and";
      break;
    case K::Box:
      if (rhs == implies(phi, Form::box(s.agent(), implies(phi, Form::announce(phi, s.inner())))))
        return "ann-box";
      break;
    case K::Ann:
      if (rhs == Form::announce(Form::conj(phi, Form::announce(phi, s.announced())), s.inner()))
        return "ann-ann";
      break;
    default:
      break;
  }
  return std::nullopt;
}

bool refl_axiom(const Form& f) {
  auto e = as_equiv(f);
  return e && e->lhs == e->rhs;
}

bool sym_axiom(const Form& f) {
  auto m = match_implies(f);
  if (!m) return false;
  auto a = as_equiv(m->first), b = as_equiv(m->second);
  return a && b && a->lhs == b->rhs && a->rhs == b->lhs;
}

bool trans_axiom(const Form& f) {
  auto m = match_implies(f);
  if (!m) return false;
  auto c = as_conj(m->first);
  if (!c) return false;
  auto a = as_equiv(c->first), b = as_equiv(c->second), r = as_equiv(m->second);
  return a && b && r && a->rhs == b->lhs && r->lhs == a->lhs && r->rhs == b->rhs;
}

bool equivalence_axiom(const Form& f) {
  auto m = match_implies(f);
  if (!m) return false;
  auto a = as_equiv(m->first);
  return a && m->second == iff(to_form(a->lhs), to_form(a->rhs));
}

bool occ_subst_axiom(const Form& f) {
  auto m = match_implies(f);
  if (!m) return false;
  auto c = as_conj(m->first);
  if (!c) return false;
  auto def = as_equiv(c->first), base = as_equiv(c->second), out = as_equiv(m->second);
  if (!def || !base || !out || !def->lhs.is_atom() || out->lhs != base->lhs) return false;
  const Atom& p = def->lhs.atom();
  std::size_t n = occurrences(p, base->rhs);
  for (std::size_t k = 1; k <= n; ++k)
    if (apply_occ_subst({k, p, def->rhs}, base->rhs) == out->rhs) return true;
  return false;
}

bool pattern_neg_axiom(const Form& f) {
  auto m = match_iff(f);
  if (!m) return false;
  auto a = as_equiv(m->first), b = as_equiv(m->second);
  return a && b && a->lhs.is_neg() && a->rhs.is_neg() && a->lhs.inner() == b->lhs &&
         a->rhs.inner() == b->rhs;
}

bool pattern_and_axiom(const Form& f) {
  auto m = match_iff(f);
  if (!m) return false;
  auto a = as_equiv(m->first);
  auto c = as_conj(m->second);
  if (!a || !c || !a->lhs.is_and() || !a->rhs.is_and()) return false;
  auto l = as_equiv(c->first), r = as_equiv(c->second);
  return l && r && l->lhs == a->lhs.left() && l->rhs == a->rhs.left() &&
         r->lhs == a->lhs.right() && r->rhs == a->rhs.right();
}

bool mismatch_axiom(const Form& f) {
  if (f.kind() != K::Neg) return false;
  auto e = as_equiv(f.inner());
  return e && e->lhs.is_neg() && e->rhs.is_and();
}

bool non_circularity_axiom(const Form& f) {
  if (f.kind() != K::Neg) return false;
  auto e = as_equiv(f.inner());
  return e && e->lhs.is_atom() && e->rhs != e->lhs && occurs_in(e->lhs.atom(), e->rhs);
}

}  // namespace

std::vector<std::string> matching_schemas(const Form& f) {
  std::vector<std::string> out;
  if (k_axiom(f)) out.push_back("K");
  if (auto r = reduction_axiom(f)) out.push_back(*r);
  if (refl_axiom(f)) out.push_back("refl");
  if (sym_axiom(f)) out.push_back("sym");
  if (trans_axiom(f)) out.push_back("trans");
  if (equivalence_axiom(f)) out.push_back("equiv");
  if (occ_subst_axiom(f)) out.push_back("occ-subst");
  if (pattern_neg_axiom(f)) out.push_back("pattern-neg");
  if (pattern_and_axiom(f)) out.push_back("pattern-and");
  if (mismatch_axiom(f)) out.push_back("pattern-mismatch");
  if (non_circularity_axiom(f)) out.push_back("non-circularity");
  return out;
}

std::optional<std::string> is_axiom_instance(const Form& f) {
  auto named = matching_schemas(f);
  if (!named.empty()) return named.front();
  if (is_tautology(f)) return "taut";
  return std::nullopt;
}

bool instance_of(const Form& f, std::string_view name) {
  if (name == "taut") return is_tautology(f);
  auto named = matching_schemas(f);
  return std::find(named.begin(), named.end(), name) != named.end();
}

// ---------------------------------------------------------------------------

std::optional<ProofFailure> verify_proof(const Proof& proof) {
  using R = ProofLine::Rule;
  for (std::size_t n = 1; n <= proof.lines.size(); ++n) {
    const ProofLine& line = proof.lines[n - 1];
    auto fail = [&](std::string why) { return ProofFailure{n, std::move(why)}; };
    auto earlier = [&](std::size_t r) { return r >= 1 && r < n; };
    try {
      switch (line.rule) {
        case R::Axiom:
          if (line.name) {
            if (!instance_of(line.formula, *line.name))
              return fail("not an instance of " + *line.name);
          } else if (!is_axiom_instance(line.formula)) {
            return fail("not an axiom instance");
          }
          break;
        case R::Taut:
          if (!is_tautology(line.formula)) return fail("not a tautology");
          break;
        case R::MP: {
          if (line.refs.size() != 2) return fail("mp needs two references");
          auto [i, j] = std::pair{line.refs[0], line.refs[1]};
          if (!earlier(i) || !earlier(j)) return fail("mp must refer to earlier lines");
          if (proof.lines[j - 1].formula != implies(proof.lines[i - 1].formula, line.formula))
            return fail("line " + std::to_string(j) + " is not line " + std::to_string(i) +
                        " -> this formula");
          break;
        }
        case R::Nec: {
          if (line.refs.size() != 1) return fail("nec needs one reference");
          if (!line.agent) return fail("nec needs an agent");
          if (!earlier(line.refs[0])) return fail("nec must refer to an earlier line");
          if (line.formula != Form::box(*line.agent, proof.lines[line.refs[0] - 1].formula))
            return fail("not box " + line.agent->name() + " of line " + std::to_string(line.refs[0]));
          break;
        }
        case R::Unknown:
          return fail("unknown rule '" + line.unknown_rule + "'");
      }
    } catch (const TautologyLimitError& e) {
      return fail(e.what());
    }
  }
  return std::nullopt;
}

Proof parse_proof(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProofFormatError(std::string("malformed proof file: ") + e.what());
  }
  if (!j.is_array()) throw ProofFormatError("a proof is a JSON list of lines");
  Proof p;
  std::size_t n = 0;
  for (auto& lj : j) {
    ++n;
    auto where = "line " + std::to_string(n);
    if (!lj.is_object() || !lj.contains("formula") || !lj.contains("rule") ||
        !lj["formula"].is_string() || !lj["rule"].is_string())
      throw ProofFormatError(where + ": needs string fields 'formula' and 'rule'");
    Form f = [&] {
      try {
        return parse_form(lj["formula"].get<std::string>());
      } catch (const ParseError& e) {
        throw ProofFormatError(where + ": " + e.what());
      }
    }();
    auto rule = lj["rule"].get<std::string>();
    ProofLine line{f, ProofLine::Rule::Unknown, {}, std::nullopt, std::nullopt, {}};
    if (rule == "axiom") line.rule = ProofLine::Rule::Axiom;
    else if (rule == "taut") line.rule = ProofLine::Rule::Taut;
    else if (rule == "mp") line.rule = ProofLine::Rule::MP;
    else if (rule == "nec") line.rule = ProofLine::Rule::Nec;
    else line.unknown_rule = rule;
    if (lj.contains("refs")) {
      if (!lj["refs"].is_array()) throw ProofFormatError(where + ": 'refs' must be a list");
      for (auto& r : lj["refs"]) {
        if (!r.is_number_unsigned()) throw ProofFormatError(where + ": refs are positive integers");
        line.refs.push_back(r.get<std::size_t>());
      }
    }
    if (lj.contains("agent")) {
      auto a = lj["agent"].get<std::string>();
      if (!is_identifier(a) || is_reserved_word(a)) throw ProofFormatError(where + ": bad agent");
      line.agent = Agent(a);
    }
    if (lj.contains("name")) line.name = lj["name"].get<std::string>();
    p.lines.push_back(std::move(line));
  }
  return p;
}

std::string dump_proof(const Proof& proof) {
  using nlohmann::json;
  json j = json::array();
  for (auto& line : proof.lines) {
    json lj;
    lj["formula"] = to_string(line.formula);
    switch (line.rule) {
      case ProofLine::Rule::Axiom: lj["rule"] = "axiom"; break;
      case ProofLine::Rule::Taut: lj["rule"] = "taut"; break;
      case ProofLine::Rule::MP: lj["rule"] = "mp"; break;
      case ProofLine::Rule::Nec: lj["rule"] = "nec"; break;
      case ProofLine::Rule::Unknown: lj["rule"] = line.unknown_rule; break;
    }
    lj["refs"] = line.refs;
    if (line.agent) lj["agent"] = line.agent->name();
    if (line.name) lj["name"] = *line.name;
    j.push_back(std::move(lj));
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

Form conjunction(const std::vector<EquivLiteral>& premises) {
  if (premises.empty()) throw std::invalid_argument("conjunction of no premises");
  Form out = to_form(premises.back());
  for (auto it = premises.rbegin() + 1; it != premises.rend(); ++it) out = Form::conj(to_form(*it), out);
  return out;
}

namespace {

class Builder {
 public:
  explicit Builder(const std::vector<EquivLiteral>& premises) {
    if (!premises.empty()) h_ = conjunction(premises);
  }

  Proof proof;

  const std::optional<Form>& hypothesis() const { return h_; }

  // H -> x, or x itself without premises
  Form under(const Form& x) const { return h_ ? implies(*h_, x) : x; }

  std::size_t line(Form f, ProofLine::Rule r, std::vector<std::size_t> refs = {},
                   std::optional<std::string> name = std::nullopt) {
    proof.lines.push_back({std::move(f), r, std::move(refs), std::nullopt, std::move(name), {}});
    return proof.lines.size();
  }
  std::size_t axiom(Form f, const char* name) { return line(std::move(f), ProofLine::Rule::Axiom, {}, name); }
  std::size_t taut(Form f) { return line(std::move(f), ProofLine::Rule::Taut); }

  std::size_t mp(std::size_t premise, std::size_t implication) {
    auto m = match_implies(proof.lines[implication - 1].formula);
    if (!m || m->first != proof.lines[premise - 1].formula)
      throw std::logic_error("proof builder: modus ponens mismatch");
    return line(m->second, ProofLine::Rule::MP, {premise, implication});
  }

  // from (H -> A) and an axiom line ax: A -> X or A <-> (...), derive H -> X
  std::size_t one_source(std::size_t ha, const Form& a, std::size_t ax, const Form& x) {
    auto t = taut(implies(under(a), implies(proof.lines[ax - 1].formula, under(x))));
    return mp(ax, mp(ha, t));
  }

  // from (H -> A), (H -> B) and ax: (A & B) -> X, derive H -> X
  std::size_t two_sources(std::size_t ha, const Form& a, std::size_t hb, const Form& b,
                          std::size_t ax, const Form& x) {
    auto t = taut(implies(under(a), implies(under(b), implies(proof.lines[ax - 1].formula, under(x)))));
    return mp(ax, mp(hb, mp(ha, t)));
  }

 private:
  std::optional<Form> h_;
};

Form lit(const Fact& f) { return Form::equiv(f.left, f.right); }

// Line numbers proving H -> fact for every fact.
std::vector<std::size_t> derive(Builder& b, const Derivation& d) {
  std::vector<std::size_t> at(d.facts.size());
  for (std::size_t i = 0; i < d.facts.size(); ++i) {
    const Fact& f = d.facts[i];
    Form x = lit(f);
    auto src = [&](std::size_t n) { return lit(d.facts[f.from[n]]); };
    auto src_line = [&](std::size_t n) { return at[f.from[n]]; };
    switch (f.rule) {
      case Rule::Premise:
        at[i] = b.taut(b.under(x));
        break;
      case Rule::Reflexivity: {
        auto ax = b.axiom(x, "refl");
        at[i] = b.hypothesis() ? b.mp(ax, b.taut(implies(x, b.under(x)))) : ax;
        break;
      }
      case Rule::Symmetry:
        at[i] = b.one_source(src_line(0), src(0), b.axiom(implies(src(0), x), "sym"), x);
        break;
      case Rule::PatternNeg:
        at[i] = b.one_source(src_line(0), src(0), b.axiom(iff(src(0), x), "pattern-neg"), x);
        break;
      case Rule::PatternAndLeft:
      case Rule::PatternAndRight: {
        const Fact& s = d.facts[f.from[0]];
        Form both = Form::conj(Form::equiv(s.left.left(), s.right.left()),
                               Form::equiv(s.left.right(), s.right.right()));
        at[i] = b.one_source(src_line(0), src(0), b.axiom(iff(src(0), both), "pattern-and"), x);
        break;
      }
      case Rule::Transitivity:
        at[i] = b.two_sources(src_line(0), src(0), src_line(1), src(1),
                              b.axiom(implies(Form::conj(src(0), src(1)), x), "trans"), x);
        break;
      case Rule::OccSubst:
        at[i] = b.two_sources(src_line(0), src(0), src_line(1), src(1),
                              b.axiom(implies(Form::conj(src(0), src(1)), x), "occ-subst"), x);
        break;
    }
  }
  return at;
}

Proof refute(const Derivation& d, const char* axiom_name) {
  if (d.facts.empty()) throw std::invalid_argument("empty derivation");
  Builder b(d.premises);
  auto at = derive(b, d);
  Form c = lit(d.facts.back());
  auto ax = b.axiom(Form::neg(c), axiom_name);
  Form goal = b.hypothesis() ? Form::neg(*b.hypothesis()) : Form::neg(Form::neg(Form::neg(c)));
  auto t = b.taut(implies(b.under(c), implies(Form::neg(c), goal)));
  b.mp(ax, b.mp(at.back(), t));
  return std::move(b.proof);
}

}  // namespace

Proof derivation_proof(const Derivation& d) {
  Builder b(d.premises);
  derive(b, d);
  return std::move(b.proof);
}

Proof refutation(const CircularWitness& w) { return refute(w.derivation, "non-circularity"); }

Proof refutation(const ClashWitness& w) { return refute(w.derivation, "pattern-mismatch"); }

Proof refutation(const Disequality& d, const EquivLiteral& negative) {
  Builder b(d.derivation.premises);
  auto at = derive(b, d.derivation);
  Form x = lit(d.derivation.facts.back());
  Form n = to_form(negative);
  Form goal = b.hypothesis() ? Form::neg(Form::conj(*b.hypothesis(), n)) : Form::neg(n);
  b.mp(at.back(), b.taut(implies(b.under(x), goal)));
  return std::move(b.proof);
}

}  // namespace pald
