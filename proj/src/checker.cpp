#include "pald/checker.hpp"

#include <algorithm>

namespace pald {

void check_signature(const Model& m, const Form& f) {
  for (auto& a : atoms_of(f))
    if (!m.has_atom(a)) throw EvalError("unknown atom '" + a.name() + "'");
  for (auto& a : agents_of(f))
    if (!m.has_agent(a)) throw EvalError("unknown agent '" + a.name() + "'");
}

namespace {

bool holds(const Model& m, std::size_t w, const Form& f);

std::set<std::size_t> extension(const Model& m, const Form& f) {
  std::set<std::size_t> out;
  for (std::size_t v = 0; v < m.size(); ++v)
    if (holds(m, v, f)) out.insert(v);
  return out;
}

bool holds(const Model& m, std::size_t w, const Form& f) {
  switch (f.kind()) {
    case Form::Kind::Atom:
      return m.world(w).valuation.at(f.atom());
    case Form::Kind::Equiv:
      return unravel(m, w, f.bool_lhs()) == unravel(m, w, f.bool_rhs());
    case Form::Kind::Neg:
      return !holds(m, w, f.inner());
    case Form::Kind::And:
      return holds(m, w, f.left()) && holds(m, w, f.right());
    case Form::Kind::Box: {
      auto& succ = m.successors(f.agent(), w);
      return std::all_of(succ.begin(), succ.end(),
                         [&](std::size_t v) { return holds(m, v, f.inner()); });
    }
    case Form::Kind::Ann: {
      if (!holds(m, w, f.announced())) return true;
      auto keep = extension(m, f.announced());
      auto sub = restrict(m, keep);
      auto at = static_cast<std::size_t>(std::distance(keep.begin(), keep.find(w)));
      return holds(sub, at, f.inner());
    }
    case Form::Kind::Kd: {
      auto here = unravel(m, w, f.bool_lhs());
      auto& succ = m.successors(f.agent(), w);
      return std::all_of(succ.begin(), succ.end(),
                         [&](std::size_t v) { return unravel(m, v, f.bool_lhs()) == here; });
    }
    case Form::Kind::DefIs:
      return m.world(w).def.at(f.atom()) == f.bool_lhs();
  }
  return false;
}

void collect(const Form& f, std::vector<Form>& out) {
  switch (f.kind()) {
    case Form::Kind::Neg:
    case Form::Kind::Box:
      collect(f.inner(), out);
      break;
    case Form::Kind::And:
      collect(f.left(), out);
      collect(f.right(), out);
      break;
    case Form::Kind::Ann:
      collect(f.announced(), out);
      collect(f.inner(), out);
      break;
    default:
      break;
  }
  if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
}

}  // namespace

bool eval(const Model& m, std::size_t w, const Form& f) {
  if (w >= m.size()) throw EvalError("unknown world index " + std::to_string(w));
  check_signature(m, f);
  return holds(m, w, f);
}

std::set<std::size_t> eval_global(const Model& m, const Form& f) {
  check_signature(m, f);
  return extension(m, f);
}

std::vector<ExtensionRow> extension_table(const Model& m, const Form& f) {
  check_signature(m, f);
  std::vector<Form> subs;
  collect(f, subs);
  std::vector<ExtensionRow> out;
  for (auto& s : subs) out.push_back({s, extension(m, s)});
  return out;
}

}  // namespace pald
