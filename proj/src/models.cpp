#include "pald/models.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pald/text.hpp"

namespace pald {

using nlohmann::json;

std::optional<std::size_t> PreModel::find_world(std::string_view id) const {
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (worlds[i].id == id) return i;
  return std::nullopt;
}

std::size_t PreModel::world_index(std::string_view id) const {
  if (auto i = find_world(id)) return *i;
  throw ModelError("unknown world '" + std::string(id) + "'");
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (auto& v : violations) {
    switch (v.kind) {
      case Violation::Kind::Structure: out += "structure"; break;
      case Violation::Kind::Circular: out += "circular definition"; break;
      case Violation::Kind::Valuation: out += "valuation"; break;
    }
    if (!v.world.empty()) out += " at " + v.world;
    if (v.atom) out += " (" + v.atom->name() + ")";
    out += ": " + v.message + "\n";
  }
  return out;
}

Model::Model(PreModel pm) : m_(std::move(pm)) {
  for (auto& a : m_.agents) {
    auto& s = succ_[a];
    s.assign(m_.worlds.size(), {});
    if (auto it = m_.relations.find(a); it != m_.relations.end())
      for (auto [from, to] : it->second) s[from].push_back(to);
    for (auto& v : s) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
}

bool Model::has_atom(const Atom& a) const {
  return std::find(m_.vocabulary.begin(), m_.vocabulary.end(), a) != m_.vocabulary.end();
}

bool Model::has_agent(const Agent& a) const { return succ_.count(a) > 0; }

const std::vector<std::size_t>& Model::successors(const Agent& agent, std::size_t w) const {
  auto it = succ_.find(agent);
  if (it == succ_.end()) throw ModelError("unknown agent '" + agent.name() + "'");
  return it->second.at(w);
}

namespace {

BoolForm unravel_with(const std::map<Atom, BoolForm>& def, const BoolForm& p) {
  switch (p.kind()) {
    case BoolForm::Kind::Atom: {
      auto it = def.find(p.atom());
      if (it == def.end()) throw ModelError("unknown atom '" + p.atom().name() + "'");
      return it->second;
    }
    case BoolForm::Kind::Neg:
      return BoolForm::neg(unravel_with(def, p.inner()));
    case BoolForm::Kind::And:
      return BoolForm::conj(unravel_with(def, p.left()), unravel_with(def, p.right()));
  }
  return p;
}

bool eval_with(const std::map<Atom, bool>& v, const BoolForm& p) {
  switch (p.kind()) {
    case BoolForm::Kind::Atom: {
      auto it = v.find(p.atom());
      if (it == v.end()) throw ModelError("unknown atom '" + p.atom().name() + "'");
      return it->second;
    }
    case BoolForm::Kind::Neg:
      return !eval_with(v, p.inner());
    case BoolForm::Kind::And:
      return eval_with(v, p.left()) && eval_with(v, p.right());
  }
  return false;
}

void check_structure(const PreModel& pm, ValidationReport& r) {
  auto bad = [&](std::string world, std::optional<Atom> atom, std::string msg) {
    r.violations.push_back({Violation::Kind::Structure, std::move(world), std::move(atom),
                            std::move(msg)});
  };
  if (pm.worlds.empty()) bad("", std::nullopt, "no worlds");
  std::set<Atom> vocab(pm.vocabulary.begin(), pm.vocabulary.end());
  if (vocab.size() != pm.vocabulary.size()) bad("", std::nullopt, "duplicate atom in vocabulary");
  std::set<Agent> agents(pm.agents.begin(), pm.agents.end());
  if (agents.size() != pm.agents.size()) bad("", std::nullopt, "duplicate agent");
  std::set<std::string> ids;
  for (auto& w : pm.worlds) {
    if (!ids.insert(w.id).second) bad(w.id, std::nullopt, "duplicate world id");
    for (auto& a : pm.vocabulary) {
      if (!w.valuation.count(a)) bad(w.id, a, "missing valuation");
      if (!w.def.count(a)) bad(w.id, a, "missing definition");
    }
    for (auto& [a, v] : w.valuation)
      if (!vocab.count(a)) bad(w.id, a, "valuation for an undeclared atom");
    for (auto& [a, d] : w.def) {
      if (!vocab.count(a)) bad(w.id, a, "definition for an undeclared atom");
      for (auto& b : vocabulary(d))
        if (!vocab.count(b)) bad(w.id, a, "definition mentions undeclared atom " + b.name());
    }
  }
  for (auto& [agent, pairs] : pm.relations) {
    if (!agents.count(agent)) bad("", std::nullopt, "relation for undeclared agent " + agent.name());
    for (auto [from, to] : pairs)
      if (from >= pm.worlds.size() || to >= pm.worlds.size())
        bad("", std::nullopt, "relation for agent " + agent.name() + " mentions an unknown world");
  }
  if (pm.actual && *pm.actual >= pm.worlds.size()) bad("", std::nullopt, "unknown actual world");
}

}  // namespace

std::variant<Model, ValidationReport> validate(PreModel pm) {
  ValidationReport r;
  check_structure(pm, r);
  if (!r.ok()) return r;
  for (auto& w : pm.worlds) {
    bool well_founded = true;
    for (auto& [q, d] : w.def)
      for (auto& p : vocabulary(d))
        if (w.def.at(p) != BoolForm::atom(p)) {
          well_founded = false;
          r.violations.push_back({Violation::Kind::Circular, w.id, q,
                                  q.name() + " := " + to_string(d) + " uses " + p.name() +
                                      ", which is defined as " + to_string(w.def.at(p))});
        }
    // With well-founded definitions one unravelling step reaches the fixpoint,
    // so it suffices to compare each atom with its definition.
    if (!well_founded) continue;
    for (auto& [p, d] : w.def) {
      bool direct = w.valuation.at(p);
      bool via = eval_with(w.valuation, d);
      if (direct != via)
        r.violations.push_back({Violation::Kind::Valuation, w.id, p,
                                p.name() + " is " + (direct ? "true" : "false") + " but " +
                                    to_string(d) + " is " + (via ? "true" : "false")});
    }
  }
  if (!r.ok()) return r;
  return Model(std::move(pm));
}

Model validated(PreModel pm) {
  auto out = validate(std::move(pm));
  if (auto* r = std::get_if<ValidationReport>(&out)) throw ModelError("invalid model:\n" + r->to_string());
  return std::get<Model>(std::move(out));
}

BoolForm unravel(const Model& m, std::size_t w, const BoolForm& p) {
  return unravel_with(m.world(w).def, p);
}

bool eval_bool(const Model& m, std::size_t w, const BoolForm& p) {
  return eval_with(m.world(w).valuation, p);
}

Model restrict(const Model& m, const std::set<std::size_t>& keep) {
  if (keep.empty()) throw ModelError("restriction to no worlds");
  const PreModel& src = m.data();
  std::vector<std::optional<std::size_t>> index(src.worlds.size());
  PreModel out;
  out.vocabulary = src.vocabulary;
  out.agents = src.agents;
  for (auto w : keep) {
    if (w >= src.worlds.size()) throw ModelError("restriction to an unknown world");
  }
  for (std::size_t w = 0; w < src.worlds.size(); ++w) {
    if (!keep.count(w)) continue;
    index[w] = out.worlds.size();
    out.worlds.push_back(src.worlds[w]);
  }
  for (auto& [agent, pairs] : src.relations) {
    auto& dst = out.relations[agent];
    for (auto [a, b] : pairs)
      if (index[a] && index[b]) dst.emplace_back(*index[a], *index[b]);
  }
  if (src.actual && index[*src.actual]) out.actual = index[*src.actual];
  // per-world constraints are untouched by dropping worlds
  return validated(std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ModelError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ModelError(where + ": bad '" + key + "': " + e.what());
  }
}

Atom atom_named(const std::string& s, const std::string& where) {
  if (!is_identifier(s) || is_reserved_word(s)) throw ModelError(where + ": bad atom name '" + s + "'");
  return Atom(s);
}

}  // namespace

PreModel parse_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model file must contain a JSON object");
  for (auto& [k, v] : j.items())
    if (k != "vocabulary" && k != "agents" && k != "worlds" && k != "relations" && k != "actual")
      throw ModelError("unexpected key '" + k + "'");

  PreModel pm;
  for (auto& s : field<std::vector<std::string>>(j, "vocabulary", "model"))
    pm.vocabulary.push_back(atom_named(s, "vocabulary"));
  for (auto& s : field<std::vector<std::string>>(j, "agents", "model")) {
    if (!is_identifier(s) || is_reserved_word(s)) throw ModelError("bad agent name '" + s + "'");
    pm.agents.emplace_back(s);
  }
  auto worlds = field<json>(j, "worlds", "model");
  if (!worlds.is_array()) throw ModelError("'worlds' must be a list");
  for (auto& wj : worlds) {
    World w;
    w.id = field<std::string>(wj, "id", "world");
    std::string where = "world " + w.id;
    if (pm.find_world(w.id)) throw ModelError("duplicate world id '" + w.id + "'");
    for (auto& [k, v] : field<std::map<std::string, bool>>(wj, "valuation", where))
      w.valuation.emplace(atom_named(k, where), v);
    for (auto& [k, v] : field<std::map<std::string, std::string>>(wj, "def", where)) {
      try {
        w.def.emplace(atom_named(k, where), parse_bool(v));
      } catch (const ParseError& e) {
        throw ModelError(where + ": definition of " + k + ": " + e.what());
      }
    }
    for (auto& a : pm.vocabulary) {
      if (!w.valuation.count(a)) throw ModelError(where + ": no valuation for " + a.name());
      if (!w.def.count(a)) throw ModelError(where + ": no definition for " + a.name());
    }
    pm.worlds.push_back(std::move(w));
  }
  if (j.contains("relations")) {
    auto rel = field<std::map<std::string, std::vector<std::pair<std::string, std::string>>>>(
        j, "relations", "model");
    for (auto& [agent, pairs] : rel) {
      if (!is_identifier(agent)) throw ModelError("bad agent name '" + agent + "'");
      auto& dst = pm.relations[Agent(agent)];
      for (auto& [a, b] : pairs) dst.emplace_back(pm.world_index(a), pm.world_index(b));
    }
  }
  if (j.contains("actual")) pm.actual = pm.world_index(field<std::string>(j, "actual", "model"));
  return pm;
}

std::string dump_model(const PreModel& pm) {
  json j;
  j["vocabulary"] = json::array();
  for (auto& a : pm.vocabulary) j["vocabulary"].push_back(a.name());
  j["agents"] = json::array();
  for (auto& a : pm.agents) j["agents"].push_back(a.name());
  j["worlds"] = json::array();
  for (auto& w : pm.worlds) {
    json wj;
    wj["id"] = w.id;
    wj["valuation"] = json::object();
    for (auto& [a, v] : w.valuation) wj["valuation"][a.name()] = v;
    wj["def"] = json::object();
    for (auto& [a, d] : w.def) wj["def"][a.name()] = to_string(d);
    j["worlds"].push_back(std::move(wj));
  }
  j["relations"] = json::object();
  for (auto& [agent, pairs] : pm.relations) {
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    json pj = json::array();
    for (auto [a, b] : sorted) pj.push_back({pm.worlds.at(a).id, pm.worlds.at(b).id});
    j["relations"][agent.name()] = std::move(pj);
  }
  if (pm.actual) j["actual"] = pm.worlds.at(*pm.actual).id;
  return j.dump(2) + "\n";
}

PreModel load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void save(const PreModel& pm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write " + path.string());
  out << dump_model(pm);
}

}  // namespace pald
