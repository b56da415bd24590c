#pragma once

// Kripke models with a per-world definition function.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pald/syntax.hpp"

namespace pald {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct World {
  std::string id;
  std::map<Atom, bool> valuation;
  std::map<Atom, BoolForm> def;

  friend bool operator==(const World&, const World&) = default;
};

using WorldPair = std::pair<std::size_t, std::size_t>;

/// Unchecked model data. Relations refer to worlds by index.
struct PreModel {
  std::vector<Atom> vocabulary;
  std::vector<Agent> agents;
  std::vector<World> worlds;
  std::map<Agent, std::vector<WorldPair>> relations;
  std::optional<std::size_t> actual;

  std::optional<std::size_t> find_world(std::string_view id) const;
  /// Throws ModelError for an unknown id.
  std::size_t world_index(std::string_view id) const;

  friend bool operator==(const PreModel&, const PreModel&) = default;
};

struct Violation {
  enum class Kind {
    Structure,     // unknown world/atom/agent, missing entries, duplicates
    Circular,      // an atom used in a definition is not self-evident
    Valuation,     // V_w(p) differs from the value of its unravelled definition
  };
  Kind kind;
  std::string world;
  std::optional<Atom> atom;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// A premodel that satisfies both model constraints.
class Model {
 public:
  const PreModel& data() const { return m_; }
  const std::vector<Atom>& vocabulary() const { return m_.vocabulary; }
  const std::vector<Agent>& agents() const { return m_.agents; }
  std::size_t size() const { return m_.worlds.size(); }
  const World& world(std::size_t w) const { return m_.worlds.at(w); }
  std::optional<std::size_t> actual() const { return m_.actual; }
  std::size_t world_index(std::string_view id) const { return m_.world_index(id); }

  bool has_atom(const Atom& a) const;
  bool has_agent(const Agent& a) const;
  /// Throws ModelError for an agent the model does not declare.
  const std::vector<std::size_t>& successors(const Agent& agent, std::size_t w) const;

  friend bool operator==(const Model& a, const Model& b) { return a.m_ == b.m_; }

 private:
  friend std::variant<Model, ValidationReport> validate(PreModel pm);
  explicit Model(PreModel pm);

  PreModel m_;
  std::map<Agent, std::vector<std::vector<std::size_t>>> succ_;
};

std::variant<Model, ValidationReport> validate(PreModel pm);
/// validate, throwing ModelError with the report text on failure.
Model validated(PreModel pm);

/// Replaces each atom of P by its definition at w. Throws ModelError for an
/// atom outside the vocabulary.
BoolForm unravel(const Model& m, std::size_t w, const BoolForm& p);
bool eval_bool(const Model& m, std::size_t w, const BoolForm& p);

/// The submodel on `keep` (world indices), in the original world order.
/// Throws ModelError if keep is empty or mentions an unknown world.
Model restrict(const Model& m, const std::set<std::size_t>& keep);

// JSON file format.
PreModel parse_model(std::string_view json_text);
std::string dump_model(const PreModel& pm);
PreModel load(const std::filesystem::path& path);
void save(const PreModel& pm, const std::filesystem::path& path);
inline void save(const Model& m, const std::filesystem::path& path) { save(m.data(), path); }

}  // namespace pald
