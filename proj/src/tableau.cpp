#include <functional>
#include <memory>

#include "pald/proof.hpp"
#include "pald/text.hpp"

namespace pald {

namespace {

using K = Form::Kind;

struct Signed {
  bool positive;
  Form f;
};

struct Branch {
  std::vector<EquivLiteral> equivalences;
  std::vector<BoolForm> propositions;
  std::map<Agent, std::vector<Form>> boxes;           // T box i f
  std::vector<std::pair<Agent, Form>> diamonds;       // F box i f
  std::set<std::pair<bool, Form>> seen;
};

struct Node {
  ModelSeed seed;
  std::vector<std::pair<Agent, std::unique_ptr<Node>>> children;
};

class Tableau {
 public:
  explicit Tableau(std::set<Atom> vocab) : vocab_(std::move(vocab)) {}

  std::unique_ptr<Node> world(std::vector<Signed> todo) { return expand(std::move(todo), Branch{}); }

 private:
  std::set<Atom> vocab_;

  std::unique_ptr<Node> expand(std::vector<Signed> todo, Branch b) {
    while (!todo.empty()) {
      Signed s = std::move(todo.back());
      todo.pop_back();
      if (!b.seen.insert({s.positive, s.f}).second) continue;
      if (b.seen.count({!s.positive, s.f})) return nullptr;
      const Form& f = s.f;
      switch (f.kind()) {
        case K::Neg:
          todo.push_back({!s.positive, f.inner()});
          break;
        case K::And:
          if (s.positive) {
            todo.push_back({true, f.right()});
            todo.push_back({true, f.left()});
          } else {
            auto left = todo;
            left.push_back({false, f.left()});
            if (auto n = expand(std::move(left), b)) return n;
            todo.push_back({false, f.right()});
          }
          break;
        case K::Atom:
          b.propositions.push_back(s.positive ? BoolForm::atom(f.atom())
                                              : BoolForm::neg(BoolForm::atom(f.atom())));
          break;
        case K::Equiv:
          b.equivalences.push_back({s.positive, f.bool_lhs(), f.bool_rhs()});
          break;
        case K::Box:
          if (s.positive) b.boxes[f.agent()].push_back(f.inner());
          else b.diamonds.emplace_back(f.agent(), f.inner());
          break;
        default:
          throw TableauError("tableau does not handle '" + to_string(f) + "'");
      }
    }
    return close(b);
  }

  std::unique_ptr<Node> close(const Branch& b) {
    auto r = literal_sat({b.equivalences, b.propositions}, vocab_);
    auto* sat = std::get_if<Satisfiable>(&r);
    if (!sat) return nullptr;
    auto node = std::make_unique<Node>();
    node->seed = std::move(sat->seed);
    for (auto& [agent, f] : b.diamonds) {
      std::vector<Signed> next;
      if (auto it = b.boxes.find(agent); it != b.boxes.end())
        for (auto& chi : it->second) next.push_back({true, chi});
      next.push_back({false, f});
      auto child = world(std::move(next));
      if (!child) return nullptr;
      node->children.emplace_back(agent, std::move(child));
    }
    return node;
  }
};

void flatten(const Node& n, const std::string& id, PreModel& pm) {
  std::size_t here = pm.worlds.size();
  pm.worlds.push_back({id, n.seed.valuation, n.seed.def});
  std::size_t k = 0;
  for (auto& [agent, child] : n.children) {
    std::size_t there = pm.worlds.size();
    flatten(*child, id + "." + std::to_string(++k), pm);
    pm.relations[agent].emplace_back(here, there);
  }
}

}  // namespace

SatResult satisfiable(const Form& f) {
  if (contains_kind(f, K::Ann) || contains_kind(f, K::Kd) || contains_kind(f, K::DefIs))
    throw TableauError("tableau needs a formula without announcements, kd or :=");
  auto atoms = atoms_of(f);
  Tableau t(atoms);
  auto root = t.world({{true, f}});
  if (!root) return Unsat{};
  PreModel pm;
  pm.vocabulary.assign(atoms.begin(), atoms.end());
  auto agents = agents_of(f);
  pm.agents.assign(agents.begin(), agents.end());
  flatten(*root, "w0", pm);
  pm.actual = 0;
  return Sat{validated(pm)};
}

bool valid(const Form& f) { return std::holds_alternative<Unsat>(satisfiable(Form::neg(reduce(f)))); }

}  // namespace pald
