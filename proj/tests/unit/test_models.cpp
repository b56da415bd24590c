#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "pald/models.hpp"
#include "pald/text.hpp"
#include "random_models.hpp"

using namespace pald;
using pald::testing::fixture;
using pald::testing::Rng;

namespace {

BoolForm B(const char* s) { return parse_bool(s); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool value(const BoolForm& f, const std::map<Atom, bool>& v) {
  if (f.is_atom()) return v.at(f.atom());
  if (f.is_neg()) return !value(f.inner(), v);
  return value(f.left(), v) && value(f.right(), v);
}

bool has_violation(const ValidationReport& r, Violation::Kind k, const std::string& world,
                   const char* atom) {
  for (auto& v : r.violations)
    if (v.kind == k && v.world == world && v.atom && v.atom->name() == atom) return true;
  return false;
}

}  // namespace

TEST_CASE("fixtures load and validate") {
  for (auto name : {"fig1", "fig2", "fig3", "fig4"}) {
    INFO(name);
    auto pm = load(testing::fixture_dir() / (std::string(name) + ".json"));
    CHECK(std::holds_alternative<Model>(validate(pm)));
    CHECK(pm.actual.has_value());
  }
  auto m = fixture("fig1");
  CHECK(m.size() == 3);
  CHECK(m.agents().size() == 1);
}

TEST_CASE("save and load round trip bit-exactly") {
  for (auto name : {"fig1", "fig2", "fig3", "fig4"}) {
    auto path = testing::fixture_dir() / (std::string(name) + ".json");
    auto text = slurp(path);
    auto pm = parse_model(text);
    CHECK(dump_model(pm) == text);
    CHECK(parse_model(dump_model(pm)) == pm);
  }
  auto tmp = std::filesystem::temp_directory_path() / "pald_model_roundtrip.json";
  auto m = fixture("fig3");
  save(m, tmp);
  CHECK(load(tmp) == m.data());
  std::filesystem::remove(tmp);
}

TEST_CASE("load errors") {
  auto text = slurp(testing::fixture_dir() / "fig2.json");
  SUBCASE("missing definition") {
    auto j = text;
    auto at = j.find("\"p\": \"q\"");
    REQUIRE(at != std::string::npos);
    j.replace(at, std::string("\"p\": \"q\",").size(), "");
    CHECK_THROWS_AS(parse_model(j), ModelError);
  }
  SUBCASE("duplicate world id") {
    auto j = text;
    auto at = j.find("\"id\": \"right\"");
    j.replace(at, std::string("\"id\": \"right\"").size(), "\"id\": \"left\"");
    CHECK_THROWS_AS(parse_model(j), ModelError);
  }
  CHECK_THROWS_AS(parse_model("{"), ModelError);
  CHECK_THROWS_AS(parse_model("[]"), ModelError);
  CHECK_THROWS_AS(load("/nonexistent/model.json"), ModelError);
}

TEST_CASE("unravel and eval_bool") {
  auto f1 = fixture("fig1");
  auto mid = f1.world_index("middle");
  CHECK(unravel(f1, mid, B("p")) == B("q"));
  CHECK(unravel(f1, mid, B("q")) == B("q"));
  CHECK(eval_bool(f1, mid, B("p")));
  CHECK_FALSE(eval_bool(f1, mid, B("(p & ~p)")));
  CHECK_THROWS_AS(unravel(f1, mid, B("zz")), ModelError);

  auto f3 = fixture("fig3");
  CHECK(unravel(f3, f3.world_index("middle"), B("(q & r)")) == B("(~q1 & ~r1)"));

  auto f2 = fixture("fig2");
  CHECK_FALSE(eval_bool(f2, f2.world_index("right"), B("(p & q)")));
}

TEST_CASE("validate") {
  CHECK(std::holds_alternative<Model>(validate(fixture("fig4").data())));

  SUBCASE("flipped valuation") {
    auto pm = fixture("fig1").data();
    pm.worlds[pm.world_index("middle")].valuation[Atom("q")] = false;
    auto r = validate(pm);
    REQUIRE(std::holds_alternative<ValidationReport>(r));
    auto& rep = std::get<ValidationReport>(r);
    CHECK(has_violation(rep, Violation::Kind::Valuation, "middle", "p"));
    CHECK(rep.violations.size() == 1);
  }
  SUBCASE("definition chain through a non-self-evident atom") {
    auto pm = fixture("fig1").data();
    auto& w = pm.worlds[0];
    w.def.at(Atom("p")) = B("r");
    w.def.at(Atom("r")) = B("(p & q)");
    auto r = validate(pm);
    REQUIRE(std::holds_alternative<ValidationReport>(r));
    CHECK(has_violation(std::get<ValidationReport>(r), Violation::Kind::Circular, "left", "p"));
  }
  SUBCASE("figure 3 middle world as drawn") {
    auto pm = fixture("fig3").data();
    auto& w = pm.worlds[pm.world_index("middle")];
    w.valuation[Atom("q1")] = true;
    w.valuation[Atom("r1")] = true;
    auto r = validate(pm);
    REQUIRE(std::holds_alternative<ValidationReport>(r));
    CHECK(has_violation(std::get<ValidationReport>(r), Violation::Kind::Valuation, "middle", "q"));
  }
  SUBCASE("structural errors") {
    auto pm = fixture("fig2").data();
    pm.relations[Agent("zz")].emplace_back(0, 0);
    CHECK(std::holds_alternative<ValidationReport>(validate(pm)));
    CHECK_THROWS_AS(validated(pm), ModelError);
  }
}

TEST_CASE("restrict") {
  auto f1 = fixture("fig1");
  CHECK(restrict(f1, {0, 1, 2}) == f1);
  auto r = restrict(f1, {f1.world_index("left"), f1.world_index("middle")});
  CHECK(r.size() == 2);
  CHECK(r.actual() == r.world_index("middle"));
  CHECK(r.world(r.world_index("left")) == f1.world(f1.world_index("left")));
  CHECK(r.successors(Agent("i"), r.world_index("middle")).size() == 2);
  CHECK_THROWS_AS(restrict(f1, {}), ModelError);

  auto f2 = fixture("fig2");
  auto only_left = restrict(f2, {f2.world_index("left")});
  CHECK(only_left.size() == 1);
  CHECK(only_left.world(0).id == "left");
}

TEST_CASE("property: restriction composes") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_model(rng, {});
    std::set<std::size_t> all, a, b;
    std::bernoulli_distribution coin(0.6);
    for (std::size_t w = 0; w < m.size(); ++w) {
      all.insert(w);
      if (coin(rng)) a.insert(w);
    }
    CHECK(restrict(m, all) == m);
    if (a.empty()) continue;
    // B is a subset of A, given as indices into the restricted model
    std::vector<std::size_t> av(a.begin(), a.end());
    std::set<std::size_t> b_local;
    for (std::size_t k = 0; k < av.size(); ++k)
      if (coin(rng)) {
        b.insert(av[k]);
        b_local.insert(k);
      }
    if (b.empty()) continue;
    CHECK(restrict(restrict(m, a), b_local) == restrict(m, b));
  }
}

TEST_CASE("property: unravel is idempotent on valid models") {
  Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    auto m = testing::random_model(rng, {});
    for (std::size_t w = 0; w < m.size(); ++w)
      for (int k = 0; k < 10; ++k) {
        auto p = testing::random_bool(rng, m.vocabulary(), 3);
        auto u = unravel(m, w, p);
        REQUIRE(unravel(m, w, u) == u);
      }
  }
}

TEST_CASE("property: atom-level criterion matches the quantified constraint") {
  Rng rng(23);
  std::size_t rejected = 0;
  for (int i = 0; i < 200; ++i) {
    auto pm = testing::random_premodel(rng, {});
    bool valid = std::holds_alternative<Model>(validate(pm));
    bool quantified = true;
    for (std::size_t w = 0; w < pm.worlds.size(); ++w) {
      auto bad = testing::quantified_constraint1(pm, w, 9);
      if (bad) quantified = false;
      // the atom-level criterion fails exactly when p and its definition differ
      for (auto& [p, d] : pm.worlds[w].def)
        if (pm.worlds[w].valuation.at(p) != value(d, pm.worlds[w].valuation))
          CHECK(bad.has_value());
    }
    CHECK(valid == quantified);
    if (!valid) ++rejected;
  }
  CHECK(rejected > 20);
}
