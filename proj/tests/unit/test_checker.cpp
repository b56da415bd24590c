#include "doctest.h"
#include "generators.hpp"
#include "pald/checker.hpp"
#include "pald/text.hpp"
#include "random_models.hpp"

using namespace pald;
using pald::testing::fixture;
using pald::testing::Rng;

namespace {

BoolForm B(const char* s) { return parse_bool(s); }
Form F(const char* s) { return parse_form(s); }

bool at(const Model& m, const char* world, const char* formula) {
  return eval(m, m.world_index(world), F(formula));
}

testing::ModelOptions kd_options() {
  testing::ModelOptions o;
  o.vocab = testing::first_atoms(3);
  o.agents = {Agent("i"), Agent("j")};
  return o;
}

}  // namespace

TEST_CASE("figure 1") {
  auto m = fixture("fig1");
  CHECK(at(m, "middle", "box i p & (p == q) & ~box i (p == q) & ~box i q"));
  CHECK(at(m, "middle", "box i p & (p == q)"));
  CHECK(eval_global(m, F("p <-> q")) == std::set<std::size_t>{0, 1});
  CHECK(at(m, "middle", "[p <-> q] box i (p <-> q)"));
  CHECK(at(m, "middle", "[p <-> q] ~box i (p == q)"));
}

TEST_CASE("figure 2") {
  auto m = fixture("fig2");
  for (auto w : {"left", "right"}) CHECK(at(m, w, "box i (p == q) & box i (p <-> q) & ~box i p"));
  CHECK_FALSE(at(m, "left", "box i p"));
  CHECK(eval_global(m, F("p")) == std::set<std::size_t>{m.world_index("left")});
}

TEST_CASE("figure 3") {
  auto m = fixture("fig3");
  CHECK(at(m, "middle", "box a (p == (q & r)) & box b (p == (q & r))"));
  CHECK(at(m, "middle", "box b (p == (~q1 & r)) & ~box a (p == (~q1 & r))"));
  CHECK(at(m, "middle", "box a (p == (q & ~r1)) & ~box b (p == (q & ~r1))"));
  CHECK(at(m, "middle", "[r == ~r1][q == ~q1](box a (p == (~q1 & ~r1)) & box b (p == (~q1 & ~r1)))"));
  // neither agent knows the full meaning beforehand
  CHECK_FALSE(at(m, "middle", "box a (p == (~q1 & ~r1))"));
  CHECK_FALSE(at(m, "middle", "box b (p == (~q1 & ~r1))"));
}

TEST_CASE("figure 4") {
  auto m = fixture("fig4");
  CHECK(at(m, "middle", "p & box i p & box j p"));
  CHECK(at(m, "middle", "box i ((p == r) & r & ~q)"));
  CHECK(at(m, "middle", "box j ((p == q) & q & ~r)"));
  CHECK(at(m, "middle", "p & box i p & box j p & box i ((p == r) & r & ~q) & box j ((p == q) & q & ~r)"));
  // no loops: the actual world's own definition of p is not considered
  CHECK(at(m, "middle", "~box i (p == p) | box i (p == p)"));
  CHECK(at(m, "left", "box i q"));  // vacuous
}

TEST_CASE("equivalence is syntactic") {
  auto m = fixture("fig1");
  for (std::size_t w = 0; w < m.size(); ++w) {
    CHECK(eval(m, w, F("(p & (q & r)) != ((p & q) & r)")));
    CHECK(eval(m, w, F("(p & (q & r)) <-> ((p & q) & r)")));
    CHECK(eval(m, w, F("(q & r) == (q & r)")));
  }
}

TEST_CASE("knowing the definition") {
  auto m = fixture("fig1");
  CHECK_FALSE(at(m, "middle", "kd i p"));
  CHECK(at(m, "middle", "kd i q"));
  CHECK(at(m, "middle", "kx i q") == at(m, "middle", "box i q"));
  CHECK(at(m, "middle", "p := q"));
  CHECK_FALSE(at(m, "middle", "p := r"));
  CHECK(at(m, "left", "p := r"));
  auto f2 = fixture("fig2");
  CHECK(at(f2, "left", "kd i p"));
  CHECK_FALSE(at(f2, "left", "kx i p"));
}

TEST_CASE("errors") {
  auto m = fixture("fig1");
  CHECK_THROWS_AS(eval(m, 0, F("zz")), EvalError);
  CHECK_THROWS_AS(eval(m, 0, F("box j p")), EvalError);
  CHECK_THROWS_AS(eval(m, 7, F("p")), EvalError);
  CHECK_THROWS_AS(m.world_index("nowhere"), ModelError);
}

TEST_CASE("extension table") {
  auto m = fixture("fig2");
  auto rows = extension_table(m, F("box i (p == q) & ~box i p"));
  REQUIRE(!rows.empty());
  CHECK(rows.back().formula == F("box i (p == q) & ~box i p"));
  CHECK(rows.back().worlds == std::set<std::size_t>{0, 1});
  CHECK(rows.front().formula == F("p == q"));
}

TEST_CASE("property: equivalence relation and the equivalence axiom") {
  Rng rng(29);
  auto fixtures = std::vector<Model>{fixture("fig1"), fixture("fig2"), fixture("fig3"), fixture("fig4")};
  for (auto& m : fixtures)
    for (int k = 0; k < 300; ++k) {
      auto a = testing::random_bool(rng, m.vocabulary(), 3);
      auto b = testing::random_bool(rng, m.vocabulary(), 3);
      auto c = testing::random_bool(rng, m.vocabulary(), 3);
      for (std::size_t w = 0; w < m.size(); ++w) {
        auto e = [&](const BoolForm& x, const BoolForm& y) { return eval(m, w, Form::equiv(x, y)); };
        REQUIRE(e(a, a));
        REQUIRE(e(a, b) == e(b, a));
        if (e(a, b) && e(b, c)) REQUIRE(e(a, c));
        if (e(a, b)) REQUIRE(eval(m, w, iff(to_form(a), to_form(b))));
      }
    }
}

TEST_CASE("property: announcement clause") {
  Rng rng(31);
  testing::FormOptions fo{testing::first_atoms(3), {Agent("i")}, 3, 2, true, 1, true, false};
  for (int i = 0; i < 100; ++i) {
    auto m = testing::random_model(rng, {});
    auto phi = testing::random_form(rng, fo);
    auto psi = testing::random_form(rng, fo);
    auto ext = eval_global(m, phi);
    for (std::size_t w = 0; w < m.size(); ++w) {
      bool expected = true;
      if (ext.count(w)) {
        auto sub = restrict(m, ext);
        expected = eval(sub, sub.world_index(m.world(w).id), psi);
      }
      REQUIRE(eval(m, w, Form::announce(phi, psi)) == expected);
    }
  }
}

TEST_CASE("property: definition validities") {
  Rng rng(37);
  std::size_t kd_transfer_failures = 0, reflexive_checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto m = testing::random_model(rng, kd_options());
    auto& vocab = m.vocabulary();
    for (int k = 0; k < 10; ++k) {
      Atom p = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
      auto P = testing::random_bool(rng, vocab, 2);
      auto Q = testing::random_bool(rng, vocab, 2);
      Agent ag("i");
      for (std::size_t w = 0; w < m.size(); ++w) {
        // use the world's own definition half of the time so the antecedent fires
        auto D = k % 2 ? m.world(w).def.at(p) : P;
        REQUIRE(eval(m, w, implies(Form::def_is(p, D), Form::equiv(BoolForm::atom(p), D))));
        if (D != Q) REQUIRE(eval(m, w, implies(Form::def_is(p, D), Form::neg(Form::def_is(p, Q)))));
        REQUIRE(eval(m, w, implies(Form::conj(Form::def_is(p, D), Form::kd(ag, BoolForm::atom(p))),
                                   Form::box(ag, Form::def_is(p, D)))));
        auto transfer = implies(Form::conj(Form::kd(ag, P), Form::box(ag, Form::equiv(P, Q))), Form::kd(ag, Q));
        auto& succ = m.successors(ag, w);
        bool reflexive = std::find(succ.begin(), succ.end(), w) != succ.end();
        if (reflexive) {
          ++reflexive_checked;
          REQUIRE(eval(m, w, transfer));
        } else if (!eval(m, w, transfer)) {
          ++kd_transfer_failures;
        }
      }
    }
  }
  CHECK(reflexive_checked > 100);
  MESSAGE("Kd transfer fails at ", kd_transfer_failures, " irreflexive worlds");
}

TEST_CASE("Kd transfer needs a reflexive world") {
  PreModel pm;
  pm.vocabulary = {Atom("p"), Atom("q")};
  pm.agents = {Agent("i")};
  World w{"w", {{Atom("p"), true}, {Atom("q"), false}}, {{Atom("p"), B("p")}, {Atom("q"), B("q")}}};
  World v{"v", {{Atom("p"), true}, {Atom("q"), true}}, {{Atom("p"), B("p")}, {Atom("q"), B("p")}}};
  pm.worlds = {w, v};
  pm.relations[Agent("i")] = {{0, 1}};
  auto m = validated(pm);
  CHECK(eval(m, 0, F("kd i p & box i (p == q)")));
  CHECK_FALSE(eval(m, 0, F("kd i q")));
}

TEST_CASE("property: vacuous modalities") {
  Rng rng(41);
  testing::FormOptions fo{testing::first_atoms(3), {Agent("i")}, 3, 2, true, 1, true, true};
  for (int i = 0; i < 100; ++i) {
    auto m = testing::random_model(rng, {});
    for (std::size_t w = 0; w < m.size(); ++w) {
      if (!m.successors(Agent("i"), w).empty()) continue;
      REQUIRE(eval(m, w, Form::box(Agent("i"), testing::random_form(rng, fo))));
      REQUIRE(eval(m, w, Form::kd(Agent("i"), testing::random_bool(rng, fo.vocab, 2))));
    }
  }
}
