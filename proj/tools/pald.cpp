// pald: command-line front end.
//
// Exit codes: 0 true/ok/sat/valid, 1 false/invalid/unsat/not valid, 2 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pald/checker.hpp"
#include "pald/defcore.hpp"
#include "pald/models.hpp"
#include "pald/proof.hpp"
#include "pald/text.hpp"

#ifndef PALD_FIXTURE_DIR
#define PALD_FIXTURE_DIR "fixtures"
#endif

using namespace pald;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "@path" reads the formula from a file
Form formula_arg(const std::string& arg) {
  std::string text = arg.size() > 1 && arg[0] == '@' ? slurp(arg.substr(1)) : arg;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  try {
    return parse_form(text);
  } catch (const ParseError& e) {
    throw Failure(e.what());
  }
}

LiteralSet read_literals(const std::string& path) {
  LiteralSet out;
  std::istringstream in(slurp(path));
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    auto text = raw.substr(0, raw.find('#'));
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Form f = parse_form(text);
      bool positive = true;
      if (f.kind() == Form::Kind::Neg && f.inner().kind() == Form::Kind::Equiv) {
        positive = false;
        f = f.inner();
      }
      if (f.kind() == Form::Kind::Equiv) {
        out.equivalences.push_back({positive, f.bool_lhs(), f.bool_rhs()});
      } else if (auto b = as_bool(f)) {
        out.propositions.push_back(*b);
      } else {
        throw Failure(path + ":" + std::to_string(n) + ": expected P == Q, P != Q or a boolean formula");
      }
    } catch (const ParseError& e) {
      throw Failure(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

fs::path fixture_dir() {
  if (const char* env = std::getenv("PALD_FIXTURE_DIR"); env && *env) return env;
  return PALD_FIXTURE_DIR;
}

Model model_arg(const std::string& path) {
  fs::path p = path;
  if (!fs::exists(p) && fs::exists(fixture_dir() / p)) p = fixture_dir() / p;
  auto pm = load(p);
  auto v = validate(pm);
  if (auto* rep = std::get_if<ValidationReport>(&v)) throw Failure("invalid model:\n" + rep->to_string());
  return std::get<Model>(std::move(v));
}

json seed_json(const ModelSeed& s) {
  json j;
  for (auto& [a, d] : s.def) j["def"][a.name()] = to_string(d);
  for (auto& [a, v] : s.valuation) j["valuation"][a.name()] = v;
  return j;
}

json model_json(const Model& m) { return json::parse(dump_model(m.data())); }

struct Result {
  int code;
  std::string verdict;
  json details = json::object();
  std::string text;  // human output
};

Result cmd_parse(const std::string& formula) {
  Form f = formula_arg(formula);
  auto s = to_string(f);
  return {0, "ok", {{"formula", s}, {"size", size(f)}, {"modal_depth", modal_depth(f)}}, s};
}

Result cmd_validate(const std::string& path) {
  auto pm = load(path);
  auto v = validate(pm);
  if (std::holds_alternative<Model>(v)) return {0, "ok", {{"worlds", pm.worlds.size()}}, "OK"};
  auto& rep = std::get<ValidationReport>(v);
  json vs = json::array();
  for (auto& x : rep.violations) vs.push_back(x.message);
  return {1, "invalid", {{"violations", vs}}, rep.to_string()};
}

Result cmd_check(const std::string& path, const std::string& formula, const std::string& world,
                 bool verbose) {
  auto m = model_arg(path);
  Form f = formula_arg(formula);
  std::size_t w;
  if (!world.empty()) {
    w = m.world_index(world);
  } else if (m.actual()) {
    w = *m.actual();
  } else {
    throw Failure("model has no actual world; pass --world");
  }
  bool v = eval(m, w, f);
  Result r{v ? 0 : 1, v ? "true" : "false", {{"world", m.world(w).id}, {"formula", to_string(f)}},
           v ? "true" : "false"};
  if (verbose) {
    json rows = json::array();
    std::ostringstream out;
    out << r.text << "\n";
    for (auto& row : extension_table(m, f)) {
      json ids = json::array();
      out << to_string(row.formula) << " : {";
      bool first = true;
      for (auto k : row.worlds) {
        ids.push_back(m.world(k).id);
        out << (first ? "" : ", ") << m.world(k).id;
        first = false;
      }
      out << "}\n";
      rows.push_back({{"formula", to_string(row.formula)}, {"worlds", ids}});
    }
    r.details["extensions"] = rows;
    r.text = out.str();
    r.text.pop_back();
  }
  return r;
}

Result cmd_reduce(const std::string& formula) {
  auto g = reduce(formula_arg(formula));
  auto s = to_string(g);
  return {0, "ok", {{"formula", s}}, s};
}

Result cmd_sat(const std::string& formula) {
  auto r = satisfiable(formula_arg(formula));
  if (auto* s = std::get_if<Sat>(&r)) {
    auto text = dump_model(s->model.data());
    text.pop_back();
    return {0, "sat", {{"model", model_json(s->model)}}, "sat\n" + text};
  }
  return {1, "unsat", json::object(), "unsat"};
}

Result cmd_valid(const std::string& formula) {
  Form f = formula_arg(formula);
  auto r = satisfiable(Form::neg(reduce(f)));
  if (std::holds_alternative<Unsat>(r)) return {0, "valid", json::object(), "valid"};
  auto& m = std::get<Sat>(r).model;
  auto text = dump_model(m.data());
  text.pop_back();
  return {1, "not valid", {{"countermodel", model_json(m)}}, "not valid; countermodel:\n" + text};
}

Result cmd_prove_verify(const std::string& path) {
  Proof pr;
  try {
    pr = parse_proof(slurp(path));
  } catch (const ProofFormatError& e) {
    throw Failure(e.what());
  }
  if (auto fail = verify_proof(pr))
    return {1, "rejected", {{"line", fail->line}, {"reason", fail->reason}},
            "rejected at line " + std::to_string(fail->line) + ": " + fail->reason};
  return {0, "ok", {{"lines", pr.lines.size()}}, "ok (" + std::to_string(pr.lines.size()) + " lines)"};
}

Result cmd_defcheck(const std::string& path, std::string proof_out) {
  auto lits = read_literals(path);
  auto r = literal_sat(lits);
  if (auto* s = std::get_if<Satisfiable>(&r)) {
    auto j = seed_json(s->seed);
    std::ostringstream out;
    out << "SAT";
    for (auto& [a, d] : s->seed.def)
      out << "\n  " << a.name() << " := " << to_string(d) << "  (" << (s->seed.valuation.at(a) ? "true" : "false")
          << ")";
    return {0, "sat", {{"seed", j}}, out.str()};
  }
  auto& reason = std::get<Unsatisfiable>(r).reason;
  Result res{1, "unsat", {{"reason", describe(reason)}}, "UNSAT: " + describe(reason)};
  std::optional<Proof> proof;
  if (auto* c = std::get_if<Circularity>(&reason)) {
    res.details["conclusion"] = to_string(c->witness.conclusion);
    res.text += "\nconclusion: " + to_string(c->witness.conclusion);
    proof = refutation(c->witness);
  } else if (auto* c = std::get_if<Clash>(&reason)) {
    proof = refutation(c->witness);
  } else if (auto* d = std::get_if<Disequality>(&reason)) {
    proof = refutation(*d, lits.equivalences[d->literal]);
  }
  if (proof) {
    if (auto fail = verify_proof(*proof)) throw std::logic_error("witness proof does not verify: " + fail->reason);
    if (proof_out.empty()) proof_out = fs::path(path).stem().string() + ".witness.json";
    std::ofstream(proof_out, std::ios::binary) << dump_proof(*proof);
    res.details["proof_file"] = proof_out;
    res.details["proof_lines"] = proof->lines.size();
    res.text += "\nproof (" + std::to_string(proof->lines.size()) + " lines, verified) written to " + proof_out;
  }
  return res;
}

Result cmd_fixtures() {
  json paths = json::array();
  std::string text;
  for (auto name : {"fig1", "fig2", "fig3", "fig4"}) {
    auto p = (fixture_dir() / (std::string(name) + ".json")).string();
    paths.push_back(p);
    text += (text.empty() ? "" : "\n") + p;
  }
  return {0, "ok", {{"paths", paths}}, text};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pald: definitions, knowledge and announcements"};
  app.require_subcommand(1);
  bool machine = false;
  app.add_flag("--json", machine, "emit one JSON object {subcommand, verdict, details}");

  std::string formula, model, world, path, proof_out;
  bool verbose = false;
  std::function<Result()> run;

  auto* parse = app.add_subcommand("parse", "parse and print a formula");
  parse->add_option("formula", formula, "formula text, or @file")->required();
  parse->callback([&] { run = [&] { return cmd_parse(formula); }; });

  auto* validate_cmd = app.add_subcommand("validate", "validate a model file");
  validate_cmd->add_option("model", path)->required();
  validate_cmd->callback([&] { run = [&] { return cmd_validate(path); }; });

  auto* check = app.add_subcommand("check", "evaluate a formula at a world");
  check->add_option("model", model)->required();
  check->add_option("formula", formula, "formula text, or @file")->required();
  check->add_option("--world,-w", world, "world id (default: the actual world)");
  check->add_flag("--verbose,-v", verbose, "print the extension of every subformula");
  check->callback([&] { run = [&] { return cmd_check(model, formula, world, verbose); }; });

  auto* reduce_cmd = app.add_subcommand("reduce", "remove announcements");
  reduce_cmd->add_option("formula", formula)->required();
  reduce_cmd->callback([&] { run = [&] { return cmd_reduce(formula); }; });

  auto* sat = app.add_subcommand("sat", "satisfiability of an announcement-free formula");
  sat->add_option("formula", formula)->required();
  sat->callback([&] { run = [&] { return cmd_sat(formula); }; });

  auto* valid_cmd = app.add_subcommand("valid", "validity");
  valid_cmd->add_option("formula", formula)->required();
  valid_cmd->callback([&] { run = [&] { return cmd_valid(formula); }; });

  auto* verify = app.add_subcommand("prove-verify", "check a Hilbert proof file");
  verify->add_option("proof", path)->required();
  verify->callback([&] { run = [&] { return cmd_prove_verify(path); }; });

  auto* defcheck = app.add_subcommand("defcheck", "satisfiability of definitional literals");
  defcheck->add_option("literals", path)->required();
  defcheck->add_option("--proof-out", proof_out, "where to write the refutation proof");
  defcheck->callback([&] { run = [&] { return cmd_defcheck(path, proof_out); }; });

  auto* fixtures = app.add_subcommand("fixtures", "print the shipped figure model paths");
  fixtures->callback([&] { run = [&] { return cmd_fixtures(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string name = app.get_subcommands().front()->get_name();
  Result r{2, "error", json::object(), {}};
  try {
    r = run();
  } catch (const std::exception& e) {
    r = {2, "error", {{"message", e.what()}}, std::string("error: ") + e.what()};
  }
  if (machine) {
    std::cout << json{{"subcommand", name}, {"verdict", r.verdict}, {"details", r.details}}.dump() << "\n";
  } else if (r.code == 2) {
    std::cerr << r.text << "\n";
  } else {
    std::cout << r.text << "\n";
  }
  return r.code;
}
