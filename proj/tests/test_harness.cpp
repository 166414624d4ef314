// Copyright 2026 The stein-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "steinlab/harness.hpp"

using namespace steinlab;

constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {

ExperimentConfig config(const std::string& id, Json params = Json::object()) {
  ExperimentConfig c;
  c.experiment = id;
  c.params = std::move(params);
  return c;
}

bool has_message(const std::vector<Diagnostic>& diags, const std::string& path, const std::string& message) {
  for (const auto& d : diags)
    if (d.path == path && d.message.find(message) != std::string::npos) return true;
  return false;
}

std::vector<std::string> csv_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "steinlab-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("catalog manifest and registry cover the same items") {
  std::ifstream in(std::string(STEINLAB_DATA_DIR) + "/catalog.json");
  REQUIRE(in);
  const auto manifest = Json::parse(in);
  std::map<std::string, std::set<std::string>> from_manifest;
  for (const auto& item : manifest.at("items")) {
    CHECK_FALSE(item.at("description").get<std::string>().empty());
    from_manifest[item.at("key").get<std::string>()] = item.at("experiments").get<std::set<std::string>>();
  }
  std::map<std::string, std::set<std::string>> from_registry;
  for (const auto& info : list_experiments()) {
    CHECK_FALSE(info.covers.empty());
    for (const auto& key : info.covers) from_registry[key].insert(info.id);
  }
  for (const auto& [key, exps] : from_manifest) {
    INFO("manifest item " << key);
    REQUIRE(from_registry.count(key) == 1);
    CHECK(from_registry.at(key) == exps);
  }
  for (const auto& [key, exps] : from_registry) {
    INFO("registry item " << key);
    CHECK(from_manifest.count(key) == 1);
  }
}

TEST_CASE("every experiment validates with its defaults") {
  const std::set<std::string> verbs{"check-lemmas",     "classical-lemma", "classical-stein", "quantum-blurring",
                                    "fock-convergence", "vacuum-support",  "axioms",          "stein-estimate"};
  std::set<std::string> ids;
  for (const auto& info : list_experiments()) {
    ids.insert(info.id);
    INFO(info.id);
    CHECK(validate(config(info.id)).empty());
  }
  CHECK(ids == verbs);
}

TEST_CASE("validation reports field paths") {
  auto diags = validate(config("classical-lemma", {{"delta", 0.9}}));
  CHECK(has_message(diags, "params.delta", "delta must be in (0, 1/2]"));
  CHECK(has_message(validate(config("quantum-blurring", {{"delta", 0.0}})), "params.delta",
                    "delta must be in (0, 1/2]"));
  CHECK(has_message(validate(config("no-such-thing")), "experiment", "unknown experiment"));
  CHECK(has_message(validate(config("axioms", {{"bogus", 1}})), "params.bogus", "unknown parameter"));
  CHECK_FALSE(validate(config("classical-lemma", {{"n", "ten"}})).empty());
  CHECK_FALSE(validate(config("classical-lemma", {{"n", 4.5}})).empty());
  CHECK_FALSE(validate(config("classical-stein", {{"eps", 0.6}, {"eta", 0.5}})).empty());
  CHECK_FALSE(validate(config("fock-convergence", {{"n_grid", {80, 40}}})).empty());
  CHECK_FALSE(validate(config("quantum-blurring", {{"checks", "kraus,nope"}})).empty());
  CHECK_FALSE(validate(config("check-lemmas", {{"suites", "types,nope"}})).empty());
  auto bad = config("axioms");
  bad.jobs = 0;
  CHECK(has_message(validate(bad), "jobs", ""));
  bad = config("axioms");
  bad.inputs["family"] = scratch("missing.json").string();
  CHECK_FALSE(validate(bad).empty());
  bad = config("classical-lemma");
  bad.inputs["family"] = "x.json";
  CHECK_FALSE(validate(bad).empty());
  CHECK_THROWS_AS(run(config("classical-lemma", {{"delta", 0.9}})), ConfigError);
}

TEST_CASE("config round trip") {
  auto c = config("fock-convergence", {{"h", {2}}, {"k", {1}}, {"delta", 0.4}});
  c.seed = 77;
  c.tol = 1e-9;
  c.jobs = 2;
  c.out = "r.json";
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.experiment == c.experiment);
  CHECK(back.params == c.params);
  CHECK(back.seed == 77);
  CHECK(back.tol == 1e-9);
  CHECK(back.jobs == 2);
  CHECK(back.out == "r.json");
  CHECK_THROWS_AS(config_from_json(Json{{"experiment", "axioms"}, {"colour", "red"}}), ConfigError);
}

TEST_CASE("serialization round trips") {
  Mat m(2, 2);
  m << 1.0, std::complex<double>(0.5, -0.25), std::complex<double>(0.5, 0.25), 2.0;
  CHECK((matrix_from_json(matrix_to_json(m)) - m).norm() == 0.0);
  const auto t = type_from_json(Json{{"n", 5}, {"counts", {3, 2}}});
  CHECK(type_from_json(type_to_json(t)).counts == t.counts);

  CheckRecord r;
  r.name = "x";
  r.lhs = -kInf;
  r.rhs = kInf;
  r.slack = kInf;
  r.status = Status::Inconclusive;
  r.certificates["gap"] = 1e-9;
  r.notes["why"] = "bracket";
  r.repro = "steinlab axioms --seed 3";
  const auto back = record_from_json(record_to_json(r, true));
  CHECK(back.name == r.name);
  CHECK(back.lhs == -kInf);
  CHECK(back.rhs == kInf);
  CHECK(back.status == Status::Inconclusive);
  CHECK(back.certificates.at("gap") == 1e-9);
  CHECK(back.notes.at("why") == "bracket");
  CHECK(back.repro == r.repro);
  CHECK(std::isnan(number_from_json(number_to_json(std::nan("")))));

  Mat zero = Mat::Zero(2, 2), one = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  const auto fam = build_product_family({zero, one}, 2);
  const auto again = family_from_json(family_to_json(fam));
  CHECK(again.d == 2);
  CHECK(again.max_level() == 2);
  CHECK(again.level(2).size() == fam.level(2).size());
  CHECK(std::abs(again.c - fam.c) < 1e-15);
}

TEST_CASE("classical-lemma default campaign") {
  const auto rep = run(config("classical-lemma"));
  CHECK(rep.records.size() == 200);
  CHECK(rep.count(Status::Pass) == 200);
  CHECK(rep.ok());
}

TEST_CASE("reports are deterministic given the seed") {
  auto c = config("classical-lemma", {{"trials", 12}});
  c.seed = 2024;
  const auto a = report_to_json(run(c), false).dump();
  const auto b = report_to_json(run(c), false).dump();
  CHECK(a == b);
  c.jobs = 3;
  auto threaded = run(c);
  threaded.jobs = 1;  // the fingerprint records jobs; the records must agree
  CHECK(report_to_json(threaded, false).dump() == a);
}

TEST_CASE("a single trial reproduces the campaign row") {
  auto c = config("classical-stein", {{"trials", 4}});
  const auto all = run(c);
  c.params["trial"] = 2;
  const auto one = run(c);
  std::vector<Json> expect;
  for (const auto& r : all.records)
    if (r.certificates.at("trial") == 2.0) expect.push_back(record_to_json(r, false));
  REQUIRE(expect.size() == one.records.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    auto got = record_to_json(one.records[i], false);
    got.erase("repro");
    expect[i].erase("repro");
    CHECK(got == expect[i]);
  }
}

TEST_CASE("failing checks carry a reproduction command") {
  // level 1 contains a mixed state whose marginal structure is missing at level 2
  Mat z = Mat::Zero(2, 2), half = Mat::Identity(2, 2) / 2.0, e11 = Mat::Zero(4, 4);
  z(0, 0) = 1.0;
  e11(3, 3) = 1.0;
  Json fam{{"d", 2}, {"rule", "explicit"}, {"levels", {{"1", {matrix_to_json(z), matrix_to_json(half)}}, {"2", {matrix_to_json(e11)}}}}};
  const auto path = scratch("broken-family.json");
  std::ofstream(path) << fam.dump();
  auto c = config("axioms");
  c.inputs["family"] = path.string();
  c.seed = 9;
  const auto rep = run(c);
  CHECK_FALSE(rep.ok());
  for (const auto& r : rep.records) {
    if (r.status != Status::Fail && r.status != Status::Inconclusive) continue;
    CHECK(r.repro.find("steinlab axioms --seed 9") == 0);
    CHECK(r.repro.find("--input family=" + path.string()) != std::string::npos);
  }
  CHECK(repro_command(config("fock-convergence", {{"h", {1}}, {"k", {2}}}), Json{{"delta", 0.4}}) ==
        "steinlab fock-convergence --seed 1 --tol 1e-08 --h 1 --k 2 --delta 0.4");
}

TEST_CASE("fock-convergence csv holds decreasing errors") {
  auto rep = run(config("fock-convergence", {{"h", {2}}, {"k", {1}}, {"n_grid", {40, 80, 160}}}));
  CHECK(rep.ok());
  const auto lines = csv_lines(report_to_csv(rep));
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "experiment,name,status,lhs,rhs,slack,runtime_ms,certificates,repro");
  std::vector<double> errors;
  for (const auto& line : lines)
    if (line.rfind("fock-convergence,convergence-error,", 0) == 0) {
      std::istringstream row(line);
      std::string cell;
      for (int i = 0; i < 4; ++i) std::getline(row, cell, ',');
      errors.push_back(std::stod(cell));
    }
  REQUIRE(errors.size() == 3);
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
  CHECK(rep.tables.at("convergence").size() == 3);

  const auto path = scratch("fock.json");
  write_report(rep, path.string());
  std::ifstream js(path), cs(scratch("fock.csv"));
  CHECK(Json::parse(js).at("summary").at("fail") == 0);
  std::stringstream text;
  text << cs.rdbuf();
  CHECK(text.str() == report_to_csv(rep));
}

TEST_CASE("environment fingerprint") {
  Report r;
  r.seed = 5;
  r.tol = 1e-7;
  const auto env = environment_fingerprint(r);
  CHECK(env.at("version") == kVersion);
  CHECK(env.at("seed") == 5);
  CHECK(env.contains("tolerances"));
}
