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

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "steinlab/harness.hpp"

namespace {

using steinlab::Json;
using steinlab::ParamKind;

// A token that parses as JSON keeps its JSON type; anything else stays a string so that
// validation can report it.
Json token_value(const std::string& t) {
  try {
    return Json::parse(t);
  } catch (const Json::parse_error&) {
    return Json(t);
  }
}

Json option_value(ParamKind kind, const std::string& raw) {
  if (kind == ParamKind::Text) return Json(raw);
  if (kind == ParamKind::IntList || kind == ParamKind::RealList) {
    Json arr = Json::array();
    std::size_t start = 0;
    while (start <= raw.size()) {
      const auto comma = raw.find(',', start);
      const auto end = comma == std::string::npos ? raw.size() : comma;
      arr.push_back(token_value(raw.substr(start, end - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return arr;
  }
  return token_value(raw);
}

steinlab::ConfigError config_error(const std::string& path, const std::string& message) {
  return steinlab::ConfigError(std::vector<steinlab::Diagnostic>{{path, message}});
}

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int jobs = 1;
  std::string out;
  std::vector<std::string> inputs;
  bool quiet = false;
};

struct Selection {
  std::string experiment;
  std::map<std::string, std::string> raw;  // option name -> text as given
};

void add_experiments(CLI::App& parent, Selection& sel) {
  for (const auto& info : steinlab::list_experiments()) {
    auto* sub = parent.add_subcommand(info.id, info.summary);
    sub->fallthrough();
    for (const auto& p : info.params) {
      std::string help = p.help;
      if (!p.fallback.is_null()) help += " [default " + p.fallback.dump() + "]";
      else help += " [sampled per trial]";
      sub->add_option_function<std::string>(
          "--" + p.name, [&sel, name = p.name](const std::string& v) { sel.raw[name] = v; }, help);
    }
    sub->callback([&sel, id = info.id] { sel.experiment = id; });
  }
}

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--config", g.config, "JSON config file; command-line values override it");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--tol", g.tol, "tolerance for aggregated sweeps");
  app.add_option("--jobs", g.jobs, "worker threads");
  app.add_option("--out", g.out, "write a JSON report here and a CSV beside it");
  app.add_option("--input", g.inputs, "named input file, name=path");
  app.add_flag("--quiet", g.quiet, "print the summary line only");
}

steinlab::ExperimentConfig assemble(const CLI::App& app, const Globals& g, const Selection& sel) {
  steinlab::ExperimentConfig c;
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw config_error("config", "cannot open " + g.config);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw config_error("config", e.what());
    }
    c = steinlab::config_from_json(j);
  }
  if (!sel.experiment.empty()) {
    if (!c.experiment.empty() && c.experiment != sel.experiment) c.params = Json::object();
    c.experiment = sel.experiment;
  }
  if (app.count("--seed")) c.seed = g.seed;
  if (app.count("--tol")) c.tol = g.tol;
  if (app.count("--jobs")) c.jobs = g.jobs;
  if (app.count("--out")) c.out = g.out;
  for (const auto& item : g.inputs) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw config_error("inputs", "expected name=path, got '" + item + "'");
    c.inputs[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (c.experiment.empty()) throw config_error("experiment", "no experiment given");
  const auto& info = steinlab::find_experiment(c.experiment);
  for (const auto& [name, text] : sel.raw)
    for (const auto& p : info.params)
      if (p.name == name) c.params[name] = option_value(p.kind, text);
  return c;
}

void print_diagnostics(const std::vector<steinlab::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << (d.path.empty() ? "config" : d.path) << ": " << d.message << "\n";
}

void print_catalog() {
  for (const auto& info : steinlab::list_experiments()) {
    std::cout << info.id << "  " << info.summary << "\n";
    for (const auto& p : info.params)
      std::cout << "    --" << p.name << "  " << p.help << " ("
                << (p.fallback.is_null() ? std::string("sampled") : p.fallback.dump()) << ")\n";
    std::cout << "    covers:";
    for (const auto& k : info.covers) std::cout << " " << k;
    std::cout << "\n";
  }
}

int print_report(const steinlab::Report& r, bool quiet) {
  using steinlab::Status;
  if (!quiet)
    for (const auto& rec : r.records) {
      if (rec.status != Status::Fail && rec.status != Status::Inconclusive) continue;
      std::cout << steinlab::status_name(rec.status) << "  " << rec.name << "  lhs=" << rec.lhs << " rhs=" << rec.rhs
                << "\n";
      for (const auto& [k, v] : rec.notes) std::cout << "    " << k << ": " << v << "\n";
      if (!rec.repro.empty()) std::cout << "    repro: " << rec.repro << "\n";
    }
  std::cout << r.experiment << ": " << r.records.size() << " checks, " << r.count(Status::Pass) << " pass, "
            << r.count(Status::Fail) << " fail, " << r.count(Status::Inconclusive) << " inconclusive, "
            << r.count(Status::Inapplicable) << " inapplicable\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for blurring, hypothesis testing and free-set axioms."};
  app.set_version_flag("--version", steinlab::kVersion);
  // single-letter parameters such as --h and --k collide with -h
  app.set_help_flag("--help", "print help and exit");
  Globals g;
  Selection sel;
  add_globals(app, g);
  add_experiments(app, sel);

  auto* list = app.add_subcommand("list", "list experiments, parameters and covered items");
  auto* check = app.add_subcommand("validate", "check a configuration without running it");
  check->fallthrough();
  add_experiments(*check, sel);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (list->parsed()) {
    print_catalog();
    return 0;
  }
  try {
    const auto config = assemble(app, g, sel);
    const auto diags = steinlab::validate(config);
    if (check->parsed()) {
      if (diags.empty()) {
        std::cout << config.experiment << ": configuration is valid\n";
        return 0;
      }
      print_diagnostics(diags);
      return 2;
    }
    if (!diags.empty()) {
      print_diagnostics(diags);
      return 2;
    }
    const auto report = steinlab::run(config);
    if (!config.out.empty()) steinlab::write_report(report, config.out);
    return print_report(report, g.quiet);
  } catch (const steinlab::ConfigError& e) {
    print_diagnostics(e.diagnostics());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
