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

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "steinlab/random.hpp"
#include "steinlab/report.hpp"
#include "steinlab/serialize.hpp"

namespace steinlab {

inline constexpr const char* kVersion = "0.1.0";

enum class ParamKind { Int, Real, Text, IntList, RealList };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Real;
  Json fallback;  // null: sampled per trial
  double lo = 0.0;
  double hi = 0.0;  // inclusive range for numbers and list entries; ignored for text
  std::string help;
};

struct ExperimentInfo {
  std::string id;
  std::string summary;
  std::vector<ParamSpec> params;
  std::vector<std::string> covers;  // catalog keys
};

struct ExperimentConfig {
  std::string experiment;
  Json params = Json::object();
  std::map<std::string, std::string> inputs;  // name -> JSON file
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int jobs = 1;
  std::string out;
};

struct Diagnostic {
  std::string path;  // field path, e.g. "params.delta"
  std::string message;
};

class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int jobs = 1;
  Json params = Json::object();  // as given, after validation
  std::vector<CheckRecord> records;
  Json tables = Json::object();  // experiment-specific data, e.g. convergence rows

  int count(Status s) const;
  bool ok() const { return count(Status::Fail) == 0; }
};

const std::vector<ExperimentInfo>& list_experiments();
const ExperimentInfo& find_experiment(const std::string& id);
std::vector<Diagnostic> validate(const ExperimentConfig& config);
Report run(const ExperimentConfig& config);

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);
std::string repro_command(const ExperimentConfig& config, const Json& extra = Json::object());

Json environment_fingerprint(const Report& report);
// runtime_ms is the only field that differs between identical runs
Json report_to_json(const Report& report, bool with_runtime = true);
std::string report_to_csv(const Report& report);
void write_report(const Report& report, const std::string& json_path);

// Check suites shared by the harness and the acceptance binary. Each record aggregates a sweep:
// lhs is the worst violation or quantity, rhs the pinned bound.
std::vector<CheckRecord> suite_types(int n_max);
std::vector<CheckRecord> suite_hypergeometric(int n_max, int lower_bound_max, double tol);
std::vector<CheckRecord> suite_linalg(Rng& rng, int instances, double tol);
std::vector<CheckRecord> suite_divergences(Rng& rng, int instances, double tol);
std::vector<CheckRecord> suite_symmetric(Rng& rng, int n_max, double tol);
std::vector<CheckRecord> suite_kraus(Rng& rng, int n_max, const std::vector<int>& dims, int per_config, double tol);
std::vector<CheckRecord> suite_theta(Rng& rng, int n_max, int d, int per_config, double tol);
std::vector<CheckRecord> suite_brute_force(Rng& rng, int n_max, double tol);
std::vector<CheckRecord> suite_d_r(int n_max, int d);
std::vector<CheckRecord> suite_output_norm(Rng& rng, int n_max, int d);
std::vector<CheckRecord> suite_tail_filtering(Rng& rng, int triples);
std::vector<CheckRecord> suite_fock(Rng& rng, double tol);
std::vector<CheckRecord> suite_axioms(Rng& rng, int product_families);

}  // namespace steinlab
