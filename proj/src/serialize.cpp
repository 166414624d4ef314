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

#include "steinlab/serialize.hpp"

#include <cmath>
#include <limits>

namespace steinlab {

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ValidationError("expected a number");
}

Json matrix_to_json(const Mat& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat matrix_from_json(const Json& j) {
  // a bare array of rows of reals is accepted for hand-written configs
  if (j.is_array()) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw ValidationError("matrix: empty");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (static_cast<Eigen::Index>(j[i].size()) != cols) throw ValidationError("matrix: ragged rows");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& e = j[i][c];
        m(i, c) = e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>()) : cplx(e.get<double>(), 0.0);
      }
    }
    return m;
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw ValidationError("matrix: data size mismatch");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = data[i * cols + c];
      m(i, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

Json type_to_json(const TypeVector& t) { return {{"n", t.n}, {"counts", t.counts}}; }

TypeVector type_from_json(const Json& j) {
  auto t = make_type(j.at("counts").get<std::vector<int>>());
  if (j.contains("n") && j.at("n").get<int>() != t.n) throw ValidationError("type: counts do not sum to n");
  return t;
}

Json divergence_to_json(const DivergenceResult& r) {
  Json j{{"value", number_to_json(r.as_double())},
         {"lower", number_to_json(r.lower)},
         {"upper", number_to_json(r.upper)},
         {"infinite", r.infinite},
         {"approximate", r.approximate},
         {"certificate", number_to_json(r.certificate)},
         {"iterations", r.iterations}};
  if (!r.weights.empty()) j["weights"] = r.weights;
  if (r.threshold) j["threshold"] = number_to_json(*r.threshold);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

Json family_to_json(const FreeFamily& f) {
  Json levels = Json::object();
  for (const auto& [n, gens] : f.levels) {
    Json arr = Json::array();
    for (const auto& g : gens) arr.push_back(matrix_to_json(g));
    levels[std::to_string(n)] = arr;
  }
  Json j{{"d", f.d}, {"rule", f.rule}, {"c", f.c}, {"inner_approximation", f.inner_approximation}};
  if (f.seed) j["seed"] = *f.seed;
  j["levels"] = levels;
  return j;
}

FreeFamily family_from_json(const Json& j) {
  const int d = j.at("d").get<int>();
  const auto rule = j.value("rule", std::string("explicit"));
  if (rule == "product") {
    std::vector<Mat> l1;
    const auto& src = j.contains("level1") ? j.at("level1") : j.at("levels").at("1");
    for (const auto& g : src) l1.push_back(matrix_from_json(g));
    const int max_level = j.value("max_level", j.contains("levels") ? static_cast<int>(j.at("levels").size()) : 1);
    auto f = build_product_family(l1, max_level);
    if (f.d != d) throw ValidationError("family: d does not match the generators");
    return f;
  }
  if (rule == "sampled-SEP") {
    return build_sep_family(j.at("dA").get<int>(), j.at("dB").get<int>(), j.at("samples").get<int>(),
                            j.at("seed").get<std::uint64_t>(), j.value("max_level", 1));
  }
  std::map<int, std::vector<Mat>> levels;
  for (const auto& [key, arr] : j.at("levels").items()) {
    auto& out = levels[std::stoi(key)];
    for (const auto& g : arr) out.push_back(matrix_from_json(g));
  }
  return make_explicit_family(d, std::move(levels));
}

Status status_from_name(const std::string& s) {
  for (Status st : {Status::Pass, Status::Fail, Status::Inconclusive, Status::Inapplicable})
    if (s == status_name(st)) return st;
  throw ValidationError("unknown status: " + s);
}

Json record_to_json(const CheckRecord& r, bool with_runtime) {
  Json certs = Json::object();
  for (const auto& [k, v] : r.certificates) certs[k] = number_to_json(v);
  Json j{{"name", r.name},
         {"lhs", number_to_json(r.lhs)},
         {"rhs", number_to_json(r.rhs)},
         {"slack", number_to_json(r.slack)},
         {"status", status_name(r.status)},
         {"certificates", certs}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (with_runtime) j["runtime_ms"] = r.runtime_ms;
  if (!r.repro.empty()) j["repro"] = r.repro;
  return j;
}

CheckRecord record_from_json(const Json& j) {
  CheckRecord r;
  r.name = j.at("name").get<std::string>();
  r.lhs = number_from_json(j.at("lhs"));
  r.rhs = number_from_json(j.at("rhs"));
  r.slack = number_from_json(j.at("slack"));
  r.status = status_from_name(j.at("status").get<std::string>());
  if (j.contains("certificates"))
    for (const auto& [k, v] : j.at("certificates").items()) r.certificates[k] = number_from_json(v);
  if (j.contains("notes")) r.notes = j.at("notes").get<std::map<std::string, std::string>>();
  r.runtime_ms = j.value("runtime_ms", 0.0);
  r.repro = j.value("repro", std::string());
  return r;
}

}  // namespace steinlab
