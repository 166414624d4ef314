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

#include <string>

#include <json.hpp>

#include "steinlab/divergences.hpp"
#include "steinlab/free_sets.hpp"
#include "steinlab/report.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

using Json = nlohmann::ordered_json;

// Non-finite values are written as the strings "inf", "-inf" and "nan".
Json number_to_json(double v);
double number_from_json(const Json& j);

// Matrices are {rows, cols, data} with data row-major [re, im] pairs.
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json type_to_json(const TypeVector& t);
TypeVector type_from_json(const Json& j);

Json divergence_to_json(const DivergenceResult& r);

// Families round-trip through {d, rule, levels: {"1": [...], ...}}; c is recomputed.
Json family_to_json(const FreeFamily& f);
FreeFamily family_from_json(const Json& j);

Json record_to_json(const CheckRecord& r, bool with_runtime = true);
CheckRecord record_from_json(const Json& j);
Status status_from_name(const std::string& s);

}  // namespace steinlab
