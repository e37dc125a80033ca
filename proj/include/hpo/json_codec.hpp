// Copyright 2026 The hpo Authors.
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

#include <json.hpp>
#include <span>
#include <string>
#include <string_view>

#include "hpo/param_space.hpp"
#include "hpo/study.hpp"

namespace hpo {

using Json = nlohmann::json;

/// Reserved wire keys carried in a trial's parameter map.
inline constexpr std::string_view kReservedPrefix = "sherpa_";
inline constexpr const char* kLoadFromKey = "sherpa_load_from";
inline constexpr const char* kSaveToKey = "sherpa_save_to";
inline constexpr const char* kBudgetKey = "sherpa_budget";

bool is_reserved_name(std::string_view name);

Json to_json(const Category& category);
Category category_from_json(const Json& j);

Json to_json(const ParameterValue& value);
/// Untyped decoding: integers become Int, other numbers Float, the rest Category.
ParameterValue value_from_json(const Json& j);
/// Typed decoding against a definition; throws SpaceError on mismatch.
ParameterValue value_from_json(const Json& j, const ParameterDef& def);

Json to_json(const ParameterDef& def);
/// Parses {"name", "kind", "range" | "choices"}. Throws std::invalid_argument
/// naming the offending field; range invariants are left to validate_space.
ParameterDef parameter_def_from_json(const Json& j);

/// User parameters plus any reserved directive keys.
Json parameters_to_json(const Assignment& parameters, const Directives& directives);
void split_parameters(const Json& j, Assignment& parameters, Directives& directives);

/// {"id": ..., "parameters": {...}} as served to workers.
Json trial_payload(const Trial& trial);

/// Compact dump used for every wire and file format. Keys are sorted (the
/// default object map is ordered) and floats use the shortest form that
/// round-trips.
std::string canonical_dump(const Json& j);

}  // namespace hpo
