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

#include "hpo/json_codec.hpp"

#include <stdexcept>

namespace hpo {

bool is_reserved_name(std::string_view name) { return name.substr(0, kReservedPrefix.size()) == kReservedPrefix; }

Json to_json(const Category& category) {
  return std::visit([](const auto& v) { return Json(v); }, category);
}

Category category_from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::invalid_argument("category must be a string, number or boolean");
}

Json to_json(const ParameterValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return Json(*d);
  if (const auto* i = std::get_if<std::int64_t>(&value)) return Json(*i);
  return to_json(std::get<Category>(value));
}

ParameterValue value_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  return category_from_json(j);
}

ParameterValue value_from_json(const Json& j, const ParameterDef& def) {
  switch (def.kind()) {
    case ParamKind::Continuous:
    case ParamKind::ContinuousLog:
      if (!j.is_number()) break;
      return j.get<double>();
    case ParamKind::Discrete:
      if (j.is_number_integer()) return j.get<std::int64_t>();
      if (j.is_number_float() && j.get<double>() == static_cast<double>(static_cast<std::int64_t>(j.get<double>()))) {
        return static_cast<std::int64_t>(j.get<double>());
      }
      break;
    case ParamKind::Choice:
    case ParamKind::Ordinal: {
      if (j.is_structured() || j.is_null()) break;
      return category_from_json(j);
    }
  }
  throw SpaceError(SpaceErrorCode::ValueOutOfRange, def.name(),
                   "value " + j.dump() + " does not match kind " + to_string(def.kind()));
}

Json to_json(const ParameterDef& def) {
  Json j{{"name", def.name()}, {"kind", to_string(def.kind())}};
  switch (def.kind()) {
    case ParamKind::Continuous:
    case ParamKind::ContinuousLog:
      j["range"] = Json::array({def.lo(), def.hi()});
      break;
    case ParamKind::Discrete:
      j["range"] = Json::array({def.int_lo(), def.int_hi()});
      break;
    case ParamKind::Choice:
    case ParamKind::Ordinal: {
      Json cats = Json::array();
      for (const auto& c : def.categories()) cats.push_back(to_json(c));
      j["choices"] = std::move(cats);
      break;
    }
  }
  return j;
}

ParameterDef parameter_def_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("parameter entry must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "name" && key != "kind" && key != "range" && key != "choices") {
      throw std::invalid_argument("unknown key '" + key + "'");
    }
  }
  if (!j.contains("name") || !j["name"].is_string()) throw std::invalid_argument("field 'name' must be a string");
  if (!j.contains("kind") || !j["kind"].is_string()) throw std::invalid_argument("field 'kind' must be a string");
  const auto name = j["name"].get<std::string>();
  const auto kind = param_kind_from_string(j["kind"].get<std::string>());

  if (kind == ParamKind::Choice || kind == ParamKind::Ordinal) {
    const char* field = j.contains("choices") ? "choices" : "range";
    if (!j.contains(field) || !j[field].is_array()) {
      throw std::invalid_argument("field 'choices' must be an array of categories");
    }
    std::vector<Category> cats;
    for (const auto& c : j[field]) cats.push_back(category_from_json(c));
    return kind == ParamKind::Choice ? ParameterDef::choice(name, std::move(cats))
                                     : ParameterDef::ordinal(name, std::move(cats));
  }

  if (!j.contains("range") || !j["range"].is_array() || j["range"].size() != 2 || !j["range"][0].is_number() ||
      !j["range"][1].is_number()) {
    throw std::invalid_argument("field 'range' must be a [lo, hi] pair of numbers");
  }
  const auto& r = j["range"];
  switch (kind) {
    case ParamKind::Continuous:
      return ParameterDef::continuous(name, r[0].get<double>(), r[1].get<double>());
    case ParamKind::ContinuousLog:
      return ParameterDef::continuous_log(name, r[0].get<double>(), r[1].get<double>());
    default:
      if (!r[0].is_number_integer() || !r[1].is_number_integer()) {
        throw std::invalid_argument("field 'range' of a discrete parameter must hold integers");
      }
      return ParameterDef::discrete(name, r[0].get<std::int64_t>(), r[1].get<std::int64_t>());
  }
}

Json parameters_to_json(const Assignment& parameters, const Directives& directives) {
  Json j = Json::object();
  for (const auto& [name, value] : parameters) j[name] = to_json(value);
  if (directives.load_from) j[kLoadFromKey] = *directives.load_from;
  if (directives.save_to) j[kSaveToKey] = *directives.save_to;
  if (directives.budget) j[kBudgetKey] = *directives.budget;
  return j;
}

void split_parameters(const Json& j, Assignment& parameters, Directives& directives) {
  if (!j.is_object()) throw std::invalid_argument("parameters must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == kLoadFromKey) {
      directives.load_from = value.get<std::string>();
    } else if (key == kSaveToKey) {
      directives.save_to = value.get<std::string>();
    } else if (key == kBudgetKey) {
      directives.budget = value.get<std::int64_t>();
    } else {
      parameters.emplace(key, value_from_json(value));
    }
  }
}

Json trial_payload(const Trial& trial) {
  return Json{{"id", trial.id}, {"parameters", parameters_to_json(trial.parameters, trial.directives)}};
}

std::string canonical_dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

}  // namespace hpo
