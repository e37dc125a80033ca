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

#include "hpo/results_io.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace hpo {

const char* row_label(const ResultRow& row) {
  return row.terminal() ? to_string(row.status) : "INTERMEDIATE";
}

ResultsTable canonical_order(const ResultsTable& table) {
  const auto& rows = table.rows();
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = rows[a];
    const auto& rb = rows[b];
    if (ra.trial_id != rb.trial_id) return ra.trial_id < rb.trial_id;
    if (ra.terminal() != rb.terminal()) return rb.terminal();
    if (ra.terminal()) return false;
    return ra.iteration < rb.iteration;
  });
  ResultsTable out;
  for (auto i : order) out.append(rows[i]);
  return out;
}

Json row_to_json(const ResultRow& row) {
  Json context = Json::object();
  for (const auto& [k, v] : row.context) context[k] = v;
  return Json{{"trial_id", row.trial_id},
              {"status", row_label(row)},
              {"iteration", row.iteration},
              {"objective", row.objective ? Json(*row.objective) : Json(nullptr)},
              {"parameters", parameters_to_json(row.parameters, row.directives)},
              {"context", std::move(context)}};
}

ResultRow row_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  ResultRow row;
  row.trial_id = j.at("trial_id").get<TrialId>();
  row.status = trial_status_from_string(j.at("status").get<std::string>());
  row.iteration = j.at("iteration").get<std::int64_t>();
  const auto& obj = j.at("objective");
  if (!obj.is_null()) row.objective = obj.get<double>();
  if (!row.terminal() && !row.objective) throw std::invalid_argument("intermediate row without objective");
  split_parameters(j.at("parameters"), row.parameters, row.directives);
  for (const auto& [k, v] : j.at("context").items()) row.context[k] = v.get<double>();
  return row;
}

std::string to_jsonl(const ResultsTable& table) {
  std::string out;
  const ResultsTable ordered = canonical_order(table);
  for (const auto& row : ordered.rows()) {
    out += canonical_dump(row_to_json(row));
    out += '\n';
  }
  return out;
}

ResultsTable read_jsonl(std::istream& in) {
  ResultsTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      table.append(row_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw MalformedResults(number, e.what());
    }
  }
  return table;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_value(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return csv_field(j.get<std::string>());
  return canonical_dump(j);
}

}  // namespace

std::string to_csv(const ResultsTable& table) {
  const ResultsTable ordered = canonical_order(table);
  std::set<std::string> param_names;
  std::set<std::string> context_keys;
  std::vector<Json> params;
  for (const auto& row : ordered.rows()) {
    params.push_back(parameters_to_json(row.parameters, row.directives));
    for (const auto& [k, _] : params.back().items()) param_names.insert(k);
    for (const auto& [k, _] : row.context) context_keys.insert(k);
  }

  std::ostringstream out;
  out << "trial_id,status,iteration,objective";
  for (const auto& name : param_names) out << ',' << csv_field(name);
  for (const auto& key : context_keys) out << ',' << csv_field(key);
  out << '\n';

  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& row = ordered.rows()[i];
    out << row.trial_id << ',' << row_label(row) << ',' << row.iteration << ','
        << (row.objective ? canonical_dump(Json(*row.objective)) : "");
    for (const auto& name : param_names) {
      out << ',';
      if (params[i].contains(name)) out << csv_value(params[i][name]);
    }
    for (const auto& key : context_keys) {
      out << ',';
      auto it = row.context.find(key);
      if (it != row.context.end()) out << canonical_dump(Json(it->second));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace hpo
