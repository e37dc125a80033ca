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

#include <istream>
#include <stdexcept>
#include <string>

#include "hpo/json_codec.hpp"
#include "hpo/study.hpp"

namespace hpo {

class MalformedResults : public std::runtime_error {
 public:
  MalformedResults(std::size_t line, const std::string& detail)
      : std::runtime_error("results line " + std::to_string(line) + ": " + detail), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Export label of a row: INTERMEDIATE for running rows, else the status.
const char* row_label(const ResultRow& row);

/// Rows grouped by trial id, intermediate rows by ascending iteration, the
/// terminal row last. Stable for equal keys.
ResultsTable canonical_order(const ResultsTable& table);

Json row_to_json(const ResultRow& row);
ResultRow row_from_json(const Json& j);

/// One JSON record per row, in canonical order.
std::string to_jsonl(const ResultsTable& table);
ResultsTable read_jsonl(std::istream& in);

/// Columns: trial_id, status, iteration, objective, parameter names sorted,
/// context keys sorted. Rows in canonical order.
std::string to_csv(const ResultsTable& table);

}  // namespace hpo
