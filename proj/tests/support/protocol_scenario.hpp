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


// Scripted conversation with the protocol server. Each endpoint gets its own
// transcript so a change in one route shows up in one golden file.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace hpo::testing {

/// Endpoint name -> transcript lines "METHOD path [body] -> status body".
std::map<std::string, std::vector<std::string>> run_protocol_scenario();

/// Compares every transcript with tests/golden/<endpoint>.golden. When
/// HPO_UPDATE_GOLDEN is set the files are rewritten instead. Returns a list
/// of mismatch descriptions, empty on success.
std::vector<std::string> check_protocol_goldens(const std::string& golden_dir);

}  // namespace hpo::testing
