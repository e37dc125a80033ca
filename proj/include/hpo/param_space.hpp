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

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hpo {

using Rng = std::mt19937_64;

enum class ParamKind { Continuous, ContinuousLog, Discrete, Choice, Ordinal };

const char* to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& text);

/// A categorical value. Integers and floats are kept apart so that a
/// category written as `3` comes back as `3`, not `3.0`.
using Category = std::variant<bool, std::int64_t, double, std::string>;

std::string to_string(const Category& category);

/// Tagged hyperparameter value: Float for (log-)continuous parameters, Int for
/// discrete ones, Category for choice/ordinal ones.
using ParameterValue = std::variant<double, std::int64_t, Category>;

std::string to_string(const ParameterValue& value);

using Assignment = std::map<std::string, ParameterValue>;

class ParameterDef {
 public:
  static ParameterDef continuous(std::string name, double lo, double hi);
  static ParameterDef continuous_log(std::string name, double lo, double hi);
  static ParameterDef discrete(std::string name, std::int64_t lo, std::int64_t hi);
  static ParameterDef choice(std::string name, std::vector<Category> categories);
  static ParameterDef ordinal(std::string name, std::vector<Category> categories);

  const std::string& name() const { return name_; }
  ParamKind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::int64_t int_lo() const { return int_lo_; }
  std::int64_t int_hi() const { return int_hi_; }
  const std::vector<Category>& categories() const { return categories_; }

  bool is_categorical() const { return kind_ == ParamKind::Choice || kind_ == ParamKind::Ordinal; }
  bool is_numeric() const { return !is_categorical(); }

  /// Number of encoded coordinates this parameter occupies.
  std::size_t encoded_width() const;

  /// Index of `value` in the category list, or -1.
  std::ptrdiff_t category_index(const Category& value) const;

  /// True when `value` carries the right tag and lies inside the range.
  bool contains(const ParameterValue& value) const;

  friend bool operator==(const ParameterDef&, const ParameterDef&) = default;

 private:
  ParameterDef() = default;

  std::string name_;
  ParamKind kind_ = ParamKind::Continuous;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::int64_t int_lo_ = 0;
  std::int64_t int_hi_ = 0;
  std::vector<Category> categories_;
};

enum class SpaceErrorCode {
  DuplicateName,
  EmptyCategories,
  BadRange,
  ValueOutOfRange,
  MissingValue,
  WrongWidth,
};

class SpaceError : public std::runtime_error {
 public:
  SpaceError(SpaceErrorCode code, std::string name, const std::string& detail);

  SpaceErrorCode code() const { return code_; }
  const std::string& parameter() const { return parameter_; }

 private:
  SpaceErrorCode code_;
  std::string parameter_;
};

/// Throws SpaceError for the first definition that breaks an invariant.
void validate_space(std::span<const ParameterDef> defs);

/// Throws SpaceError(ValueOutOfRange / MissingValue) unless `assignment` has
/// exactly one in-range value per definition.
void validate_assignment(const Assignment& assignment, std::span<const ParameterDef> defs);

ParameterValue sample(const ParameterDef& def, Rng& rng);
Assignment sample(std::span<const ParameterDef> defs, Rng& rng);

std::size_t encoded_width(std::span<const ParameterDef> defs);

/// Maps an assignment into the unit hypercube. Choice parameters become a
/// one-hot block; every other kind is one normalized coordinate.
std::vector<double> encode(const Assignment& assignment, std::span<const ParameterDef> defs);

/// Inverse of encode. Coordinates are clipped to [0, 1] first; discrete values
/// round to the nearest integer and one-hot blocks take the lowest argmax.
Assignment decode(std::span<const double> vector, std::span<const ParameterDef> defs);

/// Clamps a numeric value into the definition's range; rounds discrete values.
ParameterValue clamp_numeric(const ParameterDef& def, double raw);

/// Numeric view of a Float/Int value; throws for categories.
double numeric_value(const ParameterValue& value);

}  // namespace hpo
