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

#include "hpo/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hpo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::Continuous:
      return "continuous";
    case ParamKind::ContinuousLog:
      return "continuous_log";
    case ParamKind::Discrete:
      return "discrete";
    case ParamKind::Choice:
      return "choice";
    case ParamKind::Ordinal:
      return "ordinal";
  }
  return "unknown";
}

ParamKind param_kind_from_string(const std::string& text) {
  if (text == "continuous") return ParamKind::Continuous;
  if (text == "continuous_log") return ParamKind::ContinuousLog;
  if (text == "discrete") return ParamKind::Discrete;
  if (text == "choice") return ParamKind::Choice;
  if (text == "ordinal") return ParamKind::Ordinal;
  throw std::invalid_argument("unknown parameter kind '" + text + "'");
}

std::string to_string(const Category& category) {
  return std::visit(Overloaded{[](bool b) -> std::string { return b ? "true" : "false"; },
                               [](std::int64_t i) { return std::to_string(i); },
                               [](double d) { return format_double(d); },
                               [](const std::string& s) { return s; }},
                    category);
}

std::string to_string(const ParameterValue& value) {
  return std::visit(Overloaded{[](double d) { return format_double(d); },
                               [](std::int64_t i) { return std::to_string(i); },
                               [](const Category& c) { return to_string(c); }},
                    value);
}

ParameterDef ParameterDef::continuous(std::string name, double lo, double hi) {
  ParameterDef def;
  def.name_ = std::move(name);
  def.kind_ = ParamKind::Continuous;
  def.lo_ = lo;
  def.hi_ = hi;
  return def;
}

ParameterDef ParameterDef::continuous_log(std::string name, double lo, double hi) {
  ParameterDef def = continuous(std::move(name), lo, hi);
  def.kind_ = ParamKind::ContinuousLog;
  return def;
}

ParameterDef ParameterDef::discrete(std::string name, std::int64_t lo, std::int64_t hi) {
  ParameterDef def;
  def.name_ = std::move(name);
  def.kind_ = ParamKind::Discrete;
  def.int_lo_ = lo;
  def.int_hi_ = hi;
  def.lo_ = static_cast<double>(lo);
  def.hi_ = static_cast<double>(hi);
  return def;
}

ParameterDef ParameterDef::choice(std::string name, std::vector<Category> categories) {
  ParameterDef def;
  def.name_ = std::move(name);
  def.kind_ = ParamKind::Choice;
  def.categories_ = std::move(categories);
  return def;
}

ParameterDef ParameterDef::ordinal(std::string name, std::vector<Category> categories) {
  ParameterDef def = choice(std::move(name), std::move(categories));
  def.kind_ = ParamKind::Ordinal;
  return def;
}

std::size_t ParameterDef::encoded_width() const {
  return kind_ == ParamKind::Choice ? categories_.size() : 1;
}

std::ptrdiff_t ParameterDef::category_index(const Category& value) const {
  auto it = std::find(categories_.begin(), categories_.end(), value);
  return it == categories_.end() ? -1 : std::distance(categories_.begin(), it);
}

bool ParameterDef::contains(const ParameterValue& value) const {
  switch (kind_) {
    case ParamKind::Continuous:
    case ParamKind::ContinuousLog: {
      const auto* v = std::get_if<double>(&value);
      return v != nullptr && *v >= lo_ && *v <= hi_;
    }
    case ParamKind::Discrete: {
      const auto* v = std::get_if<std::int64_t>(&value);
      return v != nullptr && *v >= int_lo_ && *v <= int_hi_;
    }
    case ParamKind::Choice:
    case ParamKind::Ordinal: {
      const auto* v = std::get_if<Category>(&value);
      return v != nullptr && category_index(*v) >= 0;
    }
  }
  return false;
}

SpaceError::SpaceError(SpaceErrorCode code, std::string name, const std::string& detail)
    : std::runtime_error(name.empty() ? detail : "parameter '" + name + "': " + detail),
      code_(code),
      parameter_(std::move(name)) {}

void validate_space(std::span<const ParameterDef> defs) {
  std::set<std::string> seen;
  for (const auto& def : defs) {
    if (def.name().empty()) {
      throw SpaceError(SpaceErrorCode::BadRange, def.name(), "name must be non-empty");
    }
    switch (def.kind()) {
      case ParamKind::Continuous:
        if (!std::isfinite(def.lo()) || !std::isfinite(def.hi()) || !(def.lo() < def.hi())) {
          throw SpaceError(SpaceErrorCode::BadRange, def.name(),
                           "range must satisfy lo < hi, got [" + format_double(def.lo()) + ", " +
                               format_double(def.hi()) + "]");
        }
        break;
      case ParamKind::ContinuousLog:
        if (!std::isfinite(def.lo()) || !std::isfinite(def.hi()) || !(def.lo() > 0.0) ||
            !(def.lo() < def.hi())) {
          throw SpaceError(SpaceErrorCode::BadRange, def.name(),
                           "log range must satisfy 0 < lo < hi, got [" + format_double(def.lo()) +
                               ", " + format_double(def.hi()) + "]");
        }
        break;
      case ParamKind::Discrete:
        if (!(def.int_lo() < def.int_hi())) {
          throw SpaceError(SpaceErrorCode::BadRange, def.name(),
                           "range must satisfy lo < hi, got [" + std::to_string(def.int_lo()) +
                               ", " + std::to_string(def.int_hi()) + "]");
        }
        break;
      case ParamKind::Choice:
      case ParamKind::Ordinal: {
        if (def.categories().empty()) {
          throw SpaceError(SpaceErrorCode::EmptyCategories, def.name(),
                           "category list must be non-empty");
        }
        const auto& cats = def.categories();
        for (std::size_t i = 0; i < cats.size(); ++i) {
          for (std::size_t j = i + 1; j < cats.size(); ++j) {
            if (cats[i] == cats[j]) {
              throw SpaceError(SpaceErrorCode::BadRange, def.name(),
                               "duplicate category '" + to_string(cats[i]) + "'");
            }
          }
        }
        break;
      }
    }
    if (!seen.insert(def.name()).second) {
      throw SpaceError(SpaceErrorCode::DuplicateName, def.name(), "duplicate parameter name");
    }
  }
}

void validate_assignment(const Assignment& assignment, std::span<const ParameterDef> defs) {
  for (const auto& def : defs) {
    auto it = assignment.find(def.name());
    if (it == assignment.end()) {
      throw SpaceError(SpaceErrorCode::MissingValue, def.name(), "no value assigned");
    }
    if (!def.contains(it->second)) {
      throw SpaceError(SpaceErrorCode::ValueOutOfRange, def.name(),
                       "value " + to_string(it->second) + " is outside the declared range");
    }
  }
  if (assignment.size() != defs.size()) {
    for (const auto& [name, value] : assignment) {
      bool known = std::any_of(defs.begin(), defs.end(),
                               [&](const ParameterDef& d) { return d.name() == name; });
      if (!known) {
        throw SpaceError(SpaceErrorCode::ValueOutOfRange, name, "not a declared parameter");
      }
    }
  }
}

ParameterValue sample(const ParameterDef& def, Rng& rng) {
  switch (def.kind()) {
    case ParamKind::Continuous: {
      std::uniform_real_distribution<double> dist(def.lo(), def.hi());
      return std::clamp(dist(rng), def.lo(), def.hi());
    }
    case ParamKind::ContinuousLog: {
      std::uniform_real_distribution<double> dist(std::log10(def.lo()), std::log10(def.hi()));
      return std::clamp(std::pow(10.0, dist(rng)), def.lo(), def.hi());
    }
    case ParamKind::Discrete: {
      std::uniform_int_distribution<std::int64_t> dist(def.int_lo(), def.int_hi());
      return dist(rng);
    }
    case ParamKind::Choice:
    case ParamKind::Ordinal: {
      std::uniform_int_distribution<std::size_t> dist(0, def.categories().size() - 1);
      return def.categories()[dist(rng)];
    }
  }
  throw std::logic_error("unreachable parameter kind");
}

Assignment sample(std::span<const ParameterDef> defs, Rng& rng) {
  Assignment out;
  for (const auto& def : defs) out.emplace(def.name(), sample(def, rng));
  return out;
}

std::size_t encoded_width(std::span<const ParameterDef> defs) {
  std::size_t width = 0;
  for (const auto& def : defs) width += def.encoded_width();
  return width;
}

double numeric_value(const ParameterValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  throw std::invalid_argument("categorical value has no numeric view");
}

std::vector<double> encode(const Assignment& assignment, std::span<const ParameterDef> defs) {
  validate_assignment(assignment, defs);
  std::vector<double> out;
  out.reserve(encoded_width(defs));
  for (const auto& def : defs) {
    const ParameterValue& value = assignment.at(def.name());
    switch (def.kind()) {
      case ParamKind::Continuous:
      case ParamKind::Discrete:
        out.push_back((numeric_value(value) - def.lo()) / (def.hi() - def.lo()));
        break;
      case ParamKind::ContinuousLog: {
        const double llo = std::log10(def.lo());
        const double lhi = std::log10(def.hi());
        out.push_back(std::clamp((std::log10(std::get<double>(value)) - llo) / (lhi - llo), 0.0, 1.0));
        break;
      }
      case ParamKind::Ordinal: {
        const auto k = def.categories().size();
        const auto idx = def.category_index(std::get<Category>(value));
        out.push_back(k == 1 ? 0.0 : static_cast<double>(idx) / static_cast<double>(k - 1));
        break;
      }
      case ParamKind::Choice: {
        const auto idx = def.category_index(std::get<Category>(value));
        for (std::size_t i = 0; i < def.categories().size(); ++i) {
          out.push_back(static_cast<std::ptrdiff_t>(i) == idx ? 1.0 : 0.0);
        }
        break;
      }
    }
  }
  return out;
}

ParameterValue clamp_numeric(const ParameterDef& def, double raw) {
  switch (def.kind()) {
    case ParamKind::Continuous:
    case ParamKind::ContinuousLog:
      return std::clamp(raw, def.lo(), def.hi());
    case ParamKind::Discrete: {
      const double rounded = std::round(std::clamp(raw, def.lo(), def.hi()));
      return std::clamp(static_cast<std::int64_t>(rounded), def.int_lo(), def.int_hi());
    }
    default:
      throw std::invalid_argument("parameter '" + def.name() + "' is not numeric");
  }
}

Assignment decode(std::span<const double> vector, std::span<const ParameterDef> defs) {
  if (vector.size() != encoded_width(defs)) {
    throw SpaceError(SpaceErrorCode::WrongWidth, "",
                     "expected width " + std::to_string(encoded_width(defs)) + ", got " +
                         std::to_string(vector.size()));
  }
  auto coord = [&](std::size_t i) { return std::clamp(vector[i], 0.0, 1.0); };
  Assignment out;
  std::size_t pos = 0;
  for (const auto& def : defs) {
    switch (def.kind()) {
      case ParamKind::Continuous:
        out.emplace(def.name(), clamp_numeric(def, def.lo() + coord(pos) * (def.hi() - def.lo())));
        break;
      case ParamKind::ContinuousLog: {
        const double llo = std::log10(def.lo());
        const double lhi = std::log10(def.hi());
        out.emplace(def.name(), clamp_numeric(def, std::pow(10.0, llo + coord(pos) * (lhi - llo))));
        break;
      }
      case ParamKind::Discrete: {
        const auto span = def.int_hi() - def.int_lo();
        const auto offset = static_cast<std::int64_t>(std::llround(coord(pos) * static_cast<double>(span)));
        out.emplace(def.name(), std::clamp(def.int_lo() + offset, def.int_lo(), def.int_hi()));
        break;
      }
      case ParamKind::Ordinal: {
        const auto k = def.categories().size();
        const auto idx = k == 1 ? 0 : static_cast<std::size_t>(std::llround(coord(pos) * static_cast<double>(k - 1)));
        out.emplace(def.name(), def.categories()[std::min(idx, k - 1)]);
        break;
      }
      case ParamKind::Choice: {
        std::size_t best = 0;
        for (std::size_t i = 1; i < def.categories().size(); ++i) {
          if (coord(pos + i) > coord(pos + best)) best = i;
        }
        out.emplace(def.name(), def.categories()[best]);
        break;
      }
    }
    pos += def.encoded_width();
  }
  return out;
}

}  // namespace hpo
