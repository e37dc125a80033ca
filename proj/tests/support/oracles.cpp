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


#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hpo::testing {

std::vector<ParameterDef> random_space(Rng& rng, std::size_t max_params) {
  std::uniform_int_distribution<std::size_t> count(1, max_params);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ParameterDef> defs;
  const std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "p" + std::to_string(i);
    switch (kind(rng)) {
      case 0: {
        const double lo = -10.0 + 20.0 * unit(rng);
        defs.push_back(ParameterDef::continuous(name, lo, lo + 0.01 + 10.0 * unit(rng)));
        break;
      }
      case 1: {
        const double lo = std::pow(10.0, -6.0 + 4.0 * unit(rng));
        defs.push_back(ParameterDef::continuous_log(name, lo, lo * std::pow(10.0, 0.1 + 5.0 * unit(rng))));
        break;
      }
      case 2: {
        const auto lo = static_cast<std::int64_t>(std::floor(-50.0 + 100.0 * unit(rng)));
        const auto span = 1 + static_cast<std::int64_t>(std::floor(20.0 * unit(rng)));
        defs.push_back(ParameterDef::discrete(name, lo, lo + span));
        break;
      }
      default: {
        std::uniform_int_distribution<int> k(1, 4);
        std::vector<Category> cats;
        const int m = k(rng);
        for (int c = 0; c < m; ++c) {
          switch (c % 4) {
            case 0: cats.emplace_back(std::string("c") + std::to_string(c)); break;
            case 1: cats.emplace_back(static_cast<std::int64_t>(c * 7)); break;
            case 2: cats.emplace_back(0.25 * c); break;
            default: cats.emplace_back(true); break;
          }
        }
        defs.push_back(kind(rng) % 2 == 0 ? ParameterDef::choice(name, cats) : ParameterDef::ordinal(name, cats));
      }
    }
  }
  return defs;
}

namespace {

std::vector<ParameterValue> oracle_axis(const ParameterDef& def, std::size_t points) {
  std::vector<ParameterValue> axis;
  const double last = static_cast<double>(points - 1);
  switch (def.kind()) {
    case ParamKind::Continuous:
      for (std::size_t i = 0; i < points; ++i) {
        axis.emplace_back(i == points - 1 ? def.hi() : def.lo() + (static_cast<double>(i) / last) * (def.hi() - def.lo()));
      }
      break;
    case ParamKind::ContinuousLog: {
      const double a = std::log10(def.lo());
      const double b = std::log10(def.hi());
      for (std::size_t i = 0; i < points; ++i) {
        if (i == 0) {
          axis.emplace_back(def.lo());
        } else if (i == points - 1) {
          axis.emplace_back(def.hi());
        } else {
          axis.emplace_back(std::pow(10.0, a + (static_cast<double>(i) / last) * (b - a)));
        }
      }
      break;
    }
    case ParamKind::Discrete: {
      const std::int64_t span = def.int_hi() - def.int_lo();
      const std::size_t m = std::min<std::size_t>(points, static_cast<std::size_t>(span + 1));
      for (std::size_t i = 0; i < m; ++i) {
        const double step = static_cast<double>(i) * static_cast<double>(span) / static_cast<double>(m - 1);
        axis.emplace_back(def.int_lo() + static_cast<std::int64_t>(std::llround(step)));
      }
      break;
    }
    default:
      for (const auto& c : def.categories()) axis.emplace_back(c);
  }
  return axis;
}

void enumerate(const std::vector<ParameterDef>& defs, const std::vector<std::vector<ParameterValue>>& axes,
               std::size_t depth, Assignment& current, std::vector<Assignment>& out) {
  if (depth == defs.size()) {
    out.push_back(current);
    return;
  }
  for (const auto& v : axes[depth]) {
    current[defs[depth].name()] = v;
    enumerate(defs, axes, depth + 1, current, out);
  }
  current.erase(defs[depth].name());
}

double matern(double r) {
  const double s = std::sqrt(5.0) * r;
  return (1.0 + s + 5.0 * r * r / 3.0) * std::exp(-s);
}

double cov(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& ls, double sf2) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r2 += (a[i] - b[i]) * (a[i] - b[i]) / (ls[i] * ls[i]);
  return sf2 * matern(std::sqrt(r2));
}

// Gauss-Jordan with partial pivoting.
std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double d = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

}  // namespace

std::vector<Assignment> grid_oracle(const std::vector<ParameterDef>& defs, std::size_t points) {
  std::vector<std::vector<ParameterValue>> axes;
  for (const auto& d : defs) axes.push_back(oracle_axis(d, points));
  std::vector<Assignment> out;
  Assignment current;
  enumerate(defs, axes, 0, current, out);
  return out;
}

DensePosterior dense_gp_posterior(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                  const std::vector<double>& point, const std::vector<double>& lengthscales,
                                  double signal_variance, double noise_variance) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i][j] = cov(x[i], x[j], lengthscales, signal_variance);
    k[i][i] += noise_variance;
  }
  const auto kinv = invert(k);
  std::vector<double> ks(n);
  for (std::size_t i = 0; i < n; ++i) ks[i] = cov(x[i], point, lengthscales, signal_variance);
  DensePosterior out;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_y = 0.0;
    double row_k = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row_y += kinv[i][j] * y[j];
      row_k += kinv[i][j] * ks[j];
    }
    out.mean += ks[i] * row_y;
    quad += ks[i] * row_k;
  }
  out.variance = signal_variance - quad;
  return out;
}

double ei_by_quadrature(double mean, double sd, double best) {
  const double lo = mean - 12.0 * sd;
  const double hi = best;
  if (hi <= lo) return 0.0;
  constexpr int kIntervals = 20000;
  const double h = (hi - lo) / kIntervals;
  auto f = [&](double t) {
    const double z = (t - mean) / sd;
    return (best - t) * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < kIntervals; ++i) acc += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double ks_uniform(std::vector<double> sample, double lo, double hi) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = std::clamp((sample[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

double chi_square_sf(double statistic, double dof) {
  const double z = (std::cbrt(statistic / dof) - (1.0 - 2.0 / (9.0 * dof))) / std::sqrt(2.0 / (9.0 * dof));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

std::pair<TrialId, double> repeat_best_oracle(
    const std::vector<std::pair<Assignment, std::optional<double>>>& trials, bool lower_is_better) {
  std::vector<std::pair<Assignment, std::vector<double>>> groups;
  std::vector<TrialId> first_ids;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (!trials[i].second) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == trials[i].first; });
    if (it == groups.end()) {
      groups.push_back({trials[i].first, {*trials[i].second}});
      first_ids.push_back(static_cast<TrialId>(i + 1));
    } else {
      it->second.push_back(*trials[i].second);
    }
  }
  std::pair<TrialId, double> best{0, 0.0};
  bool have = false;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (double v : groups[g].second) sum += v;
    const double mean = sum / static_cast<double>(groups[g].second.size());
    if (!have || (lower_is_better ? mean < best.second : mean > best.second)) {
      best = {first_ids[g], mean};
      have = true;
    }
  }
  return best;
}

}  // namespace hpo::testing
