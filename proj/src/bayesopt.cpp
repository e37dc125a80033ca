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


#include "hpo/bayesopt.hpp"

#include <algorithm>
#include <numeric>

#include "hpo/kernels.hpp"

namespace hpo {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;

// Indices of encoded coordinates that belong to numeric parameters.
std::vector<std::size_t> numeric_coordinates(std::span<const ParameterDef> defs) {
  std::vector<std::size_t> out;
  std::size_t offset = 0;
  for (const auto& def : defs) {
    if (def.is_numeric()) out.push_back(offset);
    offset += def.encoded_width();
  }
  return out;
}

}  // namespace

std::size_t BayesianOptimization::num_initial(std::span<const ParameterDef> defs) const {
  if (options_.num_initial > 0) return options_.num_initial;
  return std::max<std::size_t>(3, 2 * encoded_width(defs));
}

void BayesianOptimization::absorb_results(const SuggestContext& ctx) {
  cursor_.drain(ctx.results, [&](const ResultRow& row) {
    if (row.status != TrialStatus::Completed || !row.objective) return;
    x_.push_back(encode(row.parameters, ctx.defs));
    y_.push_back(normalized(*row.objective, ctx.lower_is_better));
  });
}

Assignment BayesianOptimization::fresh_random(const SuggestContext& ctx) {
  Assignment a = sample(ctx.defs, ctx.rng);
  for (std::size_t attempt = 0; attempt < options_.duplicate_retries && seen_.count(encode(a, ctx.defs)); ++attempt) {
    a = sample(ctx.defs, ctx.rng);
  }
  return a;
}

std::optional<std::vector<double>> BayesianOptimization::maximize_acquisition(const GpModel& model,
                                                                              const SuggestContext& ctx) {
  const std::size_t d = encoded_width(ctx.defs);
  const std::size_t m = std::max<std::size_t>(options_.num_candidates, 1);
  const double best = model.targets().minCoeff();

  Eigen::MatrixXd points(d, m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto v = encode(sample(ctx.defs, ctx.rng), ctx.defs);
    for (std::size_t i = 0; i < d; ++i) points(i, j) = v[i];
  }
  std::vector<double> mean(m), var(m), ei(m);
  model.predict_standardized(points, mean, var);
  kernels::expected_improvement(mean, var, best, ei);

  const auto [lo_it, hi_it] = std::minmax_element(ei.begin(), ei.end());
  // Flat means no candidate is distinguishable, not merely small: a tiny but
  // varying EI still points at the best local refinement.
  if (!(*hi_it > 0.0) || *hi_it - *lo_it <= 1e-12 * *hi_it) return std::nullopt;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min(options_.num_refined, m);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return ei[a] > ei[b] || (ei[a] == ei[b] && a < b); });

  const auto view = model.view();
  Eigen::VectorXd scratch;
  auto score = [&](const std::vector<double>& x) {
    double mu = 0.0;
    double s2 = 0.0;
    kernels::posterior_point(view, x.data(), mu, s2, scratch);
    return kernels::expected_improvement(mu, s2, best);
  };

  const auto coords = numeric_coordinates(ctx.defs);
  std::vector<double> best_x(d);
  for (std::size_t i = 0; i < d; ++i) best_x[i] = points(i, order[0]);
  double best_ei = ei[order[0]];

  for (std::size_t r = 0; r < top; ++r) {
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = points(i, order[r]);
    double fx = ei[order[r]];
    for (std::size_t c : coords) {
      // Golden-section search on [0, 1] along coordinate c.
      double a = 0.0;
      double b = 1.0;
      std::vector<double> probe = x;
      auto at = [&](double t) {
        probe[c] = t;
        return score(probe);
      };
      double t1 = b - kInvPhi * (b - a);
      double t2 = a + kInvPhi * (b - a);
      double f1 = at(t1);
      double f2 = at(t2);
      for (int step = 0; step < options_.refine_steps; ++step) {
        if (f1 >= f2) {
          b = t2;
          t2 = t1;
          f2 = f1;
          t1 = b - kInvPhi * (b - a);
          f1 = at(t1);
        } else {
          a = t1;
          t1 = t2;
          f1 = f2;
          t2 = a + kInvPhi * (b - a);
          f2 = at(t2);
        }
      }
      const double t = f1 >= f2 ? t1 : t2;
      const double ft = std::max(f1, f2);
      if (ft > fx) {
        x[c] = t;
        fx = ft;
      }
    }
    if (fx > best_ei) {
      best_ei = fx;
      best_x = x;
    }
  }
  last_ei_ = best_ei;
  return best_x;
}

Proposal BayesianOptimization::next(const SuggestContext& ctx) {
  if (options_.max_num_trials && count_ >= *options_.max_num_trials) return Proposal::exhausted();
  absorb_results(ctx);
  ++count_;

  Assignment chosen;
  if (y_.size() < num_initial(ctx.defs)) {
    last_source_ = BayesOptSource::Initial;
    chosen = fresh_random(ctx);
  } else {
    const auto n = static_cast<Eigen::Index>(y_.size());
    const auto d = static_cast<Eigen::Index>(x_.front().size());
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = x_[i][j];
      y[i] = y_[i];
    }
    std::optional<std::vector<double>> argmax;
    last_source_ = BayesOptSource::FlatFallback;
    if (y.maxCoeff() > y.minCoeff()) {
      try {
        const GpModel model = GpModel::fit(x, y, ctx.rng, options_.gp);
        argmax = maximize_acquisition(model, ctx);
      } catch (const SingularKernel&) {
        last_source_ = BayesOptSource::SingularFallback;
      }
    }
    if (argmax) {
      last_source_ = BayesOptSource::Acquisition;
      chosen = decode(*argmax, ctx.defs);
      if (seen_.count(encode(chosen, ctx.defs))) chosen = fresh_random(ctx);
    } else {
      chosen = fresh_random(ctx);
    }
  }
  seen_.insert(encode(chosen, ctx.defs));
  return Proposal::ready(std::move(chosen));
}

}  // namespace hpo
