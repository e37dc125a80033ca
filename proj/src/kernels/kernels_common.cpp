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

#include <algorithm>
#include <cmath>

#include "hpo/kernels.hpp"

namespace hpo::kernels {

double expected_improvement(double mean, double variance, double best) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  const double gain = best - mean;
  if (sigma < 1e-12) return std::max(0.0, gain);
  const double z = gain / sigma;
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  return std::max(0.0, gain * cdf + sigma * pdf);
}

void posterior_point(const PosteriorView& model, const double* point, double& mean, double& variance,
                     Eigen::VectorXd& scratch) {
  const Eigen::Index n = model.train.rows();
  scratch.resize(n);
  mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = model.signal_variance * matern52(scaled_distance(model.train.row(i), point, model.lengthscales));
    scratch[i] = k;
    mean += k * model.alpha[i];
  }
  // Forward substitution L v = k, in place.
  double quad = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = scratch[i];
    for (Eigen::Index j = 0; j < i; ++j) acc -= model.cholesky(i, j) * scratch[j];
    scratch[i] = acc / model.cholesky(i, i);
    quad += scratch[i] * scratch[i];
  }
  variance = std::max(0.0, model.signal_variance - quad);
}

}  // namespace hpo::kernels
