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

// Reference implementations. Keep these free of OpenMP pragmas.

#include "hpo/kernels.hpp"

namespace hpo::kernels::serial {

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& lengthscales, double signal_variance) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = signal_variance * matern52(scaled_distance(x.row(i), x.row(j), lengthscales));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

void posterior(const PosteriorView& model, const Eigen::MatrixXd& points, std::span<double> mean,
               std::span<double> variance) {
  Eigen::VectorXd scratch;
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    posterior_point(model, points.col(c).data(), mean[c], variance[c], scratch);
  }
}

void expected_improvement(std::span<const double> mean, std::span<const double> variance, double best,
                          std::span<double> out) {
  for (std::size_t c = 0; c < mean.size(); ++c) out[c] = kernels::expected_improvement(mean[c], variance[c], best);
}

}  // namespace hpo::kernels::serial
