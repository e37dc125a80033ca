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

// Data-parallel numeric kernels behind the Gaussian-process model.
//
// Every kernel exists twice: the OpenMP version in hpo::kernels, used by the
// library, and a plain loop in hpo::kernels::serial kept as the reference the
// tests and the benchmark compare against. Each output element is computed by
// the same arithmetic in both, so results agree bit for bit regardless of the
// thread count.

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <span>

namespace hpo::kernels {

/// Matérn-5/2 correlation as a function of the scaled distance r.
inline double matern52(double r) {
  constexpr double kSqrt5 = 2.23606797749978969641;
  const double s = kSqrt5 * r;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

/// Scaled Euclidean distance sqrt(sum_i ((a_i - b_i) / l_i)^2).
template <class A, class B>
double scaled_distance(const A& a, const B& b, const Eigen::VectorXd& lengthscales) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
    const double d = (a[i] - b[i]) / lengthscales[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Posterior pieces needed to score candidate points.
struct PosteriorView {
  const Eigen::MatrixXd& train;        // n x d, one training point per row
  const Eigen::MatrixXd& cholesky;     // lower factor of K + noise * I
  const Eigen::VectorXd& alpha;        // (K + noise * I)^-1 y
  const Eigen::VectorXd& lengthscales;
  double signal_variance;
};

/// Noise-free covariance matrix sigma_f^2 * k(x_i, x_j) over the rows of x.
Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& lengthscales, double signal_variance);

/// Posterior mean and latent variance at each column of `points` (d x m).
/// Variances are clipped at zero.
void posterior(const PosteriorView& model, const Eigen::MatrixXd& points, std::span<double> mean,
               std::span<double> variance);

/// Expected improvement (minimization) for each (mean, variance) pair.
void expected_improvement(std::span<const double> mean, std::span<const double> variance, double best,
                          std::span<double> out);

namespace serial {

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& lengthscales, double signal_variance);
void posterior(const PosteriorView& model, const Eigen::MatrixXd& points, std::span<double> mean,
               std::span<double> variance);
void expected_improvement(std::span<const double> mean, std::span<const double> variance, double best,
                          std::span<double> out);

}  // namespace serial

/// Scalar EI. Falls back to max(0, best - mean) when the standard deviation
/// is below 1e-12.
double expected_improvement(double mean, double variance, double best);

/// Posterior at a single point, serial. Shared by both kernel variants.
void posterior_point(const PosteriorView& model, const double* point, double& mean, double& variance,
                     Eigen::VectorXd& scratch);

}  // namespace hpo::kernels
