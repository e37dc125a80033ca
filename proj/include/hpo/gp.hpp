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

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hpo/kernels.hpp"
#include "hpo/param_space.hpp"

namespace hpo {

inline constexpr double kNoiseFloor = 1e-8;

class SingularKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matérn-5/2 ARD hyperparameters. The optimizer works on the natural log of
/// (signal variance, lengthscale_1..d, noise variance), in that order.
struct GpHyperparameters {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_variance = kNoiseFloor;

  Eigen::VectorXd to_log() const;
  static GpHyperparameters from_log(const Eigen::VectorXd& log_theta);
};

/// Exact log marginal likelihood of targets `y` at inputs `x` (n x d rows).
/// Returns -infinity when the covariance is not positive definite. When
/// `gradient` is non-null it receives d(LML)/d(log theta).
double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& log_theta, Eigen::VectorXd* gradient = nullptr);

struct BoxOptimum {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
};

/// Monotone projected quasi-Newton ascent inside [lo, hi]. The returned value
/// is never below the value at the (clamped) starting point.
BoxOptimum maximize_in_box(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fn,
                           const Eigen::VectorXd& start, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                           int max_iterations = 100);

struct GpFitOptions {
  std::size_t restarts = 16;
  double log_lower = std::log(1e-3);
  double log_upper = std::log(1e3);
  int max_iterations = 100;
};

struct FitReport {
  std::vector<double> initial_lml;
  std::vector<double> final_lml;
  double best_lml = -std::numeric_limits<double>::infinity();
};

class GpModel {
 public:
  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
  };

  /// Standardizes y, picks hyperparameters by multi-start maximization of the
  /// log marginal likelihood, and conditions on the data.
  static GpModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Rng& rng,
                     const GpFitOptions& options = {}, FitReport* report = nullptr);

  /// Conditions on the data with fixed hyperparameters. Escalates diagonal
  /// jitter through 1e-8, 1e-6, 1e-4 before throwing SingularKernel.
  static GpModel condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GpHyperparameters hyper,
                           bool standardize = true);

  /// Posterior in the units of the original targets.
  Prediction predict(std::span<const double> point) const;
  /// Posterior in standardized units (the model's internal scale).
  Prediction predict_standardized(std::span<const double> point) const;
  /// Batch posterior in standardized units; `points` is d x m.
  void predict_standardized(const Eigen::MatrixXd& points, std::span<double> mean, std::span<double> variance) const;

  double standardize(double y) const { return (y - y_mean_) / y_scale_; }
  const GpHyperparameters& hyperparameters() const { return hyper_; }
  const Eigen::VectorXd& targets() const { return y_; }
  const Eigen::MatrixXd& inputs() const { return x_; }
  double jitter() const { return jitter_; }
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }
  kernels::PosteriorView view() const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;  // standardized
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  GpHyperparameters hyper_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double jitter_ = 0.0;
};

}  // namespace hpo
