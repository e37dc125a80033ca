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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "hpo/gp.hpp"

using namespace hpo;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  GpHyperparameters hyper;
};

Problem random_problem(Rng& rng, Eigen::Index n, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Problem p;
  p.x.resize(n, d);
  p.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) p.x(i, j) = u(rng);
    p.y[i] = std::sin(5.0 * p.x(i, 0)) + 2.0 * u(rng) - 1.0;
  }
  p.hyper.signal_variance = std::exp(std::log(0.3) + u(rng) * std::log(10.0));
  p.hyper.lengthscales.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) p.hyper.lengthscales[j] = 0.2 + 0.8 * u(rng);
  p.hyper.noise_variance = p.hyper.signal_variance * std::pow(10.0, -4.0 + 3.0 * u(rng));
  return p;
}

std::vector<std::vector<double>> rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
  }
  return out;
}

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("posterior matches the dense direct-inverse oracle") {
  Rng rng(101);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_problem(rng, 10, 1 + trial % 3);
    const GpModel model = GpModel::condition(p.x, p.y, p.hyper, false);
    REQUIRE(model.jitter() == 0.0);
    const double y_scale = p.y.cwiseAbs().maxCoeff();
    for (int k = 0; k < 5; ++k) {
      std::vector<double> point(static_cast<std::size_t>(p.x.cols()));
      for (auto& c : point) c = u(rng);
      const auto got = model.predict(point);
      const auto want = testing::dense_gp_posterior(rows(p.x), vec(p.y), point, vec(p.hyper.lengthscales),
                                                    p.hyper.signal_variance, p.hyper.noise_variance);
      CHECK(std::fabs(got.mean - want.mean) <= 1e-8 * std::max(std::fabs(want.mean), y_scale));
      CHECK(std::fabs(got.variance - std::max(want.variance, 0.0)) <=
            1e-8 * std::max(std::fabs(want.variance), p.hyper.signal_variance));
    }
  }
}

TEST_CASE("standardized conditioning reports results in original units") {
  Rng rng(4);
  auto p = random_problem(rng, 10, 2);
  p.y = p.y * 40.0 + Eigen::VectorXd::Constant(10, 100.0);
  const GpModel model = GpModel::condition(p.x, p.y, p.hyper, true);
  const std::vector<double> point{0.4, 0.6};
  const double mu = model.y_mean();
  const double s = model.y_scale();
  const auto want = testing::dense_gp_posterior(rows(p.x), vec(((p.y.array() - mu) / s).matrix()), point,
                                                vec(p.hyper.lengthscales), p.hyper.signal_variance,
                                                p.hyper.noise_variance);
  const auto got = model.predict(point);
  CHECK(got.mean == doctest::Approx(want.mean * s + mu).epsilon(1e-9));
  CHECK(got.variance == doctest::Approx(want.variance * s * s).epsilon(1e-8));
}

TEST_CASE("single observation is interpolated") {
  Eigen::MatrixXd x(1, 2);
  x << 0.3, 0.7;
  Eigen::VectorXd y(1);
  y << 2.5;
  Rng rng(0);
  const GpModel fitted = GpModel::fit(x, y, rng);
  const std::vector<double> at{0.3, 0.7};
  CHECK(fitted.predict(at).mean == doctest::Approx(2.5).epsilon(1e-12));

  GpHyperparameters h;
  h.lengthscales = Eigen::VectorXd::Constant(2, 0.5);
  const GpModel floor_model = GpModel::condition(x, y, h, true);
  CHECK(floor_model.predict(at).mean == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(floor_model.predict_standardized(at).variance < 1e-6);
}

TEST_CASE("constant targets give a constant posterior mean") {
  Eigen::MatrixXd x(5, 1);
  x << 0.0, 0.2, 0.5, 0.7, 1.0;
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 3.25);
  Rng rng(1);
  const GpModel model = GpModel::fit(x, y, rng);
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    const std::vector<double> at{t};
    CHECK(std::fabs(model.predict(at).mean - 3.25) < 1e-6);
  }
}

TEST_CASE("fit on a sine wave generalizes") {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(25, 1);
  Eigen::VectorXd y(25);
  for (int i = 0; i < 25; ++i) {
    x(i, 0) = (i + 0.5 * u(rng)) / 25.0;
    y[i] = std::sin(2.0 * std::numbers::pi * x(i, 0));
  }
  const GpModel model = GpModel::fit(x, y, rng);
  double se = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = (i + 0.5) / 100.0;
    const std::vector<double> at{t};
    const auto got = model.predict(at);
    se += std::pow(got.mean - std::sin(2.0 * std::numbers::pi * t), 2);

    // The fitted model is the exact GP for its hyperparameters.
    const auto& h = model.hyperparameters();
    const auto want = testing::dense_gp_posterior(rows(x), vec(model.targets()), at, vec(h.lengthscales),
                                                  h.signal_variance, h.noise_variance + model.jitter());
    CHECK(model.predict_standardized(at).mean == doctest::Approx(want.mean).epsilon(1e-6));
  }
  CHECK(std::sqrt(se / 100.0) < 0.05);
}

TEST_CASE("training points and prior reversion") {
  Rng rng(12);
  auto p = random_problem(rng, 8, 2);
  p.hyper.noise_variance = kNoiseFloor;
  const GpModel model = GpModel::condition(p.x, p.y, p.hyper, true);
  for (Eigen::Index i = 0; i < p.x.rows(); ++i) {
    const std::vector<double> at{p.x(i, 0), p.x(i, 1)};
    const auto pred = model.predict_standardized(at);
    CHECK(std::fabs(pred.mean - model.targets()[i]) < 1e-4);
    CHECK(pred.variance <= model.hyperparameters().noise_variance + 1e-6);
  }
  const std::vector<double> far{500.0, -500.0};
  CHECK(model.predict_standardized(far).variance ==
        doctest::Approx(model.hyperparameters().signal_variance).epsilon(0.01));
}

TEST_CASE("duplicate inputs escalate jitter") {
  Eigen::MatrixXd x(3, 1);
  x << 0.5, 0.5, 0.5;
  Eigen::VectorXd y(3);
  y << 1.0, 1.0, 1.0;
  GpHyperparameters h;
  h.lengthscales = Eigen::VectorXd::Constant(1, 1.0);
  h.noise_variance = 0.0;
  const GpModel model = GpModel::condition(x, y, h, false);
  CHECK(model.hyperparameters().noise_variance == kNoiseFloor);
  CHECK(model.jitter() >= 0.0);
}

TEST_CASE("expected improvement examples") {
  CHECK(kernels::expected_improvement(1.0, 0.0, 1.0) == 0.0);
  CHECK(kernels::expected_improvement(0.0, 0.0, 1.0) == 1.0);
  CHECK(kernels::expected_improvement(2.0, 1.0, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(kernels::expected_improvement(2.0, 1.0, 2.0) == doctest::Approx(0.3989).epsilon(1e-4));
}

TEST_CASE("expected improvement matches quadrature") {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double mean = -3.0 + 6.0 * u(rng);
    const double sd = 0.05 + 2.0 * u(rng);
    const double best = -3.0 + 6.0 * u(rng);
    const double closed = kernels::expected_improvement(mean, sd * sd, best);
    CHECK(closed >= 0.0);
    CHECK(std::fabs(closed - testing::ei_by_quadrature(mean, sd, best)) < 1e-4);
  }
}

TEST_CASE("log marginal likelihood gradient matches central differences") {
  Rng rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, 5, 1 + trial % 3);
    Eigen::VectorXd theta = p.hyper.to_log();
    Eigen::VectorXd grad;
    log_marginal_likelihood(p.x, p.y, theta, &grad);
    constexpr double h = 1e-5;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      Eigen::VectorXd up = theta;
      Eigen::VectorXd down = theta;
      up[k] += h;
      down[k] -= h;
      const double fd = (log_marginal_likelihood(p.x, p.y, up) - log_marginal_likelihood(p.x, p.y, down)) / (2 * h);
      CHECK(std::fabs(grad[k] - fd) <= 1e-4 * std::max({std::fabs(fd), std::fabs(grad[k]), 1e-3}));
    }
  }
}

TEST_CASE("every restart ends no worse than it started") {
  Rng rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_problem(rng, 12, 2);
    FitReport report;
    GpModel::fit(p.x, p.y, rng, {}, &report);
    REQUIRE(report.initial_lml.size() == 16);
    for (std::size_t r = 0; r < report.initial_lml.size(); ++r) {
      CHECK(report.final_lml[r] >= report.initial_lml[r]);
      CHECK(report.best_lml >= report.initial_lml[r]);
    }
  }
}

TEST_CASE("property: EI is non-negative for fitted models") {
  Rng rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(rng, 6 + trial, 2);
    const GpModel model = GpModel::fit(p.x, p.y, rng);
    Eigen::MatrixXd pts(2, 200);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts.col(j) << u(rng), u(rng);
    std::vector<double> mean(200), var(200), ei(200);
    model.predict_standardized(pts, mean, var);
    const double best = model.targets().minCoeff();
    kernels::expected_improvement(mean, var, best, ei);
    for (double e : ei) CHECK(e >= 0.0);
  }
}

TEST_CASE("OpenMP kernels agree with the serial reference bit for bit") {
  Rng rng(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto p = random_problem(rng, 40, 3);
  CHECK(kernels::gram(p.x, p.hyper.lengthscales, 1.7) == kernels::serial::gram(p.x, p.hyper.lengthscales, 1.7));

  const GpModel model = GpModel::condition(p.x, p.y, p.hyper, true);
  Eigen::MatrixXd pts(3, 500);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) pts.col(j) << u(rng), u(rng), u(rng);
  std::vector<double> m1(500), v1(500), m2(500), v2(500), e1(500), e2(500);
  kernels::posterior(model.view(), pts, m1, v1);
  kernels::serial::posterior(model.view(), pts, m2, v2);
  CHECK(m1 == m2);
  CHECK(v1 == v2);
  kernels::expected_improvement(m1, v1, -0.3, e1);
  kernels::serial::expected_improvement(m2, v2, -0.3, e2);
  CHECK(e1 == e2);
}
