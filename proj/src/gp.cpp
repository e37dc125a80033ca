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

#include "hpo/gp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <deque>
#include <limits>

namespace hpo {

namespace {

constexpr double kSqrt5 = 2.23606797749978969641;
constexpr double kLog2Pi = 1.83787706640934548356;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

Eigen::VectorXd GpHyperparameters::to_log() const {
  const Eigen::Index d = lengthscales.size();
  Eigen::VectorXd out(d + 2);
  out[0] = std::log(signal_variance);
  out.segment(1, d) = lengthscales.array().log();
  out[d + 1] = std::log(noise_variance);
  return out;
}

GpHyperparameters GpHyperparameters::from_log(const Eigen::VectorXd& log_theta) {
  const Eigen::Index d = log_theta.size() - 2;
  GpHyperparameters h;
  h.signal_variance = std::exp(log_theta[0]);
  h.lengthscales = log_theta.segment(1, d).array().exp();
  h.noise_variance = std::max(kNoiseFloor, std::exp(log_theta[d + 1]));
  return h;
}

double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& log_theta,
                               Eigen::VectorXd* gradient) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const double sf2 = std::exp(log_theta[0]);
  const Eigen::VectorXd ls = log_theta.segment(1, d).array().exp();
  const double sn2 = std::exp(log_theta[d + 1]);

  Eigen::MatrixXd k = kernels::gram(x, ls, sf2);
  k.diagonal().array() += sn2;
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();

  const Eigen::VectorXd alpha = llt.solve(y);
  const Eigen::MatrixXd& l = llt.matrixLLT();
  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(l(i, i));
  const double lml = -0.5 * y.dot(alpha) - log_det_half - 0.5 * static_cast<double>(n) * kLog2Pi;
  if (!finite(lml)) return -std::numeric_limits<double>::infinity();

  if (gradient != nullptr) {
    // dLML/dtheta_j = 0.5 * sum_ij W_ij dK_ij/dtheta_j with W = alpha alpha^T - K^-1.
    const Eigen::MatrixXd w = alpha * alpha.transpose() - llt.solve(Eigen::MatrixXd::Identity(n, n));
    gradient->setZero(d + 2);
    auto& g = *gradient;
    for (Eigen::Index i = 0; i < n; ++i) {
      g[0] += 0.5 * w(i, i) * sf2;
      for (Eigen::Index j = 0; j < i; ++j) {
        const double r = kernels::scaled_distance(x.row(i), x.row(j), ls);
        const double e = std::exp(-kSqrt5 * r);
        const double wij = w(i, j);  // symmetric; off-diagonal pairs count twice
        g[0] += wij * sf2 * (1.0 + kSqrt5 * r + 5.0 * r * r / 3.0) * e;
        const double radial = sf2 * (5.0 / 3.0) * (1.0 + kSqrt5 * r) * e;
        for (Eigen::Index q = 0; q < d; ++q) {
          const double diff = (x(i, q) - x(j, q)) / ls[q];
          g[1 + q] += wij * radial * diff * diff;
        }
      }
    }
    g[d + 1] = 0.5 * sn2 * w.trace();
  }
  return lml;
}

BoxOptimum maximize_in_box(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fn,
                           const Eigen::VectorXd& start, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                           int max_iterations) {
  constexpr std::size_t kMemory = 8;
  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v.cwiseMax(lo).cwiseMin(hi); };

  Eigen::VectorXd x = project(start);
  Eigen::VectorXd g;
  double f = fn(x, g);
  if (!finite(f)) return {x, f};

  // Curvature pairs for the minimization of -f.
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;

  for (int it = 0; it < max_iterations; ++it) {
    // Two-loop recursion on the descent direction of -f, i.e. an ascent step p.
    Eigen::VectorXd q = g;
    std::vector<double> alphas(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      alphas[m] = s.dot(q) / y.dot(s);
      q -= alphas[m] * y;
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      q *= s.dot(y) / y.dot(y);
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double beta = y.dot(q) / y.dot(s);
      q += s * (alphas[m] - beta);
    }
    Eigen::VectorXd p = q;

    auto clip_active = [&](Eigen::VectorXd& dir) {
      for (Eigen::Index i = 0; i < dir.size(); ++i) {
        if ((x[i] <= lo[i] && dir[i] < 0.0) || (x[i] >= hi[i] && dir[i] > 0.0)) dir[i] = 0.0;
      }
    };
    clip_active(p);
    if (!(p.dot(g) > 0.0)) {
      memory.clear();
      p = g;
      clip_active(p);
    }
    if (p.lpNorm<Eigen::Infinity>() == 0.0) break;

    double step = memory.empty() ? std::min(1.0, 1.0 / p.lpNorm<Eigen::Infinity>()) : 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    Eigen::VectorXd gn;
    double fn_value = f;
    for (int ls = 0; ls < 40; ++ls) {
      xn = project(x + step * p);
      fn_value = fn(xn, gn);
      if (finite(fn_value) && fn_value >= f + 1e-4 * g.dot(xn - x) && fn_value >= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = -(gn - g);
    if (s.dot(y) > 1e-12) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    const double gain = fn_value - f;
    x = xn;
    f = fn_value;
    g = gn;
    if (gain < 1e-10 * (1.0 + std::abs(f)) || s.lpNorm<Eigen::Infinity>() < 1e-10) break;
  }
  return {x, f};
}

GpModel GpModel::condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, GpHyperparameters hyper,
                           bool standardize) {
  if (x.rows() == 0 || x.rows() != y.size()) throw std::invalid_argument("GP needs matching, non-empty x and y");
  if (hyper.lengthscales.size() != x.cols()) throw std::invalid_argument("one lengthscale per input dimension");
  hyper.noise_variance = std::max(hyper.noise_variance, kNoiseFloor);

  GpModel m;
  m.x_ = x;
  m.hyper_ = std::move(hyper);
  if (standardize) {
    m.y_mean_ = y.mean();
    const double var = (y.array() - m.y_mean_).square().mean();
    m.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  m.y_ = (y.array() - m.y_mean_) / m.y_scale_;

  Eigen::MatrixXd k = kernels::gram(x, m.hyper_.lengthscales, m.hyper_.signal_variance);
  k.diagonal().array() += m.hyper_.noise_variance;
  for (double jitter : {0.0, 1e-8, 1e-6, 1e-4}) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() == Eigen::Success) {
      m.chol_ = llt.matrixL();
      m.alpha_ = llt.solve(m.y_);
      m.jitter_ = jitter;
      return m;
    }
  }
  throw SingularKernel("kernel matrix is not positive definite after jitter 1e-4");
}

GpModel GpModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Rng& rng, const GpFitOptions& options,
                     FitReport* report) {
  if (x.rows() == 0 || x.rows() != y.size()) throw std::invalid_argument("GP needs matching, non-empty x and y");
  const Eigen::Index d = x.cols();

  const double mean = y.mean();
  const double var = (y.array() - mean).square().mean();
  const double scale = var > 1e-24 ? std::sqrt(var) : 1.0;
  const Eigen::VectorXd ys = (y.array() - mean) / scale;

  Eigen::VectorXd lo = Eigen::VectorXd::Constant(d + 2, options.log_lower);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(d + 2, options.log_upper);
  lo[d + 1] = std::log(kNoiseFloor);

  auto objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    return log_marginal_likelihood(x, ys, theta, &grad);
  };

  FitReport local;
  FitReport& rep = report != nullptr ? *report : local;
  rep = FitReport{};

  BoxOptimum best;
  std::uniform_real_distribution<double> unit(options.log_lower, options.log_upper);
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    Eigen::VectorXd start(d + 2);
    if (r == 0) {
      // A unit-scale start; the remaining restarts are uniform in log space.
      start[0] = 0.0;
      start.segment(1, d).setConstant(std::log(0.3));
      start[d + 1] = std::log(1e-3);
    } else {
      for (Eigen::Index i = 0; i < d + 2; ++i) start[i] = unit(rng);
    }
    Eigen::VectorXd unused;
    rep.initial_lml.push_back(log_marginal_likelihood(x, ys, start.cwiseMax(lo).cwiseMin(hi), &unused));
    BoxOptimum opt = maximize_in_box(objective, start, lo, hi, options.max_iterations);
    rep.final_lml.push_back(opt.value);
    if (finite(opt.value) && opt.value > best.value) best = std::move(opt);
  }
  rep.best_lml = best.value;

  if (!finite(best.value)) throw SingularKernel("no restart produced a positive definite kernel");
  GpModel m = condition(x, ys, GpHyperparameters::from_log(best.x), false);
  m.y_mean_ = mean;
  m.y_scale_ = scale;
  return m;
}

GpModel::Prediction GpModel::predict_standardized(std::span<const double> point) const {
  if (static_cast<Eigen::Index>(point.size()) != x_.cols()) throw std::invalid_argument("point has wrong width");
  Prediction p;
  Eigen::VectorXd scratch;
  kernels::posterior_point(view(), point.data(), p.mean, p.variance, scratch);
  return p;
}

GpModel::Prediction GpModel::predict(std::span<const double> point) const {
  Prediction p = predict_standardized(point);
  return {p.mean * y_scale_ + y_mean_, p.variance * y_scale_ * y_scale_};
}

void GpModel::predict_standardized(const Eigen::MatrixXd& points, std::span<double> mean,
                                   std::span<double> variance) const {
  kernels::posterior(view(), points, mean, variance);
}

kernels::PosteriorView GpModel::view() const {
  return {x_, chol_, alpha_, hyper_.lengthscales, hyper_.signal_variance};
}

}  // namespace hpo
