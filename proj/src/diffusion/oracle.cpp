/*
 * Copyright 2026 The ddib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "diffusion/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ddib {

GaussianMixtureOracle::GaussianMixtureOracle(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  require(!components_.empty(), ErrorCode::InvalidArgument, "mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    require(c.weight > 0 && std::isfinite(c.weight), ErrorCode::InvalidArgument, "mixture weights must be positive");
    require(c.std >= 0 && std::isfinite(c.std), ErrorCode::InvalidArgument, "component std must be >= 0");
    require(!c.mean.empty(), ErrorCode::InvalidArgument, "component mean must not be empty");
    if (c.mean.size() > 1) {
      require(dim_ == 0 || dim_ == c.mean.size(), ErrorCode::InvalidArgument, "component means differ in length");
      dim_ = c.mean.size();
    }
    total += c.weight;
  }
  for (auto& c : components_) c.weight /= total;
}

GaussianMixtureOracle GaussianMixtureOracle::dirac(double at) {
  return GaussianMixtureOracle({{1.0, {at}, 0.0}});
}

GaussianMixtureOracle GaussianMixtureOracle::gaussian(double mean, double std) {
  return GaussianMixtureOracle({{1.0, {mean}, std}});
}

void GaussianMixtureOracle::denoise(std::span<const double> x, std::size_t batch, double sigma,
                                    std::span<double> out) const {
  require(batch > 0 && x.size() % batch == 0 && out.size() == x.size(), ErrorCode::InvalidArgument,
          "denoise buffer shape mismatch");
  require(sigma >= 0 && std::isfinite(sigma), ErrorCode::InvalidArgument, "sigma must be finite and >= 0");
  const std::size_t len = x.size() / batch;
  require(dim_ == 0 || dim_ == len, ErrorCode::InvalidArgument, "signal length does not match oracle means");
  for (std::size_t b = 0; b < batch; ++b)
    denoise_row(x.subspan(b * len, len), sigma, out.subspan(b * len, len));
}

void GaussianMixtureOracle::denoise_row(std::span<const double> x, double sigma, std::span<double> out) const {
  const std::size_t len = x.size();
  for (double v : x)
    if (!std::isfinite(v)) fail(ErrorCode::Numeric, "non-finite input to mixture denoiser");

  if (sigma == 0.0) {
    // Limit sigma -> 0: any continuous component makes D the identity;
    // pure point masses collapse onto the nearest atom.
    const bool continuous = std::any_of(components_.begin(), components_.end(),
                                        [](const MixtureComponent& c) { return c.std > 0; });
    if (continuous) {
      std::copy(x.begin(), x.end(), out.begin());
      return;
    }
    const MixtureComponent* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& c : components_) {
      double d = 0.0;
      for (std::size_t i = 0; i < len; ++i) d += (x[i] - mean_at(c, i)) * (x[i] - mean_at(c, i));
      if (d < best_d || (d == best_d && best && c.weight > best->weight)) {
        best_d = d;
        best = &c;
      }
    }
    for (std::size_t i = 0; i < len; ++i) out[i] = mean_at(*best, i);
    return;
  }

  const double n = static_cast<double>(len);
  std::vector<double> logr(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    const double v = c.std * c.std + sigma * sigma;
    double d2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double d = x[i] - mean_at(c, i);
      d2 += d * d;
    }
    logr[k] = std::log(c.weight) - 0.5 * d2 / v - 0.5 * n * std::log(2.0 * std::numbers::pi * v);
  }
  const double mx = *std::max_element(logr.begin(), logr.end());
  double z = 0.0;
  for (auto& l : logr) z += (l = std::exp(l - mx));
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    const double r = logr[k] / z;
    if (r == 0.0) continue;
    const double shrink = c.std * c.std / (c.std * c.std + sigma * sigma);
    for (std::size_t i = 0; i < len; ++i) {
      const double mu = mean_at(c, i);
      out[i] += r * (mu + shrink * (x[i] - mu));
    }
  }
}

double GaussianMixtureOracle::log_density(std::span<const double> x, double sigma) const {
  const double n = static_cast<double>(x.size());
  std::vector<double> terms;
  for (const auto& c : components_) {
    const double v = c.std * c.std + sigma * sigma;
    require(v > 0, ErrorCode::InvalidArgument, "log density undefined for a point mass at sigma = 0");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - mean_at(c, i);
      d2 += d * d;
    }
    terms.push_back(std::log(c.weight) - 0.5 * d2 / v - 0.5 * n * std::log(2.0 * std::numbers::pi * v));
  }
  const double mx = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

std::vector<double> GaussianMixtureOracle::mean_of_means(std::size_t length) const {
  std::vector<double> out(length, 0.0);
  for (const auto& c : components_)
    for (std::size_t i = 0; i < length; ++i) out[i] += c.weight * mean_at(c, i);
  return out;
}

}  // namespace ddib
