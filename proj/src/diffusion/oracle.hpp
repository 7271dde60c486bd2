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

#pragma once

#include <vector>

#include "diffusion/denoiser.hpp"

namespace ddib {

struct MixtureComponent {
  double weight = 1.0;
  std::vector<double> mean;  // one value broadcasts across the signal
  double std = 0.0;          // 0 makes the component a point mass
};

// Analytic denoiser for an isotropic Gaussian mixture prior. With
// p_sigma = sum_k w_k N(mu_k, (s_k^2 + sigma^2) I), D is the exact posterior
// mean sum_k r_k (mu_k + s_k^2 / (s_k^2 + sigma^2) (x - mu_k)).
class GaussianMixtureOracle final : public Denoiser {
 public:
  // Weights must be positive; they are normalized to sum to 1.
  explicit GaussianMixtureOracle(std::vector<MixtureComponent> components);

  static GaussianMixtureOracle dirac(double at);
  static GaussianMixtureOracle gaussian(double mean, double std);

  std::size_t dim() const noexcept override { return dim_; }
  void denoise(std::span<const double> x, std::size_t batch, double sigma,
               std::span<double> out) const override;
  using Denoiser::denoise;

  // log p_sigma(x) for one row; sigma > 0 or every std > 0.
  double log_density(std::span<const double> x, double sigma) const;

  // Posterior-mean limits.
  std::vector<double> mean_of_means(std::size_t length) const;

  const std::vector<MixtureComponent>& components() const noexcept { return components_; }

 private:
  void denoise_row(std::span<const double> x, double sigma, std::span<double> out) const;
  double mean_at(const MixtureComponent& c, std::size_t i) const {
    return c.mean.size() == 1 ? c.mean[0] : c.mean[i];
  }

  std::vector<MixtureComponent> components_;
  std::size_t dim_ = 0;
};

}  // namespace ddib
