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

#include <cstddef>
#include <vector>

#include "common/error.hpp"

namespace ddib {

// EDM parameterization with sigma(t) = t and s(t) = 1.
struct EdmConfig {
  double sigma_data = 0.5;
  double sigma_min = 0.002;
  double sigma_max = 80.0;
  double rho = 7.0;
  double p_mean = -1.2;  // log-normal training sigma
  double p_std = 1.2;

  void validate() const;
};

struct Preconditioning {
  double c_skip;
  double c_out;
  double c_in;
  double c_noise;
};

// c_skip = sd^2 / (s^2 + sd^2), c_out = s sd / sqrt(s^2 + sd^2),
// c_in = 1 / sqrt(s^2 + sd^2), c_noise = ln(s) / 4. Throws Config when
// sigma_data <= 0 and InvalidArgument when sigma < 0.
Preconditioning precondition(double sigma, double sigma_data);

// lambda(sigma) = (s^2 + sd^2) / (s sd)^2 = 1 / c_out^2.
double loss_weight(double sigma, double sigma_data);

// Strictly decreasing noise levels; the terminal 0 is implicit.
class SigmaSchedule {
 public:
  explicit SigmaSchedule(std::vector<double> sigmas);

  std::size_t steps() const noexcept { return sigmas_.size(); }
  double operator[](std::size_t i) const { return sigmas_[i]; }
  const std::vector<double>& sigmas() const noexcept { return sigmas_; }
  // sigma_i for i < N, 0 for i == N.
  double with_terminal(std::size_t i) const { return i < sigmas_.size() ? sigmas_[i] : 0.0; }

 private:
  std::vector<double> sigmas_;
};

// sigma_i = (smax^(1/rho) + i/(N-1) (smin^(1/rho) - smax^(1/rho)))^rho,
// i = 0..N-1, with exact endpoints. Throws Schedule for N < 2.
SigmaSchedule karras_schedule(std::size_t n, const EdmConfig& cfg);

}  // namespace ddib
