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

#include "diffusion/edm.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ddib {

void EdmConfig::validate() const {
  require(sigma_data > 0, ErrorCode::Config, "sigma_data must be positive");
  require(sigma_min > 0 && sigma_min < sigma_max, ErrorCode::Config, "need 0 < sigma_min < sigma_max");
  require(rho > 0, ErrorCode::Config, "rho must be positive");
  require(p_std > 0, ErrorCode::Config, "p_std must be positive");
}

Preconditioning precondition(double sigma, double sigma_data) {
  require(sigma_data > 0, ErrorCode::Config, "sigma_data must be positive");
  require(sigma >= 0, ErrorCode::InvalidArgument, "sigma must be nonnegative");
  const double s2 = sigma * sigma + sigma_data * sigma_data;
  const double c_in = 1.0 / std::sqrt(s2);
  return {sigma_data * sigma_data / s2, sigma * sigma_data * c_in, c_in, std::log(sigma) / 4.0};
}

double loss_weight(double sigma, double sigma_data) {
  const double sd = sigma * sigma_data;
  return (sigma * sigma + sigma_data * sigma_data) / (sd * sd);
}

SigmaSchedule::SigmaSchedule(std::vector<double> sigmas) : sigmas_(std::move(sigmas)) {
  require(!sigmas_.empty(), ErrorCode::Schedule, "empty sigma schedule");
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    require(std::isfinite(sigmas_[i]) && sigmas_[i] > 0, ErrorCode::Schedule, "sigmas must be finite and positive");
    if (i > 0)
      require(sigmas_[i] < sigmas_[i - 1], ErrorCode::Schedule,
              fmt::format("sigma schedule not strictly decreasing at index {}", i));
  }
}

SigmaSchedule karras_schedule(std::size_t n, const EdmConfig& cfg) {
  require(n >= 2, ErrorCode::Schedule, "Karras schedule needs at least 2 nodes");
  cfg.validate();
  const double hi = std::pow(cfg.sigma_max, 1.0 / cfg.rho);
  const double lo = std::pow(cfg.sigma_min, 1.0 / cfg.rho);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = std::pow(hi + static_cast<double>(i) / static_cast<double>(n - 1) * (lo - hi), cfg.rho);
  s.front() = cfg.sigma_max;
  s.back() = cfg.sigma_min;
  return SigmaSchedule(std::move(s));
}

}  // namespace ddib
