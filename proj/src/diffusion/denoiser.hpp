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
#include <optional>
#include <span>
#include <vector>

#include "common/modality.hpp"

namespace ddib {

// D(x; sigma): estimate of the clean signal from a noisy one. Related to the
// score by grad log p_sigma(x) = (D(x; sigma) - x) / sigma^2.
class Denoiser {
 public:
  virtual ~Denoiser() = default;

  // Signal length this denoiser accepts; 0 means any.
  virtual std::size_t dim() const noexcept = 0;
  virtual std::optional<Modality> modality() const noexcept { return std::nullopt; }

  // x and out hold `batch` rows of equal length, row-major. One call is one
  // model pass for every row.
  virtual void denoise(std::span<const double> x, std::size_t batch, double sigma,
                       std::span<double> out) const = 0;

  std::vector<double> denoise(std::span<const double> x, double sigma) const {
    std::vector<double> out(x.size());
    denoise(x, 1, sigma, out);
    return out;
  }
};

}  // namespace ddib
