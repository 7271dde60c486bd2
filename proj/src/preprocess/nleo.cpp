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

#include "preprocess/nleo.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace ddib {

std::vector<double> nleo(std::span<const double> x) {
  require(x.size() >= 4, ErrorCode::TooShort, "NLEO needs at least 4 samples");
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 3; i < x.size(); ++i) out[i] = x[i] * x[i - 3] - x[i - 1] * x[i - 2];
  return out;
}

std::vector<double> smooth_abs(std::span<const double> seq, std::size_t window) {
  require(window >= 1, ErrorCode::InvalidArgument, "smoothing window must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(seq.size());
  std::vector<double> prefix(seq.size() + 1, 0.0);
  for (std::size_t i = 0; i < seq.size(); ++i) prefix[i + 1] = prefix[i] + std::abs(seq[i]);
  const auto w = static_cast<std::ptrdiff_t>(window);
  const auto left = w / 2;
  std::vector<double> out(seq.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - left);
    const auto hi = std::min<std::ptrdiff_t>(n, i - left + w);
    out[static_cast<std::size_t>(i)] =
        (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]) /
        static_cast<double>(hi - lo);
  }
  return out;
}

}  // namespace ddib
