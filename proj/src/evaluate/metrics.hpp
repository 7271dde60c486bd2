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
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ddib {

// Mean of squared differences. Throws InvalidArgument on a length mismatch.
double mse(std::span<const double> a, std::span<const double> b);
// Mean absolute value.
double mav(std::span<const double> a);
// 100 * mse(original, other) / mav(original). Throws Numeric when the
// original has zero MAV.
double ratio_pct(std::span<const double> original, std::span<const double> other);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (divide by n)
};
MeanStd mean_std(std::span<const double> v);

struct MetricRow {
  std::string label;
  double mav_mean = 0.0, mav_std = 0.0;
  double mse_mean = 0.0, mse_std = 0.0;
  double ratio_mean_pct = 0.0, ratio_std_pct = 0.0;
  std::size_t nfe = 0;
  std::size_t count = 0;
};

using SegmentPair = std::pair<std::span<const double>, std::span<const double>>;

// Per-segment MAV (of the original), MSE and ratio, then mean and std
// across segments. Throws InvalidArgument on an empty list.
MetricRow aggregate(const std::string& label, const std::vector<SegmentPair>& pairs, std::size_t nfe);

}  // namespace ddib
