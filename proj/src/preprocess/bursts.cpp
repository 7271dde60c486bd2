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

#include "preprocess/bursts.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "preprocess/nleo.hpp"

namespace ddib {

std::vector<std::vector<double>> burst_power(const Recording& rec256, std::size_t window) {
  std::vector<std::vector<double>> out;
  out.reserve(rec256.n_channels());
  for (const auto& ch : rec256.samples) out.push_back(smooth_abs(nleo(ch), window));
  return out;
}

std::vector<double> calibrate_threshold(const std::vector<std::vector<double>>& power,
                                        const std::vector<bool>& masked, double multiplier) {
  require(multiplier > 0, ErrorCode::InvalidArgument, "threshold multiplier must be positive");
  std::vector<double> thresholds;
  thresholds.reserve(power.size());
  for (std::size_t c = 0; c < power.size(); ++c) {
    std::vector<double> vals;
    vals.reserve(power[c].size());
    for (std::size_t i = 0; i < power[c].size(); ++i)
      if (i >= masked.size() || !masked[i]) vals.push_back(power[c][i]);
    if (vals.empty()) fail(ErrorCode::Calibration, fmt::format("channel {} is fully masked", c));
    const auto mid = vals.begin() + static_cast<std::ptrdiff_t>(vals.size() / 2);
    std::nth_element(vals.begin(), mid, vals.end());
    double median = *mid;
    if (vals.size() % 2 == 0) {
      const double lower = *std::max_element(vals.begin(), mid);
      median = 0.5 * (median + lower);
    }
    thresholds.push_back(multiplier * median);
  }
  return thresholds;
}

std::vector<double> calibrate_threshold(const Recording& rec256, double multiplier, std::size_t window) {
  require(rec256.n_channels() > 0, ErrorCode::EmptyRecording, "recording has no channels");
  return calibrate_threshold(burst_power(rec256, window), rec256.sample_mask(), multiplier);
}

BurstAnnotation detect_bursts_from_power(const std::vector<std::vector<double>>& power, double rate,
                                         std::span<const double> thresholds,
                                         const std::vector<bool>& masked, double min_gap) {
  const std::size_t channels = power.size();
  require(channels > 0, ErrorCode::EmptyRecording, "burst detection on a recording without channels");
  require(thresholds.size() == channels, ErrorCode::InvalidArgument,
          "need exactly one threshold per channel");
  const std::size_t n = power.front().size();
  const std::size_t quorum = (channels + 1) / 2;

  std::vector<Interval> runs;
  std::ptrdiff_t run_start = -1;
  for (std::size_t i = 0; i <= n; ++i) {
    bool active = false;
    if (i < n && (i >= masked.size() || !masked[i])) {
      std::size_t votes = 0;
      for (std::size_t c = 0; c < channels; ++c)
        if (power[c][i] > thresholds[c]) ++votes;
      active = votes >= quorum;
    }
    if (active && run_start < 0) {
      run_start = static_cast<std::ptrdiff_t>(i);
    } else if (!active && run_start >= 0) {
      runs.push_back({static_cast<double>(run_start) / rate, static_cast<double>(i) / rate});
      run_start = -1;
    }
  }
  return {merge_short_gaps(std::move(runs), min_gap)};
}

BurstAnnotation detect_bursts(const Recording& rec256, std::span<const double> thresholds,
                              const BurstDetectionParams& params) {
  require(rec256.n_channels() > 0, ErrorCode::EmptyRecording, "burst detection on a recording without channels");
  return detect_bursts_from_power(burst_power(rec256, params.smoothing_window), rec256.rate, thresholds,
                                  rec256.sample_mask(), params.min_gap);
}

}  // namespace ddib
