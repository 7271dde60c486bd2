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

#include <span>
#include <vector>

#include "preprocess/recording.hpp"

namespace ddib {

struct BurstDetectionParams {
  std::size_t smoothing_window = 384;  // samples at 256 Hz = 1.5 s
  double min_gap = 2.0;                // seconds; shorter IBIs are merged
};

// Smoothed |NLEO| per channel.
std::vector<std::vector<double>> burst_power(const Recording& rec256, std::size_t window = 384);

// threshold(ch) = multiplier * median of power over unmasked samples.
// Throws Calibration when a channel has no unmasked sample.
std::vector<double> calibrate_threshold(const std::vector<std::vector<double>>& power,
                                        const std::vector<bool>& masked, double multiplier);
std::vector<double> calibrate_threshold(const Recording& rec256, double multiplier,
                                        std::size_t window = 384);

// Voting on precomputed power: a sample is active when at least ceil(C/2)
// channels exceed their threshold and it is not masked. Active runs become
// [i0 / rate, i1 / rate) intervals; gaps shorter than min_gap are merged.
BurstAnnotation detect_bursts_from_power(const std::vector<std::vector<double>>& power, double rate,
                                         std::span<const double> thresholds,
                                         const std::vector<bool>& masked, double min_gap = 2.0);

BurstAnnotation detect_bursts(const Recording& rec256, std::span<const double> thresholds,
                              const BurstDetectionParams& params = {});

}  // namespace ddib
