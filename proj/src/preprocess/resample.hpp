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

// Band-limited resampling with a Kaiser-windowed sinc kernel.
//
// Output sample k sits at time k / to. The low-pass cutoff is 0.45 times the
// lower of the two rates and the kernel spans 16 zero crossings per side.
// Weights are renormalized per output sample, so constants map to the same
// constant, including near the edges. Output length is floor(n * to / from).
std::vector<double> resample(std::span<const double> x, double from, double to);

// Resamples every channel; masked intervals (in seconds) are clipped to the
// new duration. rate == target_rate returns an identical copy.
Recording resample(const Recording& rec, double target_rate);

}  // namespace ddib
