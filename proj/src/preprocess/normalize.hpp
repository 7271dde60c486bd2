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

#include "preprocess/segments.hpp"

namespace ddib {

// Dataset-wide amplitude range used for the [-1, 1] mapping.
struct NormStats {
  double min = 0.0;
  double max = 0.0;
  Modality modality = Modality::Eeg;
};

// Throws InvalidArgument on an empty set, DegenerateStats when max == min.
NormStats compute_norm_stats(std::span<const Segment> segments);

// x -> 2 (x - min) / (max - min) - 1, clamped to [-1, 1]. Every clamped value
// increments *clamped when given. Throws Usage on modality mismatch.
Segment normalize(const Segment& seg, const NormStats& stats, std::size_t* clamped = nullptr);
Segment denormalize(const Segment& seg, const NormStats& stats);

double normalize_value(double x, const NormStats& stats) noexcept;
double denormalize_value(double y, const NormStats& stats) noexcept;

}  // namespace ddib
