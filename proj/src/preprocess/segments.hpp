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
#include <string>
#include <vector>

#include "preprocess/recording.hpp"

namespace ddib {

inline constexpr std::size_t kSegmentLength = 320;  // 5 s at 64 Hz
inline constexpr double kSegmentRate = 64.0;

struct Provenance {
  std::string recording_id;
  std::string channel;
  double start = 0.0;  // seconds
};

// A single-channel burst window. Values are raw amplitudes until normalized.
struct Segment {
  std::vector<double> values;
  Modality modality = Modality::Eeg;
  Provenance provenance;
};

struct SegmentationParams {
  double length_s = 5.0;
  double hop_s = 2.5;
};

// Windows start at burst.start + k * hop while start + length <= burst.end;
// every channel yields its own segment. Windows touching a masked interval
// are dropped. Expects a recording at 64 Hz.
std::vector<Segment> segment_bursts(const Recording& rec64, const BurstAnnotation& ann,
                                    const SegmentationParams& params = {});

// Closed-form segment count for a burst of length L s over C channels.
std::size_t expected_segment_count(double burst_length, std::size_t channels,
                                   const SegmentationParams& params = {});

}  // namespace ddib
