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

#include "preprocess/segments.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ddib {
namespace {
constexpr double kTimeEps = 1e-9;
}

std::vector<Segment> segment_bursts(const Recording& rec64, const BurstAnnotation& ann,
                                    const SegmentationParams& params) {
  require(std::abs(rec64.rate - kSegmentRate) < 1e-9, ErrorCode::InvalidArgument,
          fmt::format("segmentation expects a {} Hz recording, got {} Hz", kSegmentRate, rec64.rate));
  const auto len = static_cast<std::size_t>(std::llround(params.length_s * rec64.rate));
  std::vector<Segment> out;
  for (const auto& burst : ann.intervals) {
    for (double start = burst.start; start + params.length_s <= burst.end + kTimeEps; start += params.hop_s) {
      const Interval window{start, start + params.length_s};
      if (any_overlap(rec64.masked, window)) continue;
      const auto first = static_cast<std::size_t>(std::llround(start * rec64.rate));
      if (first + len > rec64.n_samples()) break;
      for (std::size_t c = 0; c < rec64.n_channels(); ++c) {
        const auto& ch = rec64.samples[c];
        Segment seg;
        seg.values.assign(ch.begin() + static_cast<std::ptrdiff_t>(first),
                          ch.begin() + static_cast<std::ptrdiff_t>(first + len));
        seg.modality = rec64.modality;
        seg.provenance = {rec64.id, rec64.channels[c], start};
        out.push_back(std::move(seg));
      }
    }
  }
  return out;
}

std::size_t expected_segment_count(double burst_length, std::size_t channels,
                                   const SegmentationParams& params) {
  if (burst_length + kTimeEps < params.length_s) return 0;
  const auto per_channel =
      static_cast<std::size_t>(std::floor((burst_length - params.length_s) / params.hop_s + kTimeEps)) + 1;
  return channels * per_channel;
}

}  // namespace ddib
