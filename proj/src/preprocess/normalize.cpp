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

#include "preprocess/normalize.hpp"

#include <algorithm>
#include <limits>

namespace ddib {

NormStats compute_norm_stats(std::span<const Segment> segments) {
  require(!segments.empty(), ErrorCode::InvalidArgument, "cannot compute stats of an empty segment set");
  NormStats st{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               segments.front().modality};
  for (const auto& seg : segments) {
    require(seg.modality == st.modality, ErrorCode::Usage, "mixed modalities in one segment set");
    for (double v : seg.values) {
      st.min = std::min(st.min, v);
      st.max = std::max(st.max, v);
    }
  }
  require(st.max > st.min, ErrorCode::DegenerateStats, "segment set has max == min");
  return st;
}

double normalize_value(double x, const NormStats& stats) noexcept {
  return 2.0 * (x - stats.min) / (stats.max - stats.min) - 1.0;
}

double denormalize_value(double y, const NormStats& stats) noexcept {
  return (y + 1.0) * 0.5 * (stats.max - stats.min) + stats.min;
}

Segment normalize(const Segment& seg, const NormStats& stats, std::size_t* clamped) {
  require(stats.max > stats.min, ErrorCode::DegenerateStats, "normalization stats have max == min");
  require(seg.modality == stats.modality, ErrorCode::Usage, "segment and stats modality differ");
  Segment out = seg;
  for (auto& v : out.values) {
    const double y = normalize_value(v, stats);
    const double c = std::clamp(y, -1.0, 1.0);
    if (c != y && clamped) ++*clamped;
    v = c;
  }
  return out;
}

Segment denormalize(const Segment& seg, const NormStats& stats) {
  require(stats.max > stats.min, ErrorCode::DegenerateStats, "normalization stats have max == min");
  require(seg.modality == stats.modality, ErrorCode::Usage, "segment and stats modality differ");
  Segment out = seg;
  for (auto& v : out.values) v = denormalize_value(v, stats);
  return out;
}

}  // namespace ddib
