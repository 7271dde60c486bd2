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

#include "preprocess/artifacts.hpp"

#include <algorithm>
#include <cmath>

namespace ddib {

double default_artifact_threshold(Modality m) noexcept {
  return m == Modality::Eeg ? 500.0 : 2000.0;
}

Recording reject_amplitude_artifacts(const Recording& rec, double threshold, double margin) {
  require(threshold > 0, ErrorCode::InvalidArgument, "artifact threshold must be positive");
  Recording out = rec;
  const double dt = 1.0 / rec.rate;
  std::vector<Interval> added;
  for (std::size_t i = 0; i < rec.n_samples(); ++i) {
    bool hit = false;
    for (const auto& ch : rec.samples) {
      if (std::abs(ch[i]) > threshold) {
        hit = true;
        break;
      }
    }
    if (!hit) continue;
    const double t = static_cast<double>(i) * dt;
    added.push_back({t - margin, t + dt + margin});
  }
  if (added.empty()) return out;
  out.masked.insert(out.masked.end(), added.begin(), added.end());
  out.validate();
  return out;
}

}  // namespace ddib
