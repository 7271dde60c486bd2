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

#include <filesystem>
#include <optional>
#include <vector>

#include "preprocess/normalize.hpp"

namespace ddib {

// On-disk segment set: manifest.json (modality, count, provenance records),
// segments.f32 (count x 320 packed little-endian float32) and, for
// normalized sets, a norm_stats.json sidecar.
struct SegmentDataset {
  Modality modality = Modality::Eeg;
  bool normalized = false;
  std::optional<NormStats> stats;
  std::vector<Segment> segments;
};

void save_dataset(const SegmentDataset& ds, const std::filesystem::path& dir);
SegmentDataset load_dataset(const std::filesystem::path& dir);

void save_norm_stats(const NormStats& st, const std::filesystem::path& file);
NormStats load_norm_stats(const std::filesystem::path& file);

}  // namespace ddib
