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
#include <filesystem>
#include <string>
#include <vector>

#include "common/modality.hpp"

namespace ddib {

// Half-open time interval [start, end) in seconds.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - start; }
  bool contains(double t) const noexcept { return t >= start && t < end; }
  bool overlaps(const Interval& o) const noexcept { return start < o.end && o.start < end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorts and merges overlapping or touching intervals; drops empty ones.
std::vector<Interval> canonicalize(std::vector<Interval> intervals);

// Merges neighbours whose gap is strictly shorter than min_gap.
std::vector<Interval> merge_short_gaps(std::vector<Interval> intervals, double min_gap);

bool any_overlap(const std::vector<Interval>& sorted, const Interval& probe);

// Multi-channel raw signal. Samples are in uV (EEG) or fT (fMEG).
struct Recording {
  std::string id;
  Modality modality = Modality::Eeg;
  double rate = 0.0;
  std::vector<std::string> channels;
  std::vector<std::vector<double>> samples;
  std::vector<Interval> masked;

  std::size_t n_channels() const noexcept { return samples.size(); }
  std::size_t n_samples() const noexcept { return samples.empty() ? 0 : samples.front().size(); }
  double duration() const noexcept { return rate > 0 ? static_cast<double>(n_samples()) / rate : 0.0; }

  // Per-sample mask at this recording's rate.
  std::vector<bool> sample_mask() const;

  // Throws InvalidArgument when an invariant is broken. Canonicalizes masks.
  void validate();
};

struct BurstAnnotation {
  std::vector<Interval> intervals;
};

// On-disk container: <dir>/recording.json plus one little-endian float32
// file per channel (<dir>/ch<NN>.f32).
void save_recording(const Recording& rec, const std::filesystem::path& dir);
Recording load_recording(const std::filesystem::path& dir);
// Loads every recording directory below root, sorted by directory name.
std::vector<Recording> load_recordings(const std::filesystem::path& root);

}  // namespace ddib
