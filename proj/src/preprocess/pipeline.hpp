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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "preprocess/bursts.hpp"
#include "preprocess/dataset.hpp"

namespace ddib {

struct PreprocessOptions {
  double band_lo = 0.5;
  double band_hi = 20.0;
  std::optional<double> artifact_threshold;  // per-modality default when unset
  double artifact_margin = 0.5;
  double analysis_rate = 256.0;
  double nleo_multiplier = 3.0;
  BurstDetectionParams detection;
  SegmentationParams segmentation;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  // Compute NormStats on the training split only instead of all segments.
  bool train_only_stats = false;
};

struct RecordingOutcome {
  std::string id;
  BurstAnnotation bursts;
  std::vector<double> thresholds;
  std::vector<Interval> masked;
  std::vector<Segment> segments;  // raw amplitudes
};

// band-pass -> amplitude artifacts -> 256 Hz NLEO burst detection ->
// 64 Hz segmentation of the band-passed signal.
RecordingOutcome preprocess_recording(const Recording& rec, const PreprocessOptions& opts);

struct RecordingSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// Seeded shuffle of recording ids, then round(fraction * n) go to train
// (at least one recording on each side when n >= 2).
RecordingSplit split_recordings(std::vector<std::string> ids, double train_fraction, std::uint64_t seed);

struct PreprocessResult {
  Modality modality = Modality::Eeg;
  std::vector<RecordingOutcome> outcomes;  // segments moved into the datasets
  RecordingSplit split;
  NormStats stats;
  SegmentDataset train;
  SegmentDataset test;
  std::size_t clamped = 0;
};

PreprocessResult preprocess_recordings(const std::vector<Recording>& recs, Modality modality,
                                       const PreprocessOptions& opts);

// Layout: out/{train,test}/ datasets, out/norm_stats.json, out/bursts.tsv,
// out/thresholds.tsv, out/split.json.
void write_preprocess_result(const PreprocessResult& result, const std::filesystem::path& out);

}  // namespace ddib
