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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "preprocess/pipeline.hpp"

namespace ddib {

enum class EventKind { DeltaBrush, FrontalTransient, Oscillatory };

const char* to_string(EventKind k) noexcept;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SynthConfig {
  Modality modality = Modality::Eeg;
  std::size_t n_recordings = 10;
  double duration = 300.0;  // seconds
  double rate = 256.0;
  std::size_t n_channels = 10;
  Range burst_len{5.0, 12.0};
  Range ibi_len{6.0, 18.0};
  // Background amplitude spectrum falls as f^(-tilt / 2).
  double spectral_tilt = 2.0;
  // Weights for delta-brush-like, frontal-transient-like, plain oscillatory.
  std::array<double, 3> event_mix{0.6, 0.3, 0.1};
  double amplitude_scale = 100.0;  // uV or fT; bound on |sample|
  // RMS of burst events over RMS of the quiescent background.
  double burst_to_background = 6.0;
  // Isolated high-amplitude spikes per minute (0 disables).
  double artifact_rate = 0.0;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

SynthConfig default_synth_config(Modality m);

struct LabeledBurst {
  Interval interval;
  EventKind label = EventKind::DeltaBrush;
};

struct GroundTruth {
  std::string recording_id;
  std::vector<LabeledBurst> bursts;

  BurstAnnotation annotation() const;
};

std::string recording_id(Modality m, std::size_t index);

// Deterministic in (cfg.rng_seed, index).
std::pair<Recording, GroundTruth> generate_recording(const SynthConfig& cfg, std::size_t index);

// Ground-truth text records: "recording\tstart\tend\tlabel" per line.
void write_ground_truth(const std::vector<GroundTruth>& truth, const std::filesystem::path& file);
std::vector<GroundTruth> read_ground_truth(const std::filesystem::path& file);

struct DetectionScore {
  std::size_t true_positives = 0;
  std::size_t detected = 0;
  std::size_t truth = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// One-to-one greedy matching of detected and true intervals by
// intersection-over-union; a pair counts when IoU >= min_iou.
DetectionScore score_bursts(const std::vector<Interval>& detected, const std::vector<Interval>& truth,
                            double min_iou = 0.5);
DetectionScore accumulate(const DetectionScore& a, const DetectionScore& b);

struct ModalityData {
  std::vector<Recording> recordings;
  std::vector<GroundTruth> truth;
  PreprocessResult processed;
  DetectionScore detection;
};

struct SynthDataset {
  ModalityData eeg;
  ModalityData fmeg;
};

// Generates both modalities and runs them through preprocessing.
SynthDataset generate_dataset(const SynthConfig& eeg, const SynthConfig& fmeg, const PreprocessOptions& opts);

// Writes raw recordings to out/raw/<modality>/<id>/ and ground truth to
// out/raw/ground_truth.tsv.
void write_raw(const std::vector<Recording>& recs, const std::filesystem::path& dir);

}  // namespace ddib
