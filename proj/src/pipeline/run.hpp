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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bridge/trace_io.hpp"
#include "diffusion/checkpoint.hpp"
#include "pipeline/config.hpp"
#include "synth/synth.hpp"

namespace ddib {

// Fixed workspace layout.
struct Workspace {
  std::filesystem::path root;

  std::filesystem::path raw() const { return root / "raw"; }
  std::filesystem::path segments() const { return root / "segments"; }
  std::filesystem::path checkpoints() const { return root / "checkpoints"; }
  std::filesystem::path traces() const { return root / "traces"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path manifest() const { return root / "run_manifest.json"; }
  std::filesystem::path lock() const { return root / ".lock"; }
  std::filesystem::path checkpoint(Modality m) const { return checkpoints() / (std::string(to_string(m)) + ".ckpt"); }
  std::filesystem::path trace_dir(Modality src) const {
    return traces() / (std::string(to_string(src)) + "_to_" + to_string(other(src)));
  }
};

// Exclusive advisory lock on a workspace; released on destruction. Throws
// Usage when another process holds it.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const std::filesystem::path& file);
  ~WorkspaceLock();
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  int fd_ = -1;
};

// ---- individual stages (also behind the stand-alone commands) ----

// raw/<modality>/<id>/ recordings plus raw/ground_truth_<modality>.tsv.
void synth_stage(const SynthConfig& eeg, const SynthConfig& fmeg, const std::filesystem::path& raw_dir);

struct PreprocessSummary {
  std::size_t recordings = 0;
  std::size_t train_segments = 0;
  std::size_t test_segments = 0;
  std::size_t clamped = 0;
  std::optional<DetectionScore> detection;  // when ground truth is present
};

// Reads recordings from in_dir/<modality>/ (or in_dir itself) and writes the
// preprocess result to out_dir. Scores bursts against
// in_dir/ground_truth_<modality>.tsv when it exists.
PreprocessSummary preprocess_stage(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                                   Modality modality, const PreprocessOptions& opts);

// data_dir is a dataset directory or a preprocess output holding train/.
Checkpoint train_stage(const std::filesystem::path& data_dir, Modality modality, const EdmConfig& edm,
                       const nn::UNetConfig& arch, const TrainConfig& cfg, const std::filesystem::path& out_file);

struct TranslateOptions {
  std::filesystem::path src_checkpoint;
  std::filesystem::path tgt_checkpoint;
  std::filesystem::path data;  // dataset dir, or a preprocess output holding test/
  SolverSpec spec;
  bool cycle = false;
  std::size_t max_segments = 0;
  std::size_t chunk = 64;
};

TraceSet translate_stage(const TranslateOptions& opts, const std::filesystem::path& out_dir);

// Evenly spaced subset of at most n segments (all when n == 0).
std::vector<Segment> pick_segments(const std::vector<Segment>& all, std::size_t n);

// ---- orchestration ----

struct StageRecord {
  std::string stage;
  std::string status;  // ok | skipped | failed | not-requested
  std::string key;
  std::map<std::string, std::string> outputs;  // relative path -> sha256
  double seconds = 0.0;        // spent in this invocation
  double build_seconds = 0.0;  // spent producing the current outputs, carried over when skipped
  std::string message;
};

struct RunManifest {
  std::string config;
  std::vector<StageRecord> stages;
  bool ok = true;

  const StageRecord* find(const std::string& stage) const;
  // stage -> outputs, without timings or statuses.
  std::string checksum_digest() const;
};

// Runs the selected stages in dependency order, skipping stages whose key
// and output checksums match the previous manifest. Writes
// run_manifest.json; throws after recording a failed stage.
RunManifest run_pipeline(const PipelineConfig& cfg);

}  // namespace ddib
