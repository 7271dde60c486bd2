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

#include "bridge/solver.hpp"
#include "diffusion/edm.hpp"
#include "diffusion/nn/unet.hpp"
#include "diffusion/train.hpp"
#include "preprocess/pipeline.hpp"
#include "synth/synth.hpp"

namespace ddib {

enum class Stage { Synth, Preprocess, TrainEeg, TrainFmeg, Translate, Evaluate };
inline constexpr Stage kAllStages[] = {Stage::Synth,     Stage::Preprocess, Stage::TrainEeg,
                                       Stage::TrainFmeg, Stage::Translate,  Stage::Evaluate};
const char* to_string(Stage s) noexcept;
std::optional<Stage> parse_stage(const std::string& s);

struct BridgeConfig {
  std::string preset = "paper-heun";  // empty selects solver + steps
  SolverKind solver = SolverKind::Heun;
  std::size_t steps = 30;
  bool cycle = true;
  std::size_t max_segments = 0;  // per direction; 0 keeps every test segment
  std::size_t chunk = 64;
  std::optional<std::filesystem::path> eeg_checkpoint;  // default: workspace checkpoints
  std::optional<std::filesystem::path> fmeg_checkpoint;

  SolverSpec solver_spec(const EdmConfig& edm) const;
};

// Every stage's settings plus the global seed. Per-stage seeds derive from
// the global one unless set explicitly.
struct PipelineConfig {
  std::string preset = "desk";
  std::filesystem::path workspace = "workspace";
  std::uint64_t seed = 1;
  std::vector<Stage> stages{std::begin(kAllStages), std::end(kAllStages)};

  SynthConfig synth_eeg;
  SynthConfig synth_fmeg;
  PreprocessOptions preprocess;
  EdmConfig edm;
  nn::UNetConfig model;
  TrainConfig train;
  BridgeConfig bridge;

  void validate() const;
  bool wants(Stage s) const;
};

// Defaults sized to finish on one laptop core.
PipelineConfig desk_config();
// Network defaults and 30000 iterations at batch 32.
PipelineConfig paper_config();
PipelineConfig preset_config(const std::string& name);

// INI file with [run] [synth] [preprocess] [edm] [model] [train] [bridge]
// sections. "preset" in [run] picks the base. Overrides are
// "section.key=value" strings applied after the file.
PipelineConfig load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides = {});
PipelineConfig config_from_string(const std::string& ini, const std::vector<std::string>& overrides = {});

// Canonical INI text with every key; loading it reproduces the config.
std::string to_ini(const PipelineConfig& cfg);

// Canonical text of the settings that feed one stage, used for resume keys.
std::string stage_fingerprint(const PipelineConfig& cfg, Stage s);

}  // namespace ddib
