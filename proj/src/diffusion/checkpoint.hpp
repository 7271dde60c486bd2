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
#include <memory>
#include <optional>
#include <vector>

#include "diffusion/edm.hpp"
#include "diffusion/net_denoiser.hpp"
#include "diffusion/nn/unet.hpp"
#include "preprocess/normalize.hpp"

namespace ddib {

inline constexpr int kCheckpointVersion = 1;

struct TrainingMeta {
  std::uint64_t iterations = 0;
  std::size_t batch_size = 0;
  double learning_rate = 0.0;
  double ema_decay = 0.0;
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  double seconds = 0.0;  // wall time of the run that produced it; not serialized
  std::vector<double> loss_trace;
};

struct Checkpoint {
  int version = kCheckpointVersion;
  Modality modality = Modality::Eeg;
  EdmConfig edm;
  std::optional<NormStats> norm_stats;
  nn::UNetConfig arch;
  TrainingMeta meta;
  std::vector<nn::TensorEntry> tensors;
  std::vector<float> params;  // EMA weights
};

// File layout:
//   "DDIBCKPT\n"
//   "<header byte count>\n"
//   JSON header (version, modality, edm, norm_stats, architecture,
//                training, tensors[name, shape, offset, count])
//   float32 little-endian tensor data in index order
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& file);
// Throws Format on a bad magic, unknown version, or an index that does not
// cover the architecture exactly.
Checkpoint load_checkpoint(const std::filesystem::path& file);

// Tensor index of a freshly constructed network.
std::vector<nn::TensorEntry> tensor_index(const nn::UNetConfig& arch);

std::unique_ptr<NetDenoiser> make_denoiser(const Checkpoint& ckpt);

}  // namespace ddib
