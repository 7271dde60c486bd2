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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "diffusion/denoiser.hpp"
#include "diffusion/edm.hpp"
#include "diffusion/nn/unet.hpp"
#include "preprocess/dataset.hpp"

namespace ddib {

struct TrainConfig {
  std::uint64_t iterations = 30000;
  std::size_t batch_size = 32;
  double learning_rate = 1e-4;
  std::uint64_t lr_rampup = 0;  // linear warm-up iterations
  bool lr_cosine = false;       // cosine decay to zero after the warm-up
  double ema_decay = 0.999;
  std::uint64_t seed = 0;
  bool sigma_data_from_data = false;  // replace sigma_data by the dataset std
  std::uint64_t log_every = 100;

  void validate() const;
};

// 30000 iterations at batch 32.
TrainConfig paper_train_config();

// One training-noise draw: sigma ~ exp(p_mean + p_std * N(0,1)) per row and
// unit Gaussian noise for every element.
struct NoiseDraw {
  std::vector<double> sigma;
  std::vector<double> noise;
};

NoiseDraw draw_noise(std::size_t batch, std::size_t length, const EdmConfig& edm, CounterRng& rng);

// mean over rows and samples of lambda(sigma) (D(x + sigma n; sigma) - x)^2.
double training_loss(const Denoiser& d, std::span<const double> clean, std::size_t batch,
                     const NoiseDraw& noise, const EdmConfig& edm);
// Draws noise from rng first.
double training_loss(const Denoiser& d, std::span<const double> clean, std::size_t batch,
                     const EdmConfig& edm, CounterRng& rng);

// Same loss for a raw network; accumulates d(loss)/d(params) into the
// network's gradient buffer.
template <typename T>
double loss_and_grad(nn::UNet<T>& net, std::span<const double> clean, std::size_t batch,
                     const NoiseDraw& noise, const EdmConfig& edm, typename nn::UNet<T>::Tape& tape);

template <typename T>
double network_loss(const nn::UNet<T>& net, std::span<const double> clean, std::size_t batch,
                    const NoiseDraw& noise, const EdmConfig& edm);

struct TrainResult {
  std::vector<float> ema_params;
  std::vector<float> raw_params;
  std::vector<double> loss_trace;  // one entry per iteration
  EdmConfig edm;                   // with the sigma_data actually used
  double final_loss = 0.0;
  double seconds = 0.0;
};

using TrainProgress = std::function<void(std::uint64_t iteration, double loss)>;

// Adam on float parameters with an exponential moving average kept for
// inference. Throws Numeric with the iteration and recent losses when the
// loss turns non-finite.
TrainResult train(const SegmentDataset& data, const EdmConfig& edm, const nn::UNetConfig& arch,
                  const TrainConfig& cfg, const TrainProgress& progress = {});

// Mean of the first and last `window` entries.
double smoothed_head(const std::vector<double>& trace, std::size_t window);
double smoothed_tail(const std::vector<double>& trace, std::size_t window);

}  // namespace ddib
