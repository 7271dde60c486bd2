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

#include <memory>
#include <vector>

#include "diffusion/denoiser.hpp"
#include "diffusion/edm.hpp"
#include "diffusion/nn/unet.hpp"

namespace ddib {

// D(x; sigma) = c_skip x + c_out F(c_in x, c_noise) with a float U-Net F.
// sigma is clamped to sigma_min so c_noise stays finite.
class NetDenoiser final : public Denoiser {
 public:
  NetDenoiser(const nn::UNetConfig& arch, const EdmConfig& edm, Modality modality,
              const std::vector<float>& params);

  std::size_t dim() const noexcept override;
  std::optional<Modality> modality() const noexcept override { return modality_; }
  void denoise(std::span<const double> x, std::size_t batch, double sigma,
               std::span<double> out) const override;
  using Denoiser::denoise;

  const EdmConfig& edm() const noexcept { return edm_; }
  const nn::UNet<float>& net() const noexcept { return net_; }

  // Rows per network pass; larger batches are split.
  static constexpr std::size_t kMaxChunk = 64;

 private:
  nn::UNet<float> net_;
  EdmConfig edm_;
  Modality modality_;
};

}  // namespace ddib
