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

#include "diffusion/net_denoiser.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace ddib {

NetDenoiser::NetDenoiser(const nn::UNetConfig& arch, const EdmConfig& edm, Modality modality,
                         const std::vector<float>& params)
    : net_(arch), edm_(edm), modality_(modality) {
  edm_.validate();
  require(params.size() == net_.params().size(), ErrorCode::Format,
          "parameter count does not match the architecture");
  net_.params().values() = params;
}

std::size_t NetDenoiser::dim() const noexcept { return static_cast<std::size_t>(net_.config().length); }

void NetDenoiser::denoise(std::span<const double> x, std::size_t batch, double sigma,
                          std::span<double> out) const {
  const std::size_t len = dim();
  require(x.size() == batch * len && out.size() == x.size(), ErrorCode::InvalidArgument,
          "denoiser input must hold batch rows of the network length");
  for (double v : x) require(std::isfinite(v), ErrorCode::Numeric, "non-finite denoiser input");
  const double s = std::max(sigma, edm_.sigma_min);
  const Preconditioning pc = precondition(s, edm_.sigma_data);

  for (std::size_t b0 = 0; b0 < batch; b0 += kMaxChunk) {
    const std::size_t nb = std::min(kMaxChunk, batch - b0);
    std::vector<float> in(nb * len);
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = static_cast<float>(pc.c_in * x[b0 * len + i]);
    const std::vector<float> labels(nb, static_cast<float>(pc.c_noise));
    const auto f = net_.forward(in, static_cast<int>(nb), labels, nullptr);
    for (std::size_t i = 0; i < f.size(); ++i)
      out[b0 * len + i] = pc.c_skip * x[b0 * len + i] + pc.c_out * static_cast<double>(f[i]);
  }
}

}  // namespace ddib
