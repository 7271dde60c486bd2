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
#include <memory>
#include <vector>

#include "diffusion/nn/layers.hpp"

namespace ddib::nn {

struct UNetConfig {
  int base_width = 64;
  std::vector<int> mults{1, 2, 4};
  int res_blocks = 2;
  std::vector<int> attention_lengths{80};  // sequence lengths that get self-attention
  int groups = 8;
  int length = 320;

  void validate() const;
  bool operator==(const UNetConfig&) const = default;
};

// 1-D U-Net F(x; c_noise) over single-channel signals with a sinusoidal
// noise-level embedding. Activations are [channels][batch * length].
template <typename T>
class UNet {
 public:
  struct Tape {
    std::vector<typename Conv1d<T>::Cache> conv;
    std::vector<typename ResBlock<T>::Cache> res;
    std::vector<typename Attention<T>::Cache> attn;
    typename GroupNorm<T>::Cache out_norm;
    typename Linear<T>::Cache map0, map1;
    std::vector<T> map0_out, map1_out;  // pre-SiLU
    std::vector<T> out_pre;
    std::vector<int> concat_main;  // channels of the main path before each concat
    std::vector<Act<T>> d_skip;
    int batch = 0;
  };

  explicit UNet(UNetConfig cfg);
  ~UNet();
  UNet(UNet&&) noexcept;
  UNet& operator=(UNet&&) noexcept;

  const UNetConfig& config() const noexcept { return cfg_; }
  ParamSet<T>& params() noexcept { return params_; }
  const ParamSet<T>& params() const noexcept { return params_; }

  // zero_outputs zeroes the last layer of every residual branch and the
  // output conv.
  void init(std::uint64_t seed, bool zero_outputs = true);

  // x holds `batch` rows of config().length samples; c_noise has one entry
  // per row. Keeps intermediates in `tape` when it is non-null.
  std::vector<T> forward(const std::vector<T>& x, int batch, const std::vector<T>& c_noise,
                         Tape* tape) const;
  // Accumulates parameter gradients for dL/d(output) = dy.
  void backward(const std::vector<T>& dy, Tape& tape);

  std::unique_ptr<Tape> make_tape() const;

 private:
  enum class OpKind { Conv, Res, Attn, Push, Concat, Upsample, OutAct };
  struct Op {
    OpKind kind;
    int index;
  };

  UNetConfig cfg_;
  ParamSet<T> params_;
  Linear<T> map0_, map1_;
  std::vector<Conv1d<T>> convs_;
  std::vector<ResBlock<T>> res_;
  std::vector<Attention<T>> attn_;
  GroupNorm<T> out_norm_;
  std::vector<Op> plan_;
  std::vector<int> skip_channels_;
  int out_conv_ = -1;
};

extern template class UNet<float>;
extern template class UNet<double>;

}  // namespace ddib::nn
