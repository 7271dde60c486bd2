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
#include <string>
#include <vector>

#include "diffusion/nn/tensor.hpp"

namespace ddib {
class CounterRng;
}

namespace ddib::nn {

// Parameter initialisation: U(-scale / sqrt(fan_in), scale / sqrt(fan_in)).
template <typename T>
void init_uniform(ParamSet<T>& p, std::size_t off, std::size_t count, int fan_in, double scale,
                  CounterRng& rng);

template <typename T>
class Conv1d {
 public:
  struct Cache {
    std::vector<T> col;
    int batch = 0;
    int len_in = 0;
  };

  Conv1d() = default;
  Conv1d(ParamSet<T>& p, const std::string& name, int cin, int cout, int kernel, int stride = 1);

  Act<T> forward(const ParamSet<T>& p, const Act<T>& x, Cache* cache) const;
  Act<T> backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache) const;
  void init(ParamSet<T>& p, CounterRng& rng, double scale = 1.0) const;
  void zero(ParamSet<T>& p) const;

  int cin() const noexcept { return cin_; }
  int cout() const noexcept { return cout_; }

 private:
  int out_len(int len) const noexcept { return (len + 2 * (kernel_ / 2) - kernel_) / stride_ + 1; }

  int cin_ = 0, cout_ = 0, kernel_ = 1, stride_ = 1;
  std::size_t w_ = 0, b_ = 0;
};

template <typename T>
class GroupNorm {
 public:
  struct Cache {
    std::vector<T> xhat;
    std::vector<T> inv_std;  // per (batch, group)
  };

  GroupNorm() = default;
  GroupNorm(ParamSet<T>& p, const std::string& name, int channels, int groups);

  Act<T> forward(const ParamSet<T>& p, const Act<T>& x, Cache* cache) const;
  Act<T> backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache) const;
  void init(ParamSet<T>& p) const;

 private:
  int channels_ = 0, groups_ = 1;
  std::size_t gamma_ = 0, beta_ = 0;
};

// Dense layer over feature-major activations [in][batch].
template <typename T>
class Linear {
 public:
  struct Cache {
    std::vector<T> x;
    int batch = 0;
  };

  Linear() = default;
  Linear(ParamSet<T>& p, const std::string& name, int in, int out);

  std::vector<T> forward(const ParamSet<T>& p, const std::vector<T>& x, int batch, Cache* cache) const;
  std::vector<T> backward(ParamSet<T>& p, const std::vector<T>& dy, const Cache& cache) const;
  void init(ParamSet<T>& p, CounterRng& rng, double scale = 1.0) const;

 private:
  int in_ = 0, out_ = 0;
  std::size_t w_ = 0, b_ = 0;
};

template <typename T>
void silu_inplace(std::vector<T>& v);
// dy * silu'(x), written into dy.
template <typename T>
void silu_backward(std::vector<T>& dy, const std::vector<T>& x);

template <typename T>
class ResBlock {
 public:
  struct Cache {
    typename GroupNorm<T>::Cache gn1, gn2;
    typename Conv1d<T>::Cache conv1, conv2, skip;
    typename Linear<T>::Cache emb;
    std::vector<T> pre1, pre2;  // SiLU inputs
  };

  ResBlock() = default;
  ResBlock(ParamSet<T>& p, const std::string& name, int cin, int cout, int emb_dim, int groups);

  // emb_act is SiLU(time embedding), laid out [emb_dim][batch].
  Act<T> forward(const ParamSet<T>& p, const Act<T>& x, const std::vector<T>& emb_act, Cache* cache) const;
  // Returns dx and accumulates d(emb_act) into d_emb.
  Act<T> backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache, std::vector<T>& d_emb) const;
  void init(ParamSet<T>& p, CounterRng& rng, bool zero_residual) const;

  int cout() const noexcept { return cout_; }

 private:
  int cin_ = 0, cout_ = 0;
  GroupNorm<T> gn1_, gn2_;
  Conv1d<T> conv1_, conv2_, skip_;
  Linear<T> emb_;
  bool has_skip_ = false;
};

// Single-head self-attention over positions with a residual connection.
template <typename T>
class Attention {
 public:
  struct Cache {
    typename GroupNorm<T>::Cache gn;
    typename Conv1d<T>::Cache qkv, proj;
    Act<T> qkv_out;
    std::vector<T> probs;  // batch x len x len
  };

  Attention() = default;
  Attention(ParamSet<T>& p, const std::string& name, int channels, int groups);

  Act<T> forward(const ParamSet<T>& p, const Act<T>& x, Cache* cache) const;
  Act<T> backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache) const;
  void init(ParamSet<T>& p, CounterRng& rng, bool zero_residual) const;

 private:
  int channels_ = 0;
  GroupNorm<T> gn_;
  Conv1d<T> qkv_, proj_;
};

template <typename T>
Act<T> upsample_nearest2(const Act<T>& x);
template <typename T>
Act<T> upsample_nearest2_backward(const Act<T>& dy);

}  // namespace ddib::nn
