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

#include "diffusion/nn/unet.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace ddib::nn {

namespace {

constexpr double kMaxPositions = 10000.0;

template <typename T>
std::vector<T> positional_embedding(const std::vector<T>& c_noise, int channels) {
  const int half = channels / 2;
  const int batch = static_cast<int>(c_noise.size());
  std::vector<T> out(static_cast<std::size_t>(channels) * batch);
  for (int i = 0; i < half; ++i) {
    const double f = std::pow(1.0 / kMaxPositions, half > 1 ? static_cast<double>(i) / (half - 1) : 0.0);
    for (int b = 0; b < batch; ++b) {
      const double a = static_cast<double>(c_noise[b]) * f;
      out[static_cast<std::size_t>(i) * batch + b] = static_cast<T>(std::cos(a));
      out[static_cast<std::size_t>(i + half) * batch + b] = static_cast<T>(std::sin(a));
    }
  }
  return out;
}

}  // namespace

void UNetConfig::validate() const {
  require(base_width > 0 && base_width % 2 == 0, ErrorCode::Config, "base_width must be positive and even");
  require(!mults.empty(), ErrorCode::Config, "channel multipliers must not be empty");
  require(res_blocks >= 1, ErrorCode::Config, "res_blocks must be >= 1");
  require(groups >= 1, ErrorCode::Config, "groups must be >= 1");
  for (int m : mults)
    require(m > 0 && (base_width * m) % groups == 0, ErrorCode::Config,
            "every level width must be divisible by the norm groups");
  const int down = 1 << (mults.size() - 1);
  require(length > 0 && length % down == 0, ErrorCode::Config,
          "signal length must be divisible by 2^(levels-1)");
}


template <typename T>
UNet<T>::UNet(UNetConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const int base = cfg_.base_width;
  const int emb = 4 * base;
  map0_ = Linear<T>(params_, "map_noise.0", base, emb);
  map1_ = Linear<T>(params_, "map_noise.1", emb, emb);

  auto conv = [&](const std::string& name, int cin, int cout, int k, int stride) {
    convs_.emplace_back(params_, name, cin, cout, k, stride);
    plan_.push_back({OpKind::Conv, static_cast<int>(convs_.size()) - 1});
  };
  auto res = [&](const std::string& name, int cin, int cout) {
    res_.emplace_back(params_, name, cin, cout, emb, cfg_.groups);
    plan_.push_back({OpKind::Res, static_cast<int>(res_.size()) - 1});
  };
  auto attn = [&](const std::string& name, int ch) {
    attn_.emplace_back(params_, name, ch, cfg_.groups);
    plan_.push_back({OpKind::Attn, static_cast<int>(attn_.size()) - 1});
  };
  auto push = [&](int ch) {
    skip_channels_.push_back(ch);
    plan_.push_back({OpKind::Push, static_cast<int>(skip_channels_.size()) - 1});
  };
  auto wants_attn = [&](int len) {
    return std::find(cfg_.attention_lengths.begin(), cfg_.attention_lengths.end(), len) !=
           cfg_.attention_lengths.end();
  };

  const int levels = static_cast<int>(cfg_.mults.size());
  conv("enc.in", 1, base, 3, 1);
  push(base);
  int ch = base;
  int len = cfg_.length;
  for (int l = 0; l < levels; ++l) {
    const int out = base * cfg_.mults[l];
    for (int r = 0; r < cfg_.res_blocks; ++r) {
      const std::string name = "enc." + std::to_string(l) + ".block" + std::to_string(r);
      res(name, ch, out);
      ch = out;
      if (wants_attn(len)) attn(name + ".attn", ch);
      push(ch);
    }
    if (l + 1 < levels) {
      conv("enc." + std::to_string(l) + ".down", ch, ch, 3, 2);
      len /= 2;
      push(ch);
    }
  }
  res("mid.block0", ch, ch);
  attn("mid.attn", ch);
  res("mid.block1", ch, ch);

  int next_skip = static_cast<int>(skip_channels_.size()) - 1;
  for (int l = levels - 1; l >= 0; --l) {
    const int out = base * cfg_.mults[l];
    for (int r = 0; r <= cfg_.res_blocks; ++r) {
      const std::string name = "dec." + std::to_string(l) + ".block" + std::to_string(r);
      const int sc = skip_channels_[next_skip];
      plan_.push_back({OpKind::Concat, next_skip--});
      res(name, ch + sc, out);
      ch = out;
      if (wants_attn(len)) attn(name + ".attn", ch);
    }
    if (l > 0) {
      plan_.push_back({OpKind::Upsample, 0});
      conv("dec." + std::to_string(l) + ".up", ch, ch, 3, 1);
      len *= 2;
    }
  }
  out_norm_ = GroupNorm<T>(params_, "out.norm", ch, cfg_.groups);
  plan_.push_back({OpKind::OutAct, 0});
  conv("out.conv", ch, 1, 3, 1);
  out_conv_ = static_cast<int>(convs_.size()) - 1;
}

template <typename T>
UNet<T>::~UNet() = default;
template <typename T>
UNet<T>::UNet(UNet&&) noexcept = default;
template <typename T>
UNet<T>& UNet<T>::operator=(UNet&&) noexcept = default;

template <typename T>
std::unique_ptr<typename UNet<T>::Tape> UNet<T>::make_tape() const {
  auto t = std::make_unique<Tape>();
  t->conv.resize(convs_.size());
  t->res.resize(res_.size());
  t->attn.resize(attn_.size());
  return t;
}

template <typename T>
void UNet<T>::init(std::uint64_t seed, bool zero_outputs) {
  CounterRng rng(seed, 0x4E4E);
  params_.values().assign(params_.size(), T(0));
  map0_.init(params_, rng);
  map1_.init(params_, rng);
  for (const auto& c : convs_) c.init(params_, rng);
  for (const auto& r : res_) r.init(params_, rng, zero_outputs);
  for (const auto& a : attn_) a.init(params_, rng, zero_outputs);
  out_norm_.init(params_);
  if (zero_outputs) convs_[out_conv_].zero(params_);
}

template <typename T>
std::vector<T> UNet<T>::forward(const std::vector<T>& x, int batch, const std::vector<T>& c_noise,
                                Tape* tape) const {
  require(batch > 0 && x.size() == static_cast<std::size_t>(batch) * cfg_.length, ErrorCode::InvalidArgument,
          "network input size does not match batch * length");
  require(c_noise.size() == static_cast<std::size_t>(batch), ErrorCode::InvalidArgument,
          "one noise label per row is required");
  if (tape) {
    if (tape->conv.size() != convs_.size()) *tape = std::move(*make_tape());
    tape->batch = batch;
    tape->concat_main.assign(skip_channels_.size(), 0);
  }

  std::vector<T> emb = positional_embedding(c_noise, cfg_.base_width);
  emb = map0_.forward(params_, emb, batch, tape ? &tape->map0 : nullptr);
  if (tape) tape->map0_out = emb;
  silu_inplace(emb);
  emb = map1_.forward(params_, emb, batch, tape ? &tape->map1 : nullptr);
  if (tape) tape->map1_out = emb;
  silu_inplace(emb);

  Act<T> h(1, batch, cfg_.length);
  h.v = x;
  std::vector<Act<T>> skips(skip_channels_.size());
  for (const Op& op : plan_) {
    switch (op.kind) {
      case OpKind::Conv:
        h = convs_[op.index].forward(params_, h, tape ? &tape->conv[op.index] : nullptr);
        break;
      case OpKind::Res:
        h = res_[op.index].forward(params_, h, emb, tape ? &tape->res[op.index] : nullptr);
        break;
      case OpKind::Attn:
        h = attn_[op.index].forward(params_, h, tape ? &tape->attn[op.index] : nullptr);
        break;
      case OpKind::Push:
        skips[op.index] = h;
        break;
      case OpKind::Concat: {
        Act<T>& s = skips[op.index];
        if (tape) tape->concat_main[op.index] = h.channels;
        h.v.insert(h.v.end(), s.v.begin(), s.v.end());
        h.channels += s.channels;
        s = Act<T>();
        break;
      }
      case OpKind::Upsample:
        h = upsample_nearest2(h);
        break;
      case OpKind::OutAct:
        h = out_norm_.forward(params_, h, tape ? &tape->out_norm : nullptr);
        if (tape) tape->out_pre = h.v;
        silu_inplace(h.v);
        break;
    }
  }
  return std::move(h.v);
}

template <typename T>
void UNet<T>::backward(const std::vector<T>& dy, Tape& tape) {
  const int batch = tape.batch;
  require(dy.size() == static_cast<std::size_t>(batch) * cfg_.length, ErrorCode::InvalidArgument,
          "gradient size does not match the forward pass");
  const int emb_dim = 4 * cfg_.base_width;
  std::vector<T> d_emb(static_cast<std::size_t>(emb_dim) * batch, T(0));
  tape.d_skip.assign(skip_channels_.size(), Act<T>());

  Act<T> d(1, batch, cfg_.length);
  d.v = dy;
  for (auto it = plan_.rbegin(); it != plan_.rend(); ++it) {
    const Op& op = *it;
    switch (op.kind) {
      case OpKind::Conv:
        d = convs_[op.index].backward(params_, d, tape.conv[op.index]);
        break;
      case OpKind::Res:
        d = res_[op.index].backward(params_, d, tape.res[op.index], d_emb);
        break;
      case OpKind::Attn:
        d = attn_[op.index].backward(params_, d, tape.attn[op.index]);
        break;
      case OpKind::Push: {
        const Act<T>& ds = tape.d_skip[op.index];
        for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] += ds.v[i];
        tape.d_skip[op.index] = Act<T>();
        break;
      }
      case OpKind::Concat: {
        const int main = tape.concat_main[op.index];
        const std::size_t split = static_cast<std::size_t>(main) * d.cols();
        Act<T> ds(d.channels - main, d.batch, d.len);
        std::copy(d.v.begin() + static_cast<std::ptrdiff_t>(split), d.v.end(), ds.v.begin());
        d.v.resize(split);
        d.channels = main;
        tape.d_skip[op.index] = std::move(ds);
        break;
      }
      case OpKind::Upsample:
        d = upsample_nearest2_backward(d);
        break;
      case OpKind::OutAct:
        silu_backward(d.v, tape.out_pre);
        d = out_norm_.backward(params_, d, tape.out_norm);
        break;
    }
  }

  silu_backward(d_emb, tape.map1_out);
  d_emb = map1_.backward(params_, d_emb, tape.map1);
  silu_backward(d_emb, tape.map0_out);
  map0_.backward(params_, d_emb, tape.map0);
}

template class UNet<float>;
template class UNet<double>;

}  // namespace ddib::nn
