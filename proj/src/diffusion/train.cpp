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

#include "diffusion/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

#include <spdlog/spdlog.h>

#include "common/error.hpp"

namespace ddib {

namespace {

constexpr std::uint64_t kNoiseStream = 0x7A11;
constexpr std::uint64_t kBatchStream = 0xBA7C;

void check_batch(std::span<const double> clean, std::size_t batch, const NoiseDraw& noise) {
  require(batch > 0 && !clean.empty(), ErrorCode::InvalidArgument, "training batch is empty");
  require(clean.size() % batch == 0, ErrorCode::InvalidArgument, "batch rows have unequal length");
  require(noise.sigma.size() == batch && noise.noise.size() == clean.size(), ErrorCode::InvalidArgument,
          "noise draw does not match the batch");
}

struct PreparedBatch {
  std::vector<double> noisy;
  std::vector<Preconditioning> pc;
};

PreparedBatch prepare(std::span<const double> clean, std::size_t batch, const NoiseDraw& noise,
                      const EdmConfig& edm) {
  const std::size_t len = clean.size() / batch;
  PreparedBatch p;
  p.noisy.resize(clean.size());
  p.pc.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    p.pc.push_back(precondition(noise.sigma[b], edm.sigma_data));
    for (std::size_t i = 0; i < len; ++i)
      p.noisy[b * len + i] = clean[b * len + i] + noise.sigma[b] * noise.noise[b * len + i];
  }
  return p;
}

template <typename T>
std::vector<T> net_input(const PreparedBatch& p, std::size_t batch, std::vector<T>& labels) {
  const std::size_t len = p.noisy.size() / batch;
  std::vector<T> in(p.noisy.size());
  labels.resize(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    labels[b] = static_cast<T>(p.pc[b].c_noise);
    for (std::size_t i = 0; i < len; ++i) in[b * len + i] = static_cast<T>(p.pc[b].c_in * p.noisy[b * len + i]);
  }
  return in;
}

}  // namespace

void TrainConfig::validate() const {
  require(iterations > 0, ErrorCode::Config, "iterations must be positive");
  require(batch_size > 0, ErrorCode::Config, "batch size must be positive");
  require(learning_rate > 0 && std::isfinite(learning_rate), ErrorCode::Config, "learning rate must be positive");
  require(ema_decay >= 0 && ema_decay < 1, ErrorCode::Config, "EMA decay must lie in [0, 1)");
}

TrainConfig paper_train_config() {
  TrainConfig c;
  c.iterations = 30000;
  c.batch_size = 32;
  return c;
}

NoiseDraw draw_noise(std::size_t batch, std::size_t length, const EdmConfig& edm, CounterRng& rng) {
  NoiseDraw d;
  d.sigma.resize(batch);
  d.noise.resize(batch * length);
  for (auto& s : d.sigma) s = std::exp(edm.p_mean + edm.p_std * rng.normal());
  for (auto& n : d.noise) n = rng.normal();
  return d;
}

double training_loss(const Denoiser& d, std::span<const double> clean, std::size_t batch, const NoiseDraw& noise,
                     const EdmConfig& edm) {
  check_batch(clean, batch, noise);
  const std::size_t len = clean.size() / batch;
  const PreparedBatch p = prepare(clean, batch, noise, edm);
  double total = 0.0;
  std::vector<double> out(len);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::span<const double> row(p.noisy.data() + b * len, len);
    d.denoise(row, 1, noise.sigma[b], out);
    const double w = loss_weight(noise.sigma[b], edm.sigma_data);
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double e = out[i] - clean[b * len + i];
      acc += e * e;
    }
    total += w * acc;
  }
  return total / static_cast<double>(clean.size());
}

double training_loss(const Denoiser& d, std::span<const double> clean, std::size_t batch, const EdmConfig& edm,
                     CounterRng& rng) {
  require(batch > 0 && !clean.empty(), ErrorCode::InvalidArgument, "training batch is empty");
  return training_loss(d, clean, batch, draw_noise(batch, clean.size() / batch, edm, rng), edm);
}

// With D = c_skip y + c_out F, lambda (D - x)^2 = (F - (x - c_skip y) / c_out)^2.
template <typename T>
double loss_and_grad(nn::UNet<T>& net, std::span<const double> clean, std::size_t batch, const NoiseDraw& noise,
                     const EdmConfig& edm, typename nn::UNet<T>::Tape& tape) {
  check_batch(clean, batch, noise);
  const std::size_t len = clean.size() / batch;
  const PreparedBatch p = prepare(clean, batch, noise, edm);
  std::vector<T> labels;
  const auto in = net_input<T>(p, batch, labels);
  const auto f = net.forward(in, static_cast<int>(batch), labels, &tape);
  const double scale = 1.0 / static_cast<double>(clean.size());
  std::vector<T> df(f.size());
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const auto& pc = p.pc[b];
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t k = b * len + i;
      const double target = (clean[k] - pc.c_skip * p.noisy[k]) / pc.c_out;
      const double e = static_cast<double>(f[k]) - target;
      total += e * e;
      df[k] = static_cast<T>(2.0 * e * scale);
    }
  }
  net.backward(df, tape);
  return total * scale;
}

template <typename T>
double network_loss(const nn::UNet<T>& net, std::span<const double> clean, std::size_t batch,
                    const NoiseDraw& noise, const EdmConfig& edm) {
  check_batch(clean, batch, noise);
  const std::size_t len = clean.size() / batch;
  const PreparedBatch p = prepare(clean, batch, noise, edm);
  std::vector<T> labels;
  const auto in = net_input<T>(p, batch, labels);
  const auto f = net.forward(in, static_cast<int>(batch), labels, nullptr);
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t k = b * len + i;
      const double target = (clean[k] - p.pc[b].c_skip * p.noisy[k]) / p.pc[b].c_out;
      const double e = static_cast<double>(f[k]) - target;
      total += e * e;
    }
  }
  return total / static_cast<double>(clean.size());
}

template double loss_and_grad<float>(nn::UNet<float>&, std::span<const double>, std::size_t, const NoiseDraw&,
                                     const EdmConfig&, nn::UNet<float>::Tape&);
template double loss_and_grad<double>(nn::UNet<double>&, std::span<const double>, std::size_t, const NoiseDraw&,
                                      const EdmConfig&, nn::UNet<double>::Tape&);
template double network_loss<float>(const nn::UNet<float>&, std::span<const double>, std::size_t,
                                    const NoiseDraw&, const EdmConfig&);
template double network_loss<double>(const nn::UNet<double>&, std::span<const double>, std::size_t,
                                     const NoiseDraw&, const EdmConfig&);

TrainResult train(const SegmentDataset& data, const EdmConfig& edm_in, const nn::UNetConfig& arch,
                  const TrainConfig& cfg, const TrainProgress& progress) {
  cfg.validate();
  edm_in.validate();
  require(!data.segments.empty(), ErrorCode::InvalidArgument, "training set is empty");
  const std::size_t len = static_cast<std::size_t>(arch.length);
  for (const auto& s : data.segments) {
    require(s.modality == data.modality, ErrorCode::Usage, "training set mixes modalities");
    require(s.values.size() == len, ErrorCode::InvalidArgument, "segment length does not match the network");
  }

  EdmConfig edm = edm_in;
  if (cfg.sigma_data_from_data) {
    double sum = 0.0, sq = 0.0, n = 0.0;
    for (const auto& s : data.segments)
      for (double v : s.values) {
        sum += v;
        sq += v * v;
        n += 1.0;
      }
    const double mean = sum / n;
    edm.sigma_data = std::sqrt(std::max(sq / n - mean * mean, 1e-12));
    spdlog::info("sigma_data set from data: {:.6f}", edm.sigma_data);
  }

  const auto t0 = std::chrono::steady_clock::now();
  nn::UNet<float> net(arch);
  net.init(cfg.seed);
  auto& params = net.params().values();
  auto& grads = net.params().grads();
  std::vector<float> ema = params;
  std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0);
  auto tape = net.make_tape();

  CounterRng batch_rng(cfg.seed, kBatchStream);
  CounterRng noise_rng(cfg.seed, kNoiseStream);
  const std::size_t bs = cfg.batch_size;
  std::vector<double> clean(bs * len);

  TrainResult result;
  result.loss_trace.reserve(cfg.iterations);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  double b1t = 1.0, b2t = 1.0;

  for (std::uint64_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t b = 0; b < bs; ++b) {
      const auto& seg = data.segments[batch_rng.below(data.segments.size())];
      std::copy(seg.values.begin(), seg.values.end(), clean.begin() + static_cast<std::ptrdiff_t>(b * len));
    }
    const NoiseDraw noise = draw_noise(bs, len, edm, noise_rng);
    net.params().zero_grad();
    const double loss = loss_and_grad(net, clean, bs, noise, edm, *tape);
    result.loss_trace.push_back(loss);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "training diverged at iteration " << it << "; recent losses:";
      const std::size_t from = result.loss_trace.size() > 8 ? result.loss_trace.size() - 8 : 0;
      for (std::size_t i = from; i < result.loss_trace.size(); ++i) msg << ' ' << result.loss_trace[i];
      fail(ErrorCode::Numeric, msg.str());
    }

    double lr = cfg.learning_rate *
                (cfg.lr_rampup > 0 ? std::min(1.0, static_cast<double>(it + 1) / cfg.lr_rampup) : 1.0);
    if (cfg.lr_cosine && it >= cfg.lr_rampup) {
      const double span = static_cast<double>(cfg.iterations - cfg.lr_rampup);
      lr *= 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(it - cfg.lr_rampup) / span));
    }
    b1t *= kBeta1;
    b2t *= kBeta2;
    const double step = lr * std::sqrt(1.0 - b2t) / (1.0 - b1t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grads[i];
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
      params[i] = static_cast<float>(params[i] - step * m[i] / (std::sqrt(v[i]) + kEps));
    }
    // Short runs would otherwise be dominated by the initial weights.
    const double decay = std::min(cfg.ema_decay, (1.0 + it) / (10.0 + it));
    for (std::size_t i = 0; i < params.size(); ++i)
      ema[i] = static_cast<float>(decay * ema[i] + (1.0 - decay) * params[i]);

    if (progress) progress(it, loss);
    if (cfg.log_every > 0 && (it + 1) % cfg.log_every == 0) spdlog::info("iter {:>6}  loss {:.5f}", it + 1, loss);
  }

  result.ema_params = std::move(ema);
  result.raw_params = params;
  result.edm = edm;
  result.final_loss = smoothed_tail(result.loss_trace, 100);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double smoothed_head(const std::vector<double>& trace, std::size_t window) {
  require(!trace.empty(), ErrorCode::InvalidArgument, "empty loss trace");
  const std::size_t n = std::min(window, trace.size());
  return std::accumulate(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(n), 0.0) / static_cast<double>(n);
}

double smoothed_tail(const std::vector<double>& trace, std::size_t window) {
  require(!trace.empty(), ErrorCode::InvalidArgument, "empty loss trace");
  const std::size_t n = std::min(window, trace.size());
  return std::accumulate(trace.end() - static_cast<std::ptrdiff_t>(n), trace.end(), 0.0) / static_cast<double>(n);
}

}  // namespace ddib
