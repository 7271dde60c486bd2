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

// Reference implementations used as test oracles. They are written from the
// defining formulas and share no code with the library.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "diffusion/denoiser.hpp"

namespace ddib::testing {

// Posterior mean for data ~ N(mu, s^2) per element: closed form.
class GaussianDenoiser final : public Denoiser {
 public:
  GaussianDenoiser(double mu = 0.0, double s = 1.0) : mu_(mu), s_(s) {}
  std::size_t dim() const noexcept override { return 0; }
  void denoise(std::span<const double> x, std::size_t, double sigma, std::span<double> out) const override {
    const double s2 = s_ * s_;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (s2 * x[i] + sigma * sigma * mu_) / (s2 + sigma * sigma);
  }
  using Denoiser::denoise;

  // Exact PF-ODE trajectory: x(sigma) - mu scales with sqrt(s^2 + sigma^2).
  double transport(double x, double from, double to) const {
    return mu_ + (x - mu_) * std::sqrt((s_ * s_ + to * to) / (s_ * s_ + from * from));
  }

 private:
  double mu_, s_;
};

// Point mass at a.
class DiracDenoiser final : public Denoiser {
 public:
  explicit DiracDenoiser(double a) : a_(a) {}
  std::size_t dim() const noexcept override { return 0; }
  void denoise(std::span<const double> x, std::size_t, double, std::span<double> out) const override {
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(x.size()), a_);
  }
  using Denoiser::denoise;

 private:
  double a_;
};

// Counts calls and rows seen, forwarding to another denoiser.
class CountingDenoiser final : public Denoiser {
 public:
  explicit CountingDenoiser(const Denoiser& inner) : inner_(inner) {}
  std::size_t dim() const noexcept override { return inner_.dim(); }
  std::optional<Modality> modality() const noexcept override { return inner_.modality(); }
  void denoise(std::span<const double> x, std::size_t batch, double sigma, std::span<double> out) const override {
    ++calls;
    inner_.denoise(x, batch, sigma, out);
  }
  using Denoiser::denoise;

  mutable std::atomic<std::uint64_t> calls{0};

 private:
  const Denoiser& inner_;
};

// O(N^2) DFT power |X_k|^2 / N^2.
inline std::vector<double> naive_power(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n));
    p[k] = std::norm(acc) / static_cast<double>(n * n);
  }
  return p;
}

// Amplitude of the f Hz component by correlation with sin and cos.
inline double tone_amplitude(std::span<const double> x, double rate, double f, std::size_t from = 0,
                             std::size_t to = 0) {
  if (to == 0) to = x.size();
  double c = 0, s = 0;
  for (std::size_t i = from; i < to; ++i) {
    const double ph = 2.0 * std::numbers::pi * f * static_cast<double>(i) / rate;
    c += x[i] * std::cos(ph);
    s += x[i] * std::sin(ph);
  }
  return 2.0 * std::hypot(c, s) / static_cast<double>(to - from);
}

inline double rms(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

inline double rel_l2(std::span<const double> a, std::span<const double> ref) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ref[i]) * (a[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

inline std::vector<double> sine(std::size_t n, double rate, double f, double amp = 1.0, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / rate + phase);
  return x;
}

}  // namespace ddib::testing
