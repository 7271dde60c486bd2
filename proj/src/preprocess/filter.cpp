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

#include "preprocess/filter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace ddib {
namespace {

// Pole-pair quality factors of a 4th-order Butterworth prototype.
constexpr std::array<double, 2> kButterworth4Q = {0.54119610014619698, 1.3065629648763766};

Biquad lowpass(double f0, double rate, double q) {
  const double w0 = 2.0 * std::numbers::pi * f0 / rate;
  const double c = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return {(1.0 - c) / 2.0 / a0, (1.0 - c) / a0, (1.0 - c) / 2.0 / a0, -2.0 * c / a0,
          (1.0 - alpha) / a0};
}

Biquad highpass(double f0, double rate, double q) {
  const double w0 = 2.0 * std::numbers::pi * f0 / rate;
  const double c = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return {(1.0 + c) / 2.0 / a0, -(1.0 + c) / a0, (1.0 + c) / 2.0 / a0, -2.0 * c / a0,
          (1.0 - alpha) / a0};
}

}  // namespace

std::vector<Biquad> butterworth_bandpass(double lo, double hi, double rate) {
  if (!(lo > 0.0 && lo < hi && hi < rate / 2.0))
    fail(ErrorCode::InvalidBand,
         fmt::format("band ({}, {}) Hz invalid for rate {} Hz (need 0 < lo < hi < Nyquist)", lo, hi, rate));
  std::vector<Biquad> out;
  for (double q : kButterworth4Q) out.push_back(highpass(lo, rate, q));
  for (double q : kButterworth4Q) out.push_back(lowpass(hi, rate, q));
  return out;
}

std::vector<double> sosfilt(std::span<const Biquad> sections, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  double level = x[0];
  for (const auto& s : sections) {
    const double ss = s.dc_gain() * level;
    double z1 = (ss - s.b0 * level);
    double z2 = (s.b2 * level - s.a2 * ss);
    for (auto& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
    level = ss;
  }
  return y;
}

std::vector<double> sosfiltfilt(std::span<const Biquad> sections, std::span<const double> x,
                                std::size_t pad) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  pad = std::min(pad, n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(x[n - 1 - k]);

  auto fwd = sosfilt(sections, ext);
  std::reverse(fwd.begin(), fwd.end());
  auto bwd = sosfilt(sections, fwd);
  std::reverse(bwd.begin(), bwd.end());
  return {bwd.begin() + static_cast<std::ptrdiff_t>(pad),
          bwd.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

Recording bandpass_zero_phase(const Recording& rec, double lo, double hi) {
  const auto sections = butterworth_bandpass(lo, hi, rec.rate);
  // Three periods of the lower edge absorb the start-up transient.
  const auto pad = static_cast<std::size_t>(std::ceil(3.0 * rec.rate / lo));
  Recording out = rec;
  for (auto& ch : out.samples) ch = sosfiltfilt(sections, ch, pad);
  return out;
}

}  // namespace ddib
