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

#include "preprocess/resample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace ddib {
namespace {

constexpr double kCutoffFraction = 0.45;
constexpr double kZeroCrossings = 16.0;
constexpr double kKaiserBeta = 8.0;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> resample(std::span<const double> x, double from, double to) {
  require(from > 0 && to > 0, ErrorCode::InvalidArgument, "resample rates must be positive");
  if (from == to) return {x.begin(), x.end()};
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto n_out = static_cast<std::ptrdiff_t>(
      std::floor(static_cast<double>(n) * to / from + 1e-9));
  std::vector<double> y(static_cast<std::size_t>(std::max<std::ptrdiff_t>(n_out, 0)));
  if (n == 0) return y;

  const double fc = kCutoffFraction * std::min(from, to);  // Hz
  const double half_width_s = kZeroCrossings / (2.0 * fc);
  const double half_width = half_width_s * from;  // in input samples
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);

  // Taps depend only on the fractional position of the output sample, so
  // rational rate pairs reuse a handful of weight sets.
  struct Taps {
    std::ptrdiff_t first_offset;
    std::vector<double> w;
  };
  std::unordered_map<std::int64_t, Taps> cache;
  auto taps_for = [&](double center) -> const Taps& {
    const double frac = center - std::floor(center);
    const auto key = static_cast<std::int64_t>(std::llround(frac * 1e9));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Taps t;
    t.first_offset = static_cast<std::ptrdiff_t>(std::ceil(frac - half_width));
    const auto last_offset = static_cast<std::ptrdiff_t>(std::floor(frac + half_width));
    for (auto j = t.first_offset; j <= last_offset; ++j) {
      const double dt = (static_cast<double>(j) - frac) / from;  // seconds
      const double r = dt / half_width_s;
      const double win =
          std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
      t.w.push_back(sinc(2.0 * fc * dt) * win);
    }
    if (cache.size() > 65536) cache.clear();
    return cache.emplace(key, std::move(t)).first->second;
  };

  for (std::ptrdiff_t k = 0; k < n_out; ++k) {
    const double center = static_cast<double>(k) * from / to;
    const auto base = static_cast<std::ptrdiff_t>(std::floor(center));
    const Taps& t = taps_for(center);
    double acc = 0.0;
    double wsum = 0.0;
    for (std::size_t m = 0; m < t.w.size(); ++m) {
      const auto i = base + t.first_offset + static_cast<std::ptrdiff_t>(m);
      if (i < 0 || i >= n) continue;
      acc += t.w[m] * x[static_cast<std::size_t>(i)];
      wsum += t.w[m];
    }
    y[static_cast<std::size_t>(k)] = wsum != 0.0 ? acc / wsum : 0.0;
  }
  return y;
}

Recording resample(const Recording& rec, double target_rate) {
  require(target_rate > 0, ErrorCode::InvalidArgument, "target rate must be positive");
  Recording out = rec;
  if (rec.rate == target_rate) return out;
  for (auto& ch : out.samples) ch = resample(ch, rec.rate, target_rate);
  out.rate = target_rate;
  out.validate();
  return out;
}

}  // namespace ddib
