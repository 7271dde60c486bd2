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

#include "evaluate/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

#include "common/error.hpp"

namespace ddib {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const char* to_string(Band b) noexcept {
  switch (b) {
    case Band::Delta: return "delta";
    case Band::Theta: return "theta";
    case Band::Alpha: return "alpha";
    case Band::Beta: return "beta";
  }
  return "?";
}

std::pair<double, double> band_edges(Band b) noexcept {
  switch (b) {
    case Band::Delta: return {0.5, 3.0};
    case Band::Theta: return {3.0, 8.0};
    case Band::Alpha: return {8.0, 12.0};
    case Band::Beta: return {12.0, 20.0};
  }
  return {0.0, 0.0};
}

bool in_band(Band b, double f) noexcept {
  const auto [lo, hi] = band_edges(b);
  constexpr double kTol = 1e-9;
  if (f < lo - kTol) return false;
  return b == Band::Beta ? f <= hi + kTol : f < hi - kTol;
}

std::vector<double> full_power_spectrum(std::span<const double> x) {
  const std::size_t n = x.size();
  require(n > 0, ErrorCode::InvalidArgument, "spectrum of an empty segment");
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  std::vector<double> p(n);
  for (std::size_t k = 0; k <= n / 2; ++k) p[k] = std::norm(out[k]) * norm;
  for (std::size_t k = n / 2 + 1; k < n; ++k) p[k] = p[n - k];
  return p;
}

std::vector<double> power_spectrum(std::span<const double> x) {
  const auto full = full_power_spectrum(x);
  const std::size_t n = full.size();
  std::vector<double> p(n / 2 + 1);
  p[0] = full[0];
  for (std::size_t k = 1; k < p.size(); ++k) p[k] = (2 * k == n) ? full[k] : 2.0 * full[k];
  return p;
}

SpectralReport psd(const std::vector<std::span<const double>>& segments, double rate) {
  require(!segments.empty(), ErrorCode::InvalidArgument, "psd of an empty segment list");
  require(rate > 0, ErrorCode::InvalidArgument, "sampling rate must be positive");
  const std::size_t n = segments.front().size();
  SpectralReport r;
  r.rate = rate;
  r.count = segments.size();
  const std::size_t bins = n / 2 + 1;
  r.freqs.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) r.freqs[k] = static_cast<double>(k) * rate / static_cast<double>(n);
  r.mean.assign(bins, 0.0);
  r.std.assign(bins, 0.0);
  std::vector<double> sq(bins, 0.0);
  for (const auto& s : segments) {
    require(s.size() == n, ErrorCode::InvalidArgument, "psd segments differ in length");
    const auto p = power_spectrum(s);
    for (std::size_t k = 0; k < bins; ++k) {
      r.mean[k] += p[k];
      sq[k] += p[k] * p[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(segments.size());
  for (std::size_t k = 0; k < bins; ++k) {
    r.mean[k] *= inv;
    r.std[k] = std::sqrt(std::max(0.0, sq[k] * inv - r.mean[k] * r.mean[k]));
  }
  for (std::size_t b = 0; b < kBands.size(); ++b) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = 0; k < bins; ++k)
      if (in_band(kBands[b], r.freqs[k])) {
        sum += r.mean[k];
        ++cnt;
      }
    r.band_power[b] = sum;
    r.band_means[b] = cnt ? sum / static_cast<double>(cnt) : 0.0;
  }
  return r;
}

SpectralReport psd(const std::vector<std::vector<double>>& segments, double rate) {
  std::vector<std::span<const double>> spans(segments.begin(), segments.end());
  return psd(spans, rate);
}

SpectralComparison compare_reports(const SpectralReport& a, const SpectralReport& b) {
  require(a.freqs.size() == b.freqs.size(), ErrorCode::InvalidArgument, "spectral grids differ");
  for (std::size_t k = 0; k < a.freqs.size(); ++k)
    require(std::fabs(a.freqs[k] - b.freqs[k]) < 1e-9, ErrorCode::InvalidArgument, "spectral grids differ");
  SpectralComparison c;
  for (std::size_t i = 0; i < 4; ++i) {
    const double d = std::fabs(a.band_means[i] - b.band_means[i]);
    c.band_rel_diff[i] = a.band_means[i] > 0 ? d / a.band_means[i] : (d > 0 ? INFINITY : 0.0);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.mean.size(); ++k) {
    num += (a.mean[k] - b.mean[k]) * (a.mean[k] - b.mean[k]);
    den += a.mean[k] * a.mean[k];
  }
  c.spectrum_rel_l2 = den > 0 ? std::sqrt(num / den) : (num > 0 ? INFINITY : 0.0);
  return c;
}

double band_distance(const SpectralReport& a, const SpectralReport& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += (a.band_means[i] - b.band_means[i]) * (a.band_means[i] - b.band_means[i]);
  return std::sqrt(s);
}

}  // namespace ddib
