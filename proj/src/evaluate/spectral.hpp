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

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ddib {

enum class Band { Delta, Theta, Alpha, Beta };
inline constexpr std::array<Band, 4> kBands{Band::Delta, Band::Theta, Band::Alpha, Band::Beta};

const char* to_string(Band b) noexcept;
// [lo, hi) in Hz; Beta also includes its upper edge.
std::pair<double, double> band_edges(Band b) noexcept;
bool in_band(Band b, double f) noexcept;

// P_k = |X_k|^2 / N^2 for k = 0..N-1 (rectangular window), so the bins sum
// to the mean squared amplitude.
std::vector<double> full_power_spectrum(std::span<const double> x);
// One-sided fold of the above on k = 0..N/2: interior bins are doubled, so
// the total is unchanged.
std::vector<double> power_spectrum(std::span<const double> x);

struct SpectralReport {
  double rate = 64.0;
  std::vector<double> freqs;
  std::vector<double> mean;
  std::vector<double> std;
  std::array<double, 4> band_means{};  // average of the bins inside each band
  std::array<double, 4> band_power{};  // sum of those bins
  std::size_t count = 0;
};

// Averages one-sided spectra across equal-length segments. Throws
// InvalidArgument on an empty list or unequal lengths.
SpectralReport psd(const std::vector<std::span<const double>>& segments, double rate = 64.0);
SpectralReport psd(const std::vector<std::vector<double>>& segments, double rate = 64.0);

struct SpectralComparison {
  std::array<double, 4> band_rel_diff{};  // |a - b| / a per band mean
  double spectrum_rel_l2 = 0.0;          // ||mean_a - mean_b|| / ||mean_a||
};

// Throws InvalidArgument when the frequency grids differ.
SpectralComparison compare_reports(const SpectralReport& a, const SpectralReport& b);

// Euclidean distance between the band-mean vectors.
double band_distance(const SpectralReport& a, const SpectralReport& b);

}  // namespace ddib
