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

#include <span>
#include <vector>

#include "preprocess/recording.hpp"

namespace ddib {

// Normalized second-order section, a0 == 1.
struct Biquad {
  double b0, b1, b2, a1, a2;

  double dc_gain() const noexcept { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

// 4th-order Butterworth high-pass at lo followed by a 4th-order Butterworth
// low-pass at hi, as four bilinear-transform biquads.
std::vector<Biquad> butterworth_bandpass(double lo, double hi, double rate);

// Causal cascade, transposed direct form II, starting from the steady state
// for a constant input equal to x[0].
std::vector<double> sosfilt(std::span<const Biquad> sections, std::span<const double> x);

// Forward-backward application with mirror padding of pad samples on
// each side (clamped to n - 1).
std::vector<double> sosfiltfilt(std::span<const Biquad> sections, std::span<const double> x,
                                std::size_t pad);

// Zero-phase band-pass of every channel. Throws InvalidBand unless
// 0 < lo < hi < rate / 2.
Recording bandpass_zero_phase(const Recording& rec, double lo, double hi);

}  // namespace ddib
