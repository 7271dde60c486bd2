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

#include <cstddef>
#include <span>
#include <vector>

namespace ddib {

// Nonlinear energy operator x(i)x(i-3) - x(i-1)x(i-2). Outputs 0..2 are 0.
// Throws TooShort for fewer than 4 samples.
std::vector<double> nleo(std::span<const double> x);

// Mean of |seq| over a centered window [i - w/2, i - w/2 + w), truncated at
// the edges (averaging only the samples that exist).
std::vector<double> smooth_abs(std::span<const double> seq, std::size_t window = 384);

}  // namespace ddib
