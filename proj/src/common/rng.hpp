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

namespace ddib {

// Counter-based pseudorandom stream ("splitmix64-ctr").
//
// Output i of stream (seed, stream_id) is splitmix64_mix(key + (i + 1) * G)
// with key = splitmix64_mix(seed) ^ splitmix64_mix(stream_id * G + 1) and
// G = 0x9E3779B97F4A7C15. Any output can be recomputed from
// (seed, stream_id, i) alone, so ports only need the 64-bit mixer.
//
// uniform() maps the top 53 bits to [0, 1). normal() uses the polar-free
// Box-Muller form on two consecutive uniforms and discards the second
// variate, so every normal consumes exactly two counter values.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }
  void seek(std::uint64_t counter) noexcept { counter_ = counter; }

  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ddib
