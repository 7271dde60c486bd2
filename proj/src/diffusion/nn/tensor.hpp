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

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace ddib::nn {

// Row-major GEMM: C = alpha op(A) op(B) + beta C, backed by CBLAS.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a, int lda,
          const float* b, int ldb, float beta, float* c, int ldc);
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc);

// Activations are laid out channel-major across the batch: element
// (channel c, sample b, position t) lives at v[c * (batch * len) + b * len + t].
// Concatenating along channels is therefore plain appending.
template <typename T>
struct Act {
  int channels = 0;
  int batch = 0;
  int len = 0;
  std::vector<T> v;

  Act() = default;
  Act(int c, int b, int l) : channels(c), batch(b), len(l), v(static_cast<std::size_t>(c) * b * l, T(0)) {}

  int cols() const noexcept { return batch * len; }
  T* row(int c) noexcept { return v.data() + static_cast<std::size_t>(c) * cols(); }
  const T* row(int c) const noexcept { return v.data() + static_cast<std::size_t>(c) * cols(); }
};

struct TensorEntry {
  std::string name;
  std::vector<int> shape;
  std::size_t offset = 0;
  std::size_t count = 0;
};

// Flat parameter vector with a named-tensor index and a matching gradient
// buffer. Layers register their tensors once and address them by offset.
template <typename T>
class ParamSet {
 public:
  std::size_t add(const std::string& name, std::vector<int> shape) {
    std::size_t count = 1;
    for (int d : shape) count *= static_cast<std::size_t>(d);
    index_.push_back({name, std::move(shape), values_.size(), count});
    values_.resize(values_.size() + count, T(0));
    grads_.resize(values_.size(), T(0));
    return index_.back().offset;
  }

  T* value(std::size_t off) noexcept { return values_.data() + off; }
  const T* value(std::size_t off) const noexcept { return values_.data() + off; }
  T* grad(std::size_t off) noexcept { return grads_.data() + off; }

  std::vector<T>& values() noexcept { return values_; }
  const std::vector<T>& values() const noexcept { return values_; }
  std::vector<T>& grads() noexcept { return grads_; }
  const std::vector<TensorEntry>& index() const noexcept { return index_; }
  std::size_t size() const noexcept { return values_.size(); }

  void zero_grad() { std::fill(grads_.begin(), grads_.end(), T(0)); }

 private:
  std::vector<TensorEntry> index_;
  std::vector<T> values_;
  std::vector<T> grads_;
};

}  // namespace ddib::nn
