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

#include "diffusion/nn/layers.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace ddib::nn {

void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha, const float* a, int lda,
          const float* b, int ldb, float beta, float* c, int ldc) {
  cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans, trans_b ? CblasTrans : CblasNoTrans, m, n, k,
              alpha, a, lda, b, ldb, beta, c, ldc);
}

// The double network only serves gradient checks, so it gets a plain loop.
// Some OpenBLAS AVX-512 builds return wrong dgemm results for narrow shapes.
void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha, const double* a, int lda,
          const double* b, int ldb, double beta, double* c, int ldc) {
  std::vector<double> row(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int q = 0; q < k; ++q) {
      const double av = trans_a ? a[static_cast<std::size_t>(q) * lda + i] : a[static_cast<std::size_t>(i) * lda + q];
      if (av == 0.0) continue;
      if (trans_b) {
        for (int j = 0; j < n; ++j) row[j] += av * b[static_cast<std::size_t>(j) * ldb + q];
      } else {
        const double* br = b + static_cast<std::size_t>(q) * ldb;
        for (int j = 0; j < n; ++j) row[j] += av * br[j];
      }
    }
    double* cr = c + static_cast<std::size_t>(i) * ldc;
    for (int j = 0; j < n; ++j) cr[j] = alpha * row[j] + (beta == 0.0 ? 0.0 : beta * cr[j]);
  }
}

template <typename T>
void init_uniform(ParamSet<T>& p, std::size_t off, std::size_t count, int fan_in, double scale, CounterRng& rng) {
  const double bound = scale / std::sqrt(static_cast<double>(fan_in));
  T* w = p.value(off);
  for (std::size_t i = 0; i < count; ++i) w[i] = static_cast<T>(rng.uniform(-bound, bound));
}

// ---------------------------------------------------------------- Conv1d

template <typename T>
Conv1d<T>::Conv1d(ParamSet<T>& p, const std::string& name, int cin, int cout, int kernel, int stride)
    : cin_(cin), cout_(cout), kernel_(kernel), stride_(stride) {
  w_ = p.add(name + ".weight", {cout, cin, kernel});
  b_ = p.add(name + ".bias", {cout});
}

template <typename T>
void Conv1d<T>::init(ParamSet<T>& p, CounterRng& rng, double scale) const {
  const int fan_in = cin_ * kernel_;
  init_uniform(p, w_, static_cast<std::size_t>(cout_) * fan_in, fan_in, scale, rng);
  init_uniform(p, b_, static_cast<std::size_t>(cout_), fan_in, scale, rng);
}

template <typename T>
void Conv1d<T>::zero(ParamSet<T>& p) const {
  std::fill_n(p.value(w_), static_cast<std::size_t>(cout_) * cin_ * kernel_, T(0));
  std::fill_n(p.value(b_), static_cast<std::size_t>(cout_), T(0));
}

template <typename T>
Act<T> Conv1d<T>::forward(const ParamSet<T>& p, const Act<T>& x, Cache* cache) const {
  require(x.channels == cin_, ErrorCode::InvalidArgument, "conv input channel mismatch");
  const int lout = out_len(x.len);
  const int ncol = x.batch * lout;
  const int krows = cin_ * kernel_;
  const int pad = kernel_ / 2;

  std::vector<T> col_local;
  std::vector<T>& col = cache ? cache->col : col_local;
  const bool identity = kernel_ == 1 && stride_ == 1;
  const T* colp = x.v.data();
  if (identity) {
    if (cache) col = x.v;
  } else {
    col.resize(static_cast<std::size_t>(krows) * ncol);
    colp = col.data();
    for (int ci = 0; ci < cin_; ++ci) {
      const T* src = x.row(ci);
      for (int kk = 0; kk < kernel_; ++kk) {
        T* dst = col.data() + static_cast<std::size_t>(ci * kernel_ + kk) * ncol;
        for (int b = 0; b < x.batch; ++b) {
          const T* s = src + static_cast<std::size_t>(b) * x.len;
          T* d = dst + static_cast<std::size_t>(b) * lout;
          if (stride_ == 1) {
            const int shift = kk - pad;
            const int lo = std::max(0, -shift), hi = std::min(lout, x.len - shift);
            for (int t = 0; t < lo; ++t) d[t] = T(0);
            if (hi > lo) std::copy(s + lo + shift, s + hi + shift, d + lo);
            for (int t = std::max(hi, lo); t < lout; ++t) d[t] = T(0);
          } else {
            for (int t = 0; t < lout; ++t) {
              const int i = t * stride_ + kk - pad;
              d[t] = (i >= 0 && i < x.len) ? s[i] : T(0);
            }
          }
        }
      }
    }
  }
  if (cache) {
    cache->batch = x.batch;
    cache->len_in = x.len;
  }

  Act<T> y(cout_, x.batch, lout);
  const T* bias = p.value(b_);
  for (int co = 0; co < cout_; ++co) std::fill_n(y.row(co), ncol, bias[co]);
  gemm(false, false, cout_, ncol, krows, T(1), p.value(w_), krows, colp, ncol, T(1), y.v.data(), ncol);
  return y;
}

template <typename T>
Act<T> Conv1d<T>::backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache) const {
  const int lout = dy.len;
  const int ncol = dy.batch * lout;
  const int krows = cin_ * kernel_;
  const int pad = kernel_ / 2;

  gemm(false, true, cout_, krows, ncol, T(1), dy.v.data(), ncol, cache.col.data(), ncol, T(1), p.grad(w_), krows);
  T* gb = p.grad(b_);
  for (int co = 0; co < cout_; ++co) {
    const T* r = dy.row(co);
    T acc = 0;
    for (int j = 0; j < ncol; ++j) acc += r[j];
    gb[co] += acc;
  }

  Act<T> dx(cin_, cache.batch, cache.len_in);
  if (kernel_ == 1 && stride_ == 1) {
    gemm(true, false, krows, ncol, cout_, T(1), p.value(w_), krows, dy.v.data(), ncol, T(0), dx.v.data(), ncol);
    return dx;
  }
  std::vector<T> dcol(static_cast<std::size_t>(krows) * ncol);
  gemm(true, false, krows, ncol, cout_, T(1), p.value(w_), krows, dy.v.data(), ncol, T(0), dcol.data(), ncol);
  for (int ci = 0; ci < cin_; ++ci) {
    T* dst = dx.row(ci);
    for (int kk = 0; kk < kernel_; ++kk) {
      const T* src = dcol.data() + static_cast<std::size_t>(ci * kernel_ + kk) * ncol;
      for (int b = 0; b < cache.batch; ++b) {
        const T* s = src + static_cast<std::size_t>(b) * lout;
        T* d = dst + static_cast<std::size_t>(b) * cache.len_in;
        for (int t = 0; t < lout; ++t) {
          const int i = t * stride_ + kk - pad;
          if (i >= 0 && i < cache.len_in) d[i] += s[t];
        }
      }
    }
  }
  return dx;
}

// ------------------------------------------------------------- GroupNorm

template <typename T>
GroupNorm<T>::GroupNorm(ParamSet<T>& p, const std::string& name, int channels, int groups)
    : channels_(channels), groups_(groups) {
  require(groups > 0 && channels % groups == 0, ErrorCode::Config, "channels must be divisible by norm groups");
  gamma_ = p.add(name + ".weight", {channels});
  beta_ = p.add(name + ".bias", {channels});
}

template <typename T>
void GroupNorm<T>::init(ParamSet<T>& p) const {
  std::fill_n(p.value(gamma_), channels_, T(1));
  std::fill_n(p.value(beta_), channels_, T(0));
}

template <typename T>
Act<T> GroupNorm<T>::forward(const ParamSet<T>& p, const Act<T>& x, Cache* cache) const {
  constexpr double kEps = 1e-5;
  const int cpg = channels_ / groups_;
  const double count = static_cast<double>(cpg) * x.len;
  Act<T> y(x.channels, x.batch, x.len);
  std::vector<T> xhat_local;
  std::vector<T>& xhat = cache ? cache->xhat : xhat_local;
  xhat.assign(x.v.size(), T(0));
  if (cache) cache->inv_std.assign(static_cast<std::size_t>(x.batch) * groups_, T(0));
  const T* gamma = p.value(gamma_);
  const T* beta = p.value(beta_);

  for (int b = 0; b < x.batch; ++b) {
    for (int g = 0; g < groups_; ++g) {
      double sum = 0.0, sq = 0.0;
      for (int c = g * cpg; c < (g + 1) * cpg; ++c) {
        const T* r = x.row(c) + static_cast<std::size_t>(b) * x.len;
        T s = 0, s2 = 0;
#pragma omp simd reduction(+ : s, s2)
        for (int t = 0; t < x.len; ++t) {
          s += r[t];
          s2 += r[t] * r[t];
        }
        sum += s;
        sq += s2;
      }
      const double mean = sum / count;
      const double var = std::max(0.0, sq / count - mean * mean);
      const T inv = static_cast<T>(1.0 / std::sqrt(var + kEps));
      const T mu = static_cast<T>(mean);
      if (cache) cache->inv_std[static_cast<std::size_t>(b) * groups_ + g] = inv;
      for (int c = g * cpg; c < (g + 1) * cpg; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * x.cols() + static_cast<std::size_t>(b) * x.len;
        const T* xs = x.v.data() + base;
        T* hs = xhat.data() + base;
        T* ys = y.v.data() + base;
        const T ga = gamma[c], be = beta[c];
#pragma omp simd
        for (int t = 0; t < x.len; ++t) {
          const T h = (xs[t] - mu) * inv;
          hs[t] = h;
          ys[t] = ga * h + be;
        }
      }
    }
  }
  return y;
}

template <typename T>
Act<T> GroupNorm<T>::backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache) const {
  const int cpg = channels_ / groups_;
  const T count = static_cast<T>(cpg * dy.len);
  const T* gamma = p.value(gamma_);
  T* ggamma = p.grad(gamma_);
  T* gbeta = p.grad(beta_);
  Act<T> dx(dy.channels, dy.batch, dy.len);

  for (int c = 0; c < channels_; ++c) {
    const T* d = dy.row(c);
    const T* h = cache.xhat.data() + static_cast<std::size_t>(c) * dy.cols();
    T sg = 0, sb = 0;
    for (int j = 0; j < dy.cols(); ++j) {
      sg += d[j] * h[j];
      sb += d[j];
    }
    ggamma[c] += sg;
    gbeta[c] += sb;
  }
  for (int b = 0; b < dy.batch; ++b) {
    for (int g = 0; g < groups_; ++g) {
      T sum_dh = 0, sum_dh_h = 0;
      for (int c = g * cpg; c < (g + 1) * cpg; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * dy.cols() + static_cast<std::size_t>(b) * dy.len;
        for (int t = 0; t < dy.len; ++t) {
          const T dh = dy.v[base + t] * gamma[c];
          sum_dh += dh;
          sum_dh_h += dh * cache.xhat[base + t];
        }
      }
      const T inv = cache.inv_std[static_cast<std::size_t>(b) * groups_ + g];
      for (int c = g * cpg; c < (g + 1) * cpg; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * dy.cols() + static_cast<std::size_t>(b) * dy.len;
        for (int t = 0; t < dy.len; ++t) {
          const T dh = dy.v[base + t] * gamma[c];
          dx.v[base + t] = inv / count * (count * dh - sum_dh - cache.xhat[base + t] * sum_dh_h);
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- Linear

template <typename T>
Linear<T>::Linear(ParamSet<T>& p, const std::string& name, int in, int out) : in_(in), out_(out) {
  w_ = p.add(name + ".weight", {out, in});
  b_ = p.add(name + ".bias", {out});
}

template <typename T>
void Linear<T>::init(ParamSet<T>& p, CounterRng& rng, double scale) const {
  init_uniform(p, w_, static_cast<std::size_t>(out_) * in_, in_, scale, rng);
  init_uniform(p, b_, static_cast<std::size_t>(out_), in_, scale, rng);
}

template <typename T>
std::vector<T> Linear<T>::forward(const ParamSet<T>& p, const std::vector<T>& x, int batch, Cache* cache) const {
  std::vector<T> y(static_cast<std::size_t>(out_) * batch);
  const T* bias = p.value(b_);
  for (int o = 0; o < out_; ++o) std::fill_n(y.data() + static_cast<std::size_t>(o) * batch, batch, bias[o]);
  gemm(false, false, out_, batch, in_, T(1), p.value(w_), in_, x.data(), batch, T(1), y.data(), batch);
  if (cache) {
    cache->x = x;
    cache->batch = batch;
  }
  return y;
}

template <typename T>
std::vector<T> Linear<T>::backward(ParamSet<T>& p, const std::vector<T>& dy, const Cache& cache) const {
  const int batch = cache.batch;
  gemm(false, true, out_, in_, batch, T(1), dy.data(), batch, cache.x.data(), batch, T(1), p.grad(w_), in_);
  T* gb = p.grad(b_);
  for (int o = 0; o < out_; ++o)
    for (int b = 0; b < batch; ++b) gb[o] += dy[static_cast<std::size_t>(o) * batch + b];
  std::vector<T> dx(static_cast<std::size_t>(in_) * batch);
  gemm(true, false, in_, batch, out_, T(1), p.value(w_), in_, dy.data(), batch, T(0), dx.data(), batch);
  return dx;
}

// ------------------------------------------------------------------ SiLU

template <typename T>
void silu_inplace(std::vector<T>& v) {
  T* p = v.data();
  const std::size_t n = v.size();
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) p[i] = p[i] / (T(1) + std::exp(-p[i]));
}

template <typename T>
void silu_backward(std::vector<T>& dy, const std::vector<T>& x) {
  T* d = dy.data();
  const T* xs = x.data();
  const std::size_t n = dy.size();
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    const T s = T(1) / (T(1) + std::exp(-xs[i]));
    d[i] *= s * (T(1) + xs[i] * (T(1) - s));
  }
}

// -------------------------------------------------------------- ResBlock

template <typename T>
ResBlock<T>::ResBlock(ParamSet<T>& p, const std::string& name, int cin, int cout, int emb_dim, int groups)
    : cin_(cin), cout_(cout) {
  gn1_ = GroupNorm<T>(p, name + ".norm1", cin, groups);
  conv1_ = Conv1d<T>(p, name + ".conv1", cin, cout, 3);
  emb_ = Linear<T>(p, name + ".emb", emb_dim, cout);
  gn2_ = GroupNorm<T>(p, name + ".norm2", cout, groups);
  conv2_ = Conv1d<T>(p, name + ".conv2", cout, cout, 3);
  has_skip_ = cin != cout;
  if (has_skip_) skip_ = Conv1d<T>(p, name + ".skip", cin, cout, 1);
}

template <typename T>
void ResBlock<T>::init(ParamSet<T>& p, CounterRng& rng, bool zero_residual) const {
  gn1_.init(p);
  gn2_.init(p);
  conv1_.init(p, rng);
  emb_.init(p, rng);
  if (zero_residual)
    conv2_.zero(p);
  else
    conv2_.init(p, rng);
  if (has_skip_) skip_.init(p, rng);
}

template <typename T>
Act<T> ResBlock<T>::forward(const ParamSet<T>& p, const Act<T>& x, const std::vector<T>& emb_act,
                            Cache* cache) const {
  Act<T> h = gn1_.forward(p, x, cache ? &cache->gn1 : nullptr);
  if (cache) cache->pre1 = h.v;
  silu_inplace(h.v);
  h = conv1_.forward(p, h, cache ? &cache->conv1 : nullptr);
  const auto e = emb_.forward(p, emb_act, x.batch, cache ? &cache->emb : nullptr);
  for (int c = 0; c < cout_; ++c) {
    T* r = h.row(c);
    for (int b = 0; b < x.batch; ++b) {
      const T add = e[static_cast<std::size_t>(c) * x.batch + b];
      for (int t = 0; t < x.len; ++t) r[static_cast<std::size_t>(b) * x.len + t] += add;
    }
  }
  h = gn2_.forward(p, h, cache ? &cache->gn2 : nullptr);
  if (cache) cache->pre2 = h.v;
  silu_inplace(h.v);
  h = conv2_.forward(p, h, cache ? &cache->conv2 : nullptr);
  if (has_skip_) {
    const Act<T> s = skip_.forward(p, x, cache ? &cache->skip : nullptr);
    for (std::size_t i = 0; i < h.v.size(); ++i) h.v[i] += s.v[i];
  } else {
    for (std::size_t i = 0; i < h.v.size(); ++i) h.v[i] += x.v[i];
  }
  return h;
}

template <typename T>
Act<T> ResBlock<T>::backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache, std::vector<T>& d_emb) const {
  Act<T> dx = has_skip_ ? skip_.backward(p, dy, cache.skip) : dy;
  Act<T> dh = conv2_.backward(p, dy, cache.conv2);
  silu_backward(dh.v, cache.pre2);
  dh = gn2_.backward(p, dh, cache.gn2);
  std::vector<T> de(static_cast<std::size_t>(cout_) * dy.batch, T(0));
  for (int c = 0; c < cout_; ++c) {
    const T* r = dh.row(c);
    for (int b = 0; b < dy.batch; ++b) {
      T acc = 0;
      for (int t = 0; t < dy.len; ++t) acc += r[static_cast<std::size_t>(b) * dy.len + t];
      de[static_cast<std::size_t>(c) * dy.batch + b] = acc;
    }
  }
  const auto demb = emb_.backward(p, de, cache.emb);
  for (std::size_t i = 0; i < demb.size(); ++i) d_emb[i] += demb[i];
  dh = conv1_.backward(p, dh, cache.conv1);
  silu_backward(dh.v, cache.pre1);
  dh = gn1_.backward(p, dh, cache.gn1);
  for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] += dh.v[i];
  return dx;
}

// ------------------------------------------------------------- Attention

template <typename T>
Attention<T>::Attention(ParamSet<T>& p, const std::string& name, int channels, int groups) : channels_(channels) {
  gn_ = GroupNorm<T>(p, name + ".norm", channels, groups);
  qkv_ = Conv1d<T>(p, name + ".qkv", channels, 3 * channels, 1);
  proj_ = Conv1d<T>(p, name + ".proj", channels, channels, 1);
}

template <typename T>
void Attention<T>::init(ParamSet<T>& p, CounterRng& rng, bool zero_residual) const {
  gn_.init(p);
  qkv_.init(p, rng);
  if (zero_residual)
    proj_.zero(p);
  else
    proj_.init(p, rng);
}

template <typename T>
Act<T> Attention<T>::forward(const ParamSet<T>& p, const Act<T>& x, Cache* cache) const {
  const int C = channels_, L = x.len, n = x.cols();
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(C)));
  Act<T> h = gn_.forward(p, x, cache ? &cache->gn : nullptr);
  Act<T> qkv = qkv_.forward(p, h, cache ? &cache->qkv : nullptr);
  Act<T> o(C, x.batch, L);
  std::vector<T> probs_local;
  std::vector<T>& probs = cache ? cache->probs : probs_local;
  probs.assign(static_cast<std::size_t>(x.batch) * L * L, T(0));

  for (int b = 0; b < x.batch; ++b) {
    const T* q = qkv.row(0) + static_cast<std::size_t>(b) * L;
    const T* k = qkv.row(C) + static_cast<std::size_t>(b) * L;
    const T* v = qkv.row(2 * C) + static_cast<std::size_t>(b) * L;
    T* a = probs.data() + static_cast<std::size_t>(b) * L * L;
    gemm(true, false, L, L, C, scale, q, n, k, n, T(0), a, L);
    for (int i = 0; i < L; ++i) {
      T* r = a + static_cast<std::size_t>(i) * L;
      const T mx = *std::max_element(r, r + L);
      T z = 0;
      for (int j = 0; j < L; ++j) z += (r[j] = std::exp(r[j] - mx));
      for (int j = 0; j < L; ++j) r[j] /= z;
    }
    gemm(false, true, C, L, L, T(1), v, n, a, L, T(0), o.row(0) + static_cast<std::size_t>(b) * L, n);
  }
  if (cache) cache->qkv_out = std::move(qkv);
  Act<T> y = proj_.forward(p, o, cache ? &cache->proj : nullptr);
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += x.v[i];
  return y;
}

template <typename T>
Act<T> Attention<T>::backward(ParamSet<T>& p, const Act<T>& dy, const Cache& cache) const {
  const int C = channels_, L = dy.len, n = dy.cols();
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(C)));
  const Act<T> dout = proj_.backward(p, dy, cache.proj);
  const Act<T>& qkv = cache.qkv_out;
  Act<T> dqkv(3 * C, dy.batch, L);
  std::vector<T> da(static_cast<std::size_t>(L) * L);

  for (int b = 0; b < dy.batch; ++b) {
    const std::size_t off = static_cast<std::size_t>(b) * L;
    const T* q = qkv.row(0) + off;
    const T* k = qkv.row(C) + off;
    const T* v = qkv.row(2 * C) + off;
    const T* a = cache.probs.data() + static_cast<std::size_t>(b) * L * L;
    const T* dob = dout.row(0) + off;
    gemm(false, false, C, L, L, T(1), dob, n, a, L, T(0), dqkv.row(2 * C) + off, n);
    gemm(true, false, L, L, C, T(1), dob, n, v, n, T(0), da.data(), L);
    for (int i = 0; i < L; ++i) {
      T* r = da.data() + static_cast<std::size_t>(i) * L;
      const T* ar = a + static_cast<std::size_t>(i) * L;
      T dot = 0;
      for (int j = 0; j < L; ++j) dot += r[j] * ar[j];
      for (int j = 0; j < L; ++j) r[j] = ar[j] * (r[j] - dot);
    }
    gemm(false, true, C, L, L, scale, k, n, da.data(), L, T(0), dqkv.row(0) + off, n);
    gemm(false, false, C, L, L, scale, q, n, da.data(), L, T(0), dqkv.row(C) + off, n);
  }
  Act<T> dh = qkv_.backward(p, dqkv, cache.qkv);
  Act<T> dx = gn_.backward(p, dh, cache.gn);
  for (std::size_t i = 0; i < dx.v.size(); ++i) dx.v[i] += dy.v[i];
  return dx;
}

// -------------------------------------------------------------- Resizing

template <typename T>
Act<T> upsample_nearest2(const Act<T>& x) {
  Act<T> y(x.channels, x.batch, 2 * x.len);
  for (int c = 0; c < x.channels; ++c) {
    const T* s = x.row(c);
    T* d = y.row(c);
    for (int j = 0; j < x.cols(); ++j) d[2 * j] = d[2 * j + 1] = s[j];
  }
  return y;
}

template <typename T>
Act<T> upsample_nearest2_backward(const Act<T>& dy) {
  Act<T> dx(dy.channels, dy.batch, dy.len / 2);
  for (int c = 0; c < dy.channels; ++c) {
    const T* s = dy.row(c);
    T* d = dx.row(c);
    for (int j = 0; j < dx.cols(); ++j) d[j] = s[2 * j] + s[2 * j + 1];
  }
  return dx;
}

#define DDIB_INSTANTIATE(T)                                                                              \
  template void init_uniform<T>(ParamSet<T>&, std::size_t, std::size_t, int, double, CounterRng&);         \
  template class Conv1d<T>;                                                                              \
  template class GroupNorm<T>;                                                                           \
  template class Linear<T>;                                                                              \
  template class ResBlock<T>;                                                                            \
  template class Attention<T>;                                                                           \
  template void silu_inplace<T>(std::vector<T>&);                                                        \
  template void silu_backward<T>(std::vector<T>&, const std::vector<T>&);                                \
  template Act<T> upsample_nearest2<T>(const Act<T>&);                                                   \
  template Act<T> upsample_nearest2_backward<T>(const Act<T>&);

DDIB_INSTANTIATE(float)
DDIB_INSTANTIATE(double)

#undef DDIB_INSTANTIATE

}  // namespace ddib::nn
