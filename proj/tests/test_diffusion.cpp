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


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "common/rng.hpp"
#include "diffusion/checkpoint.hpp"
#include "diffusion/edm.hpp"
#include "diffusion/net_denoiser.hpp"
#include "diffusion/oracle.hpp"
#include "diffusion/train.hpp"
#include "test_support.hpp"

using namespace ddib;
using namespace ddib::testing;
namespace fs = std::filesystem;

namespace {

struct Comp {
  double w, mu, s;
};

// log p_sigma(x) for a scalar-mean isotropic mixture, written out directly.
double log_p(const std::vector<Comp>& mix, std::span<const double> x, double sigma) {
  double wsum = 0;
  for (const auto& c : mix) wsum += c.w;
  std::vector<double> terms;
  for (const auto& c : mix) {
    const double v = c.s * c.s + sigma * sigma;
    double q = 0;
    for (double xi : x) q += (xi - c.mu) * (xi - c.mu);
    terms.push_back(std::log(c.w / wsum) - 0.5 * static_cast<double>(x.size()) * std::log(2 * std::numbers::pi * v) -
                    0.5 * q / v);
  }
  const double m = *std::max_element(terms.begin(), terms.end());
  double acc = 0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

GaussianMixtureOracle make_oracle(const std::vector<Comp>& mix) {
  std::vector<MixtureComponent> comps;
  for (const auto& c : mix) comps.push_back({c.w, {c.mu}, c.s});
  return GaussianMixtureOracle(comps);
}

nn::UNetConfig tiny_arch() {
  nn::UNetConfig a;
  a.base_width = 8;
  a.mults = {1, 2};
  a.res_blocks = 1;
  a.attention_lengths = {160};
  a.groups = 2;
  return a;
}

nn::UNetConfig desk_arch() {
  nn::UNetConfig a;
  a.base_width = 16;
  a.mults = {1, 2, 4};
  a.res_blocks = 1;
  a.attention_lengths = {80};
  a.groups = 4;
  return a;
}

SegmentDataset tone_dataset(std::size_t n) {
  SegmentDataset ds;
  ds.normalized = true;
  ds.stats = NormStats{-1, 1, Modality::Eeg};
  CounterRng rng(8, 8);
  for (std::size_t k = 0; k < n; ++k) {
    Segment s;
    s.values = sine(320, 64, rng.uniform(0.5, 15), rng.uniform(0.2, 0.9), rng.uniform(0, 6.28));
    ds.segments.push_back(std::move(s));
  }
  return ds;
}

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("preconditioning at sigma = sigma_data = 0.5") {
  const auto p = precondition(0.5, 0.5);
  CHECK(p.c_skip == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.c_out == doctest::Approx(0.353553).epsilon(1e-6));
  CHECK(p.c_in == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(p.c_noise == doctest::Approx(-0.173287).epsilon(1e-6));
}

TEST_CASE("preconditioning at sigma 0 is the identity") {
  const auto p = precondition(0.0, 0.7);
  CHECK(p.c_skip == 1.0);
  CHECK(p.c_out == 0.0);
  CHECK(p.c_in == doctest::Approx(1.0 / 0.7));
}

TEST_CASE("preconditioning algebra") {
  CounterRng rng(1, 1);
  for (int k = 0; k < 100; ++k) {
    const double s = std::exp(rng.uniform(-6, 4.5)), sd = rng.uniform(0.05, 2.0);
    const auto p = precondition(s, sd);
    CHECK(p.c_in * std::sqrt(s * s + sd * sd) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.c_out == doctest::Approx(s * sd * p.c_in).epsilon(1e-12));
    CHECK(p.c_skip == doctest::Approx(sd * sd / (s * s + sd * sd)).epsilon(1e-12));
    CHECK(p.c_noise == doctest::Approx(std::log(s) / 4).epsilon(1e-12));
    CHECK(loss_weight(s, sd) == doctest::Approx(1.0 / (p.c_out * p.c_out)).epsilon(1e-10));
  }
}

TEST_CASE("preconditioning errors") {
  try {
    precondition(1.0, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
  try {
    precondition(-1.0, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("karras schedule") {
  const EdmConfig cfg;
  const auto two = karras_schedule(2, cfg);
  REQUIRE(two.steps() == 2);
  CHECK(two[0] == 80.0);
  CHECK(two[1] == 0.002);

  const double mid = std::pow(0.5 * (std::pow(80.0, 1 / 7.0) + std::pow(0.002, 1 / 7.0)), 7.0);
  const auto three = karras_schedule(3, cfg);
  CHECK(three[1] == doctest::Approx(mid).epsilon(1e-12));
  CHECK(three[1] == doctest::Approx(2.515).epsilon(1e-3));

  for (std::size_t n : {2u, 5u, 30u, 250u, 1000u}) {
    const auto s = karras_schedule(n, cfg);
    CHECK(s[0] == 80.0);
    CHECK(s[n - 1] == 0.002);
    CHECK(s.with_terminal(n) == 0.0);
    for (std::size_t i = 1; i < n; ++i) CHECK(s[i] < s[i - 1]);
  }
  try {
    karras_schedule(1, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schedule);
  }
}

TEST_CASE("oracle closed forms") {
  const auto dirac = GaussianMixtureOracle::dirac(3.0);
  for (double sigma : {0.0, 0.01, 1.0, 80.0})
    for (double v : dirac.denoise(std::vector<double>{-5, 0, 2, 100}, sigma)) CHECK(v == 3.0);

  const auto g = GaussianMixtureOracle::gaussian(0.0, 1.0);
  CHECK(g.denoise(std::vector<double>{2.0}, 1.0)[0] == doctest::Approx(1.0).epsilon(1e-14));

  const auto two = make_oracle({{0.5, -1, 0}, {0.5, 1, 0}});
  for (double sigma : {0.1, 1.0, 10.0}) CHECK(std::abs(two.denoise(std::vector<double>{0.0}, sigma)[0]) < 1e-15);
}

TEST_CASE("oracle score matches finite differences") {
  CounterRng rng(2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Comp> mix;
    const int k = 1 + static_cast<int>(rng.below(3));
    for (int c = 0; c < k; ++c) mix.push_back({rng.uniform(0.2, 1.0), rng.uniform(-2, 2), rng.uniform(0.0, 1.0)});
    const auto oracle = make_oracle(mix);
    const double sigma = std::exp(rng.uniform(std::log(0.01), std::log(10.0)));
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform(-2.5, 2.5);
    const auto d = oracle.denoise(x, sigma);
    const double h = 1e-5 * std::max(sigma, 1e-2);
    std::vector<double> score(x.size()), fd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      score[i] = (d[i] - x[i]) / (sigma * sigma);
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (log_p(mix, xp, sigma) - log_p(mix, xm, sigma)) / (2 * h);
    }
    CHECK(rel_l2(score, fd) <= 1e-3);
  }
}

TEST_CASE("oracle noise limits") {
  const std::vector<Comp> mix{{0.3, -1.0, 0.4}, {0.7, 2.0, 0.8}};
  const auto oracle = make_oracle(mix);
  const std::vector<double> x{0.3, -1.2, 2.5};
  const auto lo = oracle.denoise(x, 1e-4);
  CHECK(rel_l2(lo, x) <= 1e-3);
  const double mean = 0.3 * -1.0 + 0.7 * 2.0;
  for (double v : oracle.denoise(x, 1e3)) CHECK(std::abs(v - mean) / std::abs(mean) <= 1e-2);
}

TEST_CASE("training loss of the oracle beats the identity at sigma 1") {
  const EdmConfig edm;
  const auto oracle = GaussianMixtureOracle::gaussian(0.0, 1.0);
  struct Identity final : Denoiser {
    std::size_t dim() const noexcept override { return 0; }
    void denoise(std::span<const double> x, std::size_t, double, std::span<double> out) const override {
      std::copy(x.begin(), x.end(), out.begin());
    }
    using Denoiser::denoise;
  } identity;
  CounterRng rng(4, 4);
  const std::size_t batch = 32, len = 320;
  std::vector<double> clean(batch * len);
  for (double& v : clean) v = rng.normal();
  NoiseDraw nd;
  nd.sigma.assign(batch, 1.0);
  nd.noise.resize(clean.size());
  for (double& v : nd.noise) v = rng.normal();
  const double l_oracle = training_loss(oracle, clean, batch, nd, edm);
  const double l_identity = training_loss(identity, clean, batch, nd, edm);
  const double lambda = loss_weight(1.0, edm.sigma_data);
  CHECK(l_oracle < l_identity);
  // posterior variance 1/2 and noise variance 1, weighted
  CHECK(l_oracle == doctest::Approx(0.5 * lambda).epsilon(0.03));
  CHECK(l_identity == doctest::Approx(1.0 * lambda).epsilon(0.03));
}

TEST_CASE("perfect denoiser on Dirac data has zero loss") {
  const EdmConfig edm;
  const auto oracle = GaussianMixtureOracle::dirac(0.25);
  CounterRng rng(5, 5);
  const std::vector<double> clean(4 * 320, 0.25);
  CHECK(training_loss(oracle, clean, 4, edm, rng) == 0.0);
}

TEST_CASE("training loss is deterministic in the seed") {
  const EdmConfig edm;
  const auto oracle = GaussianMixtureOracle::gaussian(0.1, 0.7);
  std::vector<double> clean(8 * 320);
  CounterRng data(6, 6);
  for (double& v : clean) v = data.normal();
  CounterRng a(9, 1), b(9, 1);
  CHECK(training_loss(oracle, clean, 8, edm, a) == training_loss(oracle, clean, 8, edm, b));
}

TEST_CASE("network output shape does not depend on batch") {
  nn::UNet<float> net(desk_arch());
  net.init(3);
  for (int batch : {1, 3, 7}) {
    const std::vector<float> x(static_cast<std::size_t>(batch) * 320, 0.1f);
    const std::vector<float> c(static_cast<std::size_t>(batch), 0.2f);
    CHECK(net.forward(x, batch, c, nullptr).size() == static_cast<std::size_t>(batch) * 320);
  }
}

TEST_CASE("network rows are independent of their batch mates") {
  nn::UNet<double> net(tiny_arch());
  net.init(11, false);
  CounterRng rng(3, 9);
  std::vector<double> x(3 * 320);
  for (double& v : x) v = rng.normal();
  const std::vector<double> c{0.1, -0.5, 0.7};
  const auto all = net.forward(x, 3, c, nullptr);
  const auto one = net.forward(std::vector<double>(x.begin() + 320, x.begin() + 640), 1, {c[1]}, nullptr);
  for (std::size_t i = 0; i < 320; ++i) CHECK(all[320 + i] == doctest::Approx(one[i]).epsilon(1e-12));

  // the float network runs on the BLAS kernels used in training
  nn::UNet<float> fnet(desk_arch());
  fnet.init(11, false);
  const std::vector<float> xf(x.begin(), x.end());
  const std::vector<float> cf(c.begin(), c.end());
  const auto fall = fnet.forward(xf, 3, cf, nullptr);
  const auto fone = fnet.forward(std::vector<float>(xf.begin() + 640, xf.end()), 1, {cf[2]}, nullptr);
  double worst = 0;
  for (std::size_t i = 0; i < 320; ++i) worst = std::max(worst, std::abs(double(fall[640 + i]) - fone[i]));
  CHECK(worst <= 1e-4);
}

TEST_CASE("loss gradient matches central differences") {
  const EdmConfig edm;
  nn::UNet<double> net(desk_arch());
  net.init(21, false);
  CounterRng rng(12, 12);
  const std::size_t batch = 2;
  std::vector<double> clean(batch * 320);
  for (double& v : clean) v = rng.uniform(-0.8, 0.8);
  const NoiseDraw nd = draw_noise(batch, 320, edm, rng);

  auto tape = net.make_tape();
  net.params().zero_grad();
  loss_and_grad(net, clean, batch, nd, edm, *tape);
  const std::vector<double> grad = net.params().grads();

  // one parameter from each of 16 distinct tensors
  const auto& index = net.params().index();
  std::vector<std::size_t> picks;
  for (std::size_t t = 0; picks.size() < 16 && t < index.size(); t += std::max<std::size_t>(1, index.size() / 16))
    picks.push_back(index[t].offset + rng.below(index[t].count));
  REQUIRE(picks.size() == 16);

  std::vector<double> g, fd;
  for (std::size_t p : picks) {
    double& w = net.params().values()[p];
    const double w0 = w, h = 1e-5 * std::max(1.0, std::abs(w0));
    w = w0 + h;
    const double lp = network_loss(net, clean, batch, nd, edm);
    w = w0 - h;
    const double lm = network_loss(net, clean, batch, nd, edm);
    w = w0;
    g.push_back(grad[p]);
    fd.push_back((lp - lm) / (2 * h));
  }
  CHECK(rel_l2(g, fd) <= 1e-3);
}

TEST_CASE("untrained network denoiser is c_skip x") {
  const EdmConfig edm;
  nn::UNet<float> net(tiny_arch());
  net.init(1, true);
  NetDenoiser d(tiny_arch(), edm, Modality::Fmeg, net.params().values());
  CHECK(d.dim() == 320);
  CHECK(d.modality() == Modality::Fmeg);
  const auto x = sine(320, 64, 3.0, 0.8);
  for (double sigma : {0.0, 0.3, 5.0}) {
    const double s = std::max(sigma, edm.sigma_min);
    const double c_skip = edm.sigma_data * edm.sigma_data / (s * s + edm.sigma_data * edm.sigma_data);
    const auto y = d.denoise(x, sigma);
    for (std::size_t i = 0; i < 320; ++i) CHECK(y[i] == doctest::Approx(c_skip * x[i]).epsilon(1e-12));
  }
}

TEST_CASE("training is deterministic and checkpoints round trip") {
  const EdmConfig edm;
  const auto ds = tone_dataset(40);
  TrainConfig cfg;
  cfg.iterations = 12;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e-3;
  cfg.seed = 5;
  const auto a = train(ds, edm, tiny_arch(), cfg);
  const auto b = train(ds, edm, tiny_arch(), cfg);
  CHECK(a.loss_trace == b.loss_trace);
  CHECK(a.ema_params == b.ema_params);
  for (double l : a.loss_trace) CHECK(std::isfinite(l));
  cfg.seed = 6;
  CHECK(train(ds, edm, tiny_arch(), cfg).loss_trace != a.loss_trace);

  Checkpoint ck;
  ck.modality = Modality::Eeg;
  ck.edm = a.edm;
  ck.norm_stats = ds.stats;
  ck.arch = tiny_arch();
  ck.meta.iterations = 12;
  ck.meta.loss_trace = a.loss_trace;
  ck.tensors = tensor_index(tiny_arch());
  ck.params = a.ema_params;
  const fs::path file = fs::temp_directory_path() / "ddib_test.ckpt";
  save_checkpoint(ck, file);
  const auto back = load_checkpoint(file);
  CHECK(back.params == ck.params);
  CHECK(back.arch == ck.arch);
  CHECK(back.meta.loss_trace == ck.meta.loss_trace);
  CHECK(back.norm_stats->max == 1.0);
  const auto d1 = make_denoiser(back);
  NetDenoiser d2(tiny_arch(), edm, Modality::Eeg, a.ema_params);
  const auto x = sine(320, 64, 4.0, 0.5);
  CHECK(d1->denoise(x, 0.7) == d2.denoise(x, 0.7));

  // a truncated file is rejected
  const auto size = fs::file_size(file);
  fs::resize_file(file, size - 4);
  try {
    load_checkpoint(file);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Format);
  }
  fs::remove(file);
}

TEST_CASE("paper training preset") {
  const auto cfg = paper_train_config();
  CHECK(cfg.iterations == 30000);
  CHECK(cfg.batch_size == 32);
}

}  // TEST_SUITE
