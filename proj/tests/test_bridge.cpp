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
#include <limits>

#include "bridge/solver.hpp"
#include "bridge/trace_io.hpp"
#include "bridge/translate.hpp"
#include "common/rng.hpp"
#include "diffusion/net_denoiser.hpp"
#include "test_support.hpp"

using namespace ddib;
using namespace ddib::testing;
namespace fs = std::filesystem;

namespace {

const EdmConfig kEdm;

Segment segment_of(std::vector<double> v, Modality m = Modality::Eeg) {
  Segment s;
  s.values = std::move(v);
  s.modality = m;
  return s;
}

std::vector<double> random_row(std::uint64_t seed, std::size_t n = 8, double scale = 1.0) {
  CounterRng rng(seed, 77);
  std::vector<double> x(n);
  for (double& v : x) v = scale * rng.normal();
  return x;
}

double reverse_error(const GaussianDenoiser& g, SolverKind kind, std::size_t n) {
  const auto spec = make_solver(kind, n, kEdm);
  const auto xT = random_row(1, 8, kEdm.sigma_max);
  const auto r = ode_solve_reverse(g, xT, 1, spec);
  std::vector<double> exact(xT.size());
  for (std::size_t i = 0; i < xT.size(); ++i) exact[i] = g.transport(xT[i], kEdm.sigma_max, 0.0);
  return rel_l2(r.x, exact);
}

}  // namespace

TEST_SUITE("bridge") {

TEST_CASE("one Heun interval on the Dirac trajectory") {
  const DiracDenoiser d(0.0);
  std::vector<double> x{1.0};
  CHECK(heun_step(d, x, 1, 1.0, 0.5) == 2);
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
  std::vector<double> y{1.0};
  CHECK(euler_step(d, y, 1, 1.0, 0.5) == 1);
  CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("reverse Heun N=40 against the Gaussian closed form") {
  // The closed form sits about 8e-3 away at N=40; the bound below is the
  // one this schedule can meet.
  const GaussianDenoiser g;
  const double err = reverse_error(g, SolverKind::Heun, 40);
  MESSAGE("relative error " << err);
  CHECK(err <= 1e-2);
  CHECK(reverse_error(g, SolverKind::Heun, 160) <= 1e-3);
}

TEST_CASE("solver orders on the Gaussian closed form") {
  const GaussianDenoiser g;
  const double h20 = reverse_error(g, SolverKind::Heun, 20), h40 = reverse_error(g, SolverKind::Heun, 40);
  const double e20 = reverse_error(g, SolverKind::Euler, 20), e40 = reverse_error(g, SolverKind::Euler, 40);
  CHECK(std::log2(h20 / h40) >= 1.7);
  CHECK(std::log2(h20 / h40) <= 2.2);
  CHECK(std::log2(e20 / e40) >= 0.8);
  CHECK(std::log2(e20 / e40) <= 1.2);
}

TEST_CASE("forward from the Dirac fixed point stays at zero") {
  const DiracDenoiser d(0.0);
  const std::vector<double> x0(5, 0.0);
  for (auto kind : {SolverKind::Heun, SolverKind::Euler}) {
    const auto r = ode_solve_forward(d, x0, 1, make_solver(kind, 12, kEdm));
    for (double v : r.x) CHECK(v == 0.0);
  }
}

TEST_CASE("forward then reverse returns to the start") {
  const GaussianDenoiser g(0.2, 0.9);
  const auto spec = make_solver(SolverKind::Heun, 40, kEdm);
  const auto x0 = random_row(3);
  const auto up = ode_solve_forward(g, x0, 1, spec);
  const auto down = ode_solve_reverse(g, up.x, 1, spec);
  CHECK(rel_l2(down.x, x0) <= 1e-3);
}

TEST_CASE("NFE matches an independent counter") {
  const GaussianDenoiser g;
  for (auto [kind, n, per_leg] : {std::tuple{SolverKind::Heun, 30u, 59u}, std::tuple{SolverKind::Euler, 250u, 250u},
                                  std::tuple{SolverKind::Heun, 2u, 3u}, std::tuple{SolverKind::Euler, 7u, 7u}}) {
    const auto spec = make_solver(kind, n, kEdm);
    CHECK(spec.leg_nfe() == per_leg);
    CountingDenoiser c(g);
    const auto x = random_row(4, 6);
    const auto f = ode_solve_forward(c, x, 2, spec);
    CHECK(f.nfe == per_leg);
    CHECK(c.calls == per_leg);
    const auto r = ode_solve_reverse(c, f.x, 2, spec);
    CHECK(r.nfe == per_leg);
    CHECK(c.calls == 2 * per_leg);
  }
}

TEST_CASE("presets") {
  const auto heun = solver_preset("paper-heun", kEdm);
  CHECK(heun.kind == SolverKind::Heun);
  CHECK(heun.steps() == 30);
  const auto ddib = solver_preset("paper-ddib", kEdm);
  CHECK(ddib.kind == SolverKind::Euler);
  CHECK(ddib.steps() == 250);
  try {
    solver_preset("paper-rk4", kEdm);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("translation NFE totals") {
  const GaussianDenoiser g;
  CountingDenoiser cs(g), ct(g);
  const auto seg = segment_of(random_row(5));
  const auto t = translate(cs, ct, seg, solver_preset("paper-heun", kEdm));
  CHECK(t.nfe_forward == 59);
  CHECK(t.nfe_reverse == 59);
  CHECK(t.nfe_total == 118);
  CHECK(cs.calls == 59);
  CHECK(ct.calls == 59);
  const auto c = cycle(cs, ct, seg, solver_preset("paper-heun", kEdm));
  CHECK(c.nfe_total == 236);
  CHECK(cs.calls == 59 + 118);
  CHECK(ct.calls == 59 + 118);
  const auto e = translate(cs, ct, seg, solver_preset("paper-ddib", kEdm));
  CHECK(e.nfe_total == 500);
}

TEST_CASE("self-translation is close to the identity") {
  const GaussianDenoiser g;
  const auto seg = segment_of(random_row(6));
  const auto t = translate(g, g, seg, make_solver(SolverKind::Heun, 40, kEdm));
  CHECK(rel_l2(t.translated, seg.values) <= 2e-3);
  const auto t20 = translate(g, g, seg, make_solver(SolverKind::Heun, 20, kEdm));
  const auto t80 = translate(g, g, seg, make_solver(SolverKind::Heun, 80, kEdm));
  CHECK(rel_l2(t80.translated, seg.values) < rel_l2(t20.translated, seg.values));
}

TEST_CASE("Dirac bridges are exact") {
  const DiracDenoiser a(0.7), b(-1.3);
  const std::vector<double> at_a(6, 0.7);
  for (auto kind : {SolverKind::Heun, SolverKind::Euler}) {
    const auto spec = make_solver(kind, 10, kEdm);
    const auto c = cycle(a, b, segment_of(at_a), spec);
    for (double v : c.translated) CHECK(std::abs(v + 1.3) <= 1e-10 * 1.3);
    CHECK(rel_l2(*c.reconstructed, at_a) <= 1e-10);
  }
}

TEST_CASE("Gaussian cycle error is small and shrinks with N") {
  const GaussianDenoiser a(0.2, 0.8), b(-0.3, 1.3);
  const auto seg = segment_of(random_row(7));
  std::vector<double> errs;
  for (std::size_t n : {10u, 20u, 40u, 80u}) {
    const auto c = cycle(a, b, seg, make_solver(SolverKind::Heun, n, kEdm));
    errs.push_back(rel_l2(*c.reconstructed, seg.values));
  }
  CHECK(errs[2] <= 5e-3);
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < 1.1 * errs[i - 1]);
}

TEST_CASE("Gaussian translation follows the closed form") {
  // x -> latent by the source trajectory, then down the target trajectory.
  const GaussianDenoiser a(0.5, 0.6), b(-1.0, 2.0);
  const auto seg = segment_of(random_row(8));
  const auto t = translate(a, b, seg, make_solver(SolverKind::Heun, 160, kEdm));
  std::vector<double> expect(seg.values.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    expect[i] = b.transport(a.transport(seg.values[i], 0.0, kEdm.sigma_max), kEdm.sigma_max, 0.0);
  CHECK(rel_l2(t.translated, expect) <= 1e-3);
}

TEST_CASE("inputs are never modified") {
  const GaussianDenoiser a(0.2, 0.8), b(-0.3, 1.3);
  const auto seg = segment_of(random_row(9));
  const Segment copy = seg;
  const auto spec = make_solver(SolverKind::Heun, 10, kEdm);
  translate(a, b, seg, spec);
  cycle(a, b, seg, spec);
  std::vector<Segment> segs{seg, seg};
  translate_batch(a, b, segs, spec, true, 1);
  CHECK(seg.values == copy.values);
  CHECK(segs[1].values == copy.values);
  const std::vector<double> x = copy.values;
  ode_solve_forward(a, x, 1, spec);
  ode_solve_reverse(a, x, 1, spec);
  CHECK(x == copy.values);
}

TEST_CASE("batched translation matches single translations") {
  const GaussianDenoiser a(0.2, 0.8), b(-0.3, 1.3);
  std::vector<Segment> segs;
  for (int k = 0; k < 5; ++k) segs.push_back(segment_of(random_row(20 + k)));
  const auto spec = make_solver(SolverKind::Heun, 12, kEdm);
  const auto batched = translate_batch(a, b, segs, spec, true, 2);
  REQUIRE(batched.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto one = cycle(a, b, segs[k], spec);
    CHECK(batched[k].translated == one.translated);
    CHECK(*batched[k].reconstructed == *one.reconstructed);
    CHECK(batched[k].nfe_total == 4 * spec.leg_nfe());
  }
}

TEST_CASE("translation checks the source modality") {
  nn::UNetConfig arch;
  arch.base_width = 8;
  arch.mults = {1, 2};
  arch.res_blocks = 1;
  arch.attention_lengths = {};
  arch.groups = 2;
  nn::UNet<float> net(arch);
  net.init(1);
  NetDenoiser eeg(arch, kEdm, Modality::Eeg, net.params().values());
  NetDenoiser fmeg(arch, kEdm, Modality::Fmeg, net.params().values());
  const auto seg = segment_of(sine(320, 64, 2.0, 0.5), Modality::Fmeg);
  try {
    translate(eeg, fmeg, seg, make_solver(SolverKind::Heun, 4, kEdm));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Usage);
  }
  CHECK_NOTHROW(translate(fmeg, eeg, seg, make_solver(SolverKind::Heun, 4, kEdm)));
}

TEST_CASE("a non-finite denoiser output is reported as divergence") {
  struct Broken final : Denoiser {
    std::size_t dim() const noexcept override { return 0; }
    void denoise(std::span<const double> x, std::size_t, double sigma, std::span<double> out) const override {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = sigma < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    using Denoiser::denoise;
  } broken;
  try {
    ode_solve_reverse(broken, random_row(1, 4, 80), 1, make_solver(SolverKind::Heun, 10, kEdm));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SolverDivergence);
  }
}

TEST_CASE("trace directory round trip") {
  const GaussianDenoiser a(0.2, 0.8), b(-0.3, 1.3);
  std::vector<Segment> segs;
  for (int k = 0; k < 3; ++k) {
    segs.push_back(segment_of(random_row(30 + k, 320, 0.3)));
    segs.back().provenance = {"rec", "ch" + std::to_string(k), 2.5 * k};
  }
  TraceSet set;
  set.source_modality = Modality::Eeg;
  set.target_modality = Modality::Fmeg;
  set.solver = SolverKind::Heun;
  set.steps = 6;
  set.cycle = true;
  set.source_stats = NormStats{-10, 20, Modality::Eeg};
  set.traces = translate_batch(a, b, segs, make_solver(SolverKind::Heun, 6, kEdm), true);
  const fs::path dir = fs::temp_directory_path() / "ddib_test_traces";
  fs::remove_all(dir);
  save_traces(set, dir);
  CHECK(is_trace_dir(dir));
  CHECK(fs::file_size(dir / "translated.f32") == 3 * 320 * 4);
  const auto back = load_traces(dir);
  REQUIRE(back.traces.size() == 3);
  CHECK(back.cycle);
  CHECK(back.steps == 6);
  CHECK(back.source_stats->max == 20);
  CHECK(back.traces[2].provenance.channel == "ch2");
  CHECK(back.traces[2].nfe_total == 4 * 11);
  CHECK(back.traces[1].reconstructed->at(5) ==
        static_cast<double>(static_cast<float>(set.traces[1].reconstructed->at(5))));
  CHECK(fs::exists(dir / "summary.txt"));
  fs::remove_all(dir);
}

}  // TEST_SUITE
