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


// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "ddib/ddib.h"

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::strlen(ddib_version()) > 0);
  CHECK(std::string(ddib_status_name(DDIB_OK)) == "ok");
  CHECK(std::string(ddib_status_name(DDIB_ERR_DEPENDENCY)) == "dependency");
  CHECK(std::string(ddib_status_name(DDIB_ERR_SOLVER_DIVERGENCE)) == "solver-divergence");
  CHECK(std::string(ddib_status_name(DDIB_ERR_INTERNAL)) == "internal");
}

TEST_CASE("null arguments are rejected with a message") {
  CHECK(ddib_translate(nullptr, nullptr) == DDIB_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(ddib_last_error()) > 0);
  ddib_denoiser* d = nullptr;
  CHECK(ddib_denoiser_load("/nonexistent/x.ckpt", &d) == DDIB_ERR_DEPENDENCY);
  CHECK(d == nullptr);
  CHECK(std::string(ddib_last_error()).find("x.ckpt") != std::string::npos);
  CHECK(ddib_set_num_threads(0) == DDIB_ERR_INVALID_ARGUMENT);
  CHECK(ddib_set_num_threads(1) == DDIB_OK);
}

TEST_CASE("mixture denoiser") {
  const double w[] = {1.0}, mu[] = {0.0}, s[] = {1.0};
  ddib_denoiser* g = nullptr;
  REQUIRE(ddib_denoiser_mixture(1, w, mu, s, 0, &g) == DDIB_OK);
  const double x[] = {2.0, -4.0};
  double out[2];
  REQUIRE(ddib_denoiser_denoise(g, x, 2, 1, 1.0, out) == DDIB_OK);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == doctest::Approx(-2.0));
  CHECK(ddib_denoiser_calls(g) == 1);
  ddib_denoiser_free(g);

  const double bad_w[] = {-1.0};
  CHECK(ddib_denoiser_mixture(1, bad_w, mu, s, 0, &g) == DDIB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("in-memory translation and cycle") {
  const double w[] = {1.0}, a[] = {0.5}, b[] = {-2.0}, s[] = {0.0};
  ddib_denoiser *src = nullptr, *tgt = nullptr;
  REQUIRE(ddib_denoiser_mixture(1, w, a, s, 4, &src) == DDIB_OK);
  REQUIRE(ddib_denoiser_mixture(1, w, b, s, 4, &tgt) == DDIB_OK);
  CHECK(ddib_denoiser_dim(src) == 4);
  const std::vector<double> x(8, 0.5);
  ddib_trace_set* t = nullptr;
  REQUIRE(ddib_translate_rows(src, tgt, x.data(), 2, 4, "paper-heun", 0, 1, &t) == DDIB_OK);
  CHECK(ddib_trace_set_count(t) == 2);
  CHECK(ddib_trace_set_length(t) == 4);
  ddib_nfe nfe{};
  REQUIRE(ddib_trace_set_nfe(t, 1, &nfe) == DDIB_OK);
  CHECK(nfe.forward == 59);
  CHECK(nfe.reverse == 59);
  CHECK(nfe.total == 236);
  // every leg runs on the whole batch: 59 + 59 passes per denoiser
  CHECK(ddib_denoiser_calls(src) == 118);
  CHECK(ddib_denoiser_calls(tgt) == 118);
  double row[4];
  REQUIRE(ddib_trace_set_row(t, 0, DDIB_TRACE_TRANSLATED, row) == DDIB_OK);
  for (double v : row) CHECK(v == doctest::Approx(-2.0).epsilon(1e-12));
  REQUIRE(ddib_trace_set_row(t, 0, DDIB_TRACE_RECONSTRUCTED, row) == DDIB_OK);
  for (double v : row) CHECK(std::abs(v - 0.5) <= 1e-10);
  CHECK(ddib_trace_set_row(t, 5, DDIB_TRACE_SOURCE, row) == DDIB_ERR_INVALID_ARGUMENT);
  ddib_trace_set_free(t);

  REQUIRE(ddib_translate_rows(src, tgt, x.data(), 2, 4, "euler", 7, 0, &t) == DDIB_OK);
  REQUIRE(ddib_trace_set_nfe(t, 0, &nfe) == DDIB_OK);
  CHECK(nfe.total == 14);
  CHECK(ddib_trace_set_row(t, 0, DDIB_TRACE_RECONSTRUCTED, row) == DDIB_ERR_USAGE);
  ddib_trace_set_free(t);

  CHECK(ddib_translate_rows(src, tgt, x.data(), 2, 4, "rk4", 7, 0, &t) == DDIB_ERR_INVALID_ARGUMENT);
  CHECK(ddib_translate_rows(src, tgt, x.data(), 2, 4, "heun", 1, 0, &t) == DDIB_ERR_SCHEDULE);
  ddib_denoiser_free(src);
  ddib_denoiser_free(tgt);
}

TEST_CASE("verification report") {
  ddib_verify_report* r = nullptr;
  CHECK(ddib_verify_oracles(&r) == DDIB_OK);
  REQUIRE(r != nullptr);
  CHECK(ddib_verify_report_count(r) >= 10);
  for (std::size_t i = 0; i < ddib_verify_report_count(r); ++i) {
    CHECK(ddib_verify_report_passed(r, i) == 1);
    CHECK(std::strlen(ddib_verify_report_name(r, i)) > 0);
    CHECK(std::strlen(ddib_verify_report_measured(r, i)) > 0);
  }
  ddib_verify_report_free(r);
}

TEST_CASE("config dump and errors") {
  const char* sets[] = {"train.iterations=11", "run.seed=4"};
  char* ini = nullptr;
  REQUIRE(ddib_config_dump(nullptr, sets, 2, &ini) == DDIB_OK);
  const std::string text(ini);
  ddib_string_free(ini);
  CHECK(text.find("iterations = 11") != std::string::npos);
  CHECK(text.find("seed = 4") != std::string::npos);
  const char* bad[] = {"train.nope=1"};
  CHECK(ddib_config_dump(nullptr, bad, 1, &ini) == DDIB_ERR_CONFIG);
  CHECK(ddib_run("/nonexistent/run.ini", nullptr, 0, nullptr) == DDIB_ERR_IO);
  CHECK(ddib_evaluate("/nonexistent/traces", "/tmp/ddib_capi_eval", nullptr) != DDIB_OK);
}

}  // TEST_SUITE
