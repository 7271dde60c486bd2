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


// Command-line front end. Everything goes through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddib/ddib.h"

namespace {

int report(ddib_status st, const char* what) {
  if (st == DDIB_OK) return 0;
  std::fprintf(stderr, "ddib %s: %s error: %s\n", what, ddib_status_name(st), ddib_last_error());
  return static_cast<int>(st) > 0 && static_cast<int>(st) < 100 ? static_cast<int>(st) : 1;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

void print_and_free(char* s) {
  if (!s) return;
  std::fputs(s, stdout);
  ddib_string_free(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion bridge translation between EEG and fMEG segments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ddib_version()));

  int verbosity = 1;
  int threads = 0;
  app.add_flag_callback("-q,--quiet", [&] { verbosity = 0; }, "Only warnings and errors");
  app.add_flag_callback("-v,--verbose", [&] { verbosity = 2; }, "Debug logging");
  app.add_option("--threads", threads, "Worker threads (default: DDIB_NUM_THREADS or backend default)")
      ->check(CLI::PositiveNumber);

  int rc = 0;

  // synth
  std::string synth_config, synth_out;
  std::vector<std::string> synth_sets;
  auto* synth = app.add_subcommand("synth", "Generate synthetic EEG and fMEG recordings with ground truth");
  synth->add_option("--config", synth_config, "Config file (desk preset when omitted)")->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--set", synth_sets, "Override, section.key=value");
  synth->callback([&] {
    const auto sets = c_strings(synth_sets);
    rc = report(ddib_synth(synth_config.empty() ? nullptr : synth_config.c_str(), sets.data(), sets.size(),
                           synth_out.c_str()),
                "synth");
  });

  // preprocess
  std::string pre_in, pre_out, pre_modality, pre_config;
  double pre_k = 3.0;
  std::uint64_t pre_seed = 0;
  auto* pre = app.add_subcommand("preprocess", "Filter, detect bursts, segment and normalize recordings");
  pre->add_option("--in", pre_in, "Recording directory")->required()->check(CLI::ExistingDirectory);
  pre->add_option("--out", pre_out, "Output directory")->required();
  pre->add_option("--modality", pre_modality, "eeg or fmeg")->required()->check(CLI::IsMember({"eeg", "fmeg"}));
  pre->add_option("--nleo-multiplier", pre_k, "Threshold multiplier on the smoothed NLEO")->capture_default_str();
  pre->add_option("--seed", pre_seed, "Split seed")->capture_default_str();
  pre->add_option("--config", pre_config, "Config file for the remaining settings")->check(CLI::ExistingFile);
  pre->callback([&] {
    ddib_preprocess_options o{pre_in.c_str(), pre_out.c_str(), pre_modality.c_str(), pre_k, pre_seed,
                              pre_config.empty() ? nullptr : pre_config.c_str()};
    ddib_preprocess_summary s{};
    rc = report(ddib_preprocess(&o, &s), "preprocess");
    if (rc == 0) {
      std::printf("recordings %zu  train segments %zu  test segments %zu\n", s.recordings, s.train_segments,
                  s.test_segments);
      if (s.has_detection)
        std::printf("burst detection  precision %.4f  recall %.4f  F1 %.4f\n", s.precision, s.recall, s.f1);
    }
  });

  // train
  std::string tr_data, tr_modality, tr_out, tr_config;
  std::uint64_t tr_iters = 30000, tr_seed = 0;
  std::size_t tr_batch = 32;
  std::vector<std::string> tr_sets;
  auto* tr = app.add_subcommand("train", "Train a denoiser on one modality");
  tr->add_option("--data", tr_data, "Preprocess output directory")->required()->check(CLI::ExistingDirectory);
  tr->add_option("--modality", tr_modality, "eeg or fmeg")->required()->check(CLI::IsMember({"eeg", "fmeg"}));
  tr->add_option("--iters", tr_iters, "Iterations")->capture_default_str()->check(CLI::PositiveNumber);
  tr->add_option("--batch", tr_batch, "Batch size")->capture_default_str()->check(CLI::PositiveNumber);
  tr->add_option("--seed", tr_seed, "Seed")->capture_default_str();
  tr->add_option("--out", tr_out, "Checkpoint file")->required();
  tr->add_option("--config", tr_config, "Config file for model, edm and optimizer settings")
      ->check(CLI::ExistingFile);
  tr->add_option("--set", tr_sets, "Override, section.key=value");
  tr->callback([&] {
    const auto sets = c_strings(tr_sets);
    ddib_train_options o{tr_data.c_str(), tr_modality.c_str(), tr_iters, tr_batch, tr_seed, tr_out.c_str(),
                         tr_config.empty() ? nullptr : tr_config.c_str(), sets.data(), sets.size()};
    ddib_train_summary s{};
    rc = report(ddib_train(&o, &s), "train");
    if (rc == 0)
      std::printf("iterations %llu  loss %.5f -> %.5f  %.1f s\n", static_cast<unsigned long long>(s.iterations),
                  s.initial_loss, s.final_loss, s.seconds);
  });

  // translate
  std::string tl_src, tl_tgt, tl_data, tl_solver = "heun", tl_preset, tl_out;
  std::size_t tl_steps = 30, tl_max = 0;
  bool tl_cycle = false;
  auto* tl = app.add_subcommand("translate", "Translate segments through the shared latent space");
  tl->add_option("--src-ckpt", tl_src, "Source-modality checkpoint")->required();
  tl->add_option("--tgt-ckpt", tl_tgt, "Target-modality checkpoint")->required();
  tl->add_option("--data", tl_data, "Source dataset or preprocess output")->required();
  tl->add_option("--solver", tl_solver, "heun or euler")->capture_default_str()->check(
      CLI::IsMember({"heun", "euler"}));
  tl->add_option("--steps", tl_steps, "Schedule length N")->capture_default_str()->check(CLI::PositiveNumber);
  tl->add_option("--preset", tl_preset, "paper-heun or paper-ddib; overrides --solver and --steps")
      ->check(CLI::IsMember({"paper-heun", "paper-ddib"}));
  tl->add_flag("--cycle", tl_cycle, "Translate back to the source modality as well");
  tl->add_option("--max-segments", tl_max, "Evenly spaced subset size (0 keeps all)");
  tl->add_option("--out", tl_out, "Trace directory")->required();
  tl->callback([&] {
    ddib_translate_options o{tl_src.c_str(), tl_tgt.c_str(), tl_data.c_str(),
                             tl_preset.empty() ? nullptr : tl_preset.c_str(), tl_solver.c_str(), tl_steps,
                             tl_cycle ? 1 : 0, tl_max, tl_out.c_str()};
    ddib_trace_set* t = nullptr;
    rc = report(ddib_translate(&o, &t), "translate");
    if (rc == 0 && ddib_trace_set_count(t) > 0) {
      ddib_nfe nfe{};
      ddib_trace_set_nfe(t, 0, &nfe);
      std::printf("translated %zu segments  NFE per segment %zu (%zu + %zu", ddib_trace_set_count(t), nfe.total,
                  nfe.forward, nfe.reverse);
      if (tl_cycle) std::printf(" + %zu + %zu", nfe.back_forward, nfe.back_reverse);
      std::printf(")\n");
    }
    ddib_trace_set_free(t);
  });

  // evaluate
  std::string ev_traces, ev_out;
  auto* ev = app.add_subcommand("evaluate", "Metrics, spectra and report tables for trace directories");
  ev->add_option("--traces", ev_traces, "Trace directory, or a directory of them")->required()->check(
      CLI::ExistingDirectory);
  ev->add_option("--out", ev_out, "Report directory")->required();
  ev->callback([&] {
    char* summary = nullptr;
    rc = report(ddib_evaluate(ev_traces.c_str(), ev_out.c_str(), &summary), "evaluate");
    print_and_free(summary);
  });

  // verify-oracles
  auto* vo = app.add_subcommand("verify-oracles", "Training-free solver and oracle property checks");
  vo->callback([&] {
    ddib_verify_report* r = nullptr;
    const ddib_status st = ddib_verify_oracles(&r);
    for (std::size_t i = 0; i < ddib_verify_report_count(r); ++i)
      std::printf("%s  %-40s %s\n", ddib_verify_report_passed(r, i) ? "PASS" : "FAIL", ddib_verify_report_name(r, i),
                  ddib_verify_report_measured(r, i));
    ddib_verify_report_free(r);
    rc = report(st, "verify-oracles");
  });

  // run
  std::string run_config;
  std::vector<std::string> run_sets;
  bool run_print = false;
  auto* run = app.add_subcommand("run", "Run the configured pipeline stages in a workspace");
  run->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", run_sets, "Override, section.key=value");
  run->add_flag("--print-config", run_print, "Print the resolved config and exit");
  run->callback([&] {
    const auto sets = c_strings(run_sets);
    char* text = nullptr;
    if (run_print) {
      rc = report(ddib_config_dump(run_config.c_str(), sets.data(), sets.size(), &text), "run");
    } else {
      rc = report(ddib_run(run_config.c_str(), sets.data(), sets.size(), &text), "run");
    }
    print_and_free(text);
  });

  app.parse_complete_callback([&] {
    ddib_set_verbosity(verbosity);
    if (threads > 0) ddib_set_num_threads(threads);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return rc;
}
