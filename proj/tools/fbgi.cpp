// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "fbgi/experiment.hpp"
#include "fbgi/mask.hpp"

namespace {

constexpr const char* kMetricsDoc =
    "CSV files written by `fbgi run` and `fbgi compare`:\n"
    "\n"
    "metrics.csv / comparison.csv (one row per window or mode)\n"
    "  mode             naked_eye_digital | naked_eye_analog | traditional |\n"
    "                   closed_form_oracle\n"
    "  scene            scene label (letter:X or the scene file name)\n"
    "  pearson          Pearson correlation between image and scene; negative\n"
    "                   for naked-eye modes, positive for traditional\n"
    "  visibility_mean  mean per-segment visibility (max-min)/(max+min)\n"
    "  mse_vs_oracle    mean squared error against the mode's closed form\n"
    "  frames           frames integrated into the image\n"
    "  seed             noise seed used by the run\n"
    "\n"
    "trace.csv / trace_digital.csv / trace_analog.csv (one row per frame)\n"
    "  frame_index      global frame index across all windows\n"
    "  T                clean transmissivity of (mask frame, scene)\n"
    "  I_settled        source intensity after the feedback loop settled\n"
    "  steps            loop iterations spent settling\n"
    "  flag             settled | pinned | max_steps\n"
    "\n"
    "segment_visibility.csv (one row per mask segment per window)\n"
    "  window, block, row, visibility, formula_contrast\n"
    "\n"
    "Images are 8-bit PGM, min/max rescaled; the original accumulator range\n"
    "is kept in the sidecar JSON next to each image.\n"
    "\n"
    "FBGI_OUTPUT_DIR overrides outputs.directory from the config.\n";

void print_run_output(const fbgi::experiment::RunOutput& out) {
  for (const auto& f : out.files) std::printf("wrote %s\n", f.string().c_str());
  for (const auto& w : out.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fbgi: feedback ghost imaging simulator (negative images straight from "
      "a photoelectric feedback loop)"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* cmd_run = app.add_subcommand(
      "run", "Simulate the active feedback loop; write images, trace, metrics");
  cmd_run->add_option("config", config_path, "experiment config (JSON)")
      ->required();

  CLI::App* cmd_compare = app.add_subcommand(
      "compare",
      "Run traditional, both naked-eye loops and the closed-form oracle on "
      "one scene; write one metrics row and image per mode");
  cmd_compare->add_option("config", config_path, "experiment config (JSON)")
      ->required();

  CLI::App* cmd_mask = app.add_subcommand("mask", "Mask sequence utilities");
  cmd_mask->require_subcommand(1);
  int mask_n = 0;
  int mask_k = 0;
  std::string mask_dir;
  CLI::App* cmd_export = cmd_mask->add_subcommand(
      "export", "Write every mask frame as a PGM plus a layout manifest");
  cmd_export->add_option("n", mask_n, "grid side length")->required();
  cmd_export->add_option("k", mask_k, "number of column blocks")->required();
  cmd_export->add_option("dir", mask_dir, "output directory")->required();

  CLI::App* cmd_metrics = app.add_subcommand(
      "metrics", "Describe every CSV and sidecar file the tool writes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_run->parsed()) {
      auto cfg = fbgi::experiment::load_experiment_config(config_path);
      print_run_output(fbgi::experiment::run_experiment(cfg));
    } else if (cmd_compare->parsed()) {
      auto cfg = fbgi::experiment::load_experiment_config(config_path);
      print_run_output(fbgi::experiment::compare_modes(cfg));
    } else if (cmd_export->parsed()) {
      auto seq = fbgi::mask::build_mask_sequence(mask_n, mask_k);
      long written = fbgi::mask::export_mask_sequence(seq, mask_dir);
      std::printf("wrote %ld files to %s\n", written, mask_dir.c_str());
    } else if (cmd_metrics->parsed()) {
      std::fputs(kMetricsDoc, stdout);
    }
  } catch (const fbgi::experiment::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
