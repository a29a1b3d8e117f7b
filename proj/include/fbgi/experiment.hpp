// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_EXPERIMENT_HPP
#define FBGI_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbgi/feedback.hpp"
#include "fbgi/imaging.hpp"
#include "fbgi/mask.hpp"
#include "fbgi/optics.hpp"
#include "fbgi/scene.hpp"
#include "json.hpp"

namespace fbgi::experiment {

inline constexpr const char* kVersion = "0.1.0";

// Invalid or inconsistent configuration; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ControllerKind { digital, analog };

struct DigitalRunParams {
  feedback::DigitalControllerConfig cfg;
  long max_steps = 0;               // <= 0: ceil((i_max - i_min)/step) + 2n
  double initial_intensity = -1.0;  // < 0: i_max
};

struct AnalogRunParams {
  feedback::AnalogControllerConfig cfg;
  long max_steps = 0;  // <= 0: 10n
  double tol = 1.0e-8;
  double initial_intensity = -1.0;  // < 0: i_max
};

struct ExperimentConfig {
  int n = 35;
  int k = 5;
  std::optional<char> scene_letter;
  std::filesystem::path scene_file;
  std::string scene_label;
  std::optional<scene::MotionDescriptor> motion;
  ControllerKind active = ControllerKind::analog;
  std::optional<DigitalRunParams> digital;
  std::optional<AnalogRunParams> analog;
  optics::NoiseKind noise_kind = optics::NoiseKind::none;
  double noise_amplitude = 0.0;
  double tau = 0.2;
  double frame_rate = 0.0;  // <= 0: one full scan per window (n*n / tau)
  long stride_frames = 0;   // <= 0: window length (non-overlapping)
  long windows = 1;
  std::filesystem::path out_dir = "out";
  bool emit_images = true;
  bool emit_traces = true;
  bool emit_metrics = true;
  std::uint64_t seed = 0;
  nlohmann::json echo;  // config as parsed, for the run manifest
};

// Strict parse: unknown keys, wrong types and out-of-range values all throw
// ConfigError naming the offending field path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

const char* controller_kind_name(ControllerKind kind);
const char* noise_kind_name(optics::NoiseKind kind);

struct TraceRow {
  long frame = 0;  // global frame index across all windows
  double transmissivity = 0.0;
  double intensity = 0.0;  // settled source intensity displayed that frame
  long steps = 0;
  feedback::SettleStatus status = feedback::SettleStatus::settled;
};

struct LoopSim {
  std::vector<imaging::ExposureImage> windows;
  std::vector<TraceRow> trace;
};

// Feedback-loop simulation over repeated mask scans. Global frame g shows
// mask frame g mod M; the scene sits at motion position g div L where L is
// the persistence window length. Each frame settles the law from its
// configured initial intensity, independent of other frames.
LoopSim simulate_feedback_loop(const mask::MaskSequence& seq,
                               const scene::Scene& base,
                               const std::optional<scene::MotionDescriptor>& motion,
                               const ExperimentConfig& cfg,
                               ControllerKind kind);

// Everything one invocation wrote, plus the manifest content itself.
struct RunOutput {
  nlohmann::json manifest;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

// Single-controller experiment: simulates the active law, writes images,
// trace, metrics, per-segment visibility and a run manifest into the output
// directory (FBGI_OUTPUT_DIR overrides the configured one).
RunOutput run_experiment(const ExperimentConfig& cfg);

// Four-way comparison on one scene/mask/seed: traditional baseline, both
// naked-eye loops and the active law's closed form, one metrics row and one
// image per mode. Always single-window.
RunOutput compare_modes(const ExperimentConfig& cfg);

}  // namespace fbgi::experiment

#endif
