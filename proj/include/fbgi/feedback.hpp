// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_FEEDBACK_HPP
#define FBGI_FEEDBACK_HPP

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "fbgi/optics.hpp"

namespace fbgi::feedback {

// Digital comparator: each step compares the bucket value B = I*T against
// the reference b and moves I one increment down (B > b), up (B < b) or not
// at all (B == b), clamped to [i_min, i_max]. The loop parks in a band of
// width `step` around b/T, the comparator analogue of I = b/T.
struct DigitalControllerConfig {
  double reference = 0.5;  // b
  double step = 0.0025;    // intensity increment per step (b/200 for b = 0.5)
  double i_min = 0.0;
  double i_max = 1.0e6;
};

// Analog difference modulator: the source relaxes toward the balance
// S = U - B - I = 0, i.e. I* = U / (1 + T), clamped to [i_min, i_max]:
//   I <- clamp(I + relaxation * ((U - B) - I)).
struct AnalogControllerConfig {
  double source_level = 1.0;  // U
  double relaxation = 0.5;    // in (0, 1]
  double i_min = 0.0;
  double i_max = 2.0;
};

using FeedbackLaw = std::variant<DigitalControllerConfig, AnalogControllerConfig>;

struct ControllerState {
  double intensity = 0.0;
  long step_count = 0;
};

enum class SettleStatus {
  settled,            // band or fixed point reached
  pinned_at_clamp,    // parked on a clamp bound with outward drive
  max_steps_reached,  // budget exhausted first
};

const char* settle_status_name(SettleStatus s);

struct SettleResult {
  ControllerState state;
  SettleStatus status = SettleStatus::max_steps_reached;

  double intensity() const { return state.intensity; }
  long steps() const { return state.step_count; }
  bool converged() const { return status != SettleStatus::max_steps_reached; }
};

// Single loop iterations. `frame` tags noise draws; the per-step draw index
// is the state's step_count. noise may be null.
ControllerState digital_step(const DigitalControllerConfig& cfg,
                             const ControllerState& state, double t,
                             const optics::NoiseModel* noise = nullptr,
                             std::uint64_t frame = 0);
ControllerState analog_step(const AnalogControllerConfig& cfg,
                            const ControllerState& state, double t,
                            const optics::NoiseModel* noise = nullptr,
                            std::uint64_t frame = 0);

// Runs digital steps until two consecutive direction reversals (the loop is
// oscillating inside its band), a fixed point, a clamp pin, or max_steps.
// max_steps <= 0 selects ceil((i_max - i_min) / step) + 64, enough to cross
// the whole clamp range and settle.
SettleResult settle_digital(const DigitalControllerConfig& cfg, double t,
                            double initial_intensity, long max_steps = 0,
                            const optics::NoiseModel* noise = nullptr,
                            std::uint64_t frame = 0);

// Runs analog steps until |I_next - I| <= tol (pinned when that happens on a
// clamp bound with the raw update outside), or max_steps.
SettleResult settle_analog(const AnalogControllerConfig& cfg, double t,
                           double initial_intensity, long max_steps,
                           double tol,
                           const optics::NoiseModel* noise = nullptr,
                           std::uint64_t frame = 0);

struct SettleParams {
  double initial_intensity = -1.0;  // < 0 selects the law's i_max
  long max_steps = 0;               // <= 0 selects a law-specific default
  double tol = 1.0e-8;              // analog only
};

SettleResult settle(const FeedbackLaw& law, double t, const SettleParams& params,
                    const optics::NoiseModel* noise = nullptr,
                    std::uint64_t frame = 0);

// Settles the law on every transmissivity in `grid` (noise-free) and reports
// how the settled intensity orders against T.
struct MonotonicityReport {
  std::vector<SettleResult> results;  // parallel to grid
  double rank_correlation = 0.0;      // Spearman of (T, settled I)
  bool strictly_decreasing = false;   // unique T ascending => I strictly falls
  bool any_pinned = false;
};

MonotonicityReport monotonicity_check(const FeedbackLaw& law,
                                      std::span<const double> grid,
                                      const SettleParams& params = {});

}  // namespace fbgi::feedback

#endif
