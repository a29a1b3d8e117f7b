// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fbgi/kernels.hpp"

namespace fbgi::feedback {

namespace {

void check_digital(const DigitalControllerConfig& cfg) {
  if (!(cfg.reference > 0.0))
    throw std::invalid_argument("digital controller: reference must be > 0");
  if (!(cfg.step > 0.0))
    throw std::invalid_argument("digital controller: step must be > 0");
  if (!(cfg.i_min >= 0.0) || !(cfg.i_min <= cfg.i_max))
    throw std::invalid_argument("digital controller: need 0 <= i_min <= i_max");
}

void check_analog(const AnalogControllerConfig& cfg) {
  if (!(cfg.source_level > 0.0))
    throw std::invalid_argument("analog controller: source level must be > 0");
  if (!(cfg.relaxation > 0.0) || cfg.relaxation > 1.0)
    throw std::invalid_argument("analog controller: relaxation must be in (0, 1]");
  if (!(cfg.i_min >= 0.0) || !(cfg.i_min <= cfg.i_max))
    throw std::invalid_argument("analog controller: need 0 <= i_min <= i_max");
}

void check_t(double t) {
  if (!(t >= 0.0) || !(t <= 1.0))
    throw std::invalid_argument("transmissivity must lie in [0, 1]");
}

double clamp_to(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace

const char* settle_status_name(SettleStatus s) {
  switch (s) {
    case SettleStatus::settled:
      return "settled";
    case SettleStatus::pinned_at_clamp:
      return "pinned";
    case SettleStatus::max_steps_reached:
      return "max_steps";
  }
  return "max_steps";
}

ControllerState digital_step(const DigitalControllerConfig& cfg,
                             const ControllerState& state, double t,
                             const optics::NoiseModel* noise,
                             std::uint64_t frame) {
  static const optics::NoiseModel no_noise;
  const optics::NoiseModel& nm = noise ? *noise : no_noise;
  optics::BucketSample b = optics::bucket_signal(
      state.intensity, t, nm, frame, static_cast<std::uint64_t>(state.step_count));
  double next = state.intensity;
  if (b.value > cfg.reference)
    next -= cfg.step;
  else if (b.value < cfg.reference)
    next += cfg.step;
  next = clamp_to(next, cfg.i_min, cfg.i_max);
  return {next, state.step_count + 1};
}

ControllerState analog_step(const AnalogControllerConfig& cfg,
                            const ControllerState& state, double t,
                            const optics::NoiseModel* noise,
                            std::uint64_t frame) {
  static const optics::NoiseModel no_noise;
  const optics::NoiseModel& nm = noise ? *noise : no_noise;
  optics::BucketSample b = optics::bucket_signal(
      state.intensity, t, nm, frame, static_cast<std::uint64_t>(state.step_count));
  const double drive = (cfg.source_level - b.value) - state.intensity;
  const double next =
      clamp_to(state.intensity + cfg.relaxation * drive, cfg.i_min, cfg.i_max);
  return {next, state.step_count + 1};
}

SettleResult settle_digital(const DigitalControllerConfig& cfg, double t,
                            double initial_intensity, long max_steps,
                            const optics::NoiseModel* noise,
                            std::uint64_t frame) {
  check_digital(cfg);
  check_t(t);
  if (max_steps <= 0)
    max_steps =
        static_cast<long>(std::ceil((cfg.i_max - cfg.i_min) / cfg.step)) + 64;
  ControllerState state{clamp_to(initial_intensity, cfg.i_min, cfg.i_max), 0};
  int prev_dir = 0;
  bool prev_was_reversal = false;
  for (long i = 0; i < max_steps; ++i) {
    ControllerState next = digital_step(cfg, state, t, noise, frame);
    const double moved = next.intensity - state.intensity;
    const int dir = moved > 0.0 ? 1 : (moved < 0.0 ? -1 : 0);
    if (dir == 0) {
      // Interior hold means B == b exactly; a hold on a bound is a pin.
      optics::BucketSample b = optics::bucket_signal(
          state.intensity, t, noise ? *noise : optics::NoiseModel{}, frame,
          static_cast<std::uint64_t>(state.step_count));
      const bool fixed_point = b.value == cfg.reference;
      return {next, fixed_point ? SettleStatus::settled
                                : SettleStatus::pinned_at_clamp};
    }
    const bool reversal = prev_dir != 0 && dir != prev_dir;
    if (reversal && prev_was_reversal) return {next, SettleStatus::settled};
    prev_was_reversal = reversal;
    prev_dir = dir;
    state = next;
  }
  return {state, SettleStatus::max_steps_reached};
}

SettleResult settle_analog(const AnalogControllerConfig& cfg, double t,
                           double initial_intensity, long max_steps, double tol,
                           const optics::NoiseModel* noise,
                           std::uint64_t frame) {
  check_analog(cfg);
  check_t(t);
  if (!(tol > 0.0))
    throw std::invalid_argument("settle_analog: tol must be > 0");
  if (max_steps <= 0)
    throw std::invalid_argument("settle_analog: max_steps must be > 0");
  ControllerState state{clamp_to(initial_intensity, cfg.i_min, cfg.i_max), 0};
  for (long i = 0; i < max_steps; ++i) {
    static const optics::NoiseModel no_noise;
    const optics::NoiseModel& nm = noise ? *noise : no_noise;
    optics::BucketSample b = optics::bucket_signal(
        state.intensity, t, nm, frame,
        static_cast<std::uint64_t>(state.step_count));
    const double raw =
        state.intensity +
        cfg.relaxation * ((cfg.source_level - b.value) - state.intensity);
    const double next = clamp_to(raw, cfg.i_min, cfg.i_max);
    const bool clamped = next != raw;
    ControllerState ns{next, state.step_count + 1};
    if (std::abs(next - state.intensity) <= tol) {
      return {ns, clamped ? SettleStatus::pinned_at_clamp : SettleStatus::settled};
    }
    state = ns;
  }
  return {state, SettleStatus::max_steps_reached};
}

SettleResult settle(const FeedbackLaw& law, double t, const SettleParams& params,
                    const optics::NoiseModel* noise, std::uint64_t frame) {
  if (std::holds_alternative<DigitalControllerConfig>(law)) {
    const auto& cfg = std::get<DigitalControllerConfig>(law);
    const double init =
        params.initial_intensity < 0.0 ? cfg.i_max : params.initial_intensity;
    return settle_digital(cfg, t, init, params.max_steps, noise, frame);
  }
  const auto& cfg = std::get<AnalogControllerConfig>(law);
  const double init =
      params.initial_intensity < 0.0 ? cfg.i_max : params.initial_intensity;
  const long max_steps = params.max_steps > 0 ? params.max_steps : 1000;
  return settle_analog(cfg, t, init, max_steps, params.tol, noise, frame);
}

namespace {

// Average ranks, ties averaged, 1-based.
std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson_of(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  const double ma = kernels::sum(a.data(), n) / static_cast<double>(n);
  const double mb = kernels::sum(b.data(), n) / static_cast<double>(n);
  std::vector<double> ca(n), cb(n);
  for (std::size_t i = 0; i < n; ++i) {
    ca[i] = a[i] - ma;
    cb[i] = b[i] - mb;
  }
  const double cov = kernels::dot(ca.data(), cb.data(), n);
  const double va = kernels::dot(ca.data(), ca.data(), n);
  const double vb = kernels::dot(cb.data(), cb.data(), n);
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace

MonotonicityReport monotonicity_check(const FeedbackLaw& law,
                                      std::span<const double> grid,
                                      const SettleParams& params) {
  MonotonicityReport rep;
  rep.results.reserve(grid.size());
  std::vector<double> settled(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SettleResult r = settle(law, grid[i], params);
    settled[i] = r.intensity();
    rep.any_pinned = rep.any_pinned || r.status == SettleStatus::pinned_at_clamp;
    rep.results.push_back(r);
  }
  if (grid.size() < 2) {
    rep.rank_correlation = 0.0;
    rep.strictly_decreasing = grid.size() == 1;
    return rep;
  }
  std::vector<double> rt = average_ranks(grid);
  std::vector<double> ri = average_ranks(settled);
  rep.rank_correlation = pearson_of(rt, ri);

  // Unique T ascending must map to strictly decreasing I, equal T to equal I.
  std::vector<std::size_t> idx(grid.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  bool ok = true;
  for (std::size_t i = 1; i < idx.size() && ok; ++i) {
    if (grid[idx[i]] == grid[idx[i - 1]])
      ok = settled[idx[i]] == settled[idx[i - 1]];
    else
      ok = settled[idx[i]] < settled[idx[i - 1]];
  }
  rep.strictly_decreasing = ok;
  return rep;
}

}  // namespace fbgi::feedback
