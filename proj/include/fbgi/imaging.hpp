// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_IMAGING_HPP
#define FBGI_IMAGING_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fbgi/feedback.hpp"
#include "fbgi/mask.hpp"
#include "fbgi/optics.hpp"
#include "fbgi/scene.hpp"

namespace fbgi::imaging {

// One displayed frame: mask pattern A_i at source intensity I_i.
struct PatternFrame {
  std::span<const std::uint8_t> mask;
  double intensity = 0.0;
};

// Pulls the next frame, or nullopt when the stream ends. Returned mask spans
// must stay valid until integration finishes.
using PatternStream = std::function<std::optional<PatternFrame>()>;

// Retina-style exposure: the plain sum of I_i over lit pixels across the
// frames of one persistence window.
struct ExposureImage {
  int n = 0;
  long frames_integrated = 0;
  bool partial = false;  // stream ended before the window filled
  std::vector<double> accumulator;  // n*n, row-major
};

// Integrates floor(tau * frame_rate) frames from the stream. A stream that
// ends early yields a partial image (flagged, never an error).
ExposureImage integrate_exposure(PatternStream& stream, double tau,
                                 double frame_rate);

// All complete windows of length floor(tau * frame_rate) at the given start
// stride (stride <= 0 selects the window length, i.e. non-overlapping).
std::vector<ExposureImage> sliding_persistence(PatternStream& stream,
                                               double tau, double frame_rate,
                                               long stride);

// Direct correlation baseline: image = sum A_i * t[i] (positive image).
std::vector<double> traditional_g2(const mask::MaskSequence& seq,
                                   std::span<const double> t);

// Analytic naked-eye exposure, replacing every settle by its closed form:
// digital I = b/T, analog I = U/(1+T), both clamped to the law's range.
// A digital law meets T == 0 only if clamp_substitution is set (the clamp
// stands in for the unbounded comparator target); otherwise this throws.
std::vector<double> closed_form_feedback_g2(const mask::MaskSequence& seq,
                                            const scene::Scene& scene,
                                            const feedback::FeedbackLaw& law,
                                            bool clamp_substitution = true);

// Solves S * x = normalization * t_segment for one segment. S-matrices of
// order N satisfy inv(S) = (2/(N+1)) * (2*S' - J), so integral data (binary
// scenes measured noise-free) recovers bit-exactly through integer
// arithmetic; anything else falls back to the same formula in doubles.
std::vector<double> segment_recover_exact(const mask::SMatrix& s,
                                          std::span<const double> t_segment,
                                          double normalization);

// Closed-form digital reconstructions under a transmissivity perturbation
// delta_t (one entry per frame): exact uses b/(T - dT), first_order the
// expansion (b/T)(1 + dT/T), clean b/T. residual_norm is the relative L2
// distance of exact from clean, the size of the noise-induced artifact.
// Requires every T > 0 and |dT| <= 0.2 T.
struct NoiseSensitivityReport {
  std::vector<double> exact_image;
  std::vector<double> first_order_image;
  std::vector<double> clean_image;
  double residual_norm = 0.0;
};

NoiseSensitivityReport noise_sensitivity(const mask::MaskSequence& seq,
                                         const scene::Scene& scene,
                                         double reference_b,
                                         std::span<const double> delta_t);

// (max - min) / (max + min) over the given values; 0 when the denominator
// vanishes (all-dark region).
double visibility(std::span<const double> values);

struct SegmentVisibility {
  int block = 0;
  int row = 0;
  double visibility = 0.0;
};

std::vector<SegmentVisibility> per_segment_visibility(
    const mask::MaskSequence& seq, std::span<const double> image);

double pearson(std::span<const double> a, std::span<const double> b);
double mse(std::span<const double> a, std::span<const double> b);
// ||a - ref|| / ||ref||; infinity when ref is all zero but a is not.
double relative_l2(std::span<const double> a, std::span<const double> ref);

// Negative-image test: the exposure must anti-correlate with the scene, and
// inside every segment that mixes object and background pixels the object
// pixels must come out darker (strict mean ordering). Object pixels are
// scene values >= 0.5.
struct NegativeImageCheck {
  double pearson = 0.0;
  bool degenerate = false;  // constant image or constant scene
  long mixed_segments = 0;
  long ordered_segments = 0;
  bool ordering_ok = false;
};

NegativeImageCheck negative_image_check(std::span<const double> image,
                                        const scene::Scene& scene,
                                        const mask::MaskSequence& seq);

}  // namespace fbgi::imaging

#endif
