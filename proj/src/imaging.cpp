// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/imaging.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fbgi/kernels.hpp"

namespace fbgi::imaging {

namespace {

long window_length(double tau, double frame_rate) {
  if (!(tau > 0.0)) throw std::invalid_argument("persistence window: tau must be > 0");
  if (!(frame_rate > 0.0))
    throw std::invalid_argument("persistence window: frame rate must be > 0");
  const double frames = std::floor(tau * frame_rate);
  if (!(frames >= 1.0))
    throw std::invalid_argument("persistence window: shorter than one frame");
  return static_cast<long>(frames);
}

int grid_side(std::size_t pixels) {
  const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(pixels))));
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != pixels)
    throw std::invalid_argument("pattern frame is not a square grid");
  return n;
}

}  // namespace

ExposureImage integrate_exposure(PatternStream& stream, double tau,
                                 double frame_rate) {
  const long length = window_length(tau, frame_rate);
  ExposureImage img;
  for (long i = 0; i < length; ++i) {
    std::optional<PatternFrame> f = stream();
    if (!f) {
      img.partial = true;
      break;
    }
    if (img.frames_integrated == 0) {
      img.n = grid_side(f->mask.size());
      img.accumulator.assign(f->mask.size(), 0.0);
    } else if (f->mask.size() != img.accumulator.size()) {
      throw std::invalid_argument("pattern stream changed frame size");
    }
    kernels::masked_accumulate(img.accumulator.data(), f->mask.data(),
                               f->intensity, f->mask.size());
    ++img.frames_integrated;
  }
  return img;
}

std::vector<ExposureImage> sliding_persistence(PatternStream& stream,
                                               double tau, double frame_rate,
                                               long stride) {
  const long length = window_length(tau, frame_rate);
  if (stride <= 0) stride = length;
  std::vector<PatternFrame> frames;
  while (auto f = stream()) {
    if (!frames.empty() && f->mask.size() != frames.front().mask.size())
      throw std::invalid_argument("pattern stream changed frame size");
    frames.push_back(*f);
  }
  std::vector<ExposureImage> windows;
  for (std::size_t start = 0;
       start + static_cast<std::size_t>(length) <= frames.size();
       start += static_cast<std::size_t>(stride)) {
    ExposureImage img;
    img.n = grid_side(frames.front().mask.size());
    img.frames_integrated = length;
    img.accumulator.assign(frames.front().mask.size(), 0.0);
    for (long i = 0; i < length; ++i) {
      const PatternFrame& f = frames[start + static_cast<std::size_t>(i)];
      kernels::masked_accumulate(img.accumulator.data(), f.mask.data(),
                                 f.intensity, f.mask.size());
    }
    windows.push_back(std::move(img));
  }
  return windows;
}

std::vector<double> traditional_g2(const mask::MaskSequence& seq,
                                   std::span<const double> t) {
  if (t.size() != static_cast<std::size_t>(seq.frame_count()))
    throw std::invalid_argument("traditional_g2: need one value per frame, got " +
                                std::to_string(t.size()));
  std::vector<double> image(static_cast<std::size_t>(seq.n()) * seq.n(), 0.0);
  for (long i = 0; i < seq.frame_count(); ++i) {
    auto fr = seq.frame(i);
    kernels::masked_accumulate(image.data(), fr.data(),
                               t[static_cast<std::size_t>(i)], fr.size());
  }
  return image;
}

namespace {

double clamp_to(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

double closed_form_intensity(const feedback::FeedbackLaw& law, double t,
                             bool clamp_substitution, long frame_idx) {
  if (std::holds_alternative<feedback::DigitalControllerConfig>(law)) {
    const auto& cfg = std::get<feedback::DigitalControllerConfig>(law);
    if (t == 0.0) {
      if (!clamp_substitution)
        throw std::domain_error(
            "closed_form_feedback_g2: frame " + std::to_string(frame_idx) +
            " has T = 0 and the digital form b/T is unbounded");
      return cfg.i_max;
    }
    return clamp_to(cfg.reference / t, cfg.i_min, cfg.i_max);
  }
  const auto& cfg = std::get<feedback::AnalogControllerConfig>(law);
  return clamp_to(cfg.source_level / (1.0 + t), cfg.i_min, cfg.i_max);
}

}  // namespace

std::vector<double> closed_form_feedback_g2(const mask::MaskSequence& seq,
                                            const scene::Scene& scene,
                                            const feedback::FeedbackLaw& law,
                                            bool clamp_substitution) {
  std::vector<double> image(static_cast<std::size_t>(seq.n()) * seq.n(), 0.0);
  for (long i = 0; i < seq.frame_count(); ++i) {
    auto fr = seq.frame(i);
    const double t = optics::transmissivity(fr, scene);
    const double inten = closed_form_intensity(law, t, clamp_substitution, i);
    kernels::masked_accumulate(image.data(), fr.data(), inten, fr.size());
  }
  return image;
}

std::vector<double> segment_recover_exact(const mask::SMatrix& s,
                                          std::span<const double> t_segment,
                                          double normalization) {
  const int order = s.order;
  if (t_segment.size() != static_cast<std::size_t>(order))
    throw std::invalid_argument("segment_recover_exact: segment length " +
                                std::to_string(t_segment.size()) +
                                " does not match S order " +
                                std::to_string(order));
  if (!(normalization > 0.0))
    throw std::invalid_argument("segment_recover_exact: normalization must be > 0");

  std::vector<double> y(static_cast<std::size_t>(order));
  std::vector<long long> yi(static_cast<std::size_t>(order));
  bool integral = true;
  for (int i = 0; i < order; ++i) {
    y[static_cast<std::size_t>(i)] = normalization * t_segment[static_cast<std::size_t>(i)];
    const double v = y[static_cast<std::size_t>(i)];
    const long long r = std::llround(v);
    yi[static_cast<std::size_t>(i)] = r;
    if (std::abs(v - static_cast<double>(r)) > 1e-6) integral = false;
  }

  std::vector<double> x(static_cast<std::size_t>(order));
  const long long np1 = order + 1;
  for (int j = 0; j < order; ++j) {
    if (integral) {
      long long num = 0;
      for (int i = 0; i < order; ++i)
        num += (2ll * s.at(i, j) - 1ll) * yi[static_cast<std::size_t>(i)];
      const long long twice = 2ll * num;
      if (twice % np1 == 0) {
        x[static_cast<std::size_t>(j)] = static_cast<double>(twice / np1);
        continue;
      }
    }
    double num = 0.0;
    for (int i = 0; i < order; ++i)
      num += (2.0 * s.at(i, j) - 1.0) * y[static_cast<std::size_t>(i)];
    x[static_cast<std::size_t>(j)] = 2.0 * num / static_cast<double>(np1);
  }
  return x;
}

NoiseSensitivityReport noise_sensitivity(const mask::MaskSequence& seq,
                                         const scene::Scene& scene,
                                         double reference_b,
                                         std::span<const double> delta_t) {
  if (!(reference_b > 0.0))
    throw std::invalid_argument("noise_sensitivity: reference must be > 0");
  if (delta_t.size() != static_cast<std::size_t>(seq.frame_count()))
    throw std::invalid_argument("noise_sensitivity: need one delta per frame");
  const std::size_t grid = static_cast<std::size_t>(seq.n()) * seq.n();
  NoiseSensitivityReport rep;
  rep.exact_image.assign(grid, 0.0);
  rep.first_order_image.assign(grid, 0.0);
  rep.clean_image.assign(grid, 0.0);
  for (long i = 0; i < seq.frame_count(); ++i) {
    auto fr = seq.frame(i);
    const double t = optics::transmissivity(fr, scene);
    const double dt = delta_t[static_cast<std::size_t>(i)];
    if (!(t > 0.0))
      throw std::invalid_argument(
          "noise_sensitivity: frame " + std::to_string(i) +
          " has T = 0; the closed form b/T needs T > 0 everywhere");
    if (!(std::abs(dt) <= 0.2 * t))
      throw std::invalid_argument(
          "noise_sensitivity: frame " + std::to_string(i) +
          " perturbation exceeds 20% of its transmissivity");
    const double rel = dt / t;
    kernels::masked_accumulate(rep.exact_image.data(), fr.data(),
                               reference_b / (t - dt), fr.size());
    kernels::masked_accumulate(rep.first_order_image.data(), fr.data(),
                               (reference_b / t) * (1.0 + rel), fr.size());
    kernels::masked_accumulate(rep.clean_image.data(), fr.data(),
                               reference_b / t, fr.size());
  }
  rep.residual_norm = relative_l2(rep.exact_image, rep.clean_image);
  return rep;
}

double visibility(std::span<const double> values) {
  if (values.empty()) return 0.0;
  kernels::MinMax mm = kernels::minmax(values.data(), values.size());
  const double denom = mm.max + mm.min;
  if (denom == 0.0) return 0.0;
  return (mm.max - mm.min) / denom;
}

std::vector<SegmentVisibility> per_segment_visibility(
    const mask::MaskSequence& seq, std::span<const double> image) {
  if (image.size() != static_cast<std::size_t>(seq.n()) * seq.n())
    throw std::invalid_argument("per_segment_visibility: image size mismatch");
  std::vector<SegmentVisibility> out;
  out.reserve(static_cast<std::size_t>(seq.segment_count()));
  std::vector<double> vals(static_cast<std::size_t>(seq.block_width()));
  for (int block = 0; block < seq.k(); ++block) {
    for (int row = 0; row < seq.n(); ++row) {
      auto px = seq.segment_pixels(block, row);
      for (std::size_t j = 0; j < px.size(); ++j)
        vals[j] = image[static_cast<std::size_t>(px[j])];
      out.push_back({block, row, visibility(vals)});
    }
  }
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("pearson: length mismatch");
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

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse: length mismatch");
  if (a.empty()) return 0.0;
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return kernels::dot(d.data(), d.data(), d.size()) /
         static_cast<double>(a.size());
}

double relative_l2(std::span<const double> a, std::span<const double> ref) {
  if (a.size() != ref.size())
    throw std::invalid_argument("relative_l2: length mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - ref[i];
  const double dd = kernels::dot(d.data(), d.data(), d.size());
  const double rr = kernels::dot(ref.data(), ref.data(), ref.size());
  if (rr == 0.0)
    return dd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(dd / rr);
}

NegativeImageCheck negative_image_check(std::span<const double> image,
                                        const scene::Scene& scene,
                                        const mask::MaskSequence& seq) {
  const std::size_t grid = static_cast<std::size_t>(seq.n()) * seq.n();
  if (image.size() != grid || scene.grid.size() != grid || scene.n != seq.n())
    throw std::invalid_argument("negative_image_check: size mismatch");
  NegativeImageCheck check;
  kernels::MinMax mi = kernels::minmax(image.data(), image.size());
  kernels::MinMax ms = kernels::minmax(scene.grid.data(), scene.grid.size());
  check.degenerate = mi.min == mi.max || ms.min == ms.max;
  check.pearson = check.degenerate ? 0.0 : pearson(image, scene.grid);
  for (int block = 0; block < seq.k(); ++block) {
    for (int row = 0; row < seq.n(); ++row) {
      auto px = seq.segment_pixels(block, row);
      double obj_sum = 0.0, bg_sum = 0.0;
      long obj_n = 0, bg_n = 0;
      for (long p : px) {
        const std::size_t u = static_cast<std::size_t>(p);
        if (scene.grid[u] >= 0.5) {
          obj_sum += image[u];
          ++obj_n;
        } else {
          bg_sum += image[u];
          ++bg_n;
        }
      }
      if (obj_n == 0 || bg_n == 0) continue;
      ++check.mixed_segments;
      if (obj_sum / static_cast<double>(obj_n) <
          bg_sum / static_cast<double>(bg_n))
        ++check.ordered_segments;
    }
  }
  check.ordering_ok = check.mixed_segments > 0 &&
                      check.ordered_segments == check.mixed_segments;
  return check;
}

}  // namespace fbgi::imaging
