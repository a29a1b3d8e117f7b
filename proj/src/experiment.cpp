// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>

#include "fbgi/io.hpp"
#include "fbgi/kernels.hpp"

namespace fbgi::experiment {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail("unknown key '" + it.key() + "' in " + path);
  }
}

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double get_double(const json& j, const char* key, const std::string& path,
                  double def) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_number()) fail(path + "." + key + ": expected a number");
  return v->get<double>();
}

long get_long(const json& j, const char* key, const std::string& path,
              long def) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_number_integer()) fail(path + "." + key + ": expected an integer");
  return v->get<long>();
}

bool get_bool(const json& j, const char* key, const std::string& path,
              bool def) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_boolean()) fail(path + "." + key + ": expected a boolean");
  return v->get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) fail(path + ": missing required key '" + std::string(key) + "'");
  if (!v->is_string()) fail(path + "." + key + ": expected a string");
  return v->get<std::string>();
}

DigitalRunParams parse_digital(const json& j, int n) {
  const std::string path = "controller.digital";
  check_keys(j, {"b", "delta", "i_min", "i_max", "max_steps",
                 "initial_intensity"},
             path);
  DigitalRunParams p;
  p.cfg.reference = get_double(j, "b", path, 0.5);
  if (!(p.cfg.reference > 0.0)) fail(path + ".b: must be > 0");
  p.cfg.step = get_double(j, "delta", path, p.cfg.reference / 200.0);
  if (!(p.cfg.step > 0.0)) fail(path + ".delta: must be > 0");
  const double grid = static_cast<double>(n) * n;
  p.cfg.i_min = get_double(j, "i_min", path, 0.0);
  p.cfg.i_max = get_double(j, "i_max", path, 2.0 * p.cfg.reference * grid);
  if (!(p.cfg.i_min >= 0.0) || !(p.cfg.i_min <= p.cfg.i_max))
    fail(path + ": need 0 <= i_min <= i_max");
  p.max_steps = get_long(j, "max_steps", path, 0);
  if (p.max_steps < 0) fail(path + ".max_steps: must be >= 0");
  p.initial_intensity = get_double(j, "initial_intensity", path, -1.0);
  if (find(j, "initial_intensity") && !(p.initial_intensity >= 0.0))
    fail(path + ".initial_intensity: must be >= 0");
  return p;
}

AnalogRunParams parse_analog(const json& j) {
  const std::string path = "controller.analog";
  check_keys(j, {"u", "lambda", "i_min", "i_max", "max_steps", "tol",
                 "initial_intensity"},
             path);
  AnalogRunParams p;
  p.cfg.source_level = get_double(j, "u", path, 1.0);
  if (!(p.cfg.source_level > 0.0)) fail(path + ".u: must be > 0");
  p.cfg.relaxation = get_double(j, "lambda", path, 0.5);
  if (!(p.cfg.relaxation > 0.0) || p.cfg.relaxation > 1.0)
    fail(path + ".lambda: must be in (0, 1]");
  p.cfg.i_min = get_double(j, "i_min", path, 0.0);
  p.cfg.i_max = get_double(j, "i_max", path, 2.0 * p.cfg.source_level);
  if (!(p.cfg.i_min >= 0.0) || !(p.cfg.i_min <= p.cfg.i_max))
    fail(path + ": need 0 <= i_min <= i_max");
  p.max_steps = get_long(j, "max_steps", path, 0);
  if (p.max_steps < 0) fail(path + ".max_steps: must be >= 0");
  p.tol = get_double(j, "tol", path, 1.0e-8);
  if (!(p.tol > 0.0)) fail(path + ".tol: must be > 0");
  p.initial_intensity = get_double(j, "initial_intensity", path, -1.0);
  if (find(j, "initial_intensity") && !(p.initial_intensity >= 0.0))
    fail(path + ".initial_intensity: must be >= 0");
  return p;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) fail("config root: expected a JSON object");
  check_keys(j,
             {"n", "k", "scene", "motion", "controller", "noise", "exposure",
              "outputs", "seed"},
             "config");
  ExperimentConfig cfg;
  cfg.echo = j;

  const json* jn = find(j, "n");
  const json* jk = find(j, "k");
  if (!jn || !jn->is_number_integer()) fail("config.n: required integer");
  if (!jk || !jk->is_number_integer()) fail("config.k: required integer");
  cfg.n = jn->get<int>();
  cfg.k = jk->get<int>();
  if (cfg.n < 1) fail("config.n: must be >= 1");
  if (cfg.k < 1) fail("config.k: must be >= 1");
  if (cfg.n % cfg.k != 0) fail("config.k: must divide n");
  const int nb = cfg.n / cfg.k;
  if ((static_cast<long>(nb) + 1) & nb)
    fail("config: n/k + 1 must be a power of two, got n/k = " +
         std::to_string(nb));

  const json* js = find(j, "scene");
  if (!js || !js->is_object()) fail("config.scene: required object");
  check_keys(*js, {"letter", "file"}, "scene");
  const bool has_letter = find(*js, "letter") != nullptr;
  const bool has_file = find(*js, "file") != nullptr;
  if (has_letter == has_file)
    fail("config.scene: exactly one of 'letter' or 'file'");
  if (has_letter) {
    std::string s = get_string(*js, "letter", "scene");
    if (s.size() != 1) fail("scene.letter: expected a single character");
    cfg.scene_letter = s[0];
    cfg.scene_label = "letter:" + s;
  } else {
    cfg.scene_file = get_string(*js, "file", "scene");
    cfg.scene_label = cfg.scene_file.filename().string();
  }

  if (const json* jm = find(j, "motion")) {
    if (!jm->is_object()) fail("config.motion: expected an object");
    check_keys(*jm, {"dx", "dy", "wrap"}, "motion");
    scene::MotionDescriptor m;
    m.dx = static_cast<int>(get_long(*jm, "dx", "motion", 0));
    m.dy = static_cast<int>(get_long(*jm, "dy", "motion", 0));
    m.wrap = get_bool(*jm, "wrap", "motion", true);
    cfg.motion = m;
  }

  const json* jc = find(j, "controller");
  if (!jc || !jc->is_object()) fail("config.controller: required object");
  check_keys(*jc, {"active", "digital", "analog"}, "controller");
  const std::string active = get_string(*jc, "active", "controller");
  if (active == "digital")
    cfg.active = ControllerKind::digital;
  else if (active == "analog")
    cfg.active = ControllerKind::analog;
  else
    fail("controller.active: expected 'digital' or 'analog'");
  if (const json* jd = find(*jc, "digital")) {
    if (!jd->is_object()) fail("controller.digital: expected an object");
    cfg.digital = parse_digital(*jd, cfg.n);
  }
  if (const json* ja = find(*jc, "analog")) {
    if (!ja->is_object()) fail("controller.analog: expected an object");
    cfg.analog = parse_analog(*ja);
  }
  if (cfg.active == ControllerKind::digital && !cfg.digital)
    fail("controller.digital: required when active is 'digital'");
  if (cfg.active == ControllerKind::analog && !cfg.analog)
    fail("controller.analog: required when active is 'analog'");

  if (const json* jz = find(j, "noise")) {
    if (!jz->is_object()) fail("config.noise: expected an object");
    check_keys(*jz, {"kind", "amplitude"}, "noise");
    const std::string kind = get_string(*jz, "kind", "noise");
    if (kind == "none")
      cfg.noise_kind = optics::NoiseKind::none;
    else if (kind == "uniform")
      cfg.noise_kind = optics::NoiseKind::uniform;
    else if (kind == "gaussian_truncated")
      cfg.noise_kind = optics::NoiseKind::gaussian_truncated;
    else
      fail("noise.kind: expected 'none', 'uniform' or 'gaussian_truncated'");
    cfg.noise_amplitude = get_double(*jz, "amplitude", "noise", 0.0);
    if (cfg.noise_kind == optics::NoiseKind::none && cfg.noise_amplitude != 0.0)
      fail("noise.amplitude: must be 0 for kind 'none'");
    if (cfg.noise_amplitude < 0.0 || cfg.noise_amplitude >= 0.5)
      fail("noise.amplitude: must lie in [0, 0.5)");
  }

  if (const json* je = find(j, "exposure")) {
    if (!je->is_object()) fail("config.exposure: expected an object");
    check_keys(*je, {"tau", "frame_rate", "stride_frames", "windows"},
               "exposure");
    cfg.tau = get_double(*je, "tau", "exposure", 0.2);
    if (!(cfg.tau > 0.0)) fail("exposure.tau: must be > 0");
    cfg.frame_rate = get_double(*je, "frame_rate", "exposure", 0.0);
    if (cfg.frame_rate < 0.0) fail("exposure.frame_rate: must be >= 0");
    cfg.stride_frames = get_long(*je, "stride_frames", "exposure", 0);
    if (cfg.stride_frames < 0) fail("exposure.stride_frames: must be >= 0");
    cfg.windows = get_long(*je, "windows", "exposure", 1);
    if (cfg.windows < 1) fail("exposure.windows: must be >= 1");
  }

  if (const json* jo = find(j, "outputs")) {
    if (!jo->is_object()) fail("config.outputs: expected an object");
    check_keys(*jo, {"directory", "emit_images", "emit_traces", "emit_metrics"},
               "outputs");
    if (find(*jo, "directory"))
      cfg.out_dir = get_string(*jo, "directory", "outputs");
    cfg.emit_images = get_bool(*jo, "emit_images", "outputs", true);
    cfg.emit_traces = get_bool(*jo, "emit_traces", "outputs", true);
    cfg.emit_metrics = get_bool(*jo, "emit_metrics", "outputs", true);
  }

  if (const json* jseed = find(j, "seed")) {
    if (!jseed->is_number_integer() || (jseed->is_number_integer() &&
                                        !jseed->is_number_unsigned() &&
                                        jseed->get<long long>() < 0))
      fail("config.seed: expected a non-negative integer");
    cfg.seed = jseed->get<std::uint64_t>();
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = io::read_file(path);
  } catch (const std::exception& e) {
    fail(std::string("config file: ") + e.what());
  }
  json j = json::parse(bytes, nullptr, false);
  if (j.is_discarded()) fail("config file: not valid JSON: " + path.string());
  return parse_experiment_config(j);
}

const char* controller_kind_name(ControllerKind kind) {
  return kind == ControllerKind::digital ? "naked_eye_digital"
                                         : "naked_eye_analog";
}

const char* noise_kind_name(optics::NoiseKind kind) {
  switch (kind) {
    case optics::NoiseKind::none:
      return "none";
    case optics::NoiseKind::uniform:
      return "uniform";
    case optics::NoiseKind::gaussian_truncated:
      return "gaussian_truncated";
  }
  return "none";
}

namespace {

struct ResolvedExposure {
  long window_len = 0;
  long stride = 0;
  long windows = 1;
  long total_frames = 0;
  double frame_rate = 0.0;
};

ResolvedExposure resolve_exposure(const ExperimentConfig& cfg, long m) {
  ResolvedExposure r;
  if (cfg.frame_rate > 0.0) {
    r.frame_rate = cfg.frame_rate;
    r.window_len = static_cast<long>(std::floor(cfg.tau * cfg.frame_rate));
    if (r.window_len < 1)
      fail("exposure: tau * frame_rate is shorter than one frame");
  } else {
    // Default display speed: one full mask scan per persistence window.
    r.window_len = m;
    r.frame_rate = static_cast<double>(m) / cfg.tau;
  }
  r.stride = cfg.stride_frames > 0 ? cfg.stride_frames : r.window_len;
  r.windows = cfg.windows;
  r.total_frames = (r.windows - 1) * r.stride + r.window_len;
  return r;
}

feedback::FeedbackLaw law_of(const ExperimentConfig& cfg, ControllerKind kind) {
  if (kind == ControllerKind::digital) {
    if (!cfg.digital) fail("controller.digital: required for this operation");
    return cfg.digital->cfg;
  }
  if (!cfg.analog) fail("controller.analog: required for this operation");
  return cfg.analog->cfg;
}

feedback::SettleParams settle_params_of(const ExperimentConfig& cfg,
                                        ControllerKind kind) {
  feedback::SettleParams p;
  if (kind == ControllerKind::digital) {
    const DigitalRunParams& d = *cfg.digital;
    p.initial_intensity =
        d.initial_intensity < 0.0 ? d.cfg.i_max : d.initial_intensity;
    p.max_steps =
        d.max_steps > 0
            ? d.max_steps
            : static_cast<long>(
                  std::ceil((d.cfg.i_max - d.cfg.i_min) / d.cfg.step)) +
                  2L * cfg.n;
  } else {
    const AnalogRunParams& a = *cfg.analog;
    p.initial_intensity =
        a.initial_intensity < 0.0 ? a.cfg.i_max : a.initial_intensity;
    p.max_steps = a.max_steps > 0 ? a.max_steps : 10L * cfg.n;
    p.tol = a.tol;
  }
  return p;
}

}  // namespace

LoopSim simulate_feedback_loop(const mask::MaskSequence& seq,
                               const scene::Scene& base,
                               const std::optional<scene::MotionDescriptor>& motion,
                               const ExperimentConfig& cfg,
                               ControllerKind kind) {
  const ResolvedExposure exp = resolve_exposure(cfg, seq.frame_count());
  const feedback::FeedbackLaw law = law_of(cfg, kind);
  const feedback::SettleParams params = settle_params_of(cfg, kind);
  const optics::NoiseModel noise(cfg.noise_kind, cfg.noise_amplitude, cfg.seed);
  const optics::NoiseModel* np = noise.enabled() ? &noise : nullptr;

  std::vector<scene::Scene> positions;
  positions.push_back(base);
  if (motion) {
    const long last_pos = (exp.total_frames - 1) / exp.window_len;
    for (long p = 1; p <= last_pos; ++p)
      positions.push_back(scene::shift_scene(base, *motion, static_cast<int>(p)));
  }

  LoopSim sim;
  sim.trace.reserve(static_cast<std::size_t>(exp.total_frames));
  long g = 0;
  imaging::PatternStream stream = [&]() -> std::optional<imaging::PatternFrame> {
    if (g >= exp.total_frames) return std::nullopt;
    const long mf = g % seq.frame_count();
    const std::size_t pos =
        motion ? static_cast<std::size_t>(g / exp.window_len) : 0u;
    auto fr = seq.frame(mf);
    const double t = optics::transmissivity(fr, positions[pos]);
    feedback::SettleResult r =
        feedback::settle(law, t, params, np, static_cast<std::uint64_t>(g));
    sim.trace.push_back({g, t, r.intensity(), r.steps(), r.status});
    ++g;
    return imaging::PatternFrame{fr, r.intensity()};
  };
  // tau = 1 s at window_len frames/s makes floor(tau * rate) exactly the
  // resolved window length.
  sim.windows = imaging::sliding_persistence(
      stream, 1.0, static_cast<double>(exp.window_len), exp.stride);
  return sim;
}

namespace {

io::PgmImage exposure_to_pgm(const imaging::ExposureImage& img, double* out_min,
                             double* out_max) {
  io::PgmImage pgm;
  pgm.width = img.n;
  pgm.height = img.n;
  pgm.maxval = 255;
  pgm.pixels.assign(img.accumulator.size(), 0);
  kernels::MinMax mm = kernels::minmax(img.accumulator.data(),
                                       img.accumulator.size());
  *out_min = mm.min;
  *out_max = mm.max;
  if (mm.max > mm.min) {
    const double scale = 255.0 / (mm.max - mm.min);
    for (std::size_t i = 0; i < img.accumulator.size(); ++i)
      pgm.pixels[i] = static_cast<std::uint8_t>(
          std::llround((img.accumulator[i] - mm.min) * scale));
  }
  return pgm;
}

void write_image_pair(const std::filesystem::path& dir, const std::string& stem,
                      const imaging::ExposureImage& img,
                      std::vector<std::filesystem::path>& files) {
  double lo = 0.0, hi = 0.0;
  io::PgmImage pgm = exposure_to_pgm(img, &lo, &hi);
  io::write_pgm_file(dir / (stem + ".pgm"), pgm);
  files.push_back(dir / (stem + ".pgm"));
  json side;
  side["min"] = lo;
  side["max"] = hi;
  side["n"] = img.n;
  side["frames"] = img.frames_integrated;
  side["partial"] = img.partial;
  io::atomic_write_file(dir / (stem + ".json"), side.dump(2) + "\n");
  files.push_back(dir / (stem + ".json"));
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = "frame_index,T,I_settled,steps,flag\n";
  for (const TraceRow& r : rows) {
    out += std::to_string(r.frame);
    out += ',';
    out += io::format_double(r.transmissivity);
    out += ',';
    out += io::format_double(r.intensity);
    out += ',';
    out += std::to_string(r.steps);
    out += ',';
    out += feedback::settle_status_name(r.status);
    out += '\n';
  }
  return out;
}

struct MetricsRow {
  std::string mode;
  std::string scene_label;
  double pearson = 0.0;
  double visibility_mean = 0.0;
  double mse_vs_oracle = 0.0;
  long frames = 0;
  std::uint64_t seed = 0;
};

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "mode,scene,pearson,visibility_mean,mse_vs_oracle,frames,seed\n";
  for (const MetricsRow& r : rows) {
    out += r.mode;
    out += ',';
    out += r.scene_label;
    out += ',';
    out += io::format_double(r.pearson);
    out += ',';
    out += io::format_double(r.visibility_mean);
    out += ',';
    out += io::format_double(r.mse_vs_oracle);
    out += ',';
    out += std::to_string(r.frames);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

double mean_segment_visibility(const mask::MaskSequence& seq,
                               std::span<const double> image) {
  auto segs = imaging::per_segment_visibility(seq, image);
  if (segs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& seg : segs) s += seg.visibility;
  return s / static_cast<double>(segs.size());
}

std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("FBGI_OUTPUT_DIR")) {
    if (env[0] != '\0') return std::filesystem::path(env);
  }
  return cfg.out_dir;
}

mask::MaskSequence build_mask_checked(const ExperimentConfig& cfg) {
  try {
    return mask::build_mask_sequence(cfg.n, cfg.k);
  } catch (const std::invalid_argument& e) {
    fail(std::string("config: ") + e.what());
  }
}

scene::Scene build_scene_checked(const ExperimentConfig& cfg) {
  try {
    scene::Scene s = cfg.scene_letter
                         ? scene::letter_stencil(*cfg.scene_letter, cfg.n)
                         : scene::load_scene_pgm(cfg.scene_file);
    if (s.n != cfg.n)
      fail("scene: grid is " + std::to_string(s.n) + "x" + std::to_string(s.n) +
           " but config.n is " + std::to_string(cfg.n));
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("scene: ") + e.what());
  }
}

json manifest_json(const char* command, const ExperimentConfig& cfg,
                   const std::filesystem::path& dir,
                   const std::vector<std::filesystem::path>& files,
                   const std::vector<std::string>& warnings,
                   double duration_seconds) {
  json m;
  m["command"] = command;
  m["config"] = cfg.echo;
  m["versions"]["fbgi"] = kVersion;
  m["versions"]["kernels"] =
      std::string(kernels::backend_name(kernels::active_backend()));
  json outs = json::array();
  for (const auto& f : files) {
    const std::string bytes = io::read_file(f);
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(io::fnv1a64(bytes)));
    json o;
    o["path"] = std::filesystem::relative(f, dir).generic_string();
    o["bytes"] = bytes.size();
    o["fnv1a64"] = hex;
    outs.push_back(o);
  }
  m["outputs"] = outs;
  m["warnings"] = warnings;
  m["duration_seconds"] = duration_seconds;
  return m;
}

void collect_settle_warnings(const std::vector<TraceRow>& trace,
                             const std::string& label,
                             std::vector<std::string>& warnings) {
  long hit = 0;
  for (const TraceRow& r : trace)
    if (r.status == feedback::SettleStatus::max_steps_reached) ++hit;
  if (hit > 0)
    warnings.push_back(label + ": " + std::to_string(hit) +
                       " frames hit max_steps before settling");
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::filesystem::path dir = resolve_out_dir(cfg);
  const mask::MaskSequence seq = build_mask_checked(cfg);
  const scene::Scene base = build_scene_checked(cfg);
  if (cfg.active == ControllerKind::digital && !cfg.digital)
    fail("controller.digital: required when active is 'digital'");
  if (cfg.active == ControllerKind::analog && !cfg.analog)
    fail("controller.analog: required when active is 'analog'");

  const ResolvedExposure exp = resolve_exposure(cfg, seq.frame_count());
  LoopSim sim = simulate_feedback_loop(seq, base, cfg.motion, cfg, cfg.active);
  const feedback::FeedbackLaw law = law_of(cfg, cfg.active);

  std::filesystem::create_directories(dir);
  RunOutput out;
  collect_settle_warnings(sim.trace, controller_kind_name(cfg.active),
                          out.warnings);

  std::vector<MetricsRow> metrics;
  std::string vis_csv = "window,block,row,visibility,formula_contrast\n";
  const std::string contrast =
      io::format_double(mask::hadamard_block_contrast(seq.block_width()).value());
  for (std::size_t w = 0; w < sim.windows.size(); ++w) {
    const imaging::ExposureImage& img = sim.windows[w];
    const long pos =
        (static_cast<long>(w) * exp.stride) / exp.window_len;
    const scene::Scene scene_w =
        (cfg.motion && pos > 0)
            ? scene::shift_scene(base, *cfg.motion, static_cast<int>(pos))
            : base;
    const std::vector<double> oracle =
        imaging::closed_form_feedback_g2(seq, scene_w, law, true);

    MetricsRow row;
    row.mode = controller_kind_name(cfg.active);
    row.scene_label = cfg.scene_label;
    row.pearson = imaging::pearson(img.accumulator, scene_w.grid);
    row.visibility_mean = mean_segment_visibility(seq, img.accumulator);
    row.mse_vs_oracle = imaging::mse(img.accumulator, oracle);
    row.frames = img.frames_integrated;
    row.seed = cfg.seed;
    metrics.push_back(row);

    auto segs = imaging::per_segment_visibility(seq, img.accumulator);
    for (const auto& seg : segs) {
      vis_csv += std::to_string(w);
      vis_csv += ',';
      vis_csv += std::to_string(seg.block);
      vis_csv += ',';
      vis_csv += std::to_string(seg.row);
      vis_csv += ',';
      vis_csv += io::format_double(seg.visibility);
      vis_csv += ',';
      vis_csv += contrast;
      vis_csv += '\n';
    }

    if (cfg.emit_images) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "image_w%03zu", w);
      write_image_pair(dir, stem, img, out.files);
    }
  }

  if (cfg.emit_traces) {
    io::atomic_write_file(dir / "trace.csv", trace_csv(sim.trace));
    out.files.push_back(dir / "trace.csv");
  }
  if (cfg.emit_metrics) {
    io::atomic_write_file(dir / "metrics.csv", metrics_csv(metrics));
    out.files.push_back(dir / "metrics.csv");
    io::atomic_write_file(dir / "segment_visibility.csv", vis_csv);
    out.files.push_back(dir / "segment_visibility.csv");
  }

  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.manifest = manifest_json("run", cfg, dir, out.files, out.warnings, dt);
  io::atomic_write_file(dir / "manifest.json", out.manifest.dump(2) + "\n");
  out.files.push_back(dir / "manifest.json");
  return out;
}

RunOutput compare_modes(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::filesystem::path dir = resolve_out_dir(cfg);
  const mask::MaskSequence seq = build_mask_checked(cfg);
  const scene::Scene base = build_scene_checked(cfg);
  if (!cfg.digital) fail("controller.digital: compare needs both controllers");
  if (!cfg.analog) fail("controller.analog: compare needs both controllers");

  // Comparison is a single persistence window; wider exposure settings keep
  // their meaning for `run` only.
  ExperimentConfig one = cfg;
  one.windows = 1;
  one.stride_frames = 0;
  one.motion.reset();

  const long m = seq.frame_count();
  const optics::NoiseModel noise(cfg.noise_kind, cfg.noise_amplitude, cfg.seed);
  std::vector<double> t_clean(static_cast<std::size_t>(m));
  std::vector<double> t_meas(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    const double t = optics::transmissivity(seq.frame(i), base);
    t_clean[static_cast<std::size_t>(i)] = t;
    const optics::BucketSample s = optics::bucket_signal(
        1.0, t, noise, static_cast<std::uint64_t>(i), 0);
    t_meas[static_cast<std::size_t>(i)] = s.value;
  }

  LoopSim dig = simulate_feedback_loop(seq, base, std::nullopt, one,
                                       ControllerKind::digital);
  LoopSim ana = simulate_feedback_loop(seq, base, std::nullopt, one,
                                       ControllerKind::analog);

  const std::vector<double> img_traditional = imaging::traditional_g2(seq, t_meas);
  const std::vector<double> oracle_traditional =
      imaging::traditional_g2(seq, t_clean);
  const std::vector<double> oracle_digital = imaging::closed_form_feedback_g2(
      seq, base, cfg.digital->cfg, true);
  const std::vector<double> oracle_analog = imaging::closed_form_feedback_g2(
      seq, base, cfg.analog->cfg, true);
  const std::vector<double>& oracle_active =
      cfg.active == ControllerKind::digital ? oracle_digital : oracle_analog;

  std::filesystem::create_directories(dir);
  RunOutput out;
  collect_settle_warnings(dig.trace, "naked_eye_digital", out.warnings);
  collect_settle_warnings(ana.trace, "naked_eye_analog", out.warnings);

  auto metrics_for = [&](const std::string& mode, std::span<const double> img,
                         std::span<const double> oracle, long frames) {
    MetricsRow row;
    row.mode = mode;
    row.scene_label = cfg.scene_label;
    row.pearson = imaging::pearson(img, base.grid);
    row.visibility_mean = mean_segment_visibility(seq, img);
    row.mse_vs_oracle = imaging::mse(img, oracle);
    row.frames = frames;
    row.seed = cfg.seed;
    return row;
  };

  std::vector<MetricsRow> rows;
  rows.push_back(metrics_for("traditional", img_traditional, oracle_traditional, m));
  rows.push_back(metrics_for("naked_eye_digital", dig.windows[0].accumulator,
                             oracle_digital, dig.windows[0].frames_integrated));
  rows.push_back(metrics_for("naked_eye_analog", ana.windows[0].accumulator,
                             oracle_analog, ana.windows[0].frames_integrated));
  rows.push_back(metrics_for("closed_form_oracle", oracle_active, oracle_active, m));

  if (cfg.emit_images) {
    auto as_exposure = [&](const std::vector<double>& img) {
      imaging::ExposureImage e;
      e.n = seq.n();
      e.frames_integrated = m;
      e.accumulator = img;
      return e;
    };
    write_image_pair(dir, "image_traditional", as_exposure(img_traditional),
                     out.files);
    write_image_pair(dir, "image_naked_eye_digital", dig.windows[0], out.files);
    write_image_pair(dir, "image_naked_eye_analog", ana.windows[0], out.files);
    write_image_pair(dir, "image_closed_form_oracle", as_exposure(oracle_active),
                     out.files);
  }
  if (cfg.emit_traces) {
    io::atomic_write_file(dir / "trace_digital.csv", trace_csv(dig.trace));
    out.files.push_back(dir / "trace_digital.csv");
    io::atomic_write_file(dir / "trace_analog.csv", trace_csv(ana.trace));
    out.files.push_back(dir / "trace_analog.csv");
  }
  if (cfg.emit_metrics) {
    io::atomic_write_file(dir / "comparison.csv", metrics_csv(rows));
    out.files.push_back(dir / "comparison.csv");
  }

  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.manifest = manifest_json("compare", cfg, dir, out.files, out.warnings, dt);
  io::atomic_write_file(dir / "manifest.json", out.manifest.dump(2) + "\n");
  out.files.push_back(dir / "manifest.json");
  return out;
}

}  // namespace fbgi::experiment
