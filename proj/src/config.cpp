#include "sahitrack/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sahitrack {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    double back = 0.0;
    if (parse_number(shorter, back) && back == v) return shorter;
  }
  return buf;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(source + ":" + std::to_string(n) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::runtime_error(source + ":" + std::to_string(n) + ": empty key or value");
    }
    if (cfg.values_.contains(key)) {
      throw std::runtime_error(source + ":" + std::to_string(n) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
    cfg.lines_[key] = n;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse(in, path.string());
}

namespace {

[[noreturn]] void bad_value(const std::string& source, const std::map<std::string, int>& lines, const std::string& key,
                            const std::string& what) {
  const auto it = lines.find(key);
  const std::string where = it == lines.end() ? source : source + ":" + std::to_string(it->second);
  throw std::runtime_error(where + ": key '" + key + "': " + what);
}

}  // namespace

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  mark(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  mark(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double v = 0.0;
  if (!parse_number(it->second, v)) bad_value(source_, lines_, key, "expected a number, got '" + it->second + "'");
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  mark(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  long long v = 0;
  const auto& s = it->second;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad_value(source_, lines_, key, "expected an integer, got '" + s + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  mark(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  bad_value(source_, lines_, key, "expected true or false, got '" + it->second + "'");
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> fallback) const {
  mark(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    bad_value(source_, lines_, key, "expected a list like [a,b], got '" + s + "'");
  }
  std::vector<double> out;
  std::istringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_number(trim(item), v)) bad_value(source_, lines_, key, "bad list element '" + trim(item) + "'");
    out.push_back(v);
  }
  return out;
}

std::string Config::location(const std::string& key) const {
  const auto it = lines_.find(key);
  return it == lines_.end() ? source_ : source_ + ":" + std::to_string(it->second);
}

std::vector<std::string> Config::unknown_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : values_) {
    if (!used_.contains(k)) out.push_back(k);
  }
  return out;
}

ExperimentConfig load_experiment(const Config& c) {
  ExperimentConfig e;
  auto pair = [&](const std::string& key, double a, double b) {
    const auto v = c.get_list(key, {a, b});
    if (v.size() != 2) throw std::runtime_error("key '" + key + "' needs exactly two values");
    return std::pair{v[0], v[1]};
  };

  ScenarioConfig& s = e.scene;
  const auto [fw, fh] = pair("scene.frame", s.frame_w, s.frame_h);
  s.frame_w = static_cast<int>(fw);
  s.frame_h = static_cast<int>(fh);
  s.n_birds = static_cast<int>(c.get_int("scene.n_birds", s.n_birds));
  std::tie(s.bird_w, s.bird_h) = pair("scene.bird_size", s.bird_w, s.bird_h);
  s.max_speed = c.get_double("scene.max_speed", s.max_speed);
  s.n_frames = static_cast<int>(c.get_int("scene.n_frames", s.n_frames));
  s.scenario = parse_scenario(c.get_string("scene.scenario", std::string(to_string(s.scenario))));
  std::tie(s.shelter_x, s.shelter_y) = pair("scene.shelter", s.shelter_x, s.shelter_y);
  s.occlusion_frames = static_cast<int>(c.get_int("scene.occlusion_frames", s.occlusion_frames));
  s.shelter_birds = static_cast<int>(c.get_int("scene.shelter_birds", s.shelter_birds));
  s.rng_seed = static_cast<std::uint64_t>(c.get_int("scene.seed", static_cast<long long>(s.rng_seed)));

  NoiseConfig& n = e.noise;
  n.miss_rate = c.get_double("noise.miss_rate", n.miss_rate);
  n.fp_rate = c.get_double("noise.fp_rate", n.fp_rate);
  n.jitter_std = c.get_double("noise.jitter_std", n.jitter_std);
  n.embed_dim = static_cast<int>(c.get_int("noise.embed_dim", n.embed_dim));
  n.embed_noise_std = c.get_double("noise.embed_noise_std", n.embed_noise_std);
  n.rng_seed = static_cast<std::uint64_t>(c.get_int("noise.seed", static_cast<long long>(n.rng_seed)));

  TrackerConfig& t = e.tracker;
  t.frame_w = s.frame_w;
  t.frame_h = s.frame_h;
  const auto [ww, wh] = pair("slice.window", t.window_w, t.window_h);
  t.window_w = static_cast<int>(ww);
  t.window_h = static_cast<int>(wh);
  t.overlap = c.get_double("slice.overlap", t.overlap);
  t.sampler.per_track_samples = static_cast<int>(c.get_int("sampler.per_track", t.sampler.per_track_samples));
  t.sampler.uniform_samples = static_cast<int>(c.get_int("sampler.uniform", t.sampler.uniform_samples));
  t.sampler.rng_seed = static_cast<std::uint64_t>(c.get_int("sampler.seed", static_cast<long long>(t.sampler.rng_seed)));
  t.sampler.full_grid = c.get_bool("sampler.full_grid", t.sampler.full_grid);
  t.detect.nms_iou = c.get_double("detect.nms_iou", t.detect.nms_iou);
  t.detect.min_confidence = c.get_double("detect.min_confidence", t.detect.min_confidence);
  t.parallel_detect = c.get_bool("detect.parallel", t.parallel_detect);
  e.detect_delay_us = c.get_int("detect.delay_us", e.detect_delay_us);
  t.kalman.pos_std_factor = c.get_double("kalman.pos_std_factor", t.kalman.pos_std_factor);
  t.kalman.vel_std_factor = c.get_double("kalman.vel_std_factor", t.kalman.vel_std_factor);
  t.assoc.w_pred = c.get_double("assoc.w_pred", t.assoc.w_pred);
  t.assoc.w_hist = c.get_double("assoc.w_hist", t.assoc.w_hist);
  t.assoc.stage1_min_similarity = c.get_double("assoc.stage1_gate", t.assoc.stage1_min_similarity);
  t.assoc.stage2_min_cosine = c.get_double("assoc.stage2_gate", t.assoc.stage2_min_cosine);
  t.assoc.stage_order = parse_stage_order(c.get_string("assoc.stage_order", std::string(to_string(t.assoc.stage_order))));
  t.n_init = static_cast<int>(c.get_int("tracker.n_init", t.n_init));
  t.max_age = static_cast<int>(c.get_int("tracker.max_age", t.max_age));
  t.feature_decay = c.get_double("tracker.feature_decay", t.feature_decay);
  e.eval_iou = c.get_double("eval.iou_threshold", e.eval_iou);

  const auto unknown = c.unknown_keys();
  if (!unknown.empty()) {
    std::string msg;
    for (const auto& k : unknown) msg += (msg.empty() ? "" : "; ") + c.location(k) + ": unknown key '" + k + "'";
    throw std::runtime_error(msg);
  }
  s.validate();
  n.validate();
  t.validate();
  if (e.detect_delay_us < 0) throw std::runtime_error("detect.delay_us must be non-negative");
  if (!(e.eval_iou > 0.0 && e.eval_iou <= 1.0)) throw std::runtime_error("eval.iou_threshold must lie in (0, 1]");
  return e;
}

std::string dump_experiment(const ExperimentConfig& e) {
  const auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  const auto& s = e.scene;
  const auto& n = e.noise;
  const auto& t = e.tracker;
  std::map<std::string, std::string> kv{
      {"scene.frame", "[" + std::to_string(s.frame_w) + "," + std::to_string(s.frame_h) + "]"},
      {"scene.n_birds", std::to_string(s.n_birds)},
      {"scene.bird_size", "[" + num(s.bird_w) + "," + num(s.bird_h) + "]"},
      {"scene.max_speed", num(s.max_speed)},
      {"scene.n_frames", std::to_string(s.n_frames)},
      {"scene.scenario", std::string(to_string(s.scenario))},
      {"scene.shelter", "[" + num(s.shelter_x) + "," + num(s.shelter_y) + "]"},
      {"scene.occlusion_frames", std::to_string(s.occlusion_frames)},
      {"scene.shelter_birds", std::to_string(s.shelter_birds)},
      {"scene.seed", std::to_string(s.rng_seed)},
      {"noise.miss_rate", num(n.miss_rate)},
      {"noise.fp_rate", num(n.fp_rate)},
      {"noise.jitter_std", num(n.jitter_std)},
      {"noise.embed_dim", std::to_string(n.embed_dim)},
      {"noise.embed_noise_std", num(n.embed_noise_std)},
      {"noise.seed", std::to_string(n.rng_seed)},
      {"slice.window", "[" + std::to_string(t.window_w) + "," + std::to_string(t.window_h) + "]"},
      {"slice.overlap", num(t.overlap)},
      {"sampler.per_track", std::to_string(t.sampler.per_track_samples)},
      {"sampler.uniform", std::to_string(t.sampler.uniform_samples)},
      {"sampler.seed", std::to_string(t.sampler.rng_seed)},
      {"sampler.full_grid", b(t.sampler.full_grid)},
      {"detect.nms_iou", num(t.detect.nms_iou)},
      {"detect.min_confidence", num(t.detect.min_confidence)},
      {"detect.parallel", b(t.parallel_detect)},
      {"detect.delay_us", std::to_string(e.detect_delay_us)},
      {"kalman.pos_std_factor", num(t.kalman.pos_std_factor)},
      {"kalman.vel_std_factor", num(t.kalman.vel_std_factor)},
      {"assoc.w_pred", num(t.assoc.w_pred)},
      {"assoc.w_hist", num(t.assoc.w_hist)},
      {"assoc.stage1_gate", num(t.assoc.stage1_min_similarity)},
      {"assoc.stage2_gate", num(t.assoc.stage2_min_cosine)},
      {"assoc.stage_order", std::string(to_string(t.assoc.stage_order))},
      {"tracker.n_init", std::to_string(t.n_init)},
      {"tracker.max_age", std::to_string(t.max_age)},
      {"tracker.feature_decay", num(t.feature_decay)},
      {"eval.iou_threshold", num(e.eval_iou)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace sahitrack
