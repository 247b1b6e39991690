#include "sahitrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace sahitrack {
namespace {

// Fraction of max_speed a bird may need to keep up to still make its next
// timed waypoint; beyond this it stops wandering and heads straight there.
constexpr double kCommitSpeed = 0.7;
constexpr int kApproachFrames = 20;
constexpr double kReappearRadius = 1.5;
// Free flight keeps this many bird lengths away from the shelter entrance so
// that shelter scenes exercise occlusion rather than crossings.
constexpr double kKeepOutLengths = 10.0;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Disk {
  Point center;
  double radius = 0.0;
};

double segment_distance(Point a, Point b, Point p) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  const double t = len2 > 0.0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
  return dist({a.x + t * dx, a.y + t * dy}, p);
}

// A leg may not enter the disk; a leg starting inside must head straight out.
bool leg_allowed(Point from, Point to, const std::optional<Disk>& keep_out) {
  if (!keep_out) return true;
  const Disk& k = *keep_out;
  if (dist(from, k.center) < k.radius) {
    const bool outward = (to.x - from.x) * (from.x - k.center.x) + (to.y - from.y) * (from.y - k.center.y) >= 0.0;
    return outward && dist(to, k.center) >= k.radius;
  }
  return segment_distance(from, to, k.center) >= k.radius;
}

struct Bounds {
  double x0, y0, x1, y1;
  Point clamp(Point p) const { return {std::clamp(p.x, x0, x1), std::clamp(p.y, y0, y1)}; }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  Point random(Rng& rng) const { return {uniform(rng, x0, x1), uniform(rng, y0, y1)}; }
};

// A timed waypoint the bird's center must hit exactly.
struct Waypoint {
  int frame;
  Point pos;
  bool straight;  // fly a straight line from the previous waypoint
};

// Random wandering: legs toward random points at random speeds, with
// occasional perching.
class Wanderer {
 public:
  Wanderer(const ScenarioConfig& cfg, const Bounds& bounds, Rng& rng, Point start, std::optional<Disk> keep_out)
      : cfg_(cfg), bounds_(bounds), rng_(rng), pos_(start), target_(start), keep_out_(keep_out) {}

  Point pos() const { return pos_; }
  void set_pos(Point p) {
    pos_ = p;
    target_ = p;
    perch_left_ = 0;
  }

  void head(double heading, double length, double speed) {
    target_ = bounds_.clamp({pos_.x + length * std::cos(heading), pos_.y + length * std::sin(heading)});
    speed_ = speed;
    perch_left_ = 0;
  }

  Point step() {
    if (perch_left_ > 0) {
      --perch_left_;
      return pos_;
    }
    if (dist(pos_, target_) < 1e-9) new_leg();
    if (perch_left_ > 0) {
      --perch_left_;
      return pos_;
    }
    const double d = dist(pos_, target_);
    if (d < 1e-9) return pos_;  // leg clamped to nothing at the frame edge
    const double s = std::min(speed_, d);
    pos_ = {pos_.x + (target_.x - pos_.x) * s / d, pos_.y + (target_.y - pos_.y) * s / d};
    return pos_;
  }

 private:
  void new_leg() {
    if (uniform(rng_, 0.0, 1.0) < 0.15) {
      perch_left_ = static_cast<int>(uniform(rng_, 5.0, 25.0));
      return;
    }
    for (int attempt = 0; attempt < 32; ++attempt) {
      const double heading = uniform(rng_, 0.0, 2.0 * std::numbers::pi);
      const double length = uniform(rng_, 60.0, 400.0);
      const double speed = uniform(rng_, 0.25, 1.0) * cfg_.max_speed;
      const Point to = bounds_.clamp({pos_.x + length * std::cos(heading), pos_.y + length * std::sin(heading)});
      if (leg_allowed(pos_, to, keep_out_)) {
        head(heading, length, speed);
        return;
      }
    }
    perch_left_ = 5;
  }

  const ScenarioConfig& cfg_;
  const Bounds& bounds_;
  Rng& rng_;
  Point pos_;
  Point target_;
  double speed_ = 0.0;
  int perch_left_ = 0;
  std::optional<Disk> keep_out_;
};

struct BirdPlan {
  Point start;
  std::vector<Waypoint> waypoints;  // ascending frames
  std::optional<ShelterGap> gap;
  std::optional<double> exit_heading;
};

// Center per frame (index = frame id), nullopt while hidden.
std::vector<std::optional<Point>> fly(const ScenarioConfig& cfg, const Bounds& bounds, Rng& rng,
                                      const BirdPlan& plan, const std::optional<Disk>& keep_out) {
  std::vector<std::optional<Point>> centers(static_cast<std::size_t>(cfg.n_frames) + 1);
  if (cfg.n_frames < 1) return centers;
  Wanderer walker(cfg, bounds, rng, plan.start, keep_out);
  std::size_t next = 0;
  const double commit = kCommitSpeed * cfg.max_speed;

  for (int t = 1; t <= cfg.n_frames; ++t) {
    while (next < plan.waypoints.size() && plan.waypoints[next].frame < t) ++next;
    const bool hidden = plan.gap && t >= plan.gap->first_hidden && t < plan.gap->first_hidden + plan.gap->length;
    if (hidden) continue;

    if (t == 1) {
      centers[1] = walker.pos();
      if (next < plan.waypoints.size() && plan.waypoints[next].frame == 1) {
        walker.set_pos(plan.waypoints[next].pos);
        centers[1] = walker.pos();
      }
      continue;
    }

    const bool reappearing = plan.gap && t == plan.gap->first_hidden + plan.gap->length;
    if (next < plan.waypoints.size() && plan.waypoints[next].frame == t) {
      walker.set_pos(plan.waypoints[next].pos);
      if (reappearing && plan.exit_heading) {
        const double clear = keep_out ? keep_out->radius : 0.0;
        walker.head(*plan.exit_heading, clear + uniform(rng, 120.0, 400.0), uniform(rng, 0.4, 0.9) * cfg.max_speed);
      }
      centers[t] = walker.pos();
      continue;
    }

    const Point prev = walker.pos();
    if (next < plan.waypoints.size()) {
      const Waypoint& wp = plan.waypoints[next];
      const double remaining = static_cast<double>(wp.frame - t);
      Point candidate = wp.straight ? prev : walker.step();
      if (wp.straight || dist(candidate, wp.pos) > commit * remaining) {
        const double frac = 1.0 / (remaining + 1.0);
        candidate = {prev.x + (wp.pos.x - prev.x) * frac, prev.y + (wp.pos.y - prev.y) * frac};
        walker.set_pos(candidate);
      }
      centers[t] = candidate;
    } else {
      centers[t] = walker.step();
    }
  }
  return centers;
}

Point random_within(Rng& rng, const Bounds& bounds, Point center, double radius) {
  const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double r = uniform(rng, 0.0, radius);
  return bounds.clamp({center.x + r * std::cos(a), center.y + r * std::sin(a)});
}

void plan_crossing_pair(const ScenarioConfig& cfg, const Bounds& bounds, Rng& rng, BirdPlan& a, BirdPlan& b) {
  const double reach = 0.5 * kCommitSpeed * cfg.max_speed;
  const double offset = 0.3 * cfg.bird_w;
  int t = static_cast<int>(uniform(rng, 20.0, 50.0));
  Point meet = bounds.random(rng);
  a.start = random_within(rng, bounds, meet, reach * (t - 1));
  b.start = random_within(rng, bounds, meet, reach * (t - 1));
  while (t <= cfg.n_frames) {
    const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const Point o{offset * std::cos(phi), offset * std::sin(phi)};
    a.waypoints.push_back({t, bounds.clamp({meet.x + o.x, meet.y + o.y}), false});
    b.waypoints.push_back({t, bounds.clamp({meet.x - o.x, meet.y - o.y}), false});
    const int dt = static_cast<int>(uniform(rng, 40.0, 80.0));
    meet = random_within(rng, bounds, meet, reach * dt);
    t += dt;
  }
}

void plan_shelter_bird(const ScenarioConfig& cfg, const Bounds& bounds, Rng& rng, int index, int n_shelter,
                       int object_id, BirdPlan& plan) {
  const Point s = cfg.shelter();
  const double spacing = static_cast<double>(cfg.n_frames) / (n_shelter + 1);
  const int first_hidden = static_cast<int>(std::lround(spacing * (index + 1))) - cfg.occlusion_frames / 2;
  const int approach_start = first_hidden - 1 - kApproachFrames;
  const bool fits = approach_start >= 2 && first_hidden + cfg.occlusion_frames <= cfg.n_frames &&
                    cfg.occlusion_frames > 0;
  if (!fits) {
    plan.start = bounds.random(rng);
    return;
  }

  const double v_in = uniform(rng, 0.4, 0.8) * cfg.max_speed;
  double heading = 0.0;
  Point from = s;
  for (int attempt = 0; attempt < 64; ++attempt) {
    heading = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    from = {s.x - std::cos(heading) * v_in * kApproachFrames, s.y - std::sin(heading) * v_in * kApproachFrames};
    if (bounds.contains(from)) break;
  }
  from = bounds.clamp(from);

  const double reach = 0.5 * kCommitSpeed * cfg.max_speed;
  plan.start = random_within(rng, bounds, from, reach * (approach_start - 1));
  plan.waypoints.push_back({approach_start, from, false});
  plan.waypoints.push_back({first_hidden - 1, s, true});

  const double a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double r = uniform(rng, 0.0, kReappearRadius);
  const int back = first_hidden + cfg.occlusion_frames;
  plan.waypoints.push_back({back, bounds.clamp({s.x + r * std::cos(a), s.y + r * std::sin(a)}), false});
  // Leave through the entrance, roughly against the way in.
  plan.exit_heading = heading + std::numbers::pi + uniform(rng, -std::numbers::pi / 3, std::numbers::pi / 3);
  plan.gap = ShelterGap{object_id, first_hidden, cfg.occlusion_frames};
}

Bounds center_bounds(const ScenarioConfig& cfg) {
  const double margin = std::max(cfg.bird_w, cfg.bird_h);
  return {margin, margin, cfg.frame_w - margin, cfg.frame_h - margin};
}

}  // namespace

std::string_view to_string(Scenario s) { return s == Scenario::Crossing ? "crossing" : "shelter"; }

Scenario parse_scenario(std::string_view text) {
  if (text == "crossing") return Scenario::Crossing;
  if (text == "shelter") return Scenario::Shelter;
  throw std::invalid_argument("unknown scenario '" + std::string(text) + "' (expected crossing or shelter)");
}

Point ScenarioConfig::shelter() const {
  return {shelter_x < 0.0 ? frame_w / 2.0 : shelter_x, shelter_y < 0.0 ? frame_h / 2.0 : shelter_y};
}

void ScenarioConfig::validate() const {
  if (frame_w <= 0 || frame_h <= 0) throw std::invalid_argument("scene frame size must be positive");
  if (!(bird_w > 0.0) || !(bird_h > 0.0)) throw std::invalid_argument("bird size must be positive");
  const double margin = std::max(bird_w, bird_h);
  if (frame_w < 4 * margin || frame_h < 4 * margin) throw std::invalid_argument("frame too small for the birds");
  if (n_birds < 0 || n_frames < 0 || occlusion_frames < 0 || shelter_birds < 0) {
    throw std::invalid_argument("scene counts must be non-negative");
  }
  if (max_speed < 0.0) throw std::invalid_argument("max_speed must be non-negative");
  if (scenario == Scenario::Shelter) {
    const Point s = shelter();
    if (!center_bounds(*this).contains(s)) {
      throw std::invalid_argument("shelter position (" + std::to_string(s.x) + ", " + std::to_string(s.y) +
                                  ") is outside the frame");
    }
  }
}

void NoiseConfig::validate() const {
  if (!(miss_rate >= 0.0 && miss_rate < 1.0)) throw std::invalid_argument("noise.miss_rate must lie in [0, 1)");
  if (fp_rate < 0.0 || jitter_std < 0.0 || embed_noise_std < 0.0 || embed_dim < 0) {
    throw std::invalid_argument("noise parameters must be non-negative");
  }
}

Scene generate_scene(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  const Bounds bounds = center_bounds(cfg);

  std::vector<BirdPlan> plans(static_cast<std::size_t>(cfg.n_birds));
  std::vector<std::pair<double, double>> sizes;
  for (int i = 0; i < cfg.n_birds; ++i) {
    sizes.emplace_back(cfg.bird_w * uniform(rng, 0.85, 1.15), cfg.bird_h * uniform(rng, 0.85, 1.15));
  }

  int planned = 0;
  if (cfg.scenario == Scenario::Crossing) {
    for (; planned + 1 < cfg.n_birds; planned += 2) {
      plan_crossing_pair(cfg, bounds, rng, plans[planned], plans[planned + 1]);
    }
  } else {
    const int n_shelter = std::min(cfg.shelter_birds, cfg.n_birds);
    for (; planned < n_shelter; ++planned) {
      plan_shelter_bird(cfg, bounds, rng, planned, n_shelter, planned + 1, plans[planned]);
    }
  }
  std::optional<Disk> keep_out;
  if (cfg.scenario == Scenario::Shelter) {
    keep_out = Disk{cfg.shelter(), kKeepOutLengths * std::max(cfg.bird_w, cfg.bird_h)};
  }
  for (int i = planned; i < cfg.n_birds; ++i) {
    plans[i].start = bounds.random(rng);
    for (int attempt = 0; attempt < 64 && keep_out && dist(plans[i].start, keep_out->center) < keep_out->radius;
         ++attempt) {
      plans[i].start = bounds.random(rng);
    }
  }

  Scene scene;
  std::vector<std::vector<std::optional<Point>>> paths;
  for (int i = 0; i < cfg.n_birds; ++i) {
    paths.push_back(fly(cfg, bounds, rng, plans[i], keep_out));
    if (plans[i].gap) scene.gaps.push_back(*plans[i].gap);
  }
  for (int t = 1; t <= cfg.n_frames; ++t) {
    for (int i = 0; i < cfg.n_birds; ++i) {
      const auto& c = paths[i][t];
      if (!c) continue;
      const auto [w, h] = sizes[i];
      scene.ground_truth.push_back({t, i + 1, BBox::from_center(c->x, c->y, w, h), 1.0});
    }
  }
  return scene;
}

IdentityEmbedder::IdentityEmbedder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}

void normalize(Embedding& e) {
  double n = 0.0;
  for (double v : e) n += v * v;
  n = std::sqrt(n);
  if (n == 0.0) return;
  for (double& v : e) v /= n;
}

Embedding IdentityEmbedder::anchor(int object_id) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(object_id), 0xa11c0u};
  Rng rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Embedding e(static_cast<std::size_t>(dim_));
  for (double& v : e) v = gauss(rng);
  normalize(e);
  return e;
}

Embedding IdentityEmbedder::observe(int object_id, double noise_std, Rng& rng) const {
  if (dim_ == 0) return {};
  Embedding e = anchor(object_id);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : e) v += noise_std * gauss(rng);
  normalize(e);
  return e;
}

Embedding IdentityEmbedder::random_unit(Rng& rng) const {
  if (dim_ == 0) return {};
  std::normal_distribution<double> gauss(0.0, 1.0);
  Embedding e(static_cast<std::size_t>(dim_));
  for (double& v : e) v = gauss(rng);
  normalize(e);
  return e;
}

std::vector<Detection> oracle_detect(const std::vector<LabeledBox>& gt_frame, const NoiseConfig& noise,
                                     const ScenarioConfig& scene, const IdentityEmbedder& embedder, Rng& rng) {
  std::vector<Detection> out;
  std::bernoulli_distribution miss(noise.miss_rate);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto clamp_into_frame = [&](double x, double y, double w, double h) {
    w = std::clamp(w, 1.0, static_cast<double>(scene.frame_w));
    h = std::clamp(h, 1.0, static_cast<double>(scene.frame_h));
    x = std::clamp(x, 0.0, scene.frame_w - w);
    y = std::clamp(y, 0.0, scene.frame_h - h);
    return BBox(x, y, w, h);
  };

  for (const LabeledBox& gt : gt_frame) {
    const bool dropped = miss(rng);
    double x = gt.box.x(), y = gt.box.y(), w = gt.box.w(), h = gt.box.h();
    if (noise.jitter_std > 0.0) {
      x += noise.jitter_std * gauss(rng);
      y += noise.jitter_std * gauss(rng);
      w += noise.jitter_std * gauss(rng);
      h += noise.jitter_std * gauss(rng);
    }
    Embedding e = embedder.observe(gt.object_id, noise.embed_noise_std, rng);
    if (dropped) continue;
    const BBox box = noise.jitter_std > 0.0 ? clamp_into_frame(x, y, w, h) : gt.box;
    out.push_back(Detection{box, 1.0, std::move(e), std::nullopt});
  }

  if (noise.fp_rate > 0.0) {
    const int n_fp = std::poisson_distribution<int>(noise.fp_rate)(rng);
    for (int k = 0; k < n_fp; ++k) {
      const double w = scene.bird_w * uniform(rng, 0.85, 1.15);
      const double h = scene.bird_h * uniform(rng, 0.85, 1.15);
      const double x = uniform(rng, 0.0, scene.frame_w - w);
      const double y = uniform(rng, 0.0, scene.frame_h - h);
      const double conf = uniform(rng, 0.3, 0.9);
      out.push_back(Detection{clamp_into_frame(x, y, w, h), conf, embedder.random_unit(rng), std::nullopt});
    }
  }
  return out;
}

std::map<int, std::vector<Detection>> oracle_detections(const Sequence& gt, int n_frames, const NoiseConfig& noise,
                                                        const ScenarioConfig& scene) {
  noise.validate();
  const IdentityEmbedder embedder(noise.embed_dim, noise.rng_seed);
  const auto by_frame = group_by_frame(gt);
  std::map<int, std::vector<Detection>> out;
  static const std::vector<LabeledBox> kEmpty;
  for (int t = 1; t <= n_frames; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(noise.rng_seed), static_cast<std::uint32_t>(noise.rng_seed >> 32),
                      static_cast<std::uint32_t>(t)};
    Rng rng(seq);
    const auto it = by_frame.find(t);
    out[t] = oracle_detect(it == by_frame.end() ? kEmpty : it->second, noise, scene, embedder, rng);
  }
  return out;
}

}  // namespace sahitrack
