#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "sahitrack/detect.hpp"
#include "sahitrack/sequence.hpp"

namespace sahitrack {

enum class Scenario { Crossing, Shelter };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

struct ScenarioConfig {
  int frame_w = 4096;
  int frame_h = 2048;
  int n_birds = 5;
  double bird_w = 10.0;
  double bird_h = 20.0;
  double max_speed = 20.0;
  int n_frames = 500;
  Scenario scenario = Scenario::Shelter;
  // Shelter entrance; negative means the frame center.
  double shelter_x = -1.0;
  double shelter_y = -1.0;
  int occlusion_frames = 30;
  int shelter_birds = 2;
  std::uint64_t rng_seed = 1;

  Point shelter() const;
  void validate() const;
};

struct NoiseConfig {
  double miss_rate = 0.0;
  double fp_rate = 0.0;
  double jitter_std = 0.0;
  int embed_dim = 16;
  double embed_noise_std = 0.3;
  std::uint64_t rng_seed = 7;

  void validate() const;
};

// One occlusion interval of a sheltering bird: hidden on frames
// [first_hidden, first_hidden + length).
struct ShelterGap {
  int object_id = 0;
  int first_hidden = 0;
  int length = 0;
};

struct Scene {
  Sequence ground_truth;  // sorted by (frame, object)
  std::vector<ShelterGap> gaps;
};

// Waypoint-interpolated trajectories. Crossing scenes pair birds up and make
// each pair meet every few dozen frames; shelter scenes send birds into the
// shelter entrance one after another and bring each back out at the same
// spot after `occlusion_frames`. Outside those scripted flights birds keep
// clear of the entrance.
Scene generate_scene(const ScenarioConfig& cfg);

// Fixed unit anchor per identity, derived from the seed and the id alone.
class IdentityEmbedder {
 public:
  IdentityEmbedder(int dim, std::uint64_t seed);

  int dim() const { return dim_; }
  Embedding anchor(int object_id) const;
  Embedding observe(int object_id, double noise_std, std::mt19937_64& rng) const;
  Embedding random_unit(std::mt19937_64& rng) const;

 private:
  int dim_;
  std::uint64_t seed_;
};

void normalize(Embedding& e);

// Noisy detections for one ground-truth frame.
std::vector<Detection> oracle_detect(const std::vector<LabeledBox>& gt_frame, const NoiseConfig& noise,
                                     const ScenarioConfig& scene, const IdentityEmbedder& embedder,
                                     std::mt19937_64& rng);

// Per-frame global detections for frames 1..n_frames. Each frame draws from
// its own stream seeded by (noise seed, frame id).
std::map<int, std::vector<Detection>> oracle_detections(const Sequence& gt, int n_frames, const NoiseConfig& noise,
                                                        const ScenarioConfig& scene);

}  // namespace sahitrack
