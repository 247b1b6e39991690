#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sahitrack/sim.hpp"
#include "sahitrack/tracker.hpp"

namespace sahitrack {

// Flat `dotted.key = value` text config. '#' starts a comment; values are
// scalars or bracketed lists like [256,128].
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

  // "source:line" of a key, or just the source when the key is absent.
  std::string location(const std::string& key) const;
  // Keys present in the file that no loader consumed.
  std::vector<std::string> unknown_keys() const;

 private:
  void mark(const std::string& key) const { used_[key] = true; }

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string source_;
  mutable std::map<std::string, bool> used_;
};

// Everything one simulate/track/evaluate run needs.
struct ExperimentConfig {
  ScenarioConfig scene;
  NoiseConfig noise;
  TrackerConfig tracker;
  double eval_iou = 0.5;
  // Artificial per-region detector latency in microseconds.
  long long detect_delay_us = 0;
};

// Resolves every key against the defaults. Throws with the source line for
// malformed values and for unrecognised keys.
ExperimentConfig load_experiment(const Config& cfg);

// Every resolved key in `dotted.key = value` form, sorted by key. Feeding
// the output back through Config::parse reproduces the same experiment.
std::string dump_experiment(const ExperimentConfig& cfg);

}  // namespace sahitrack
