#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sahitrack/config.hpp"
#include "sahitrack/metrics.hpp"
#include "sahitrack/sim.hpp"
#include "sahitrack/tracker.hpp"

namespace sahitrack {

struct ExperimentRun {
  Scene scene;
  RunResult run;
  EvalReport report;
};

// Simulate, detect with the oracle port (plus the configured per-region
// delay), track, and evaluate against the simulated ground truth.
ExperimentRun run_experiment(const ExperimentConfig& cfg);

// Shifts every seed of the experiment by `offset`.
ExperimentConfig with_seed_offset(ExperimentConfig cfg, std::uint64_t offset);

enum class SweepKind { Weights, Stages };
SweepKind parse_sweep_kind(const std::string& text);

struct SweepSetting {
  std::string first_stage;
  std::string second_stage;
  double w_pred = 0.0;
  double w_hist = 0.0;
  // Unset keeps the stage order of the base config.
  std::optional<StageOrder> order;
};

// Prediction/history weight pairs (0.1, 0.9) ... (0.9, 0.1), keeping the
// configured stage order.
std::vector<SweepSetting> weight_sweep_settings();
// The seven first/second-stage combinations of appearance, DIoU and DH-DIoU.
// `dh_w_pred`/`dh_w_hist` are the weights used for the DH-DIoU rows.
std::vector<SweepSetting> stage_sweep_settings(double dh_w_pred, double dh_w_hist);

struct SweepRow {
  SweepSetting setting;
  int seeds = 0;
  double mota = 0.0;
  double idf1 = 0.0;
  double idsw = 0.0;
  double fp = 0.0;
  double fn = 0.0;
};

// One tracked and evaluated run per (setting, seed); metrics are averaged
// over seeds 0..seeds-1 (as offsets of the configured seeds). Settings run
// in parallel; results do not depend on the thread count.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::vector<SweepSetting>& settings, int seeds);

std::string format_sweep_table(const std::vector<SweepRow>& rows, SweepKind kind);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Aligned human-readable report; MOTA and IDF1 in percent.
std::string format_report(const std::string& scene, const EvalReport& r);
// scene,mota,idf1,fp,fn,idsw,fps,regions_mean with raw ratios.
std::string report_csv_header();
std::string report_csv_row(const std::string& scene, const EvalReport& r);

}  // namespace sahitrack
