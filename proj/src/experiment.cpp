#include "sahitrack/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "sahitrack/detect.hpp"

namespace sahitrack {

ExperimentRun run_experiment(const ExperimentConfig& cfg) {
  ExperimentRun out;
  out.scene = generate_scene(cfg.scene);
  auto oracle = std::make_shared<PrecomputedDetector>(
      oracle_detections(out.scene.ground_truth, cfg.scene.n_frames, cfg.noise, cfg.scene));
  std::shared_ptr<const DetectorPort> port = oracle;
  if (cfg.detect_delay_us > 0) {
    port = std::make_shared<DelayedDetector>(oracle, std::chrono::microseconds(cfg.detect_delay_us));
  }
  out.run = run_sequence(cfg.scene.n_frames, *port, cfg.tracker);
  out.report = evaluate(out.scene.ground_truth, to_sequence(out.run.frames), cfg.eval_iou);
  out.report.fps = out.run.fps;
  out.report.regions_mean = out.run.regions_mean;
  return out;
}

ExperimentConfig with_seed_offset(ExperimentConfig cfg, std::uint64_t offset) {
  cfg.scene.rng_seed += offset;
  cfg.noise.rng_seed += offset;
  cfg.tracker.sampler.rng_seed += offset;
  return cfg;
}

SweepKind parse_sweep_kind(const std::string& text) {
  if (text == "weights") return SweepKind::Weights;
  if (text == "stages") return SweepKind::Stages;
  throw std::invalid_argument("unknown sweep kind '" + text + "' (expected weights or stages)");
}

std::vector<SweepSetting> weight_sweep_settings() {
  std::vector<SweepSetting> out;
  for (int k = 1; k <= 9; ++k) {
    const double p = k / 10.0;
    out.push_back({"DH-DIoU", "", p, 1.0 - p, std::nullopt});
  }
  return out;
}

std::vector<SweepSetting> stage_sweep_settings(double dh_w_pred, double dh_w_hist) {
  return {
      {"Appearance", "", dh_w_pred, dh_w_hist, StageOrder::AppearanceOnly},
      {"DIoU", "", 1.0, 0.0, StageOrder::LocationOnly},
      {"DH-DIoU", "", dh_w_pred, dh_w_hist, StageOrder::LocationOnly},
      {"Appearance", "DIoU", 1.0, 0.0, StageOrder::AppearanceFirst},
      {"Appearance", "DH-DIoU", dh_w_pred, dh_w_hist, StageOrder::AppearanceFirst},
      {"DIoU", "Appearance", 1.0, 0.0, StageOrder::LocationFirst},
      {"DH-DIoU", "Appearance", dh_w_pred, dh_w_hist, StageOrder::LocationFirst},
  };
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::vector<SweepSetting>& settings, int seeds) {
  if (seeds < 1) throw std::invalid_argument("sweep needs at least one seed");
  const auto n_settings = static_cast<std::ptrdiff_t>(settings.size());
  const std::ptrdiff_t jobs = n_settings * seeds;
  std::vector<EvalReport> reports(static_cast<std::size_t>(jobs));
  std::exception_ptr error;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < jobs; ++j) {
    try {
      const SweepSetting& s = settings[static_cast<std::size_t>(j / seeds)];
      ExperimentConfig cfg = with_seed_offset(base, static_cast<std::uint64_t>(j % seeds));
      cfg.tracker.assoc.w_pred = s.w_pred;
      cfg.tracker.assoc.w_hist = s.w_hist;
      if (s.order) cfg.tracker.assoc.stage_order = *s.order;
      reports[static_cast<std::size_t>(j)] = run_experiment(cfg).report;
    } catch (...) {
#pragma omp critical(sahitrack_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<SweepRow> rows;
  for (std::ptrdiff_t i = 0; i < n_settings; ++i) {
    SweepRow row;
    row.setting = settings[static_cast<std::size_t>(i)];
    row.seeds = seeds;
    for (int k = 0; k < seeds; ++k) {
      const EvalReport& r = reports[static_cast<std::size_t>(i * seeds + k)];
      row.mota += r.mota;
      row.idf1 += r.idf1;
      row.idsw += static_cast<double>(r.idsw);
      row.fp += static_cast<double>(r.fp);
      row.fn += static_cast<double>(r.fn);
    }
    row.mota /= seeds;
    row.idf1 /= seeds;
    row.idsw /= seeds;
    row.fp /= seeds;
    row.fn /= seeds;
    rows.push_back(row);
  }
  return rows;
}

std::string format_sweep_table(const std::vector<SweepRow>& rows, SweepKind kind) {
  std::string out;
  char buf[256];
  if (kind == SweepKind::Weights) {
    std::snprintf(buf, sizeof buf, "%-12s %-10s | %8s %8s %8s\n", "Predictions", "Histories", "MOTA", "IDF1", "IDsw");
  } else {
    std::snprintf(buf, sizeof buf, "%-12s %-12s | %8s %8s %8s\n", "First stage", "Second stage", "MOTA", "IDF1",
                  "IDsw");
  }
  out += buf;
  out += std::string(std::string(buf).size() - 1, '-') + "\n";
  for (const SweepRow& r : rows) {
    if (kind == SweepKind::Weights) {
      std::snprintf(buf, sizeof buf, "%-12.1f %-10.1f | %8.1f %8.1f %8.1f\n", r.setting.w_pred, r.setting.w_hist,
                    100.0 * r.mota, 100.0 * r.idf1, r.idsw);
    } else {
      std::snprintf(buf, sizeof buf, "%-12s %-12s | %8.1f %8.1f %8.1f\n", r.setting.first_stage.c_str(),
                    r.setting.second_stage.empty() ? "---" : r.setting.second_stage.c_str(), 100.0 * r.mota, 100.0 * r.idf1, r.idsw);
    }
    out += buf;
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "first_stage,second_stage,stage_order,w_pred,w_hist,seeds,mota,idf1,idsw,fp,fn\n";
  char buf[512];
  for (const SweepRow& r : rows) {
    const std::string order = r.setting.order ? std::string(to_string(*r.setting.order)) : "base";
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.2f,%.2f,%d,%.6f,%.6f,%.3f,%.3f,%.3f\n", r.setting.first_stage.c_str(),
                  r.setting.second_stage.c_str(), order.c_str(), r.setting.w_pred, r.setting.w_hist, r.seeds, r.mota, r.idf1, r.idsw, r.fp, r.fn);
    out += buf;
  }
  return out;
}

std::string format_report(const std::string& scene, const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-12s | %8s %8s %7s %7s %6s %9s %9s\n"
                "%-12s | %8.1f %8.1f %7ld %7ld %6ld %9.2f %9.2f\n"
                "(IoU threshold %.2f, %ld ground-truth boxes)\n",
                "Scene", "MOTA", "IDF1", "FP", "FN", "IDsw", "FPS", "Regions", scene.c_str(), 100.0 * r.mota,
                100.0 * r.idf1, r.fp, r.fn, r.idsw, r.fps, r.regions_mean, r.iou_threshold, r.gt_total);
  return buf;
}

std::string report_csv_header() { return "scene,mota,idf1,fp,fn,idsw,fps,regions_mean\n"; }

std::string report_csv_row(const std::string& scene, const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%ld,%ld,%ld,%.3f,%.3f\n", scene.c_str(), r.mota, r.idf1, r.fp, r.fn,
                r.idsw, r.fps, r.regions_mean);
  return buf;
}

}  // namespace sahitrack
