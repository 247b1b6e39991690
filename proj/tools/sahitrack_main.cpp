// Command-line entry point: simulate, track, evaluate, sweep, render.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sahitrack/config.hpp"
#include "sahitrack/detect.hpp"
#include "sahitrack/experiment.hpp"
#include "sahitrack/metrics.hpp"
#include "sahitrack/mot_io.hpp"
#include "sahitrack/render.hpp"
#include "sahitrack/sim.hpp"
#include "sahitrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace sahitrack;

namespace {

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return load_experiment(Config{});
  return load_experiment(Config::load(path));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// A manifest is a loadable config; everything that is not a config key is a
// comment line.
std::string manifest(const std::string& command, const ExperimentConfig& cfg, const std::string& notes) {
  std::string out = "# sahitrack " SAHITRACK_VERSION "\n# command = " + command + "\n";
  out += dump_experiment(cfg);
  out += notes;
  return out;
}

int cmd_simulate(const std::string& config_path, const fs::path& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  fs::create_directories(out_dir);
  const Scene scene = generate_scene(cfg.scene);
  write_mot(out_dir / "gt.txt", scene.ground_truth);
  const auto dets = oracle_detections(scene.ground_truth, cfg.scene.n_frames, cfg.noise, cfg.scene);
  write_detections(out_dir / "det.txt", dets, cfg.noise.embed_dim);

  std::string notes = "# gt_boxes = " + std::to_string(scene.ground_truth.size()) + "\n";
  for (const ShelterGap& g : scene.gaps) {
    notes += "# shelter_gap = object " + std::to_string(g.object_id) + " hidden frames " +
             std::to_string(g.first_hidden) + ".." + std::to_string(g.first_hidden + g.length - 1) + "\n";
  }
  write_text(out_dir / "manifest.txt", manifest("simulate", cfg, notes));
  std::cout << "wrote " << scene.ground_truth.size() << " ground-truth boxes over " << cfg.scene.n_frames
            << " frames to " << out_dir.string() << "\n";
  return 0;
}

int cmd_track(const std::string& config_path, const std::string& det_path, const std::string& oracle_gt,
              const fs::path& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  fs::create_directories(out_dir);

  std::map<int, std::vector<Detection>> frames;
  std::string source;
  int n_frames = cfg.scene.n_frames;
  if (!det_path.empty()) {
    frames = read_detections(det_path);
    source = "detections " + det_path;
    n_frames = frames.empty() ? 0 : frames.rbegin()->first;
  } else {
    Sequence gt;
    if (!oracle_gt.empty()) {
      gt = read_mot(oracle_gt);
      source = "oracle " + oracle_gt;
      n_frames = 0;
      for (const LabeledBox& b : gt) n_frames = std::max(n_frames, b.frame_id);
    } else {
      gt = generate_scene(cfg.scene).ground_truth;
      source = "oracle simulated scene";
    }
    frames = oracle_detections(gt, n_frames, cfg.noise, cfg.scene);
  }

  auto base = std::make_shared<PrecomputedDetector>(std::move(frames));
  std::shared_ptr<const DetectorPort> port = base;
  if (cfg.detect_delay_us > 0) {
    port = std::make_shared<DelayedDetector>(base, std::chrono::microseconds(cfg.detect_delay_us));
  }
  const RunResult run = run_sequence(n_frames, *port, cfg.tracker);
  write_mot(out_dir / "tracks.txt", to_sequence(run.frames));
  write_region_log(out_dir / "regions.csv", run.frames);
  write_timing_log(out_dir / "timing.csv", run.frames);

  char notes[256];
  std::snprintf(notes, sizeof notes, "# input = %s\n# frames = %d\n# grid_regions = %zu\n# regions_mean = %.3f\n",
                source.c_str(), n_frames, SliceGrid(cfg.tracker.frame_w, cfg.tracker.frame_h, cfg.tracker.window_w,
                                                    cfg.tracker.window_h, cfg.tracker.overlap)
                                               .size(),
                run.regions_mean);
  write_text(out_dir / "manifest.txt", manifest("track", cfg, notes));
  std::printf("tracked %d frames: %.2f FPS, %.2f regions/frame, %zu output rows\n", n_frames, run.fps,
              run.regions_mean, to_sequence(run.frames).size());
  return 0;
}

int cmd_evaluate(const std::string& gt_path, const std::string& hyp_path, const std::string& timing,
                 const std::string& regions, double iou_threshold, const std::string& scene, const std::string& csv) {
  const Sequence gt = read_mot(gt_path);
  const Sequence hyp = read_mot(hyp_path);
  EvalReport r = evaluate(gt, hyp, iou_threshold);
  const RunSidecar side = read_sidecars(timing, regions);
  r.fps = side.fps;
  r.regions_mean = side.regions_mean;
  std::cout << format_report(scene, r);
  if (!csv.empty()) {
    const bool fresh = !fs::exists(csv) || fs::file_size(csv) == 0;
    std::ofstream out(csv, std::ios::app | std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + csv + " for writing");
    if (fresh) out << report_csv_header();
    out << report_csv_row(scene, r);
  } else {
    std::cout << report_csv_header() << report_csv_row(scene, r);
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const fs::path& out_dir, const std::string& kind_text, int seeds) {
  const ExperimentConfig cfg = load_config(config_path);
  const SweepKind kind = parse_sweep_kind(kind_text);
  const auto settings = kind == SweepKind::Weights
                            ? weight_sweep_settings()
                            : stage_sweep_settings(cfg.tracker.assoc.w_pred, cfg.tracker.assoc.w_hist);
  const auto rows = run_sweep(cfg, settings, seeds);
  const std::string table = format_sweep_table(rows, kind);
  fs::create_directories(out_dir);
  write_text(out_dir / ("sweep_" + kind_text + ".txt"), table);
  write_text(out_dir / ("sweep_" + kind_text + ".csv"), sweep_csv(rows));
  write_text(out_dir / "manifest.txt",
             manifest("sweep " + kind_text, cfg, "# seeds = " + std::to_string(seeds) + "\n"));
  std::cout << table;
  return 0;
}

int cmd_render(const std::string& tracks, const std::string& size, const fs::path& out_dir, int downscale,
               int n_frames) {
  RenderOptions opt;
  if (std::sscanf(size.c_str(), "%dx%d", &opt.frame_w, &opt.frame_h) != 2 || opt.frame_w <= 0 || opt.frame_h <= 0) {
    throw std::invalid_argument("--size must look like 4096x2048, got '" + size + "'");
  }
  opt.downscale = downscale;
  opt.n_frames = n_frames;
  const auto written = render_sequence(read_mot(tracks), opt, out_dir);
  std::cout << "rendered " << written.size() << " frames to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-object tracking with adaptive slicing and detection-history association"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SAHITRACK_VERSION);

  std::string config, out, det, oracle, gt, hyp, timing, regions, scene = "scene", csv, kind = "weights", size = "4096x2048",
                                                                   tracks;
  double iou_threshold = 0.5;
  int seeds = 1, downscale = 1, n_frames = 0;

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic scene: gt.txt, det.txt, manifest.txt");
  sim->add_option("-c,--config", config, "Config file (defaults when omitted)")->check(CLI::ExistingFile);
  sim->add_option("-o,--out", out, "Output directory")->required();

  auto* trk = app.add_subcommand("track", "Track a detection file, an oracle over ground truth, or a simulated scene");
  trk->add_option("-c,--config", config, "Config file")->check(CLI::ExistingFile);
  auto* det_opt = trk->add_option("-d,--detections", det, "Detection file (#dim=D header)")->check(CLI::ExistingFile);
  trk->add_option("-g,--oracle", oracle, "Ground-truth MOT file driving the oracle detector")
      ->check(CLI::ExistingFile)
      ->excludes(det_opt);
  trk->add_option("-o,--out", out, "Output directory")->required();

  auto* ev = app.add_subcommand("evaluate", "CLEAR-MOT and IDF1 of a tracking file");
  ev->add_option("--gt", gt, "Ground-truth MOT file")->required()->check(CLI::ExistingFile);
  ev->add_option("--hyp", hyp, "Tracking MOT file")->required()->check(CLI::ExistingFile);
  ev->add_option("--timing", timing, "timing.csv from track (for FPS)")->check(CLI::ExistingFile);
  ev->add_option("--regions", regions, "regions.csv from track")->check(CLI::ExistingFile);
  ev->add_option("--iou", iou_threshold, "IoU threshold for a match")->check(CLI::Range(1e-9, 1.0));
  ev->add_option("--scene", scene, "Scene label for the report");
  ev->add_option("--csv", csv, "Append the CSV row to this file");

  auto* sw = app.add_subcommand("sweep", "Weight or stage-order ablation on a fixed scene");
  sw->add_option("-c,--config", config, "Config file")->check(CLI::ExistingFile);
  sw->add_option("-o,--out", out, "Output directory")->required();
  sw->add_option("-k,--kind", kind, "weights or stages")->check(CLI::IsMember({"weights", "stages"}));
  sw->add_option("-s,--seeds", seeds, "Seeds averaged per setting")->check(CLI::PositiveNumber);

  auto* rd = app.add_subcommand("render", "Draw a MOT file as one PPM image per frame");
  rd->add_option("-t,--tracks", tracks, "MOT file (ground truth or tracking output)")->required()->check(CLI::ExistingFile);
  rd->add_option("--size", size, "Frame size WxH");
  rd->add_option("-o,--out", out, "Output directory")->required();
  rd->add_option("--downscale", downscale, "Integer downscale of the images")->check(CLI::PositiveNumber);
  rd->add_option("--frames", n_frames, "Render frames 1..N (default: last frame in file)")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config, out);
    if (*trk) return cmd_track(config, det, oracle, out);
    if (*ev) return cmd_evaluate(gt, hyp, timing, regions, iou_threshold, scene, csv);
    if (*sw) return cmd_sweep(config, out, kind, seeds);
    if (*rd) return cmd_render(tracks, size, out, downscale, n_frames);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
