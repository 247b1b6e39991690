// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass `--cli <path to sahitrack>` to run the determinism
// check through the command line tool instead of the library.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "sahitrack/assignment.hpp"
#include "sahitrack/config.hpp"
#include "sahitrack/experiment.hpp"
#include "sahitrack/geometry.hpp"
#include "sahitrack/metrics.hpp"
#include "sahitrack/mot_io.hpp"
#include "sahitrack/motion.hpp"
#include "sahitrack/sim.hpp"
#include "sahitrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace sahitrack;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::shared_ptr<PrecomputedDetector> oracle_port(const ScenarioConfig& scene, const NoiseConfig& noise,
                                                 const Sequence& gt) {
  return std::make_shared<PrecomputedDetector>(oracle_detections(gt, scene.n_frames, noise, scene));
}

// 1. Adaptive sampling processes few regions on the panorama.
Outcome region_reduction() {
  ExperimentConfig cfg;
  cfg.scene.n_birds = 5;
  cfg.scene.n_frames = 500;
  const Scene scene = generate_scene(cfg.scene);
  const auto port = oracle_port(cfg.scene, cfg.noise, scene.ground_truth);
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult run = run_sequence(cfg.scene.n_frames, *port, cfg.tracker);
  const double elapsed = seconds_since(t0);

  const std::size_t grid = build_grid(cfg.tracker.frame_w, cfg.tracker.frame_h, cfg.tracker.window_w,
                                      cfg.tracker.window_h, cfg.tracker.overlap)
                               .size();
  int bound_violations = 0;
  int prev_live = 0;
  for (const FrameOutput& f : run.frames) {
    const int bound = cfg.tracker.sampler.per_track_samples * prev_live + cfg.tracker.sampler.uniform_samples;
    if (f.regions_processed > bound) ++bound_violations;
    prev_live = f.live_tracks;
  }
  const double reduction = 1.0 - run.regions_mean / static_cast<double>(grid);
  return {grid == 441 && run.regions_mean <= 22.0 && bound_violations == 0 && elapsed < 10.0,
          fmt("grid %zu, mean regions %.2f (%.1f%% skipped), per-frame bound violations %d, 500 frames in %.2f s",
              grid, run.regions_mean, 100.0 * reduction, bound_violations, elapsed)};
}

// 2. With a slow per-region detector, adaptive sampling is much faster than
// scanning the whole grid.
Outcome speedup() {
  ScenarioConfig scene;
  scene.n_frames = 20;
  const Scene s = generate_scene(scene);
  const auto inner = oracle_port(scene, NoiseConfig{}, s.ground_truth);
  const DelayedDetector slow(inner, std::chrono::microseconds(1000));
  TrackerConfig adaptive;
  TrackerConfig full;
  full.sampler.full_grid = true;
  const RunResult a = run_sequence(scene.n_frames, slow, adaptive);
  const RunResult f = run_sequence(scene.n_frames, slow, full);
  const double ratio = a.fps / f.fps;
  return {ratio >= 5.0, fmt("1 ms/region detector over %d frames: adaptive %.2f FPS (%.1f regions), full grid %.2f "
                            "FPS (%.1f regions), ratio %.1f",
                            scene.n_frames, a.fps, a.regions_mean, f.fps, f.regions_mean, ratio)};
}

// Switches of sheltering birds from the frame they hide until ten frames
// after they reappear.
long gap_switches(const ClearMot& c, const std::vector<ShelterGap>& gaps) {
  long n = 0;
  for (const IdSwitch& s : c.switches) {
    for (const ShelterGap& g : gaps) {
      if (s.gt_id == g.object_id && s.frame_id >= g.first_hidden && s.frame_id <= g.first_hidden + g.length + 10) ++n;
    }
  }
  return n;
}

// 3. Identity survives the shelter gap with the history-aware criterion and
// not with plain DIoU.
Outcome occlusion() {
  ExperimentConfig base;
  base.scene.scenario = Scenario::Shelter;
  base.scene.occlusion_frames = 30;
  base.tracker.sampler.full_grid = true;
  base.tracker.assoc.stage_order = StageOrder::LocationOnly;
  bool pass = true;
  std::string detail;
  for (std::uint64_t k = 0; k < 5; ++k) {
    ExperimentConfig dhsc = with_seed_offset(base, k);
    ExperimentConfig plain = dhsc;
    plain.tracker.assoc.w_pred = 1.0;
    plain.tracker.assoc.w_hist = 0.0;
    const ExperimentRun a = run_experiment(dhsc);
    const ExperimentRun b = run_experiment(plain);
    const ClearMot ca = clear_mot(a.scene.ground_truth, to_sequence(a.run.frames), base.eval_iou);
    const ClearMot cb = clear_mot(b.scene.ground_truth, to_sequence(b.run.frames), base.eval_iou);
    const long ga = gap_switches(ca, a.scene.gaps);
    const long gb = gap_switches(cb, b.scene.gaps);
    pass = pass && !a.scene.gaps.empty() && ga == 0 && gb >= 1;
    detail += fmt("%sseed %llu: gap IDsw DHSC %ld vs DIoU %ld (total %ld vs %ld)", k ? "; " : "",
                  static_cast<unsigned long long>(dhsc.scene.rng_seed), ga, gb, ca.idsw, cb.idsw);
  }
  return {pass, detail};
}

// 4. Weight sweep: history-heavy weights switch identities no more often than
// prediction-heavy ones.
Outcome weight_sweep() {
  ExperimentConfig base;
  base.scene.scenario = Scenario::Shelter;
  base.tracker.sampler.full_grid = true;
  const int seeds = 8;
  const auto rows = run_sweep(base, weight_sweep_settings(), seeds);
  double high = 0.0, low = 0.0;
  int n_high = 0, n_low = 0;
  std::string table;
  for (const SweepRow& r : rows) {
    if (r.setting.w_hist >= 0.5 - 1e-9) {
      high += r.idsw;
      ++n_high;
    } else {
      low += r.idsw;
      ++n_low;
    }
    table += fmt(" %.1f:%.2f", r.setting.w_hist, r.idsw);
  }
  high /= n_high;
  low /= n_low;
  return {n_high == 5 && n_low == 4 && high <= low,
          fmt("%d seeds, mean IDsw history>=0.5 %.3f vs history<=0.4 %.3f; per history weight%s", seeds, high, low,
              table.c_str())};
}

// 5. Appearance-only matching on crossings swaps identities far more often
// than DH-DIoU-first matching.
Outcome stage_order() {
  ExperimentConfig base;
  base.scene.scenario = Scenario::Crossing;
  base.tracker.sampler.full_grid = true;
  const auto settings = stage_sweep_settings(base.tracker.assoc.w_pred, base.tracker.assoc.w_hist);
  std::vector<SweepSetting> chosen;
  for (const SweepSetting& s : settings) {
    const bool app_only = s.first_stage == "Appearance" && s.second_stage.empty();
    const bool dh_first = s.first_stage == "DH-DIoU" && s.second_stage == "Appearance";
    if (app_only || dh_first) chosen.push_back(s);
  }
  if (chosen.size() != 2) return {false, "stage sweep is missing the required rows"};
  const auto rows = run_sweep(base, chosen, 5);
  const double app = rows[0].setting.first_stage == "Appearance" ? rows[0].idsw : rows[1].idsw;
  const double dh = rows[0].setting.first_stage == "Appearance" ? rows[1].idsw : rows[0].idsw;
  return {app >= 5.0 * dh && app > 0.0,
          fmt("crossing scene, 5 seeds: mean IDsw appearance-only %.1f vs DH-DIoU then appearance %.1f (ratio %.1f)",
              app, dh, dh > 0 ? app / dh : INFINITY)};
}

LabeledBox lb(int frame, int id, double x) { return {frame, id, BBox(x, 0, 10, 20), 1.0}; }

// 6. Metrics agree with brute force and with hand-counted fixtures.
Outcome metrics() {
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Sequence gt, hyp;
    oracle::random_instance(rng, gt, hyp);
    const ClearMot c = clear_mot(gt, hyp, 0.5);
    const oracle::ClearCounts o = oracle::clear_mot(gt, hyp, 0.5);
    const bool same = c.fp == o.fp && c.fn == o.fn && c.idsw == o.idsw && c.gt_total == o.gt_total &&
                      idf1(gt, hyp, 0.5) == oracle::idf1(gt, hyp, 0.5);
    mismatches += same ? 0 : 1;
  }
  Sequence gt;
  for (int f = 1; f <= 5; ++f) {
    gt.push_back(lb(f, 1, 0));
    gt.push_back(lb(f, 2, 100));
  }
  const Sequence hyp{lb(1, 1, 0), lb(1, 2, 100), lb(2, 1, 1), lb(2, 2, 101), lb(3, 2, 100),
                     lb(4, 3, 0), lb(5, 3, 0), lb(5, 2, 100), lb(5, 9, 500)};
  const double mota = clear_mot(gt, hyp).mota;
  Sequence track, split;
  for (int f = 1; f <= 100; ++f) {
    track.push_back(lb(f, 1, f));
    split.push_back(lb(f, f <= 50 ? 10 : 11, f));
  }
  const double id = idf1(track, split);
  return {mismatches == 0 && mota == 0.6 && id == 0.5,
          fmt("%d/100 random instances differ from brute force; fixture MOTA %.17g, split-track IDF1 %.17g",
              mismatches, mota, id)};
}

// 7. Hungarian equals exhaustive search.
Outcome assignment() {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(1, 6), val(0, 50);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::MatrixXd c(dim(rng), dim(rng));
    for (int i = 0; i < c.rows(); ++i) {
      for (int j = 0; j < c.cols(); ++j) c(i, j) = val(rng);
    }
    const Assignment a = solve_assignment(c);
    const oracle::BestAssignment best = oracle::assignment(c, kInadmissible);
    if (assignment_cost(c, a) != best.cost || static_cast<int>(a.size()) != best.count) ++mismatches;
  }
  return {mismatches == 0, fmt("%d/500 random integer matrices up to 6x6 differ from exhaustive search", mismatches)};
}

// 8. IoU/DIoU properties.
Outcome geometry() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-50, 50), size(0.5, 40), shift(-1000, 1000), scale(0.01, 100);
  int failures = 0;
  double worst_t = 0.0, worst_s = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const BBox a(pos(rng), pos(rng), size(rng), size(rng));
    const BBox b(pos(rng), pos(rng), size(rng), size(rng));
    const BBox c = BBox::from_center(a.center().x, a.center().y, size(rng), size(rng));
    const double o = iou(a, b), d = diou(a, b);
    bool ok = d < o && d > -1.0 && diou(a, a) == 1.0 && diou(a, c) == iou(a, c);
    const double dx = shift(rng), dy = shift(rng), s = scale(rng);
    const double et = std::max(std::abs(iou(a.translated(dx, dy), b.translated(dx, dy)) - o),
                               std::abs(diou(a.translated(dx, dy), b.translated(dx, dy)) - d));
    const double es = std::max(std::abs(iou(a.scaled(s), b.scaled(s)) - o), std::abs(diou(a.scaled(s), b.scaled(s)) - d));
    worst_t = std::max(worst_t, et);
    worst_s = std::max(worst_s, es);
    ok = ok && et <= 1e-12 && es <= 1e-9;
    failures += ok ? 0 : 1;
  }
  return {failures == 0, fmt("%d/10000 pairs fail; worst translation error %.2e, worst scale error %.2e", failures,
                             worst_t, worst_s)};
}

// 9. Kalman filter convergence and covariance health.
Outcome kalman() {
  KalmanState s = kf_init(BBox(100, 500, 10, 20));
  double x = 100.0, err = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const Prediction p = kf_predict(s);
    x += 5.0;
    s = kf_update(p.state, BBox(x, 500, 10, 20));
  }
  err = std::abs(kf_predict(s).box.x() - (x + 5.0));
  const double vel_err = std::abs(s.mean(4) - 5.0) / 5.0;

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(0, 4000), size(3, 60), jump(-40, 40);
  std::bernoulli_distribution do_update(0.6);
  int bad = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    KalmanState st = kf_init(BBox(pos(rng), pos(rng), size(rng), size(rng)));
    bool ok = true;
    for (int step = 0; step < 12; ++step) {
      const Prediction p = kf_predict(st);
      st = p.state;
      if (do_update(rng)) {
        st = kf_update(st, BBox::from_center(p.box.center().x + jump(rng), p.box.center().y + jump(rng), size(rng),
                                             size(rng)));
      }
      const Eigen::SelfAdjointEigenSolver<StateMatrix> es(st.covariance);
      const double asym = (st.covariance - st.covariance.transpose()).cwiseAbs().maxCoeff();
      ok = ok && asym <= 1e-9 && es.eigenvalues().minCoeff() >= -1e-9 * es.eigenvalues().maxCoeff();
    }
    bad += ok ? 0 : 1;
  }
  return {err < 0.5 && vel_err < 0.01 && bad == 0,
          fmt("5 px/frame target: prediction error %.2e px after 100 updates, velocity error %.2e; %d/10000 "
              "random sequences lose symmetric PSD covariance",
              err, vel_err, bad)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 10. Identical config and seed give byte-identical tracking output.
Outcome determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "sahitrack_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg_path = root / "noisy.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "scene.n_frames = 300\nnoise.miss_rate = 0.05\nnoise.fp_rate = 0.3\nnoise.jitter_std = 0.5\n";
  }
  for (const char* run : {"a", "b"}) {
    const fs::path out = root / run;
    if (!cli.empty()) {
      const std::string cmd = "\"" + cli + "\" track -c \"" + cfg_path.string() + "\" -o \"" + out.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    } else {
      const ExperimentRun r = run_experiment(load_experiment(Config::load(cfg_path)));
      fs::create_directories(out);
      write_mot(out / "tracks.txt", to_sequence(r.run.frames));
      write_region_log(out / "regions.csv", r.run.frames);
    }
  }
  const std::string ta = slurp(root / "a" / "tracks.txt"), tb = slurp(root / "b" / "tracks.txt");
  const std::string ra = slurp(root / "a" / "regions.csv"), rb = slurp(root / "b" / "regions.csv");
  return {!ta.empty() && !ra.empty() && ta == tb && ra == rb,
          fmt("%s: tracks.txt %zu bytes %s, regions.csv %zu bytes %s", cli.empty() ? "library" : "cli", ta.size(),
              ta == tb ? "identical" : "DIFFER", ra.size(), ra == rb ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"region reduction", region_reduction},
      {"speedup", speedup},
      {"occlusion identity", occlusion},
      {"weight sweep direction", weight_sweep},
      {"stage order ablation", stage_order},
      {"metric correctness", metrics},
      {"assignment correctness", assignment},
      {"geometry properties", geometry},
      {"kalman convergence", kalman},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %-24s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
