#include "sahitrack/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sahitrack/kernels.hpp"

namespace sahitrack {
namespace {

constexpr double kWeightTolerance = 1e-9;

struct Pending {
  std::vector<int> tracks;  // indices into the track list
  std::vector<int> dets;
};

void run_location_stage(const std::vector<TrackView>& tracks, const std::vector<Detection>& dets,
                        const AssociationConfig& cfg, int stage, Pending& pending, MatchResult& result) {
  if (pending.tracks.empty() || pending.dets.empty()) return;
  std::vector<BBox> pred, hist, boxes;
  for (int t : pending.tracks) {
    pred.push_back(tracks[t].predicted);
    hist.push_back(tracks[t].history);
  }
  for (int d : pending.dets) boxes.push_back(dets[d].box);

  const Eigen::MatrixXd sim = cfg.parallel
                                  ? kernels::dh_diou_matrix_parallel(pred, hist, boxes, cfg.w_pred, cfg.w_hist)
                                  : kernels::dh_diou_matrix_serial(pred, hist, boxes, cfg.w_pred, cfg.w_hist);
  const Eigen::MatrixXd cost = (1.0 - sim.array()).matrix();
  const Assignment pairs = solve_assignment(cost, 1.0 - cfg.stage1_min_similarity);

  std::vector<char> t_used(pending.tracks.size(), 0), d_used(pending.dets.size(), 0);
  for (const auto& [r, c] : pairs) {
    result.matches.push_back({tracks[pending.tracks[r]].track_id, pending.dets[c], stage, MatchKind::Location});
    t_used[r] = 1;
    d_used[c] = 1;
  }
  Pending rest;
  for (std::size_t i = 0; i < t_used.size(); ++i) {
    if (!t_used[i]) rest.tracks.push_back(pending.tracks[i]);
  }
  for (std::size_t j = 0; j < d_used.size(); ++j) {
    if (!d_used[j]) rest.dets.push_back(pending.dets[j]);
  }
  pending = std::move(rest);
}

void run_appearance_stage(const std::vector<TrackView>& tracks, const std::vector<Detection>& dets,
                          const AssociationConfig& cfg, int stage, Pending& pending, MatchResult& result) {
  // Only candidates carrying features take part.
  std::vector<int> t_idx, d_idx;
  for (std::size_t i = 0; i < pending.tracks.size(); ++i) {
    if (!tracks[pending.tracks[i]].feature.empty()) t_idx.push_back(static_cast<int>(i));
  }
  for (std::size_t j = 0; j < pending.dets.size(); ++j) {
    if (dets[pending.dets[j]].has_embedding()) d_idx.push_back(static_cast<int>(j));
  }
  if (t_idx.empty() || d_idx.empty()) return;

  std::vector<Embedding> tf, df;
  for (int i : t_idx) tf.push_back(tracks[pending.tracks[i]].feature);
  for (int j : d_idx) df.push_back(dets[pending.dets[j]].embedding);
  const Eigen::MatrixXd sim = cfg.parallel ? kernels::cosine_matrix_parallel(tf, df) : kernels::cosine_matrix_serial(tf, df);
  const Eigen::MatrixXd cost = (1.0 - sim.array()).matrix();
  const Assignment pairs = solve_assignment(cost, 1.0 - cfg.stage2_min_cosine);

  std::vector<char> t_used(pending.tracks.size(), 0), d_used(pending.dets.size(), 0);
  for (const auto& [r, c] : pairs) {
    const int ti = t_idx[r];
    const int dj = d_idx[c];
    result.matches.push_back({tracks[pending.tracks[ti]].track_id, pending.dets[dj], stage, MatchKind::Appearance});
    t_used[ti] = 1;
    d_used[dj] = 1;
  }
  Pending rest;
  for (std::size_t i = 0; i < t_used.size(); ++i) {
    if (!t_used[i]) rest.tracks.push_back(pending.tracks[i]);
  }
  for (std::size_t j = 0; j < d_used.size(); ++j) {
    if (!d_used[j]) rest.dets.push_back(pending.dets[j]);
  }
  pending = std::move(rest);
}

}  // namespace

std::string_view to_string(StageOrder order) {
  switch (order) {
    case StageOrder::LocationFirst: return "location_first";
    case StageOrder::AppearanceFirst: return "appearance_first";
    case StageOrder::LocationOnly: return "location_only";
    case StageOrder::AppearanceOnly: return "appearance_only";
  }
  return "location_first";
}

StageOrder parse_stage_order(std::string_view text) {
  for (StageOrder o : {StageOrder::LocationFirst, StageOrder::AppearanceFirst, StageOrder::LocationOnly,
                       StageOrder::AppearanceOnly}) {
    if (text == to_string(o)) return o;
  }
  throw std::invalid_argument("unknown stage order '" + std::string(text) +
                              "' (expected location_first, appearance_first, location_only or appearance_only)");
}

void AssociationConfig::validate() const {
  if (w_pred < 0.0 || w_pred > 1.0 || w_hist < 0.0 || w_hist > 1.0 ||
      std::abs(w_pred + w_hist - 1.0) > kWeightTolerance) {
    throw std::invalid_argument("association weights must lie in [0, 1] and sum to 1, got w_pred=" +
                                std::to_string(w_pred) + " w_hist=" + std::to_string(w_hist));
  }
}

double dh_diou(const BBox& det, const BBox& predicted, const BBox& history, const AssociationConfig& cfg) {
  return cfg.w_pred * diou(det, predicted) + cfg.w_hist * diou(det, history);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("cosine similarity needs equal, non-zero dimensions (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return std::clamp(dot, -1.0, 1.0);
}

MatchResult two_stage_match(const std::vector<TrackView>& tracks, const std::vector<Detection>& detections,
                            const AssociationConfig& cfg) {
  cfg.validate();
  MatchResult result;
  Pending pending;
  for (std::size_t i = 0; i < tracks.size(); ++i) pending.tracks.push_back(static_cast<int>(i));
  for (std::size_t j = 0; j < detections.size(); ++j) pending.dets.push_back(static_cast<int>(j));

  switch (cfg.stage_order) {
    case StageOrder::LocationFirst:
      run_location_stage(tracks, detections, cfg, 1, pending, result);
      run_appearance_stage(tracks, detections, cfg, 2, pending, result);
      break;
    case StageOrder::AppearanceFirst:
      run_appearance_stage(tracks, detections, cfg, 1, pending, result);
      run_location_stage(tracks, detections, cfg, 2, pending, result);
      break;
    case StageOrder::LocationOnly:
      run_location_stage(tracks, detections, cfg, 1, pending, result);
      break;
    case StageOrder::AppearanceOnly:
      run_appearance_stage(tracks, detections, cfg, 1, pending, result);
      break;
  }

  for (int t : pending.tracks) result.unmatched_tracks.push_back(tracks[t].track_id);
  result.unmatched_detections = pending.dets;
  return result;
}

}  // namespace sahitrack
