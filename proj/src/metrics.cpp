#include "sahitrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "sahitrack/assignment.hpp"

namespace sahitrack {

std::map<int, std::vector<LabeledBox>> group_by_frame(const Sequence& seq) {
  std::map<int, std::vector<LabeledBox>> out;
  for (const LabeledBox& b : seq) out[b.frame_id].push_back(b);
  return out;
}

void check_unique_ids(const Sequence& seq, const char* what) {
  std::set<std::pair<int, int>> seen;
  for (const LabeledBox& b : seq) {
    if (!seen.emplace(b.frame_id, b.object_id).second) {
      throw std::invalid_argument(std::string(what) + ": object " + std::to_string(b.object_id) +
                                  " appears twice in frame " + std::to_string(b.frame_id));
    }
  }
}

ClearMot clear_mot(const Sequence& gt, const Sequence& hyp, double iou_threshold) {
  check_unique_ids(gt, "ground truth");
  check_unique_ids(hyp, "hypothesis");
  const auto gt_frames = group_by_frame(gt);
  const auto hyp_frames = group_by_frame(hyp);
  std::set<int> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : hyp_frames) frames.insert(f);

  static const std::vector<LabeledBox> kNone;
  ClearMot r;
  std::map<int, int> last_pair;  // gt id -> hyp id at its latest match
  for (int f : frames) {
    auto git = gt_frames.find(f);
    auto hit = hyp_frames.find(f);
    const auto& g = git == gt_frames.end() ? kNone : git->second;
    const auto& h = hit == hyp_frames.end() ? kNone : hit->second;
    r.gt_total += static_cast<long>(g.size());

    std::vector<int> g_match(g.size(), -1);
    std::vector<char> h_used(h.size(), 0);

    // Keep still-valid pairings from earlier frames.
    std::vector<std::size_t> g_order(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) g_order[i] = i;
    std::sort(g_order.begin(), g_order.end(), [&](std::size_t a, std::size_t b) { return g[a].object_id < g[b].object_id; });
    for (std::size_t i : g_order) {
      const auto lp = last_pair.find(g[i].object_id);
      if (lp == last_pair.end()) continue;
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (h_used[j] || h[j].object_id != lp->second) continue;
        if (iou(g[i].box, h[j].box) >= iou_threshold) {
          g_match[i] = static_cast<int>(j);
          h_used[j] = 1;
        }
        break;
      }
    }

    std::vector<int> g_rest, h_rest;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g_match[i] < 0) g_rest.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (!h_used[j]) h_rest.push_back(static_cast<int>(j));
    }
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(g_rest.size()), static_cast<Eigen::Index>(h_rest.size()));
    for (std::size_t a = 0; a < g_rest.size(); ++a) {
      for (std::size_t b = 0; b < h_rest.size(); ++b) {
        const double o = iou(g[g_rest[a]].box, h[h_rest[b]].box);
        cost(a, b) = o >= iou_threshold ? 1.0 - o : kInadmissible;
      }
    }
    for (const auto& [a, b] : solve_assignment(cost)) {
      const int i = g_rest[a];
      const int j = h_rest[b];
      g_match[i] = j;
      h_used[j] = 1;
      const auto lp = last_pair.find(g[i].object_id);
      if (lp != last_pair.end() && lp->second != h[j].object_id) {
        ++r.idsw;
        r.switches.push_back({f, g[i].object_id, lp->second, h[j].object_id});
      }
    }

    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g_match[i] < 0) {
        ++r.fn;
        continue;
      }
      ++r.matches;
      last_pair[g[i].object_id] = h[static_cast<std::size_t>(g_match[i])].object_id;
    }
    for (char used : h_used) {
      if (!used) ++r.fp;
    }
  }
  r.mota = r.gt_total > 0 ? 1.0 - static_cast<double>(r.fp + r.fn + r.idsw) / static_cast<double>(r.gt_total)
                          : std::numeric_limits<double>::quiet_NaN();
  return r;
}

IdentityScores identity_scores(const Sequence& gt, const Sequence& hyp, double iou_threshold) {
  check_unique_ids(gt, "ground truth");
  check_unique_ids(hyp, "hypothesis");
  std::map<int, int> gt_index, hyp_index;
  for (const LabeledBox& b : gt) gt_index.emplace(b.object_id, static_cast<int>(gt_index.size()));
  for (const LabeledBox& b : hyp) hyp_index.emplace(b.object_id, static_cast<int>(hyp_index.size()));

  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gt_index.size()),
                                                  static_cast<Eigen::Index>(hyp_index.size()));
  const auto hyp_frames = group_by_frame(hyp);
  for (const LabeledBox& g : gt) {
    const auto it = hyp_frames.find(g.frame_id);
    if (it == hyp_frames.end()) continue;
    for (const LabeledBox& h : it->second) {
      if (iou(g.box, h.box) >= iou_threshold) overlap(gt_index[g.object_id], hyp_index[h.object_id]) += 1.0;
    }
  }

  IdentityScores s;
  const Eigen::MatrixXd cost = -overlap;
  for (const auto& [r, c] : solve_assignment(cost)) s.idtp += static_cast<long>(overlap(r, c));
  s.idfn = static_cast<long>(gt.size()) - s.idtp;
  s.idfp = static_cast<long>(hyp.size()) - s.idtp;
  const long denom = 2 * s.idtp + s.idfp + s.idfn;
  s.idf1 = denom > 0 ? 2.0 * static_cast<double>(s.idtp) / static_cast<double>(denom)
                     : std::numeric_limits<double>::quiet_NaN();
  return s;
}

double idf1(const Sequence& gt, const Sequence& hyp, double iou_threshold) {
  return identity_scores(gt, hyp, iou_threshold).idf1;
}

EvalReport evaluate(const Sequence& gt, const Sequence& hyp, double iou_threshold) {
  const ClearMot c = clear_mot(gt, hyp, iou_threshold);
  EvalReport r;
  r.fp = c.fp;
  r.fn = c.fn;
  r.idsw = c.idsw;
  r.gt_total = c.gt_total;
  r.mota = c.mota;
  r.idf1 = identity_scores(gt, hyp, iou_threshold).idf1;
  r.iou_threshold = iou_threshold;
  return r;
}

}  // namespace sahitrack
