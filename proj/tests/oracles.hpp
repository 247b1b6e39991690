#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance suite. Exponential on purpose; only for tiny instances.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "sahitrack/sequence.hpp"

namespace sahitrack::oracle {

struct BestAssignment {
  int count = 0;
  double cost = 0.0;
};

// Every partial injection of rows into admissible columns: most pairs first,
// then least total cost.
inline BestAssignment assignment(const Eigen::MatrixXd& c, double gate) {
  BestAssignment best;
  std::vector<char> used(static_cast<std::size_t>(c.cols()), 0);
  std::function<void(int, int, double)> rec = [&](int row, int count, double cost) {
    if (row == c.rows()) {
      if (count > best.count || (count == best.count && cost < best.cost)) best = {count, cost};
      return;
    }
    rec(row + 1, count, cost);
    for (int j = 0; j < c.cols(); ++j) {
      if (used[j] || !std::isfinite(c(row, j)) || c(row, j) > gate) continue;
      used[j] = 1;
      rec(row + 1, count + 1, cost + c(row, j));
      used[j] = 0;
    }
  };
  rec(0, 0, 0.0);
  return best;
}

struct ClearCounts {
  long fp = 0;
  long fn = 0;
  long idsw = 0;
  long gt_total = 0;
};

// CLEAR-MOT by enumerating every per-frame matching of the objects left after
// keeping admissible pairings from earlier frames.
inline ClearCounts clear_mot(const Sequence& gt, const Sequence& hyp, double thr) {
  std::map<int, std::vector<LabeledBox>> gf, hf;
  std::set<int> frames;
  for (const auto& b : gt) gf[b.frame_id].push_back(b), frames.insert(b.frame_id);
  for (const auto& b : hyp) hf[b.frame_id].push_back(b), frames.insert(b.frame_id);
  ClearCounts out;
  std::map<int, int> last;
  for (int f : frames) {
    const auto& g = gf[f];
    const auto& h = hf[f];
    out.gt_total += static_cast<long>(g.size());
    std::vector<int> match(g.size(), -1);
    std::vector<char> taken(h.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!last.contains(g[i].object_id)) continue;
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (h[j].object_id == last[g[i].object_id] && !taken[j] && iou(g[i].box, h[j].box) >= thr) {
          match[i] = static_cast<int>(j);
          taken[j] = 1;
        }
      }
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (match[i] < 0) free.push_back(i);
    }
    std::vector<int> cur(free.size(), -1), best(free.size(), -1);
    int best_count = -1;
    double best_cost = 0.0;
    std::function<void(std::size_t, int, double)> rec = [&](std::size_t k, int count, double cost) {
      if (k == free.size()) {
        if (count > best_count || (count == best_count && cost < best_cost - 1e-12)) {
          best_count = count;
          best_cost = cost;
          best = cur;
        }
        return;
      }
      cur[k] = -1;
      rec(k + 1, count, cost);
      for (std::size_t j = 0; j < h.size(); ++j) {
        const double o = iou(g[free[k]].box, h[j].box);
        if (taken[j] || o < thr) continue;
        taken[j] = 1;
        cur[k] = static_cast<int>(j);
        rec(k + 1, count + 1, cost + 1.0 - o);
        taken[j] = 0;
      }
      cur[k] = -1;
    };
    rec(0, 0, 0.0);
    for (std::size_t k = 0; k < free.size(); ++k) {
      if (best[k] < 0) continue;
      const LabeledBox& gb = g[free[k]];
      const LabeledBox& hb = h[static_cast<std::size_t>(best[k])];
      match[free[k]] = best[k];
      taken[static_cast<std::size_t>(best[k])] = 1;
      if (last.contains(gb.object_id) && last[gb.object_id] != hb.object_id) ++out.idsw;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (match[i] < 0) {
        ++out.fn;
      } else {
        last[g[i].object_id] = h[static_cast<std::size_t>(match[i])].object_id;
      }
    }
    for (char t : taken) out.fp += t ? 0 : 1;
  }
  return out;
}

// IDF1 by enumerating every partial injection of ground truth identities into
// hypothesis identities.
inline double idf1(const Sequence& gt, const Sequence& hyp, double thr) {
  std::vector<int> gids, hids;
  for (const auto& b : gt) {
    if (std::find(gids.begin(), gids.end(), b.object_id) == gids.end()) gids.push_back(b.object_id);
  }
  for (const auto& b : hyp) {
    if (std::find(hids.begin(), hids.end(), b.object_id) == hids.end()) hids.push_back(b.object_id);
  }
  auto overlap = [&](int g, int h) {
    long n = 0;
    for (const auto& a : gt) {
      if (a.object_id != g) continue;
      for (const auto& b : hyp) n += b.object_id == h && b.frame_id == a.frame_id && iou(a.box, b.box) >= thr;
    }
    return n;
  };
  long best = 0;
  std::vector<char> used(hids.size(), 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t k, long acc) {
    if (k == gids.size()) {
      best = std::max(best, acc);
      return;
    }
    rec(k + 1, acc);
    for (std::size_t j = 0; j < hids.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      rec(k + 1, acc + overlap(gids[k], hids[j]));
      used[j] = 0;
    }
  };
  rec(0, 0);
  const double denom = static_cast<double>(gt.size() + hyp.size());
  return denom > 0 ? 2.0 * static_cast<double>(best) / denom : std::nan("");
}

// Three jittering objects over twenty frames with dropouts, a recurring
// spurious box and occasional identity swaps in the hypothesis.
inline void random_instance(std::mt19937_64& rng, Sequence& gt, Sequence& hyp) {
  std::uniform_real_distribution<double> start(0, 30), step(-3, 3), jitter(-4, 4);
  std::bernoulli_distribution present(0.85), miss(0.15), fp(0.2), swap(0.1);
  std::uniform_int_distribution<int> fresh(50, 53);
  double x[3], y[3];
  int label[3] = {10, 11, 12};
  for (int i = 0; i < 3; ++i) x[i] = start(rng), y[i] = start(rng);
  for (int f = 1; f <= 20; ++f) {
    if (swap(rng)) std::swap(label[0], label[1]);
    if (swap(rng)) label[2] = fresh(rng);
    for (int i = 0; i < 3; ++i) {
      x[i] += step(rng);
      y[i] += step(rng);
      if (!present(rng)) continue;
      gt.push_back({f, i + 1, BBox(x[i], y[i], 10, 20), 1.0});
      if (!miss(rng)) hyp.push_back({f, label[i], BBox(x[i] + jitter(rng), y[i] + jitter(rng), 10, 20), 1.0});
    }
    if (fp(rng)) hyp.push_back({f, 99, BBox(start(rng), start(rng), 10, 20), 1.0});
  }
}

}  // namespace sahitrack::oracle
