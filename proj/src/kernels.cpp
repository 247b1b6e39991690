#include "sahitrack/kernels.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace sahitrack::kernels {
namespace {

double weighted_diou(const BBox& det, const BBox& pred, const BBox& hist, double w_pred, double w_hist) {
  return w_pred * diou(det, pred) + w_hist * diou(det, hist);
}

double cosine_or_nan(const Embedding& a, const Embedding& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (a.size() != b.size()) throw std::invalid_argument("embedding dimension mismatch");
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  return dot;
}

void check_sizes(std::span<const BBox> predicted, std::span<const BBox> history) {
  if (predicted.size() != history.size()) {
    throw std::invalid_argument("predicted and history box lists differ in length");
  }
}

}  // namespace

Eigen::MatrixXd dh_diou_matrix_serial(std::span<const BBox> predicted, std::span<const BBox> history,
                                      std::span<const BBox> dets, double w_pred, double w_hist) {
  check_sizes(predicted, history);
  const auto rows = static_cast<Eigen::Index>(predicted.size());
  const auto cols = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = weighted_diou(dets[j], predicted[i], history[i], w_pred, w_hist);
    }
  }
  return out;
}

Eigen::MatrixXd dh_diou_matrix_parallel(std::span<const BBox> predicted, std::span<const BBox> history,
                                        std::span<const BBox> dets, double w_pred, double w_hist) {
  check_sizes(predicted, history);
  const auto rows = static_cast<Eigen::Index>(predicted.size());
  const auto cols = static_cast<Eigen::Index>(dets.size());
  Eigen::MatrixXd out(rows, cols);
  const Eigen::Index cells = rows * cols;
#pragma omp parallel for schedule(static) if (cells > 256)
  for (Eigen::Index k = 0; k < cells; ++k) {
    const Eigen::Index i = k / cols;
    const Eigen::Index j = k % cols;
    out(i, j) = weighted_diou(dets[j], predicted[i], history[i], w_pred, w_hist);
  }
  return out;
}

Eigen::MatrixXd cosine_matrix_serial(std::span<const Embedding> track_features,
                                     std::span<const Embedding> det_features) {
  const auto rows = static_cast<Eigen::Index>(track_features.size());
  const auto cols = static_cast<Eigen::Index>(det_features.size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = cosine_or_nan(track_features[i], det_features[j]);
    }
  }
  return out;
}

Eigen::MatrixXd cosine_matrix_parallel(std::span<const Embedding> track_features,
                                       std::span<const Embedding> det_features) {
  const auto rows = static_cast<Eigen::Index>(track_features.size());
  const auto cols = static_cast<Eigen::Index>(det_features.size());
  Eigen::MatrixXd out(rows, cols);
  const Eigen::Index cells = rows * cols;
  bool mismatch = false;
#pragma omp parallel for schedule(static) if (cells > 64) reduction(|| : mismatch)
  for (Eigen::Index k = 0; k < cells; ++k) {
    const Eigen::Index i = k / cols;
    const Eigen::Index j = k % cols;
    const Embedding& a = track_features[i];
    const Embedding& b = det_features[j];
    if (!a.empty() && !b.empty() && a.size() != b.size()) {
      mismatch = true;
      out(i, j) = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out(i, j) = cosine_or_nan(a, b);
  }
  if (mismatch) throw std::invalid_argument("embedding dimension mismatch");
  return out;
}

std::vector<Detection> detect_regions_serial(const DetectorPort& port, std::span<const Region> regions,
                                             int frame_id) {
  std::vector<Detection> out;
  for (const Region& r : regions) {
    for (const Detection& d : port.detect(r, frame_id)) out.push_back(lift_to_global(d, r));
  }
  return out;
}

std::vector<Detection> detect_regions_parallel(const DetectorPort& port, std::span<const Region> regions,
                                               int frame_id) {
  const auto n = static_cast<std::ptrdiff_t>(regions.size());
  std::vector<std::vector<Detection>> per_region(regions.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const Region& r = regions[static_cast<std::size_t>(i)];
      auto local = port.detect(r, frame_id);
      auto& slot = per_region[static_cast<std::size_t>(i)];
      slot.reserve(local.size());
      for (const Detection& d : local) slot.push_back(lift_to_global(d, r));
    } catch (...) {
#pragma omp critical(sahitrack_detect_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<Detection> out;
  for (auto& v : per_region) {
    for (auto& d : v) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace sahitrack::kernels
