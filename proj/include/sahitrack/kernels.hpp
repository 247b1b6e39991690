#pragma once

// Data-parallel inner loops of the per-frame pipeline. Every kernel has an
// OpenMP version used by the tracker and a serial reference kept for tests
// and the benchmark; both produce identical results.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "sahitrack/detect.hpp"
#include "sahitrack/geometry.hpp"
#include "sahitrack/slicing.hpp"

namespace sahitrack::kernels {

// rows = tracks, cols = detections; entry = w_pred * diou(det, predicted)
// + w_hist * diou(det, history).
Eigen::MatrixXd dh_diou_matrix_serial(std::span<const BBox> predicted, std::span<const BBox> history,
                                      std::span<const BBox> dets, double w_pred, double w_hist);
Eigen::MatrixXd dh_diou_matrix_parallel(std::span<const BBox> predicted, std::span<const BBox> history,
                                        std::span<const BBox> dets, double w_pred, double w_hist);

// Dot products of unit-norm features. Rows or columns with an empty feature
// are NaN (no appearance evidence).
Eigen::MatrixXd cosine_matrix_serial(std::span<const Embedding> track_features, std::span<const Embedding> det_features);
Eigen::MatrixXd cosine_matrix_parallel(std::span<const Embedding> track_features,
                                       std::span<const Embedding> det_features);

// Runs the detector over each region and lifts results into global
// coordinates, concatenated in the order of `regions`.
std::vector<Detection> detect_regions_serial(const DetectorPort& port, std::span<const Region> regions, int frame_id);
std::vector<Detection> detect_regions_parallel(const DetectorPort& port, std::span<const Region> regions,
                                               int frame_id);

}  // namespace sahitrack::kernels
