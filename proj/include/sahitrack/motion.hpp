#pragma once

#include <Eigen/Core>

#include "sahitrack/geometry.hpp"

namespace sahitrack {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;

// Noise magnitudes scale with the box height so the filter behaves the same
// for a 10x20 bird and a large object.
struct KalmanConfig {
  double pos_std_factor = 1.0 / 20.0;
  double vel_std_factor = 1.0 / 160.0;
};

// Constant-velocity state (cx, cy, w, h, vcx, vcy, vw, vh), pixels and pixels/frame.
struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();
  int frames_since_update = 0;

  BBox box() const;
};

KalmanState kf_init(const BBox& measurement, const KalmanConfig& cfg = {});

struct Prediction {
  KalmanState state;
  BBox box;
};

// One frame of constant-velocity motion plus process noise. The returned
// box floors width and height at 1 px.
Prediction kf_predict(const KalmanState& state, const KalmanConfig& cfg = {});

// Kalman correction toward the measured (cx, cy, w, h). Joseph-form
// covariance update; width and height of the mean are floored at 1 px.
KalmanState kf_update(const KalmanState& state, const BBox& measurement, const KalmanConfig& cfg = {});

}  // namespace sahitrack
