#include "sahitrack/motion.hpp"

#include <algorithm>

#include <Eigen/Cholesky>

namespace sahitrack {
namespace {

constexpr double kMinSide = 1.0;

using MeasurementVector = Eigen::Matrix<double, 4, 1>;
using MeasurementMatrix = Eigen::Matrix<double, 4, 8>;

StateMatrix transition() {
  StateMatrix f = StateMatrix::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

MeasurementMatrix observation() {
  MeasurementMatrix h = MeasurementMatrix::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

MeasurementVector to_measurement(const BBox& b) {
  const Point c = b.center();
  return {c.x, c.y, b.w(), b.h()};
}

double scale_of(const StateVector& mean) { return std::max(mean(3), kMinSide); }

}  // namespace

BBox KalmanState::box() const {
  return BBox::from_center(mean(0), mean(1), std::max(mean(2), kMinSide), std::max(mean(3), kMinSide));
}

KalmanState kf_init(const BBox& measurement, const KalmanConfig& cfg) {
  KalmanState s;
  s.mean.head<4>() = to_measurement(measurement);
  s.mean.tail<4>().setZero();

  const double h = measurement.h();
  const double pos = 2.0 * cfg.pos_std_factor * h;
  // Velocity is unobserved at birth: its prior spread (0.5 h per frame at
  // the default factor) dominates the position prior.
  const double vel = 80.0 * cfg.vel_std_factor * h;
  StateVector var;
  var << pos, pos, pos, pos, vel, vel, vel, vel;
  s.covariance = var.array().square().matrix().asDiagonal();
  s.frames_since_update = 0;
  return s;
}

Prediction kf_predict(const KalmanState& state, const KalmanConfig& cfg) {
  static const StateMatrix f = transition();
  const double h = scale_of(state.mean);
  const double pos = cfg.pos_std_factor * h;
  const double vel = cfg.vel_std_factor * h;
  StateVector var;
  var << pos, pos, pos, pos, vel, vel, vel, vel;
  const StateMatrix q = var.array().square().matrix().asDiagonal();

  KalmanState next;
  next.mean = f * state.mean;
  next.covariance = f * state.covariance * f.transpose() + q;
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose());
  next.frames_since_update = state.frames_since_update + 1;
  const BBox box = next.box();
  return {std::move(next), box};
}

KalmanState kf_update(const KalmanState& state, const BBox& measurement, const KalmanConfig& cfg) {
  static const MeasurementMatrix hm = observation();
  const double std_m = cfg.pos_std_factor * scale_of(state.mean);
  const Eigen::Matrix4d r = Eigen::Vector4d::Constant(std_m * std_m).asDiagonal();

  const Eigen::Matrix4d s = hm * state.covariance * hm.transpose() + r;
  // K = P H^T S^-1, solved through the Cholesky factor of S.
  const Eigen::Matrix<double, 8, 4> pht = state.covariance * hm.transpose();
  const Eigen::Matrix<double, 8, 4> gain = s.llt().solve(pht.transpose()).transpose();

  KalmanState next;
  next.mean = state.mean + gain * (to_measurement(measurement) - hm * state.mean);
  next.mean(2) = std::max(next.mean(2), kMinSide);
  next.mean(3) = std::max(next.mean(3), kMinSide);

  const StateMatrix ikh = StateMatrix::Identity() - gain * hm;
  next.covariance = ikh * state.covariance * ikh.transpose() + gain * r * gain.transpose();
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose());
  next.frames_since_update = 0;
  return next;
}

}  // namespace sahitrack
