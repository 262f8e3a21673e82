#include "uavlora/mobility.hpp"

#include <cmath>

namespace uavlora {

namespace {

// Mirror p into [0, side], flipping sign for each reflection.
void reflect_axis(double& p, double& v, double side) {
  while (p < 0.0 || p > side) {
    if (p < 0.0) {
      p = -p;
      v = -v;
    } else {
      p = 2.0 * side - p;
      v = -v;
    }
  }
}

}  // namespace

Vec2 step_velocity(const EdKinematics& kin, const MobilityParams& params,
                   const Vec2& noise) {
  const double mem = params.memory;
  const double sigma = params.randomness * std::sqrt(1.0 - mem * mem);
  Vec2 v = mem * kin.velocity + (1.0 - mem) * kin.mean_velocity + sigma * noise;
  const double speed = v.norm();
  if (speed > params.v_max_mps) {
    v = v * (params.v_max_mps / speed);
  }
  return v;
}

EdKinematics step_position(const EdKinematics& kin,
                           const MobilityParams& params) {
  EdKinematics out = kin;
  out.position += kin.velocity * params.dt_s;
  reflect_axis(out.position.x, out.velocity.x, params.area_side_m);
  reflect_axis(out.position.y, out.velocity.y, params.area_side_m);
  return out;
}

EdKinematics maybe_resample_mean(const EdKinematics& kin,
                                 const MobilityParams& params, double u,
                                 const Vec2& fresh_mean) {
  EdKinematics out = kin;
  if (u < params.resample_prob) {
    out.mean_velocity = fresh_mean;
  }
  return out;
}

}  // namespace uavlora
