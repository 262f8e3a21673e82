#pragma once

#include "uavlora/vec2.hpp"

namespace uavlora {

// Gauss-Markov ground-node motion with reflecting boundaries.
struct MobilityParams {
  double memory = 0.85;        // temporal correlation, in [0,1]
  double randomness = 0.5;     // noise level, >= 0
  double dt_s = 0.5;           // step duration
  double v_max_mps = 1.0;      // hard speed cap
  double resample_prob = 0.01; // per-step chance of redrawing the mean velocity
  double area_side_m = 1000.0; // square world side

  bool valid() const {
    return memory >= 0.0 && memory <= 1.0 && randomness >= 0.0 && dt_s > 0.0 &&
           v_max_mps > 0.0 && resample_prob >= 0.0 && resample_prob <= 1.0 &&
           area_side_m > 0.0;
  }
};

struct EdKinematics {
  Vec2 position;       // in [0, area_side]^2
  Vec2 velocity;       // |v| <= v_max
  Vec2 mean_velocity;  // long-run drift the process reverts to
};

// One velocity update: memory * v + (1-memory) * mean + randomness *
// sqrt(1-memory^2) * noise, then magnitude-clamped to v_max (direction
// preserved). noise is a standard bivariate Gaussian draw supplied by the
// caller.
Vec2 step_velocity(const EdKinematics& kin, const MobilityParams& params,
                   const Vec2& noise);

// Position update with boundary reflection: the overshoot is mirrored back
// inside the domain and the normal velocity component is negated.
EdKinematics step_position(const EdKinematics& kin,
                           const MobilityParams& params);

// Replaces the mean velocity with fresh_mean when u < resample_prob.
// fresh_mean must be drawn uniformly from [-v_max, v_max]^2 by the caller.
EdKinematics maybe_resample_mean(const EdKinematics& kin,
                                 const MobilityParams& params, double u,
                                 const Vec2& fresh_mean);

}  // namespace uavlora
