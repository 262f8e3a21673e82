#pragma once

#include <cstdint>
#include <vector>

#include "uavlora/association.hpp"
#include "uavlora/channel.hpp"
#include "uavlora/config.hpp"
#include "uavlora/mobility.hpp"
#include "uavlora/radio.hpp"
#include "uavlora/rng.hpp"
#include "uavlora/vec2.hpp"

namespace uavlora {

// Per-agent view: a fixed-size quota x 4 matrix of (x, y, distance, gain)
// for the served EDs, zero rows beyond the served count. Raw feature values
// plus a normalized copy for network input.
struct Observation {
  int quota = 0;
  std::vector<double> raw;         // quota*4, row-major
  std::vector<double> normalized;  // same layout; x,y / side, d / range, g / ref
  std::vector<int> slot_eds;       // ED index behind each filled slot

  int active_slots() const { return static_cast<int>(slot_eds.size()); }
};

// One radio triple per observation slot; entries for empty slots are
// ignored.
struct AgentAction {
  std::vector<RadioAssignment> slots;
};

struct WorldState {
  std::vector<EdKinematics> eds;
  std::vector<Vec2> uav_positions;
  double uav_altitude_m = 0.0;
  AssociationState assoc;
  std::vector<RadioAssignment> radio;  // per ED, persists across handover
  int t = 0;
};

struct StepInfo {
  double step_ee = 0.0;       // bits/J this step
  double episode_ee = 0.0;    // accumulated over the episode so far
  double success_rate = 0.0;  // fraction of served EDs meeting their threshold
  double mean_margin_db = 0.0;
  double shaped_margin = 0.0;
  double uplink_power_w = 0.0;
  double reward = 0.0;
  double reward_ee_term = 0.0;
  double reward_success_term = 0.0;
  double reward_margin_term = 0.0;
  double reward_power_term = 0.0;
  int num_associated = 0;
  std::vector<LinkMetrics> links;  // per ED; meaningful only when served
  std::vector<bool> served;        // per ED
  std::vector<int> assignment;     // per ED serving UAV at evaluation time
  std::vector<RadioAssignment> radio;  // per ED triple at evaluation time
};

// Fraction of served EDs whose SNR meets the detection threshold
// (margin >= 0); 0 when nothing is served.
double success_rate(const std::vector<LinkMetrics>& links,
                    const std::vector<bool>& served);

// Mean margin m in dB mapped to min(m, cap) when m >= 0 and slope*m when
// m < 0; 0 when the list is empty.
double margin_shaping(const std::vector<double>& margins_db, double cap_db,
                      double penalty_slope);

// Deterministic flattening of the global state for the centralized critic:
// per ED (x, y), per ED (distance, gain) to the serving UAV (0 when
// unserved), per ED a one-hot over UAVs, per ED the radio index triple.
// Length = V * (4 + U + 3).
std::vector<double> global_state_vector(const WorldState& state,
                                        const ScenarioConfig& config,
                                        bool normalized = false);

// Pure per-step evaluation of the current state and radio configuration:
// link metrics, interference, rates, EE, and the reward terms.
StepInfo evaluate_world(const WorldState& state, const ScenarioConfig& config,
                        const SnrThresholdTable& table, double hover_w);

class Environment {
 public:
  struct StepResult {
    std::vector<Observation> observations;
    double reward = 0.0;  // shared by all agents
    bool done = false;
    StepInfo info;
  };

  Environment(const ScenarioConfig& config, std::uint64_t seed);

  // Draws a fresh initial state (placement, velocities, association) and
  // resets the step counter. Consecutive resets continue the seeded streams,
  // so episode e is a deterministic function of (seed, e).
  std::vector<Observation> reset();

  StepResult step(const std::vector<AgentAction>& joint_action);

  const WorldState& state() const { return state_; }
  const ScenarioConfig& config() const { return config_; }
  const std::vector<Observation>& observations() const { return obs_; }
  const SnrThresholdTable& thresholds() const { return table_; }
  double hover_power() const { return hover_w_; }
  double gain_reference() const { return gain_ref_; }
  int quota() const { return quota_; }

  StepInfo evaluate_current() const {
    return evaluate_world(state_, config_, table_, hover_w_);
  }

  // Gain matrix (V x U) for the given ED/UAV geometry.
  static std::vector<std::vector<double>> gain_matrix(
      const std::vector<Vec2>& ed_positions,
      const std::vector<Vec2>& uav_positions, const ChannelParams& channel);

  // Evenly spaced UAV line across the area center.
  static std::vector<Vec2> uav_line_positions(int num_uavs, double area_side_m);

 private:
  void rebuild_association();
  void rebuild_observations();

  ScenarioConfig config_;
  SnrThresholdTable table_;
  double hover_w_ = 0.0;
  double gain_ref_ = 1.0;
  int quota_ = 0;
  WorldState state_;
  std::vector<Observation> obs_;
  Rng placement_rng_;
  Rng mobility_rng_;
  double episode_ee_ = 0.0;
};

}  // namespace uavlora
