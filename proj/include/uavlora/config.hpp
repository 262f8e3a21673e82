#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavlora/channel.hpp"
#include "uavlora/mobility.hpp"
#include "uavlora/power.hpp"
#include "uavlora/radio.hpp"

namespace uavlora {

struct WorldConfig {
  int num_eds = 10;
  int num_uavs = 2;
  double area_side_m = 1000.0;
  int episode_steps = 150;
  int quota = 0;  // 0 = auto: ceil(num_eds / num_uavs)
  double comm_range_m = 800.0;

  int effective_quota() const {
    if (quota > 0) return quota;
    if (num_uavs <= 0) return 1;  // rejected later by validation
    const int auto_quota = (num_eds + num_uavs - 1) / num_uavs;
    return auto_quota > 0 ? auto_quota : 1;
  }
};

struct MobilityConfig {
  double memory = 0.85;
  double randomness = 0.5;
  double dt_s = 0.5;
  double v_max_mps = 1.0;
  double resample_prob = 0.01;
  // Magnitude of the initial mean velocity; its direction is drawn
  // uniformly at reset.
  double mean_speed_mps = 0.005;
};

struct RewardConfig {
  // Weights are applied additively: r = w_ee*EE + w_success*success
  // + w_margin*shaped_margin + w_power*uplink_power_w. The power weight is
  // negative so the term is a net penalty.
  double w_ee = 4e-4;
  double w_success = 5.0;
  double w_margin = 1.0;
  double w_power = -1e-2;
  double margin_cap_db = 10.0;       // positive mean margin saturates here
  double margin_penalty_slope = 10.0; // negative mean margin scales by this
  bool include_hover_in_power_penalty = false;
};

struct TrainSettings {
  double lr = 1e-4;
  double discount = 0.99;
  double clip = 0.2;
  int epochs = 15;
  int minibatch = 16;
  std::int64_t total_env_steps = 2'000'000;
  int rollout_steps = 32;
  double gae_lambda = 0.95;
  double entropy_coeff = 0.01;
  double value_coeff = 0.5;
  double grad_clip_norm = 10.0;
  bool advantage_norm = true;
  // Critic regresses running-normalized targets; raw returns sit far outside
  // the clipped-gradient range at gamma = 0.99.
  bool value_target_norm = true;
  int hidden_dim = 128;
  int num_envs = 1;
  // Soft-update coefficient from the experiment table; target networks do
  // not exist in this learner, so it is recorded but unused.
  double tau = 0.01;
  int checkpoint_every_updates = 200;
  bool per_agent_params = false;
};

struct ScenarioConfig {
  WorldConfig world;
  MobilityConfig mobility;
  ChannelParams channel;
  RadioSets radio;
  HoverParams hover;
  RewardConfig reward;
  TrainSettings train;
  std::vector<std::uint64_t> seeds = {0, 42, 2021};
  std::string threshold_table_file;  // empty = compiled-in table

  MobilityParams mobility_params() const {
    return MobilityParams{mobility.memory,        mobility.randomness,
                          mobility.dt_s,          mobility.v_max_mps,
                          mobility.resample_prob, world.area_side_m};
  }

  SnrThresholdTable threshold_table() const {
    return threshold_table_file.empty()
               ? SnrThresholdTable()
               : SnrThresholdTable::from_file(threshold_table_file);
  }
};

// JSON (de)serialization; round-trips all numeric fields exactly.
std::string config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& config, const std::string& path);

// Applies a dotted-path override such as "reward.w_success=2.5" or
// "radio.bw_khz=[125,500]"; the value is parsed as JSON. Throws
// std::invalid_argument for unknown keys or malformed values.
void apply_override(ScenarioConfig& config, const std::string& key_eq_value);

// Returns human-readable problems; empty means the config is valid.
std::vector<std::string> validate_config(const ScenarioConfig& config);

// Stable 64-bit hash of the serialized config, used in run directory names.
std::uint64_t config_hash(const ScenarioConfig& config);

}  // namespace uavlora
