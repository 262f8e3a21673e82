#include "uavlora/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "uavlora/rng.hpp"

namespace uavlora {

using nlohmann::json;

namespace {

json to_json_tree(const ScenarioConfig& c) {
  json j;
  j["version"] = 1;
  j["world"] = {{"num_eds", c.world.num_eds},
                {"num_uavs", c.world.num_uavs},
                {"area_side_m", c.world.area_side_m},
                {"episode_steps", c.world.episode_steps},
                {"quota", c.world.quota},
                {"comm_range_m", c.world.comm_range_m}};
  j["mobility"] = {{"memory", c.mobility.memory},
                   {"randomness", c.mobility.randomness},
                   {"dt_s", c.mobility.dt_s},
                   {"v_max_mps", c.mobility.v_max_mps},
                   {"resample_prob", c.mobility.resample_prob},
                   {"mean_speed_mps", c.mobility.mean_speed_mps}};
  j["channel"] = {{"carrier_hz", c.channel.carrier_hz},
                  {"light_speed_mps", c.channel.light_speed_mps},
                  {"env_a", c.channel.env_a},
                  {"env_b", c.channel.env_b},
                  {"excess_los_db", c.channel.excess_los_db},
                  {"excess_nlos_db", c.channel.excess_nlos_db},
                  {"noise_dbm", c.channel.noise_dbm},
                  {"uav_altitude_m", c.channel.uav_altitude_m},
                  {"slant_range_for_fspl", c.channel.slant_range_for_fspl},
                  {"same_bw_interference_only",
                   c.channel.same_bw_interference_only}};
  j["radio"] = {{"sf", c.radio.sf},
                {"tp_dbm", c.radio.tp_dbm},
                {"bw_khz", c.radio.bw_khz}};
  j["hover"] = {{"rotor_count", c.hover.rotor_count},
                {"rotor_weight_n", c.hover.rotor_weight_n},
                {"air_density", c.hover.air_density},
                {"solidity", c.hover.solidity},
                {"disc_area_m2", c.hover.disc_area_m2},
                {"thrust_coeff", c.hover.thrust_coeff},
                {"blade_drag_coeff", c.hover.blade_drag_coeff},
                {"induced_power_factor", c.hover.induced_power_factor}};
  j["reward"] = {{"w_ee", c.reward.w_ee},
                 {"w_success", c.reward.w_success},
                 {"w_margin", c.reward.w_margin},
                 {"w_power", c.reward.w_power},
                 {"margin_cap_db", c.reward.margin_cap_db},
                 {"margin_penalty_slope", c.reward.margin_penalty_slope},
                 {"include_hover_in_power_penalty",
                  c.reward.include_hover_in_power_penalty}};
  j["train"] = {{"lr", c.train.lr},
                {"discount", c.train.discount},
                {"clip", c.train.clip},
                {"epochs", c.train.epochs},
                {"minibatch", c.train.minibatch},
                {"total_env_steps", c.train.total_env_steps},
                {"rollout_steps", c.train.rollout_steps},
                {"gae_lambda", c.train.gae_lambda},
                {"entropy_coeff", c.train.entropy_coeff},
                {"value_coeff", c.train.value_coeff},
                {"grad_clip_norm", c.train.grad_clip_norm},
                {"advantage_norm", c.train.advantage_norm},
                {"value_target_norm", c.train.value_target_norm},
                {"hidden_dim", c.train.hidden_dim},
                {"num_envs", c.train.num_envs},
                {"tau", c.train.tau},
                {"checkpoint_every_updates", c.train.checkpoint_every_updates},
                {"per_agent_params", c.train.per_agent_params}};
  j["seeds"] = c.seeds;
  j["threshold_table_file"] = c.threshold_table_file;
  return j;
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

ScenarioConfig from_json_tree(const json& j) {
  ScenarioConfig c;
  if (j.contains("world")) {
    const json& w = j["world"];
    get_to(w, "num_eds", c.world.num_eds);
    get_to(w, "num_uavs", c.world.num_uavs);
    get_to(w, "area_side_m", c.world.area_side_m);
    get_to(w, "episode_steps", c.world.episode_steps);
    get_to(w, "quota", c.world.quota);
    get_to(w, "comm_range_m", c.world.comm_range_m);
  }
  if (j.contains("mobility")) {
    const json& m = j["mobility"];
    get_to(m, "memory", c.mobility.memory);
    get_to(m, "randomness", c.mobility.randomness);
    get_to(m, "dt_s", c.mobility.dt_s);
    get_to(m, "v_max_mps", c.mobility.v_max_mps);
    get_to(m, "resample_prob", c.mobility.resample_prob);
    get_to(m, "mean_speed_mps", c.mobility.mean_speed_mps);
  }
  if (j.contains("channel")) {
    const json& ch = j["channel"];
    get_to(ch, "carrier_hz", c.channel.carrier_hz);
    get_to(ch, "light_speed_mps", c.channel.light_speed_mps);
    get_to(ch, "env_a", c.channel.env_a);
    get_to(ch, "env_b", c.channel.env_b);
    get_to(ch, "excess_los_db", c.channel.excess_los_db);
    get_to(ch, "excess_nlos_db", c.channel.excess_nlos_db);
    get_to(ch, "noise_dbm", c.channel.noise_dbm);
    get_to(ch, "uav_altitude_m", c.channel.uav_altitude_m);
    get_to(ch, "slant_range_for_fspl", c.channel.slant_range_for_fspl);
    get_to(ch, "same_bw_interference_only",
           c.channel.same_bw_interference_only);
  }
  if (j.contains("radio")) {
    const json& r = j["radio"];
    get_to(r, "sf", c.radio.sf);
    get_to(r, "tp_dbm", c.radio.tp_dbm);
    get_to(r, "bw_khz", c.radio.bw_khz);
  }
  if (j.contains("hover")) {
    const json& h = j["hover"];
    get_to(h, "rotor_count", c.hover.rotor_count);
    get_to(h, "rotor_weight_n", c.hover.rotor_weight_n);
    get_to(h, "air_density", c.hover.air_density);
    get_to(h, "solidity", c.hover.solidity);
    get_to(h, "disc_area_m2", c.hover.disc_area_m2);
    get_to(h, "thrust_coeff", c.hover.thrust_coeff);
    get_to(h, "blade_drag_coeff", c.hover.blade_drag_coeff);
    get_to(h, "induced_power_factor", c.hover.induced_power_factor);
  }
  if (j.contains("reward")) {
    const json& r = j["reward"];
    get_to(r, "w_ee", c.reward.w_ee);
    get_to(r, "w_success", c.reward.w_success);
    get_to(r, "w_margin", c.reward.w_margin);
    get_to(r, "w_power", c.reward.w_power);
    get_to(r, "margin_cap_db", c.reward.margin_cap_db);
    get_to(r, "margin_penalty_slope", c.reward.margin_penalty_slope);
    get_to(r, "include_hover_in_power_penalty",
           c.reward.include_hover_in_power_penalty);
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    get_to(t, "lr", c.train.lr);
    get_to(t, "discount", c.train.discount);
    get_to(t, "clip", c.train.clip);
    get_to(t, "epochs", c.train.epochs);
    get_to(t, "minibatch", c.train.minibatch);
    get_to(t, "total_env_steps", c.train.total_env_steps);
    get_to(t, "rollout_steps", c.train.rollout_steps);
    get_to(t, "gae_lambda", c.train.gae_lambda);
    get_to(t, "entropy_coeff", c.train.entropy_coeff);
    get_to(t, "value_coeff", c.train.value_coeff);
    get_to(t, "grad_clip_norm", c.train.grad_clip_norm);
    get_to(t, "advantage_norm", c.train.advantage_norm);
    get_to(t, "value_target_norm", c.train.value_target_norm);
    get_to(t, "hidden_dim", c.train.hidden_dim);
    get_to(t, "num_envs", c.train.num_envs);
    get_to(t, "tau", c.train.tau);
    get_to(t, "checkpoint_every_updates", c.train.checkpoint_every_updates);
    get_to(t, "per_agent_params", c.train.per_agent_params);
  }
  get_to(j, "seeds", c.seeds);
  get_to(j, "threshold_table_file", c.threshold_table_file);
  return c;
}

}  // namespace

std::string config_to_json(const ScenarioConfig& config) {
  return to_json_tree(config).dump(2) + "\n";
}

ScenarioConfig config_from_json(const std::string& json_text) {
  return from_json_tree(json::parse(json_text));
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << config_to_json(config);
}

void apply_override(ScenarioConfig& config, const std::string& key_eq_value) {
  const auto eq = key_eq_value.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must be key=value: " + key_eq_value);
  }
  const std::string key = key_eq_value.substr(0, eq);
  const std::string value = key_eq_value.substr(eq + 1);

  json tree = to_json_tree(config);
  json* node = &tree;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot - pos);
    if (!node->contains(part)) {
      throw std::invalid_argument("unknown config key: " + key);
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // bare strings allowed
  if (node->type() != parsed.type() &&
      !(node->is_number() && parsed.is_number())) {
    throw std::invalid_argument("override type mismatch for key: " + key);
  }
  *node = parsed;
  config = from_json_tree(tree);
}

std::vector<std::string> validate_config(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  require(c.world.num_eds >= 0, "world.num_eds must be >= 0");
  require(c.world.num_uavs > 0, "world.num_uavs must be > 0");
  require(c.world.area_side_m > 0, "world.area_side_m must be > 0");
  require(c.world.episode_steps > 0, "world.episode_steps must be > 0");
  require(c.world.quota >= 0, "world.quota must be >= 0 (0 = auto)");
  require(c.world.comm_range_m > 0, "world.comm_range_m must be > 0");
  require(c.mobility_params().valid(), "mobility parameters out of range");
  require(c.mobility.mean_speed_mps >= 0, "mobility.mean_speed_mps must be >= 0");
  require(c.channel.valid(), "channel parameters out of range");
  require(c.radio.valid(), "radio sets must be non-empty");
  require(c.hover.valid(), "hover parameters must be positive");
  require(c.train.discount > 0 && c.train.discount < 1,
          "train.discount must be in (0,1)");
  require(c.train.clip > 0, "train.clip must be > 0");
  require(c.train.epochs >= 1, "train.epochs must be >= 1");
  require(c.train.minibatch >= 1, "train.minibatch must be >= 1");
  require(c.train.rollout_steps >= 1, "train.rollout_steps must be >= 1");
  require(c.train.hidden_dim >= 1, "train.hidden_dim must be >= 1");
  require(c.train.num_envs >= 1, "train.num_envs must be >= 1");
  require(c.train.lr > 0, "train.lr must be > 0");
  require(!c.seeds.empty(), "seeds must be non-empty");
  if (!c.threshold_table_file.empty()) {
    try {
      SnrThresholdTable::from_file(c.threshold_table_file);
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
  }
  return problems;
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  return Rng::fnv1a64(config_to_json(config));
}

}  // namespace uavlora
