#include "uavlora/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavlora/power.hpp"

namespace uavlora {

double success_rate(const std::vector<LinkMetrics>& links,
                    const std::vector<bool>& served) {
  int total = 0;
  int passing = 0;
  for (std::size_t v = 0; v < served.size(); ++v) {
    if (!served[v]) continue;
    ++total;
    if (links[v].margin_db >= 0.0) ++passing;
  }
  return total == 0 ? 0.0 : static_cast<double>(passing) / total;
}

double margin_shaping(const std::vector<double>& margins_db, double cap_db,
                      double penalty_slope) {
  if (margins_db.empty()) return 0.0;
  double mean = 0.0;
  for (double m : margins_db) mean += m;
  mean /= static_cast<double>(margins_db.size());
  return mean >= 0.0 ? std::min(mean, cap_db) : penalty_slope * mean;
}

std::vector<double> global_state_vector(const WorldState& state,
                                        const ScenarioConfig& config,
                                        bool normalized) {
  const int num_eds = static_cast<int>(state.eds.size());
  const int num_uavs = static_cast<int>(state.uav_positions.size());
  const double side = config.world.area_side_m;
  const double range = config.world.comm_range_m;
  const double gain_ref = gain_linear(path_loss_db(0.0, config.channel));

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(num_eds) * (4 + num_uavs + 3));
  for (const auto& ed : state.eds) {
    out.push_back(normalized ? ed.position.x / side : ed.position.x);
    out.push_back(normalized ? ed.position.y / side : ed.position.y);
  }
  for (int v = 0; v < num_eds; ++v) {
    const int u = state.assoc.assignment[v];
    if (u == kUnassigned) {
      out.push_back(0.0);
      out.push_back(0.0);
    } else {
      const double d = distance(state.eds[v].position, state.uav_positions[u]);
      const double g = gain_linear(path_loss_db(d, config.channel));
      out.push_back(normalized ? d / range : d);
      out.push_back(normalized ? g / gain_ref : g);
    }
  }
  for (int v = 0; v < num_eds; ++v) {
    for (int u = 0; u < num_uavs; ++u) {
      out.push_back(state.assoc.assignment[v] == u ? 1.0 : 0.0);
    }
  }
  const auto& sets = config.radio;
  for (int v = 0; v < num_eds; ++v) {
    const auto& r = state.radio[v];
    if (normalized) {
      out.push_back(r.sf_idx / std::max(1.0, sets.num_sf() - 1.0));
      out.push_back(r.tp_idx / std::max(1.0, sets.num_tp() - 1.0));
      out.push_back(r.bw_idx / std::max(1.0, sets.num_bw() - 1.0));
    } else {
      out.push_back(r.sf_idx);
      out.push_back(r.tp_idx);
      out.push_back(r.bw_idx);
    }
  }
  return out;
}

StepInfo evaluate_world(const WorldState& state, const ScenarioConfig& config,
                        const SnrThresholdTable& table, double hover_w) {
  const int num_eds = static_cast<int>(state.eds.size());
  const int num_uavs = static_cast<int>(state.uav_positions.size());
  const auto& sets = config.radio;

  StepInfo info;
  info.links.resize(num_eds);
  info.served.assign(num_eds, false);
  info.assignment = state.assoc.assignment;
  info.radio = state.radio;

  // First pass: per-link SNR at the serving UAV.
  for (int v = 0; v < num_eds; ++v) {
    const int u = state.assoc.assignment[v];
    if (u == kUnassigned) continue;
    info.served[v] = true;
    ++info.num_associated;
    const auto& r = state.radio[v];
    LinkMetrics& m = info.links[v];
    const double d = distance(state.eds[v].position, state.uav_positions[u]);
    m.elevation_deg = elevation_angle(d, config.channel.uav_altitude_m);
    m.p_los = p_los(m.elevation_deg, config.channel);
    m.path_loss_db = path_loss_db(d, config.channel);
    m.gain_linear = gain_linear(m.path_loss_db);
    m.snr_linear = snr_linear(sets.tp_dbm[r.tp_idx], m.gain_linear,
                              config.channel.noise_dbm);
    m.margin_db = db_from_linear(m.snr_linear) -
                  table.threshold_by_index(r.sf_idx, r.bw_idx);
  }

  // Second pass: same-SF interference, rates, per-UAV sums.
  std::vector<double> uav_rate(num_uavs, 0.0);
  std::vector<double> uav_uplink_w(num_uavs, 0.0);
  std::vector<double> margins;
  margins.reserve(info.num_associated);
  for (int v = 0; v < num_eds; ++v) {
    if (!info.served[v]) continue;
    const auto& r = state.radio[v];
    double interference = 0.0;
    for (int w = 0; w < num_eds; ++w) {
      if (w == v || !info.served[w]) continue;
      if (state.radio[w].sf_idx != r.sf_idx) continue;
      if (config.channel.same_bw_interference_only &&
          state.radio[w].bw_idx != r.bw_idx) {
        continue;
      }
      interference += info.links[w].snr_linear;
    }
    LinkMetrics& m = info.links[v];
    m.sinr_linear = m.snr_linear / (interference + 1.0);
    m.rate_bps = rate_bps(sets.bw_khz[r.bw_idx] * 1000.0, m.sinr_linear);
    const int u = state.assoc.assignment[v];
    uav_rate[u] += m.rate_bps;
    uav_uplink_w[u] += dbm_to_mw(sets.tp_dbm[r.tp_idx]) * 1e-3;
    margins.push_back(m.margin_db);
  }

  info.step_ee = system_ee(uav_rate, uav_uplink_w, hover_w);
  info.success_rate = success_rate(info.links, info.served);
  if (!margins.empty()) {
    double mean = 0.0;
    for (double m : margins) mean += m;
    info.mean_margin_db = mean / static_cast<double>(margins.size());
  }
  info.shaped_margin = margin_shaping(margins, config.reward.margin_cap_db,
                                      config.reward.margin_penalty_slope);
  for (double w : uav_uplink_w) info.uplink_power_w += w;

  double penalized_power = info.uplink_power_w;
  if (config.reward.include_hover_in_power_penalty) {
    penalized_power += hover_w * num_uavs;
  }
  info.reward_ee_term = config.reward.w_ee * info.step_ee;
  info.reward_success_term = config.reward.w_success * info.success_rate;
  info.reward_margin_term = config.reward.w_margin * info.shaped_margin;
  info.reward_power_term = config.reward.w_power * penalized_power;
  info.reward = info.reward_ee_term + info.reward_success_term +
                info.reward_margin_term + info.reward_power_term;
  return info;
}

std::vector<std::vector<double>> Environment::gain_matrix(
    const std::vector<Vec2>& ed_positions,
    const std::vector<Vec2>& uav_positions, const ChannelParams& channel) {
  std::vector<std::vector<double>> gains(
      ed_positions.size(), std::vector<double>(uav_positions.size(), 0.0));
  for (std::size_t v = 0; v < ed_positions.size(); ++v) {
    for (std::size_t u = 0; u < uav_positions.size(); ++u) {
      const double d = distance(ed_positions[v], uav_positions[u]);
      gains[v][u] = gain_linear(path_loss_db(d, channel));
    }
  }
  return gains;
}

std::vector<Vec2> Environment::uav_line_positions(int num_uavs,
                                                  double area_side_m) {
  std::vector<Vec2> out(num_uavs);
  for (int u = 0; u < num_uavs; ++u) {
    out[u] = {area_side_m * (u + 1) / (num_uavs + 1), area_side_m / 2.0};
  }
  return out;
}

Environment::Environment(const ScenarioConfig& config, std::uint64_t seed)
    : config_(config),
      table_(config.threshold_table()),
      quota_(config.world.effective_quota()),
      placement_rng_(Rng::stream(seed, "placement")),
      mobility_rng_(Rng::stream(seed, "mobility")) {
  if (config_.world.num_eds < 0 || config_.world.num_uavs <= 0 ||
      config_.world.episode_steps <= 0) {
    throw std::invalid_argument("environment needs num_uavs > 0, "
                                "episode_steps > 0, num_eds >= 0");
  }
  hover_w_ = hover_power_w(config_.hover);
  gain_ref_ = gain_linear(path_loss_db(0.0, config_.channel));
  reset();
}

std::vector<Observation> Environment::reset() {
  const auto& w = config_.world;
  state_ = WorldState{};
  state_.uav_positions = uav_line_positions(w.num_uavs, w.area_side_m);
  state_.uav_altitude_m = config_.channel.uav_altitude_m;
  state_.eds.resize(w.num_eds);
  state_.radio.assign(w.num_eds, RadioAssignment{0, 0, 0});
  const double v_max = config_.mobility.v_max_mps;
  for (auto& ed : state_.eds) {
    ed.position = {placement_rng_.uniform(0.0, w.area_side_m),
                   placement_rng_.uniform(0.0, w.area_side_m)};
    ed.velocity = {placement_rng_.uniform(-v_max, v_max),
                   placement_rng_.uniform(-v_max, v_max)};
    const double dir = placement_rng_.uniform(0.0, 2.0 * 3.14159265358979323846);
    ed.mean_velocity = {config_.mobility.mean_speed_mps * std::cos(dir),
                        config_.mobility.mean_speed_mps * std::sin(dir)};
  }
  state_.t = 0;
  episode_ee_ = 0.0;
  rebuild_association();
  rebuild_observations();
  return obs_;
}

Environment::StepResult Environment::step(
    const std::vector<AgentAction>& joint_action) {
  const int num_uavs = config_.world.num_uavs;
  if (static_cast<int>(joint_action.size()) != num_uavs) {
    throw std::invalid_argument("joint action must have one entry per UAV");
  }
  if (state_.t >= config_.world.episode_steps) {
    throw std::logic_error("episode is over; call reset()");
  }

  // Apply each agent's slot triples to its served EDs; padded slots are
  // ignored.
  for (int u = 0; u < num_uavs; ++u) {
    const auto& slots = joint_action[u].slots;
    const auto& slot_eds = obs_[u].slot_eds;
    if (slots.size() < slot_eds.size()) {
      throw std::out_of_range("agent action has fewer slots than served EDs");
    }
    for (std::size_t i = 0; i < slot_eds.size(); ++i) {
      if (!slots[i].within(config_.radio)) {
        throw std::out_of_range("radio index out of range in agent action");
      }
      state_.radio[slot_eds[i]] = slots[i];
    }
  }

  StepResult result;
  result.info = evaluate_world(state_, config_, table_, hover_w_);
  episode_ee_ += result.info.step_ee;
  result.info.episode_ee = episode_ee_;
  result.reward = result.info.reward;

  // Advance mobility, then rebuild associations for the next slot.
  const MobilityParams mp = config_.mobility_params();
  const double v_max = mp.v_max_mps;
  for (auto& ed : state_.eds) {
    const auto [nx, ny] = mobility_rng_.normal2();
    ed.velocity = step_velocity(ed, mp, Vec2{nx, ny});
    ed = step_position(ed, mp);
    const double u01 = mobility_rng_.uniform();
    const Vec2 fresh{mobility_rng_.uniform(-v_max, v_max),
                     mobility_rng_.uniform(-v_max, v_max)};
    ed = maybe_resample_mean(ed, mp, u01, fresh);
  }
  state_.t += 1;
  rebuild_association();
  rebuild_observations();

  result.done = state_.t >= config_.world.episode_steps;
  result.observations = obs_;
  return result;
}

void Environment::rebuild_association() {
  std::vector<Vec2> ed_pos(state_.eds.size());
  for (std::size_t v = 0; v < state_.eds.size(); ++v) {
    ed_pos[v] = state_.eds[v].position;
  }
  const auto gains = gain_matrix(ed_pos, state_.uav_positions, config_.channel);
  state_.assoc = match(ed_pos, state_.uav_positions, gains, quota_,
                       config_.world.comm_range_m);
}

void Environment::rebuild_observations() {
  const int num_uavs = config_.world.num_uavs;
  const double side = config_.world.area_side_m;
  const double range = config_.world.comm_range_m;
  obs_.assign(num_uavs, Observation{});
  for (int u = 0; u < num_uavs; ++u) {
    Observation& o = obs_[u];
    o.quota = quota_;
    o.raw.assign(static_cast<std::size_t>(quota_) * 4, 0.0);
    o.normalized.assign(static_cast<std::size_t>(quota_) * 4, 0.0);
    o.slot_eds = state_.assoc.served_by(u);
    for (std::size_t i = 0; i < o.slot_eds.size(); ++i) {
      const int v = o.slot_eds[i];
      const double d =
          distance(state_.eds[v].position, state_.uav_positions[u]);
      const double g = gain_linear(path_loss_db(d, config_.channel));
      o.raw[i * 4 + 0] = state_.eds[v].position.x;
      o.raw[i * 4 + 1] = state_.eds[v].position.y;
      o.raw[i * 4 + 2] = d;
      o.raw[i * 4 + 3] = g;
      o.normalized[i * 4 + 0] = state_.eds[v].position.x / side;
      o.normalized[i * 4 + 1] = state_.eds[v].position.y / side;
      o.normalized[i * 4 + 2] = d / range;
      o.normalized[i * 4 + 3] = g / gain_ref_;
    }
  }
}

}  // namespace uavlora
