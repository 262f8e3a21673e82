#include "uavlora/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace uavlora {

AgentAction RandomController::act(const Observation& obs, int) {
  AgentAction a;
  a.slots.resize(obs.quota);
  for (auto& slot : a.slots) {
    slot.sf_idx = static_cast<int>(rng_.uniform_int(sets_.num_sf()));
    slot.tp_idx = static_cast<int>(rng_.uniform_int(sets_.num_tp()));
    slot.bw_idx = static_cast<int>(rng_.uniform_int(sets_.num_bw()));
  }
  return a;
}

RadioAssignment greedy_choice(double gain, const RadioSets& sets,
                              double noise_dbm,
                              const SnrThresholdTable& table) {
  for (int j = 0; j < sets.num_tp(); ++j) {  // TP sets are ascending
    const double snr_db =
        db_from_linear(snr_linear(sets.tp_dbm[j], gain, noise_dbm));
    for (int m = sets.num_bw() - 1; m >= 0; --m) {
      for (int n = 0; n < sets.num_sf(); ++n) {
        if (snr_db >= table.threshold_db(sets.sf[n],
                                         static_cast<int>(sets.bw_khz[m]))) {
          return {n, j, m};
        }
      }
    }
  }
  return {sets.num_sf() - 1, sets.num_tp() - 1, 0};  // most robust fallback
}

AgentAction GreedyController::act(const Observation& obs, int) {
  AgentAction a;
  a.slots.assign(obs.quota, RadioAssignment{0, 0, 0});
  for (int i = 0; i < obs.active_slots(); ++i) {
    const double gain = obs.raw[i * 4 + 3];
    a.slots[i] = greedy_choice(gain, sets_, noise_dbm_, table_);
  }
  return a;
}

WorldSnapshot WorldSnapshot::from_state(const WorldState& state,
                                        const ScenarioConfig& config,
                                        double hover_w) {
  WorldSnapshot snap;
  snap.ed_positions.reserve(state.eds.size());
  for (const auto& ed : state.eds) snap.ed_positions.push_back(ed.position);
  snap.uav_positions = state.uav_positions;
  snap.assignment = state.assoc.assignment;
  snap.channel = config.channel;
  snap.hover_power_w = hover_w;
  return snap;
}

double oracle_eval_allocation(const WorldSnapshot& snap, const RadioSets& sets,
                              const std::vector<RadioAssignment>& alloc) {
  const int num_eds = static_cast<int>(snap.ed_positions.size());
  const int num_uavs = static_cast<int>(snap.uav_positions.size());
  const double noise_mw = std::pow(10.0, snap.channel.noise_dbm / 10.0);
  const double h = snap.channel.uav_altitude_m;

  // Per-ED SNR at the serving UAV, recomputed from first principles.
  std::vector<double> snr(num_eds, 0.0);
  for (int v = 0; v < num_eds; ++v) {
    const int u = snap.assignment[v];
    if (u == kUnassigned) continue;
    const double dx = snap.ed_positions[v].x - snap.uav_positions[u].x;
    const double dy = snap.ed_positions[v].y - snap.uav_positions[u].y;
    const double d = std::max(std::sqrt(dx * dx + dy * dy), 1.0);
    const double theta =
        std::atan(h / d) * 180.0 / 3.14159265358979323846;
    const double plos =
        1.0 / (1.0 + snap.channel.env_a *
                         std::exp(-snap.channel.env_b *
                                  (theta - snap.channel.env_a)));
    const double d_eff = snap.channel.slant_range_for_fspl
                             ? std::sqrt(d * d + h * h)
                             : d;
    const double loss_db =
        20.0 * std::log10(4.0 * 3.14159265358979323846 *
                          snap.channel.carrier_hz * d_eff /
                          snap.channel.light_speed_mps) +
        snap.channel.excess_los_db * plos +
        snap.channel.excess_nlos_db * (1.0 - plos);
    const double tp_mw = std::pow(10.0, sets.tp_dbm[alloc[v].tp_idx] / 10.0);
    snr[v] = tp_mw * std::pow(10.0, -loss_db / 10.0) / noise_mw;
  }

  std::vector<double> uav_rate(num_uavs, 0.0);
  std::vector<double> uav_power_w(num_uavs, 0.0);
  for (int v = 0; v < num_eds; ++v) {
    const int u = snap.assignment[v];
    if (u == kUnassigned) continue;
    double interference = 0.0;
    for (int w = 0; w < num_eds; ++w) {
      if (w == v || snap.assignment[w] == kUnassigned) continue;
      if (alloc[w].sf_idx != alloc[v].sf_idx) continue;
      if (snap.channel.same_bw_interference_only &&
          alloc[w].bw_idx != alloc[v].bw_idx) {
        continue;
      }
      interference += snr[w];
    }
    const double sinr = snr[v] / (interference + 1.0);
    uav_rate[u] +=
        sets.bw_khz[alloc[v].bw_idx] * 1000.0 * std::log2(1.0 + sinr);
    uav_power_w[u] +=
        std::pow(10.0, (sets.tp_dbm[alloc[v].tp_idx] - 30.0) / 10.0);
  }

  double ee = 0.0;
  for (int u = 0; u < num_uavs; ++u) {
    ee += uav_rate[u] / (uav_power_w[u] + snap.hover_power_w);
  }
  return ee;
}

OracleResult exhaustive_oracle(const WorldSnapshot& snap,
                               const RadioSets& restricted_sets,
                               std::uint64_t max_evaluations) {
  std::vector<int> free_eds;
  for (std::size_t v = 0; v < snap.assignment.size(); ++v) {
    if (snap.assignment[v] != kUnassigned) {
      free_eds.push_back(static_cast<int>(v));
    }
  }
  const std::uint64_t combos =
      static_cast<std::uint64_t>(restricted_sets.num_sf()) *
      restricted_sets.num_tp() * restricted_sets.num_bw();

  // combos^|free_eds| with overflow guard
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < free_eds.size(); ++i) {
    if (total > max_evaluations / std::max<std::uint64_t>(combos, 1) + 1) {
      total = max_evaluations + 1;
      break;
    }
    total *= combos;
  }
  if (total > max_evaluations) {
    throw std::invalid_argument(
        "oracle search space " + std::to_string(combos) + "^" +
        std::to_string(free_eds.size()) + " exceeds the limit of " +
        std::to_string(max_evaluations) + " evaluations");
  }

  OracleResult result;
  result.allocation.assign(snap.assignment.size(), RadioAssignment{0, 0, 0});
  if (free_eds.empty() || combos == 0) {
    result.best_ee = oracle_eval_allocation(snap, restricted_sets,
                                            result.allocation);
    result.evaluations = 1;
    return result;
  }

  const int nt = restricted_sets.num_tp();
  const int nb = restricted_sets.num_bw();
  std::vector<int> counter(free_eds.size(), 0);  // combo index per free ED
  std::vector<RadioAssignment> alloc(snap.assignment.size(),
                                     RadioAssignment{0, 0, 0});
  double best = -1.0;
  bool carry = false;
  while (!carry) {
    for (std::size_t i = 0; i < free_eds.size(); ++i) {
      const int c = counter[i];
      alloc[free_eds[i]] = {c / (nt * nb), (c / nb) % nt, c % nb};
    }
    const double ee = oracle_eval_allocation(snap, restricted_sets, alloc);
    ++result.evaluations;
    if (ee > best) {
      best = ee;
      result.allocation = alloc;
    }
    // lexicographic increment: first ED is the most significant digit
    carry = true;
    for (std::size_t i = free_eds.size(); i-- > 0;) {
      if (++counter[i] < static_cast<int>(combos)) {
        carry = false;
        break;
      }
      counter[i] = 0;
    }
  }
  result.best_ee = best;
  return result;
}

}  // namespace uavlora
