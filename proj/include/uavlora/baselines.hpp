#pragma once

#include <cstdint>
#include <vector>

#include "uavlora/controller.hpp"
#include "uavlora/environment.hpp"
#include "uavlora/radio.hpp"
#include "uavlora/rng.hpp"

namespace uavlora {

// Uniform choice over every head of every slot.
class RandomController : public Controller {
 public:
  RandomController(const RadioSets& sets, std::uint64_t seed)
      : sets_(sets), rng_(Rng::stream(seed, "random-policy")) {}
  void reset(int) override {}
  AgentAction act(const Observation& obs, int agent) override;

 private:
  RadioSets sets_;
  Rng rng_;
};

// Per-slot minimum-power feasible choice: among (SF, TP, BW) combos whose
// SNR meets the detection threshold, pick the lowest TP, breaking ties by
// higher BW then lower SF. Falls back to (SF12, max TP, BW125) when nothing
// is feasible. Uses only the slot's observed gain.
RadioAssignment greedy_choice(double gain, const RadioSets& sets,
                              double noise_dbm, const SnrThresholdTable& table);

class GreedyController : public Controller {
 public:
  GreedyController(const RadioSets& sets, double noise_dbm,
                   const SnrThresholdTable& table)
      : sets_(sets), noise_dbm_(noise_dbm), table_(table) {}
  void reset(int) override {}
  AgentAction act(const Observation& obs, int agent) override;

 private:
  RadioSets sets_;
  double noise_dbm_;
  SnrThresholdTable table_;
};

// ---- exhaustive per-step oracle ----

// Frozen single-step instance the oracle optimizes over: geometry and
// association fixed, radio triples free.
struct WorldSnapshot {
  std::vector<Vec2> ed_positions;
  std::vector<Vec2> uav_positions;
  std::vector<int> assignment;  // per ED: UAV index or kUnassigned
  ChannelParams channel;
  double hover_power_w = 0.0;

  static WorldSnapshot from_state(const WorldState& state,
                                  const ScenarioConfig& config,
                                  double hover_w);
};

struct OracleResult {
  std::vector<RadioAssignment> allocation;  // per ED; zeros when unassigned
  double best_ee = 0.0;
  std::uint64_t evaluations = 0;
};

// Independent evaluation path for a fixed allocation: recomputes link
// metrics, same-SF interference and per-step EE directly from the snapshot,
// sharing no aggregation code with the environment.
double oracle_eval_allocation(const WorldSnapshot& snap, const RadioSets& sets,
                              const std::vector<RadioAssignment>& alloc);

// Enumerates every joint allocation over the associated EDs (lexicographic
// by ED, then SF-major/TP/BW-minor within an ED) and returns the first
// maximizer of per-step EE. Throws std::invalid_argument when the search
// space exceeds max_evaluations.
OracleResult exhaustive_oracle(const WorldSnapshot& snap,
                               const RadioSets& restricted_sets,
                               std::uint64_t max_evaluations = 1'000'000);

}  // namespace uavlora
