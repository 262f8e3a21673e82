#pragma once

#include <cstdint>
#include <vector>

#include "uavlora/environment.hpp"

namespace uavlora {

// Decentralized execution interface: a controller sees one agent's local
// observation and nothing else. The global state never crosses this
// boundary, so anything running through evaluate_policy is decentralized by
// construction.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void reset(int num_agents) = 0;
  virtual AgentAction act(const Observation& obs, int agent) = 0;
};

struct EvalReport {
  int episodes = 0;
  double mean_step_ee = 0.0;      // mean over all steps of per-step EE
  double mean_episode_ee = 0.0;   // mean over episodes of the summed EE
  double mean_success_rate = 0.0;
  double mean_margin_db = 0.0;    // over steps with served EDs
  double min_margin_db = 0.0;
  double max_margin_db = 0.0;
  double mean_reward = 0.0;
  double mean_cumulative_reward = 0.0;  // per-episode reward sum
};

// Runs full episodes on a fresh environment seeded with `seed` and reports
// aggregate energy efficiency and reliability statistics.
EvalReport evaluate_policy(const ScenarioConfig& config, std::uint64_t seed,
                           Controller& controller, int episodes);

}  // namespace uavlora
