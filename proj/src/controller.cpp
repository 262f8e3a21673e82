#include "uavlora/controller.hpp"

#include <limits>

namespace uavlora {

EvalReport evaluate_policy(const ScenarioConfig& config, std::uint64_t seed,
                           Controller& controller, int episodes) {
  Environment env(config, seed);
  const int num_agents = config.world.num_uavs;

  EvalReport rep;
  rep.episodes = episodes;
  rep.min_margin_db = std::numeric_limits<double>::infinity();
  rep.max_margin_db = -std::numeric_limits<double>::infinity();

  long total_steps = 0;
  long margin_steps = 0;
  double sum_step_ee = 0.0, sum_success = 0.0, sum_margin = 0.0;
  double sum_episode_ee = 0.0, sum_reward = 0.0, sum_cum_reward = 0.0;

  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<Observation> obs = ep == 0 ? env.observations() : env.reset();
    controller.reset(num_agents);
    double cum_reward = 0.0;
    while (true) {
      std::vector<AgentAction> joint(num_agents);
      for (int a = 0; a < num_agents; ++a) {
        joint[a] = controller.act(obs[a], a);
      }
      const auto result = env.step(joint);
      ++total_steps;
      sum_step_ee += result.info.step_ee;
      sum_success += result.info.success_rate;
      sum_reward += result.reward;
      cum_reward += result.reward;
      if (result.info.num_associated > 0) {
        ++margin_steps;
        sum_margin += result.info.mean_margin_db;
        for (std::size_t v = 0; v < result.info.links.size(); ++v) {
          if (!result.info.served[v]) continue;
          rep.min_margin_db =
              std::min(rep.min_margin_db, result.info.links[v].margin_db);
          rep.max_margin_db =
              std::max(rep.max_margin_db, result.info.links[v].margin_db);
        }
      }
      if (result.done) {
        sum_episode_ee += result.info.episode_ee;
        break;
      }
      obs = result.observations;
    }
    sum_cum_reward += cum_reward;
  }

  if (total_steps > 0) {
    rep.mean_step_ee = sum_step_ee / total_steps;
    rep.mean_success_rate = sum_success / total_steps;
    rep.mean_reward = sum_reward / total_steps;
  }
  if (margin_steps > 0) rep.mean_margin_db = sum_margin / margin_steps;
  if (episodes > 0) {
    rep.mean_episode_ee = sum_episode_ee / episodes;
    rep.mean_cumulative_reward = sum_cum_reward / episodes;
  }
  return rep;
}

}  // namespace uavlora
