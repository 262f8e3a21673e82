#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "uavlora/config.hpp"
#include "uavlora/controller.hpp"
#include "uavlora/environment.hpp"
#include "uavlora/policy.hpp"

namespace uavlora {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> value_targets;
};

// Standard recursive GAE over one trajectory segment. dones[t] marks that
// the episode ended after step t; bootstrap_value is the critic estimate of
// the state following the last step.
GaeResult compute_gae(const std::vector<double>& rewards,
                      const std::vector<double>& values,
                      const std::vector<std::uint8_t>& dones,
                      double bootstrap_value, double gamma, double lambda);

// Experience from one rollout window. Step-level entries are indexed by
// (step, env); agent-level entries additionally by agent. Values and
// log-probs are recorded at collection time and never rewritten.
struct RolloutBuffer {
  int steps = 0;
  int num_envs = 0;
  int num_agents = 0;

  // per (step, env)
  std::vector<double> rewards, values, step_ee, success;
  std::vector<std::uint8_t> dones;
  std::vector<std::vector<double>> global_state;  // normalized critic input
  std::vector<std::vector<double>> critic_h;
  std::vector<double> advantages, value_targets;
  std::vector<double> bootstrap;  // per env

  // per (step, env, agent)
  std::vector<std::vector<double>> obs;  // normalized actor input
  std::vector<std::vector<double>> actor_h;
  std::vector<std::vector<RadioAssignment>> actions;  // active slots only
  std::vector<double> logp_old;

  std::size_t at(int step, int env) const {
    return static_cast<std::size_t>(step) * num_envs + env;
  }
  std::size_t agent_at(int step, int env, int agent) const {
    return (static_cast<std::size_t>(step) * num_envs + env) * num_agents +
           agent;
  }
  int num_agent_samples() const { return steps * num_envs * num_agents; }
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  int minibatches = 0;
  bool nonfinite = false;  // update aborted before touching parameters
};

// One sample of the clipped objective: loss term -min(r*A, clip(r)*A) with
// r = exp(logp_new - logp_old), and its derivative w.r.t. logp_new.
std::pair<double, double> clipped_surrogate(double logp_new, double logp_old,
                                            double advantage, double clip);

// Running first/second moments of the critic regression targets. Returns
// here have magnitude ~r/(1-gamma), far outside the clipped-gradient range;
// the critic learns on the normalized scale and its outputs are mapped back
// for advantage estimation.
class RunningNorm {
 public:
  void update(const std::vector<double>& xs);
  double normalize(double x) const { return (x - mean_) / stddev(); }
  double denormalize(double x) const { return mean_ + x * stddev(); }
  double stddev() const;
  long count() const { return count_; }

 private:
  double mean_ = 0.0;
  double m2_ = 0.0;
  long count_ = 0;
};

struct MetricsRow {
  int update_index = 0;
  std::int64_t env_steps = 0;
  double mean_reward = 0.0;
  double mean_step_ee = 0.0;
  double success_rate = 0.0;
  double entropy = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

// Greedy decentralized executor for trained parameters: local observation
// in, per-slot argmax action out. Owns parameter copies, carries hidden
// state per agent within an episode.
class NeuralController : public Controller {
 public:
  NeuralController(const PolicyNet& net, std::vector<ParamVector> params);
  void reset(int num_agents) override;
  AgentAction act(const Observation& obs, int agent) override;

 private:
  PolicyNet net_;
  std::vector<ParamVector> params_;  // one shared entry, or one per agent
  std::vector<std::vector<double>> hidden_;
};

// Centralized-training / decentralized-execution PPO with a shared actor
// (optionally per-agent actors) and a global-state critic.
class MappoTrainer {
 public:
  MappoTrainer(const ScenarioConfig& config, std::uint64_t seed);

  RolloutBuffer collect_rollout(int length);
  UpdateStats update(RolloutBuffer& buffer);

  // Accumulates gradients (scaled to the minibatch mean) for the samples
  // named by `indices`, without touching the parameters. Callers zero the
  // grads first. Exposed so the loss gradient can be finite-difference
  // checked against the exact update path.
  UpdateStats accumulate_minibatch(const RolloutBuffer& buffer,
                                   const std::vector<double>& advantages,
                                   const std::vector<int>& indices);

  using UpdateHook = std::function<void(const MetricsRow&, MappoTrainer&)>;
  // Alternates rollouts and updates until total_env_steps; returns one
  // metrics row per update.
  std::vector<MetricsRow> train(const UpdateHook& on_update = {});

  std::unique_ptr<NeuralController> make_controller() const;

  const PolicyNet& policy_net() const { return policy_net_; }
  const CriticNet& critic_net() const { return critic_net_; }
  const std::vector<ParamVector>& policy_params() const { return policy_; }
  const ParamVector& critic_params() const { return critic_; }
  std::vector<ParamVector>& mutable_policy_params() { return policy_; }
  ParamVector& mutable_critic_params() { return critic_; }
  std::int64_t env_steps() const { return env_steps_; }
  const ScenarioConfig& config() const { return config_; }

 private:
  double policy_logp(const ParamVector& pv,
                     const std::vector<RadioAssignment>& action,
                     const PolicyNet::Fwd& fwd) const;
  ParamVector& policy_for(int agent) {
    return policy_[config_.train.per_agent_params ? agent : 0];
  }

  ScenarioConfig config_;
  PolicyNet policy_net_;
  CriticNet critic_net_;
  std::vector<ParamVector> policy_;
  ParamVector critic_;
  std::vector<AdamState> policy_adam_;
  AdamState critic_adam_;

  std::vector<std::unique_ptr<Environment>> envs_;
  std::vector<std::vector<Observation>> env_obs_;
  std::vector<std::vector<std::vector<double>>> actor_hidden_;  // env, agent
  std::vector<std::vector<double>> critic_hidden_;              // env

  Rng action_rng_;
  Rng shuffle_rng_;
  RunningNorm value_norm_;
  std::int64_t env_steps_ = 0;
  int updates_ = 0;
};

}  // namespace uavlora
