#include "uavlora/mappo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavlora {

GaeResult compute_gae(const std::vector<double>& rewards,
                      const std::vector<double>& values,
                      const std::vector<std::uint8_t>& dones,
                      double bootstrap_value, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw std::invalid_argument("compute_gae: misaligned inputs");
  }
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.value_targets.assign(n, 0.0);
  double gae = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double next_value =
        (i + 1 < n) ? values[i + 1] : bootstrap_value;
    const double delta =
        rewards[i] + gamma * next_value * not_done - values[i];
    gae = delta + gamma * lambda * not_done * gae;
    out.advantages[i] = gae;
    out.value_targets[i] = gae + values[i];
  }
  return out;
}

NeuralController::NeuralController(const PolicyNet& net,
                                   std::vector<ParamVector> params)
    : net_(net), params_(std::move(params)) {}

void NeuralController::reset(int num_agents) {
  hidden_.assign(num_agents,
                 std::vector<double>(net_.hidden_dim(), 0.0));
}

AgentAction NeuralController::act(const Observation& obs, int agent) {
  if (agent >= static_cast<int>(hidden_.size())) {
    throw std::out_of_range("controller.reset() with enough agents first");
  }
  const ParamVector& pv =
      params_.size() == 1 ? params_[0] : params_.at(agent);
  PolicyNet::Fwd fwd;
  net_.forward(pv, obs.normalized, hidden_[agent], fwd);
  hidden_[agent] = fwd.trunk.h_out;

  AgentAction action;
  action.slots.assign(net_.quota(), RadioAssignment{0, 0, 0});
  for (int s = 0; s < obs.active_slots() && s < net_.quota(); ++s) {
    action.slots[s].sf_idx = argmax(net_.head_logp(fwd, s, 0));
    action.slots[s].tp_idx = argmax(net_.head_logp(fwd, s, 1));
    action.slots[s].bw_idx = argmax(net_.head_logp(fwd, s, 2));
  }
  return action;
}

MappoTrainer::MappoTrainer(const ScenarioConfig& config, std::uint64_t seed)
    : config_(config),
      policy_net_(config.world.effective_quota(), config.train.hidden_dim,
                  {config.radio.num_sf(), config.radio.num_tp(),
                   config.radio.num_bw()}),
      critic_net_(config.world.num_eds *
                      (4 + config.world.num_uavs + 3),
                  config.train.hidden_dim),
      action_rng_(Rng::stream(seed, "actions")),
      shuffle_rng_(Rng::stream(seed, "shuffle")) {
  Rng init_rng = Rng::stream(seed, "init");
  const int num_policies =
      config_.train.per_agent_params ? config_.world.num_uavs : 1;
  for (int i = 0; i < num_policies; ++i) {
    policy_.push_back(policy_net_.allocate(init_rng));
  }
  policy_adam_.resize(num_policies);
  critic_ = critic_net_.allocate(init_rng);

  const int num_envs = config_.train.num_envs;
  for (int e = 0; e < num_envs; ++e) {
    envs_.push_back(std::make_unique<Environment>(
        config_, Rng::splitmix64(seed ^ (0x9e37u + e))));
    env_obs_.push_back(envs_.back()->observations());
  }
  actor_hidden_.assign(
      num_envs, std::vector<std::vector<double>>(
                    config_.world.num_uavs,
                    std::vector<double>(config_.train.hidden_dim, 0.0)));
  critic_hidden_.assign(num_envs,
                        std::vector<double>(config_.train.hidden_dim, 0.0));
}

double MappoTrainer::policy_logp(const ParamVector&,
                                 const std::vector<RadioAssignment>& action,
                                 const PolicyNet::Fwd& fwd) const {
  double logp = 0.0;
  for (std::size_t s = 0; s < action.size(); ++s) {
    const int slot = static_cast<int>(s);
    logp += fwd.logp[policy_net_.head_offset(slot, 0) + action[s].sf_idx];
    logp += fwd.logp[policy_net_.head_offset(slot, 1) + action[s].tp_idx];
    logp += fwd.logp[policy_net_.head_offset(slot, 2) + action[s].bw_idx];
  }
  return logp;
}

RolloutBuffer MappoTrainer::collect_rollout(int length) {
  const int num_envs = config_.train.num_envs;
  const int num_agents = config_.world.num_uavs;

  RolloutBuffer buf;
  buf.steps = length;
  buf.num_envs = num_envs;
  buf.num_agents = num_agents;
  const std::size_t n_steps = static_cast<std::size_t>(length) * num_envs;
  buf.rewards.resize(n_steps);
  buf.values.resize(n_steps);
  buf.step_ee.resize(n_steps);
  buf.success.resize(n_steps);
  buf.dones.resize(n_steps);
  buf.global_state.resize(n_steps);
  buf.critic_h.resize(n_steps);
  buf.obs.resize(n_steps * num_agents);
  buf.actor_h.resize(n_steps * num_agents);
  buf.actions.resize(n_steps * num_agents);
  buf.logp_old.resize(n_steps * num_agents);
  buf.bootstrap.resize(num_envs);

  PolicyNet::Fwd fwd;
  CriticNet::Fwd cf;
  for (int t = 0; t < length; ++t) {
    for (int e = 0; e < num_envs; ++e) {
      const std::size_t si = buf.at(t, e);
      Environment& env = *envs_[e];

      buf.global_state[si] = global_state_vector(env.state(), config_, true);
      buf.critic_h[si] = critic_hidden_[e];
      buf.values[si] = value_norm_.denormalize(
          critic_net_.forward(critic_, buf.global_state[si],
                              critic_hidden_[e], cf));
      critic_hidden_[e] = cf.trunk.h_out;

      std::vector<AgentAction> joint(num_agents);
      for (int a = 0; a < num_agents; ++a) {
        const std::size_t ai = buf.agent_at(t, e, a);
        const Observation& obs = env_obs_[e][a];
        buf.obs[ai] = obs.normalized;
        buf.actor_h[ai] = actor_hidden_[e][a];

        policy_net_.forward(policy_for(a), obs.normalized,
                            actor_hidden_[e][a], fwd);
        actor_hidden_[e][a] = fwd.trunk.h_out;

        joint[a].slots.assign(policy_net_.quota(), RadioAssignment{0, 0, 0});
        std::vector<RadioAssignment> active(obs.active_slots());
        for (int s = 0; s < obs.active_slots(); ++s) {
          active[s].sf_idx = sample_from_logp(policy_net_.head_logp(fwd, s, 0),
                                              action_rng_.uniform());
          active[s].tp_idx = sample_from_logp(policy_net_.head_logp(fwd, s, 1),
                                              action_rng_.uniform());
          active[s].bw_idx = sample_from_logp(policy_net_.head_logp(fwd, s, 2),
                                              action_rng_.uniform());
          joint[a].slots[s] = active[s];
        }
        buf.actions[ai] = std::move(active);
        buf.logp_old[ai] = policy_logp(policy_for(a), buf.actions[ai], fwd);
      }

      auto result = env.step(joint);
      buf.rewards[si] = result.reward;
      buf.step_ee[si] = result.info.step_ee;
      buf.success[si] = result.info.success_rate;
      buf.dones[si] = result.done ? 1 : 0;
      if (result.done) {
        env_obs_[e] = env.reset();
        for (auto& h : actor_hidden_[e]) {
          std::fill(h.begin(), h.end(), 0.0);
        }
        std::fill(critic_hidden_[e].begin(), critic_hidden_[e].end(), 0.0);
      } else {
        env_obs_[e] = result.observations;
      }
      ++env_steps_;
    }
  }

  // Bootstrap values for the states following the window.
  for (int e = 0; e < num_envs; ++e) {
    const auto gs = global_state_vector(envs_[e]->state(), config_, true);
    buf.bootstrap[e] = value_norm_.denormalize(
        critic_net_.forward(critic_, gs, critic_hidden_[e], cf));
  }

  // GAE per environment column.
  buf.advantages.resize(n_steps);
  buf.value_targets.resize(n_steps);
  for (int e = 0; e < num_envs; ++e) {
    std::vector<double> r(length), v(length);
    std::vector<std::uint8_t> d(length);
    for (int t = 0; t < length; ++t) {
      r[t] = buf.rewards[buf.at(t, e)];
      v[t] = buf.values[buf.at(t, e)];
      d[t] = buf.dones[buf.at(t, e)];
    }
    const GaeResult g = compute_gae(r, v, d, buf.bootstrap[e],
                                    config_.train.discount,
                                    config_.train.gae_lambda);
    for (int t = 0; t < length; ++t) {
      buf.advantages[buf.at(t, e)] = g.advantages[t];
      buf.value_targets[buf.at(t, e)] = g.value_targets[t];
    }
  }
  return buf;
}

void RunningNorm::update(const std::vector<double>& xs) {
  for (const double x : xs) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
}

double RunningNorm::stddev() const {
  if (count_ < 2) return 1.0;
  return std::sqrt(m2_ / static_cast<double>(count_) + 1e-8);
}

std::pair<double, double> clipped_surrogate(double logp_new, double logp_old,
                                            double advantage, double clip) {
  const double ratio = std::exp(logp_new - logp_old);
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
  const double s1 = ratio * advantage;
  const double s2 = clipped * advantage;
  const double loss = -std::min(s1, s2);
  const double dlogp = (s1 <= s2) ? -advantage * ratio : 0.0;
  return {loss, dlogp};
}

UpdateStats MappoTrainer::accumulate_minibatch(
    const RolloutBuffer& buf, const std::vector<double>& advantages,
    const std::vector<int>& indices) {
  const auto& tr = config_.train;
  const double inv_count = 1.0 / static_cast<double>(indices.size());
  std::vector<double> dlogp(static_cast<std::size_t>(policy_net_.quota()) *
                            policy_net_.slot_stride());

  UpdateStats out;
  out.minibatches = 1;
  PolicyNet::Fwd fwd;
  CriticNet::Fwd cf;
  for (const int idx : indices) {
    const int agent = idx % buf.num_agents;
    const std::size_t si = static_cast<std::size_t>(idx / buf.num_agents);
    ParamVector& pv = policy_for(agent);

    policy_net_.forward(pv, buf.obs[idx], buf.actor_h[idx], fwd);
    const double logp_new = policy_logp(pv, buf.actions[idx], fwd);
    const auto [surr_loss, dsurr_dlogp] = clipped_surrogate(
        logp_new, buf.logp_old[idx], advantages[si], tr.clip);
    out.policy_loss += surr_loss;

    double entropy = 0.0;
    const int active = static_cast<int>(buf.actions[idx].size());
    for (int s = 0; s < active; ++s) {
      for (int h = 0; h < 3; ++h) {
        entropy += entropy_from_logp(policy_net_.head_logp(fwd, s, h));
      }
    }
    out.entropy += entropy;

    // d(total)/dlogp, scaled to the minibatch mean
    std::fill(dlogp.begin(), dlogp.end(), 0.0);
    const double dsurr = dsurr_dlogp * inv_count;
    for (int s = 0; s < active; ++s) {
      const auto& act = buf.actions[idx][s];
      dlogp[policy_net_.head_offset(s, 0) + act.sf_idx] += dsurr;
      dlogp[policy_net_.head_offset(s, 1) + act.tp_idx] += dsurr;
      dlogp[policy_net_.head_offset(s, 2) + act.bw_idx] += dsurr;
    }
    // entropy bonus: d(-coef*H)/dlogp_j = coef * p_j * (logp_j + 1)
    for (int s = 0; s < active; ++s) {
      for (int h = 0; h < 3; ++h) {
        const int off = policy_net_.head_offset(s, h);
        for (int i = 0; i < policy_net_.head_size(h); ++i) {
          const double p = std::exp(fwd.logp[off + i]);
          dlogp[off + i] +=
              tr.entropy_coeff * p * (fwd.logp[off + i] + 1.0) * inv_count;
        }
      }
    }
    policy_net_.backward(pv, fwd, dlogp);

    const double value = critic_net_.forward(critic_, buf.global_state[si],
                                             buf.critic_h[si], cf);
    const double err = value - value_norm_.normalize(buf.value_targets[si]);
    out.value_loss += err * err;
    critic_net_.backward(critic_, cf, tr.value_coeff * 2.0 * err * inv_count);
  }

  out.policy_loss *= inv_count;
  out.value_loss *= inv_count;
  out.entropy *= inv_count;
  return out;
}

UpdateStats MappoTrainer::update(RolloutBuffer& buf) {
  const auto& tr = config_.train;
  UpdateStats stats;

  if (tr.value_target_norm) value_norm_.update(buf.value_targets);

  // Per-batch advantage normalization (on by default).
  std::vector<double> adv = buf.advantages;
  if (tr.advantage_norm && adv.size() > 1) {
    double mean = std::accumulate(adv.begin(), adv.end(), 0.0) /
                  static_cast<double>(adv.size());
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    var /= static_cast<double>(adv.size());
    const double denom = std::sqrt(var) + 1e-8;
    for (double& a : adv) a = (a - mean) / denom;
  }

  std::vector<int> indices(buf.num_agent_samples());
  std::iota(indices.begin(), indices.end(), 0);

  double sum_policy_loss = 0.0, sum_value_loss = 0.0, sum_entropy = 0.0;
  std::vector<int> minibatch;
  for (int epoch = 0; epoch < tr.epochs; ++epoch) {
    shuffle_rng_.shuffle(indices);
    for (std::size_t start = 0; start < indices.size();
         start += tr.minibatch) {
      const std::size_t end = std::min(start + tr.minibatch, indices.size());
      minibatch.assign(indices.begin() + start, indices.begin() + end);

      for (auto& pv : policy_) pv.zero_grads();
      critic_.zero_grads();
      const UpdateStats mb = accumulate_minibatch(buf, adv, minibatch);
      if (!std::isfinite(mb.policy_loss) || !std::isfinite(mb.value_loss) ||
          !std::isfinite(mb.entropy)) {
        stats.nonfinite = true;
        return stats;
      }
      sum_policy_loss += mb.policy_loss;
      sum_value_loss += mb.value_loss;
      sum_entropy += mb.entropy;
      ++stats.minibatches;

      for (std::size_t p = 0; p < policy_.size(); ++p) {
        policy_[p].clip_grad_norm(tr.grad_clip_norm);
        adam_step(policy_[p], policy_adam_[p], tr.lr);
      }
      critic_.clip_grad_norm(tr.grad_clip_norm);
      adam_step(critic_, critic_adam_, tr.lr);
    }
  }

  if (stats.minibatches > 0) {
    stats.policy_loss = sum_policy_loss / stats.minibatches;
    stats.value_loss = sum_value_loss / stats.minibatches;
    stats.entropy = sum_entropy / stats.minibatches;
  }
  return stats;
}

std::vector<MetricsRow> MappoTrainer::train(const UpdateHook& on_update) {
  const auto& tr = config_.train;
  std::vector<MetricsRow> rows;
  const std::int64_t steps_per_rollout =
      static_cast<std::int64_t>(tr.rollout_steps) * tr.num_envs;
  while (env_steps_ + steps_per_rollout <= tr.total_env_steps) {
    RolloutBuffer buf = collect_rollout(tr.rollout_steps);
    const UpdateStats stats = update(buf);

    MetricsRow row;
    row.update_index = ++updates_;
    row.env_steps = env_steps_;
    const double n = static_cast<double>(buf.rewards.size());
    row.mean_reward =
        std::accumulate(buf.rewards.begin(), buf.rewards.end(), 0.0) / n;
    row.mean_step_ee =
        std::accumulate(buf.step_ee.begin(), buf.step_ee.end(), 0.0) / n;
    row.success_rate =
        std::accumulate(buf.success.begin(), buf.success.end(), 0.0) / n;
    row.entropy = stats.entropy;
    row.policy_loss = stats.policy_loss;
    row.value_loss = stats.value_loss;
    rows.push_back(row);
    if (on_update) on_update(row, *this);
  }
  return rows;
}

std::unique_ptr<NeuralController> MappoTrainer::make_controller() const {
  return std::make_unique<NeuralController>(policy_net_, policy_);
}

}  // namespace uavlora
