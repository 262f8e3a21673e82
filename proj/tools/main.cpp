// Command-line front end: scenario simulation, MAPPO training, policy
// evaluation sweeps, the exhaustive per-step oracle, and plot-data export.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavlora/baselines.hpp"
#include "uavlora/config.hpp"
#include "uavlora/controller.hpp"
#include "uavlora/environment.hpp"
#include "uavlora/io.hpp"
#include "uavlora/kernels.hpp"
#include "uavlora/mappo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uavlora;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;
  std::string kernels = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "scenario config JSON");
  cmd->add_option("--out", opts.out_dir, "output directory (default: runs/<auto>)");
  cmd->add_option("--override", opts.overrides,
                  "config override key=value (repeatable)");
  cmd->add_option("--seed", opts.seed, "master seed (replaces config seed list)");
  cmd->add_option("--kernels", opts.kernels, "kernel backend: auto|scalar|avx2");
}

ScenarioConfig build_config(const CommonOpts& opts) {
  ScenarioConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
  for (const auto& ov : opts.overrides) apply_override(cfg, ov);
  if (opts.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(opts.seed)};
  kernels::parse_backend(opts.kernels);
  return cfg;
}

int check_config(const ScenarioConfig& cfg) {
  const auto problems = validate_config(cfg);
  for (const auto& p : problems) std::cerr << "config error: " << p << "\n";
  return problems.empty() ? 0 : 1;
}

std::string ensure_out_dir(const CommonOpts& opts, const ScenarioConfig& cfg,
                           std::uint64_t seed) {
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    save_config(cfg, (fs::path(opts.out_dir) / "config.json").string());
    return opts.out_dir;
  }
  return make_run_dir("runs", seed, cfg);
}

std::unique_ptr<Controller> make_baseline(const std::string& name,
                                          const ScenarioConfig& cfg,
                                          std::uint64_t seed) {
  if (name == "random") {
    return std::make_unique<RandomController>(cfg.radio, seed);
  }
  if (name == "greedy") {
    return std::make_unique<GreedyController>(cfg.radio, cfg.channel.noise_dbm,
                                              cfg.threshold_table());
  }
  return nullptr;
}

// Keeps every ED on the reset-time defaults (lowest indices).
class FixedController : public Controller {
 public:
  void reset(int) override {}
  AgentAction act(const Observation& obs, int) override {
    AgentAction a;
    a.slots.assign(obs.quota, RadioAssignment{0, 0, 0});
    return a;
  }
};

std::string checkpoint_meta(const MappoTrainer& trainer, std::uint64_t seed) {
  json meta = {{"quota", trainer.policy_net().quota()},
               {"hidden", trainer.policy_net().hidden_dim()},
               {"head_sizes",
                {trainer.policy_net().head_size(0),
                 trainer.policy_net().head_size(1),
                 trainer.policy_net().head_size(2)}},
               {"num_uavs", trainer.config().world.num_uavs},
               {"per_agent", trainer.config().train.per_agent_params},
               {"seed", seed},
               {"env_steps", trainer.env_steps()},
               {"config_hash", config_hash(trainer.config())}};
  return meta.dump();
}

void save_trainer_checkpoint(const MappoTrainer& trainer,
                             const std::string& path, std::uint64_t seed) {
  std::vector<std::pair<std::string, const ParamVector*>> nets;
  for (std::size_t i = 0; i < trainer.policy_params().size(); ++i) {
    nets.emplace_back("policy" + std::to_string(i),
                      &trainer.policy_params()[i]);
  }
  nets.emplace_back("critic", &trainer.critic_params());
  save_checkpoint(path, nets, checkpoint_meta(trainer, seed));
}

// Loads actor parameters and pins the quota the checkpoint was trained
// with; throws on an explicit conflicting quota.
std::unique_ptr<NeuralController> load_controller(const std::string& path,
                                                  ScenarioConfig& cfg) {
  const Checkpoint ckpt = load_checkpoint(path);
  const json meta = json::parse(ckpt.meta_json);
  const int quota = meta.at("quota").get<int>();
  const int hidden = meta.at("hidden").get<int>();
  const auto heads = meta.at("head_sizes");
  if (cfg.world.quota != 0 && cfg.world.quota != quota) {
    throw std::runtime_error(
        "checkpoint/config mismatch: checkpoint quota " +
        std::to_string(quota) + " vs configured " +
        std::to_string(cfg.world.quota));
  }
  cfg.world.quota = quota;
  if (cfg.train.hidden_dim != hidden) cfg.train.hidden_dim = hidden;
  if (heads[0].get<int>() != cfg.radio.num_sf() ||
      heads[1].get<int>() != cfg.radio.num_tp() ||
      heads[2].get<int>() != cfg.radio.num_bw()) {
    throw std::runtime_error(
        "checkpoint/config mismatch: radio set sizes differ");
  }
  PolicyNet net(quota, hidden,
                {heads[0].get<int>(), heads[1].get<int>(), heads[2].get<int>()});
  std::vector<ParamVector> params;
  for (const auto& [name, pv] : ckpt.nets) {
    if (name.rfind("policy", 0) == 0) params.push_back(pv);
  }
  if (params.empty()) {
    throw std::runtime_error("checkpoint has no policy parameters: " + path);
  }
  return std::make_unique<NeuralController>(net, std::move(params));
}

void write_eval_row(std::ofstream& out, const std::string& policy, int eds,
                    int uavs, std::uint64_t seed, int episodes,
                    const EvalReport& r) {
  char line[512];
  std::snprintf(line, sizeof(line),
                "%s,%d,%d,%llu,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                policy.c_str(), eds, uavs,
                static_cast<unsigned long long>(seed), episodes,
                r.mean_step_ee, r.mean_episode_ee, r.mean_success_rate,
                r.mean_margin_db, r.min_margin_db, r.max_margin_db);
  out << line;
}

int cmd_simulate(const CommonOpts& common, const std::string& policy,
                 int episodes) {
  ScenarioConfig cfg = build_config(common);
  if (int rc = check_config(cfg)) return rc;
  const std::uint64_t seed = cfg.seeds.front();
  const std::string dir = ensure_out_dir(common, cfg, seed);

  std::unique_ptr<Controller> ctl = make_baseline(policy, cfg, seed);
  if (!ctl) {
    if (policy != "fixed") {
      std::cerr << "unknown policy: " << policy << "\n";
      return 1;
    }
    ctl = std::make_unique<FixedController>();
  }

  Environment env(cfg, seed);
  TraceWriter trace((fs::path(dir) / "trace.jsonl").string(), cfg, seed);
  const int num_agents = cfg.world.num_uavs;
  std::string last_assoc_csv;
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<Observation> obs = ep == 0 ? env.observations() : env.reset();
    ctl->reset(num_agents);
    while (true) {
      std::vector<AgentAction> joint(num_agents);
      for (int a = 0; a < num_agents; ++a) joint[a] = ctl->act(obs[a], a);
      const int t = env.state().t;
      const auto result = env.step(joint);
      trace.append(t, result.info, cfg);
      if (result.done) break;
      obs = result.observations;
    }
    // association snapshot of the final state
    std::vector<Vec2> ed_pos;
    for (const auto& ed : env.state().eds) ed_pos.push_back(ed.position);
    const auto gains =
        Environment::gain_matrix(ed_pos, env.state().uav_positions, cfg.channel);
    last_assoc_csv = association_snapshot_csv(env.state().assoc, ed_pos,
                                              env.state().uav_positions, gains);
  }
  std::ofstream assoc((fs::path(dir) / "association.csv").string());
  assoc << last_assoc_csv;
  std::cout << "trace written to " << dir << "/trace.jsonl\n";
  return 0;
}

int cmd_train(const CommonOpts& common) {
  ScenarioConfig cfg = build_config(common);
  if (int rc = check_config(cfg)) return rc;

  for (const std::uint64_t seed : cfg.seeds) {
    const std::string dir =
        common.out_dir.empty()
            ? make_run_dir("runs", seed, cfg)
            : (fs::path(ensure_out_dir(common, cfg, seed)) /
               ("seed" + std::to_string(seed)))
                  .string();
    fs::create_directories(dir);
    MetricsWriter metrics((fs::path(dir) / "metrics.csv").string());

    MappoTrainer trainer(cfg, seed);
    const int ckpt_every = cfg.train.checkpoint_every_updates;
    trainer.train([&](const MetricsRow& row, MappoTrainer& t) {
      metrics.append(row);
      if (ckpt_every > 0 && row.update_index % ckpt_every == 0) {
        save_trainer_checkpoint(
            t,
            (fs::path(dir) / ("checkpoint_u" + std::to_string(row.update_index) +
                              ".ckpt"))
                .string(),
            seed);
      }
      if (row.update_index % 50 == 0) {
        std::printf("seed %llu update %d steps %lld reward %.4f ee %.1f\n",
                    static_cast<unsigned long long>(seed), row.update_index,
                    static_cast<long long>(row.env_steps), row.mean_reward,
                    row.mean_step_ee);
        std::fflush(stdout);
      }
    });
    save_trainer_checkpoint(trainer,
                            (fs::path(dir) / "checkpoint_final.ckpt").string(),
                            seed);
    std::cout << "seed " << seed << ": " << trainer.env_steps()
              << " env steps, checkpoint_final.ckpt in " << dir << "\n";
  }
  return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& checkpoint,
                 const std::string& policy, int episodes,
                 const std::string& sweep) {
  ScenarioConfig base = build_config(common);
  if (int rc = check_config(base)) return rc;
  const std::string dir = ensure_out_dir(common, base, base.seeds.front());

  std::ofstream out((fs::path(dir) / "evaluation.csv").string());
  out << "policy,num_eds,num_uavs,seed,episodes,mean_step_ee,mean_episode_ee,"
         "success_rate,mean_margin_db,min_margin_db,max_margin_db\n";

  std::vector<std::pair<int, int>> cases;  // (eds, uavs)
  if (sweep == "eds") {
    for (int v : {10, 20, 40, 60, 80, 100}) cases.push_back({v, base.world.num_uavs});
  } else if (sweep == "uavs") {
    for (int u = 2; u <= 8; ++u) cases.push_back({60, u});
  } else {
    cases.push_back({base.world.num_eds, base.world.num_uavs});
  }

  const std::string name = checkpoint.empty() ? policy : "checkpoint";
  for (const auto& [eds, uavs] : cases) {
    for (const std::uint64_t seed : base.seeds) {
      ScenarioConfig cfg = base;
      cfg.world.num_eds = eds;
      cfg.world.num_uavs = uavs;
      std::unique_ptr<Controller> ctl;
      if (!checkpoint.empty()) {
        ctl = load_controller(checkpoint, cfg);
      } else {
        ctl = make_baseline(policy, cfg, seed);
        if (!ctl) {
          std::cerr << "unknown policy: " << policy << "\n";
          return 1;
        }
      }
      const EvalReport rep = evaluate_policy(cfg, seed, *ctl, episodes);
      write_eval_row(out, name, eds, uavs, seed, episodes, rep);
    }
  }
  std::cout << "evaluation written to " << dir << "/evaluation.csv\n";
  return 0;
}

int cmd_oracle(const CommonOpts& common, const std::string& sf_list,
               const std::string& tp_list, const std::string& bw_list,
               std::uint64_t budget) {
  ScenarioConfig cfg = build_config(common);
  if (int rc = check_config(cfg)) return rc;
  const std::uint64_t seed = cfg.seeds.front();
  const std::string dir = ensure_out_dir(common, cfg, seed);

  RadioSets restricted;
  auto parse_list = [](const std::string& csv, auto& out) {
    out.clear();
    std::size_t pos = 0;
    while (pos < csv.size()) {
      const auto comma = csv.find(',', pos);
      out.push_back(std::stod(csv.substr(pos, comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  };
  std::vector<double> sf_vals;
  parse_list(sf_list, sf_vals);
  restricted.sf.assign(sf_vals.begin(), sf_vals.end());
  parse_list(tp_list, restricted.tp_dbm);
  parse_list(bw_list, restricted.bw_khz);

  Environment env(cfg, seed);
  const WorldSnapshot snap =
      WorldSnapshot::from_state(env.state(), cfg, env.hover_power());
  const OracleResult result = exhaustive_oracle(snap, restricted, budget);

  json report = {{"best_ee", result.best_ee},
                 {"evaluations", result.evaluations},
                 {"restricted_sets",
                  {{"sf", restricted.sf},
                   {"tp_dbm", restricted.tp_dbm},
                   {"bw_khz", restricted.bw_khz}}},
                 {"allocation", json::array()}};
  for (std::size_t v = 0; v < result.allocation.size(); ++v) {
    if (snap.assignment[v] == kUnassigned) continue;
    const auto& a = result.allocation[v];
    report["allocation"].push_back({{"ed", v},
                                    {"uav", snap.assignment[v]},
                                    {"sf", restricted.sf[a.sf_idx]},
                                    {"tp_dbm", restricted.tp_dbm[a.tp_idx]},
                                    {"bw_khz", restricted.bw_khz[a.bw_idx]}});
  }
  std::ofstream f((fs::path(dir) / "oracle.json").string());
  f << report.dump(2) << "\n";
  std::cout << "oracle best per-step EE: " << result.best_ee << " bits/J over "
            << result.evaluations << " allocations\n";
  return 0;
}

int cmd_export_plots(const std::string& metrics_path,
                     const std::string& eval_path,
                     const std::string& out_dir) {
  fs::create_directories(out_dir);
  if (!metrics_path.empty()) {
    const auto rows = read_metrics(metrics_path);
    std::ofstream out((fs::path(out_dir) / "reward_curve.csv").string());
    out << "update_index,env_steps,mean_reward,cumulative_reward\n";
    double cum = 0.0;
    for (const auto& r : rows) {
      cum += r.mean_reward;
      char line[160];
      std::snprintf(line, sizeof(line), "%d,%lld,%.17g,%.17g\n",
                    r.update_index, static_cast<long long>(r.env_steps),
                    r.mean_reward, cum);
      out << line;
    }
    std::cout << "reward_curve.csv: " << rows.size() << " rows\n";
  }
  if (!eval_path.empty()) {
    std::ifstream in(eval_path);
    if (!in) {
      std::cerr << "cannot open " << eval_path << "\n";
      return 1;
    }
    std::string header;
    std::getline(in, header);
    // aggregate mean_step_ee over seeds per (policy, eds, uavs)
    struct Key {
      std::string policy;
      int eds, uavs;
      bool operator<(const Key& o) const {
        return std::tie(policy, eds, uavs) < std::tie(o.policy, o.eds, o.uavs);
      }
    };
    std::map<Key, std::pair<double, int>> agg;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      char policy[64];
      int eds, uavs, episodes;
      unsigned long long seed;
      double step_ee;
      if (std::sscanf(line.c_str(), "%63[^,],%d,%d,%llu,%d,%lf", policy, &eds,
                      &uavs, &seed, &episodes, &step_ee) != 6) {
        std::cerr << "bad evaluation row: " << line << "\n";
        return 1;
      }
      auto& [sum, count] = agg[{policy, eds, uavs}];
      sum += step_ee;
      ++count;
    }
    std::ofstream out((fs::path(out_dir) / "ee_bars.csv").string());
    out << "policy,num_eds,num_uavs,mean_step_ee\n";
    for (const auto& [key, val] : agg) {
      char row[160];
      std::snprintf(row, sizeof(row), "%s,%d,%d,%.17g\n", key.policy.c_str(),
                    key.eds, key.uavs, val.first / val.second);
      out << row;
    }
    std::cout << "ee_bars.csv: " << agg.size() << " rows\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV-mounted LoRa gateway simulator and multi-agent learner"};
  app.require_subcommand(1);

  CommonOpts sim_opts, train_opts, eval_opts, oracle_opts, val_opts;

  auto* sim = app.add_subcommand("simulate", "roll out a fixed policy and write a trace");
  add_common(sim, sim_opts);
  std::string sim_policy = "random";
  int sim_episodes = 1;
  sim->add_option("--policy", sim_policy, "fixed|random|greedy");
  sim->add_option("--episodes", sim_episodes, "episodes to roll out");

  auto* train = app.add_subcommand("train", "train MAPPO policies");
  add_common(train, train_opts);

  auto* eval = app.add_subcommand("evaluate", "evaluate a checkpoint or baseline");
  add_common(eval, eval_opts);
  std::string eval_checkpoint, eval_policy = "greedy", eval_sweep = "none";
  int eval_episodes = 5;
  eval->add_option("--checkpoint", eval_checkpoint, "trained checkpoint file");
  eval->add_option("--policy", eval_policy, "baseline when no checkpoint: random|greedy|fixed");
  eval->add_option("--episodes", eval_episodes, "episodes per case");
  eval->add_option("--sweep", eval_sweep, "none|eds|uavs");

  auto* oracle = app.add_subcommand("oracle", "exhaustive per-step search on a tiny instance");
  add_common(oracle, oracle_opts);
  std::string sf_list = "7,12", tp_list = "2,14", bw_list = "125";
  std::uint64_t budget = 1'000'000;
  oracle->add_option("--sf", sf_list, "restricted SF set");
  oracle->add_option("--tp", tp_list, "restricted TP set, dBm");
  oracle->add_option("--bw", bw_list, "restricted BW set, kHz");
  oracle->add_option("--budget", budget, "max allocations to enumerate");

  auto* plots = app.add_subcommand("export-plots", "flatten outputs into plot-ready CSVs");
  std::string plots_metrics, plots_eval, plots_out = "plots";
  plots->add_option("--metrics", plots_metrics, "metrics.csv from a training run");
  plots->add_option("--eval", plots_eval, "evaluation.csv from evaluate");
  plots->add_option("--out", plots_out, "output directory");

  auto* val = app.add_subcommand("validate-config", "check a config and exit");
  add_common(val, val_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts, sim_policy, sim_episodes);
    if (train->parsed()) return cmd_train(train_opts);
    if (eval->parsed()) {
      return cmd_evaluate(eval_opts, eval_checkpoint, eval_policy,
                          eval_episodes, eval_sweep);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_opts, sf_list, tp_list, bw_list, budget);
    }
    if (plots->parsed()) {
      return cmd_export_plots(plots_metrics, plots_eval, plots_out);
    }
    if (val->parsed()) {
      const ScenarioConfig cfg = build_config(val_opts);
      const int rc = check_config(cfg);
      if (rc == 0) std::cout << "config ok\n";
      return rc;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
