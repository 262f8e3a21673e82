#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "uavlora/config.hpp"
#include "uavlora/environment.hpp"
#include "uavlora/mappo.hpp"
#include "uavlora/neural.hpp"

namespace uavlora {

// ---- metrics CSV (versioned header, full-precision doubles) ----

inline constexpr const char* kMetricsVersionLine = "# uavlora-metrics v1";
inline constexpr const char* kMetricsHeader =
    "update_index,env_steps,mean_reward,mean_step_ee,success_rate,entropy,"
    "policy_loss,value_loss";

class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void append(const MetricsRow& row);

 private:
  std::ofstream out_;
};

// Validates the version line and header; throws std::runtime_error naming
// the offending line on any malformed row.
std::vector<MetricsRow> read_metrics(const std::string& path);

// ---- episode trace (line-delimited JSON, schema v1) ----

class TraceWriter {
 public:
  TraceWriter(const std::string& path, const ScenarioConfig& config,
              std::uint64_t seed);
  // One record per step, taken at evaluation time (before the world moves).
  void append(int t, const StepInfo& info, const ScenarioConfig& config);

 private:
  std::ofstream out_;
};

// ---- parameter checkpoints (binary, layout metadata, exact round-trip) ----

struct Checkpoint {
  std::vector<std::pair<std::string, ParamVector>> nets;
  std::string meta_json;
};

void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string,
                                                 const ParamVector*>>& nets,
                     const std::string& meta_json);
Checkpoint load_checkpoint(const std::string& path);

// ---- run directories ----

// Creates <base>/<utc-timestamp>_seed<seed>_<config-hash>/ and writes
// config.json inside; returns the directory path.
std::string make_run_dir(const std::string& base, std::uint64_t seed,
                         const ScenarioConfig& config);

}  // namespace uavlora
