#include "uavlora/io.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace uavlora {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MetricsWriter::MetricsWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open metrics file: " + path);
  out_ << kMetricsVersionLine << "\n" << kMetricsHeader << "\n";
  out_.flush();
}

void MetricsWriter::append(const MetricsRow& r) {
  out_ << r.update_index << ',' << r.env_steps << ','
       << fmt_double(r.mean_reward) << ',' << fmt_double(r.mean_step_ee) << ','
       << fmt_double(r.success_rate) << ',' << fmt_double(r.entropy) << ','
       << fmt_double(r.policy_loss) << ',' << fmt_double(r.value_loss) << "\n";
  out_.flush();
}

std::vector<MetricsRow> read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file: " + path);
  std::string line;
  int line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line() || line != kMetricsVersionLine) {
    throw std::runtime_error(path + ": unsupported metrics version at line 1");
  }
  if (!next_line() || line != kMetricsHeader) {
    throw std::runtime_error(path + ": bad metrics header at line 2");
  }

  std::vector<MetricsRow> rows;
  while (next_line()) {
    if (line.empty()) continue;
    MetricsRow r;
    long long steps = 0;
    const int matched = std::sscanf(
        line.c_str(), "%d,%lld,%lf,%lf,%lf,%lf,%lf,%lf", &r.update_index,
        &steps, &r.mean_reward, &r.mean_step_ee, &r.success_rate, &r.entropy,
        &r.policy_loss, &r.value_loss);
    if (matched != 8) {
      throw std::runtime_error(path + ": corrupted metrics row at line " +
                               std::to_string(line_no));
    }
    r.env_steps = steps;
    rows.push_back(r);
  }
  return rows;
}

TraceWriter::TraceWriter(const std::string& path, const ScenarioConfig& config,
                         std::uint64_t seed)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot open trace file: " + path);
  json meta = {{"schema", "uavlora-trace"},
               {"version", 1},
               {"seed", seed},
               {"num_eds", config.world.num_eds},
               {"num_uavs", config.world.num_uavs},
               {"episode_steps", config.world.episode_steps},
               {"config_hash", config_hash(config)}};
  out_ << meta.dump() << "\n";
}

void TraceWriter::append(int t, const StepInfo& info,
                         const ScenarioConfig& config) {
  json eds = json::array();
  for (std::size_t v = 0; v < info.served.size(); ++v) {
    json e = {{"id", v}, {"uav", info.assignment[v]}};
    if (info.served[v]) {
      const auto& r = info.radio[v];
      const auto& m = info.links[v];
      e["sf"] = config.radio.sf[r.sf_idx];
      e["tp_dbm"] = config.radio.tp_dbm[r.tp_idx];
      e["bw_khz"] = config.radio.bw_khz[r.bw_idx];
      e["snr_db"] = db_from_linear(m.snr_linear);
      e["sinr_db"] = db_from_linear(m.sinr_linear);
      e["rate_bps"] = m.rate_bps;
      e["margin_db"] = m.margin_db;
    }
    eds.push_back(std::move(e));
  }
  json rec = {{"t", t},
              {"eds", std::move(eds)},
              {"step_ee", info.step_ee},
              {"episode_ee", info.episode_ee},
              {"success_rate", info.success_rate},
              {"reward", info.reward},
              {"reward_terms",
               {{"ee", info.reward_ee_term},
                {"success", info.reward_success_term},
                {"margin", info.reward_margin_term},
                {"power", info.reward_power_term}}}};
  out_ << rec.dump() << "\n";
}

namespace {
constexpr char kCheckpointMagic[8] = {'U', 'L', 'O', 'R', 'A', 'C', 'K', '1'};
}

void save_checkpoint(
    const std::string& path,
    const std::vector<std::pair<std::string, const ParamVector*>>& nets,
    const std::string& meta_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint: " + path);

  json header;
  header["meta"] = json::parse(meta_json.empty() ? "{}" : meta_json);
  header["nets"] = json::array();
  for (const auto& [name, pv] : nets) {
    json layout = json::array();
    for (const auto& s : pv->layout) {
      layout.push_back({{"name", s.name},
                        {"offset", s.offset},
                        {"rows", s.rows},
                        {"cols", s.cols}});
    }
    header["nets"].push_back(
        {{"name", name}, {"count", pv->size()}, {"layout", std::move(layout)}});
  }
  const std::string hdr = header.dump();

  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  const std::uint64_t hdr_len = hdr.size();
  out.write(reinterpret_cast<const char*>(&hdr_len), sizeof(hdr_len));
  out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
  for (const auto& [name, pv] : nets) {
    out.write(reinterpret_cast<const char*>(pv->values.data()),
              static_cast<std::streamsize>(pv->size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("short write to checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a uavlora checkpoint: " + path);
  }
  std::uint64_t hdr_len = 0;
  in.read(reinterpret_cast<char*>(&hdr_len), sizeof(hdr_len));
  std::string hdr(hdr_len, '\0');
  in.read(hdr.data(), static_cast<std::streamsize>(hdr_len));
  if (!in) throw std::runtime_error("truncated checkpoint header: " + path);
  const json header = json::parse(hdr);

  Checkpoint ckpt;
  ckpt.meta_json = header.at("meta").dump();
  for (const auto& net : header.at("nets")) {
    ParamVector pv;
    for (const auto& s : net.at("layout")) {
      pv.add(s.at("name").get<std::string>(), s.at("rows").get<std::size_t>(),
             s.at("cols").get<std::size_t>());
    }
    if (pv.size() != net.at("count").get<std::size_t>()) {
      throw std::runtime_error("checkpoint layout/count mismatch: " + path);
    }
    in.read(reinterpret_cast<char*>(pv.values.data()),
            static_cast<std::streamsize>(pv.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated checkpoint data: " + path);
    ckpt.nets.emplace_back(net.at("name").get<std::string>(), std::move(pv));
  }
  return ckpt;
}

std::string make_run_dir(const std::string& base, std::uint64_t seed,
                         const ScenarioConfig& config) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &tm);

  char name[128];
  std::snprintf(name, sizeof(name), "%s_seed%" PRIu64 "_%016" PRIx64, stamp,
                seed, config_hash(config));
  const std::filesystem::path dir = std::filesystem::path(base) / name;
  std::filesystem::create_directories(dir);
  save_config(config, (dir / "config.json").string());
  return dir.string();
}

}  // namespace uavlora
