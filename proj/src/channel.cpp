#include "uavlora/channel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavlora {

namespace {
constexpr double kMinHorizontalM = 1.0;
constexpr std::array<int, SnrThresholdTable::kNumSf> kSfValues = {7,  8,  9,
                                                                  10, 11, 12};
constexpr std::array<int, SnrThresholdTable::kNumBw> kBwValuesKhz = {125, 250,
                                                                     500};
}  // namespace

SnrThresholdTable::SnrThresholdTable() {
  db_ = {{
      {-7.5, -9.0, -11.0},    // SF7
      {-10.0, -12.0, -13.8},  // SF8
      {-12.5, -14.5, -16.5},  // SF9
      {-15.0, -17.0, -19.0},  // SF10
      {-18.0, -20.0, -21.8},  // SF11
      {-21.0, -23.0, -25.0},  // SF12
  }};
  validate();
}

SnrThresholdTable SnrThresholdTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open threshold table: " + path);
  SnrThresholdTable table;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (row >= kNumSf) throw std::runtime_error("threshold table: too many rows");
    std::istringstream ss(line);
    for (int col = 0; col < kNumBw; ++col) {
      if (!(ss >> table.db_[row][col])) {
        throw std::runtime_error("threshold table: bad row " +
                                 std::to_string(row + 1));
      }
    }
    ++row;
  }
  if (row != kNumSf) throw std::runtime_error("threshold table: expected 6 rows");
  table.validate();
  return table;
}

void SnrThresholdTable::validate() const {
  for (int s = 0; s < kNumSf; ++s) {
    for (int b = 0; b < kNumBw; ++b) {
      if (s > 0 && db_[s][b] >= db_[s - 1][b]) {
        throw std::runtime_error("threshold table: not decreasing in SF");
      }
      if (b > 0 && db_[s][b] >= db_[s][b - 1]) {
        throw std::runtime_error("threshold table: not decreasing in BW");
      }
    }
  }
}

double SnrThresholdTable::threshold_db(int sf, int bw_khz) const {
  int si = -1;
  int bi = -1;
  for (int i = 0; i < kNumSf; ++i) {
    if (kSfValues[i] == sf) si = i;
  }
  for (int i = 0; i < kNumBw; ++i) {
    if (kBwValuesKhz[i] == bw_khz) bi = i;
  }
  if (si < 0 || bi < 0) {
    throw std::out_of_range("no SNR threshold for SF" + std::to_string(sf) +
                            " / " + std::to_string(bw_khz) + " kHz");
  }
  return db_[si][bi];
}

double SnrThresholdTable::threshold_by_index(int sf_idx, int bw_idx) const {
  if (sf_idx < 0 || sf_idx >= kNumSf || bw_idx < 0 || bw_idx >= kNumBw) {
    throw std::out_of_range("SNR threshold index out of range");
  }
  return db_[sf_idx][bw_idx];
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double db_from_linear(double x) { return 10.0 * std::log10(x); }

double elevation_angle(double horizontal_dist_m, double altitude_m) {
  const double d = std::max(horizontal_dist_m, kMinHorizontalM);
  return std::atan(altitude_m / d) * 180.0 / std::numbers::pi;
}

double p_los(double theta_deg, const ChannelParams& params) {
  return 1.0 /
         (1.0 + params.env_a *
                    std::exp(-params.env_b * (theta_deg - params.env_a)));
}

double path_loss_db(double horizontal_dist_m, const ChannelParams& params) {
  const double d = std::max(horizontal_dist_m, kMinHorizontalM);
  const double h = params.uav_altitude_m;
  const double d_eff =
      params.slant_range_for_fspl ? std::sqrt(d * d + h * h) : d;
  const double fspl =
      20.0 * std::log10(4.0 * std::numbers::pi * params.carrier_hz * d_eff /
                        params.light_speed_mps);
  const double pl = p_los(elevation_angle(horizontal_dist_m, h), params);
  return fspl + params.excess_los_db * pl + params.excess_nlos_db * (1.0 - pl);
}

double gain_linear(double path_loss_db) {
  return std::pow(10.0, -path_loss_db / 10.0);
}

double snr_linear(double tp_dbm, double gain_linear, double noise_dbm) {
  return dbm_to_mw(tp_dbm) * gain_linear / dbm_to_mw(noise_dbm);
}

double sinr_linear(double target_snr,
                   const std::vector<double>& interferer_snrs) {
  double denom = 1.0;
  for (double s : interferer_snrs) denom += s;
  return target_snr / denom;
}

double rate_bps(double bw_hz, double sinr_linear) {
  return bw_hz * std::log2(1.0 + sinr_linear);
}

}  // namespace uavlora
