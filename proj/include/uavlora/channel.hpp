#pragma once

#include <array>
#include <string>
#include <vector>

namespace uavlora {

// Air-to-ground probabilistic LoS/NLoS channel.
struct ChannelParams {
  double carrier_hz = 868e6;
  double light_speed_mps = 3e8;
  double env_a = 4.88;          // S-curve midpoint, degrees
  double env_b = 0.43;          // S-curve steepness, per degree
  double excess_los_db = 0.1;
  double excess_nlos_db = 21.0;
  double noise_dbm = -120.0;
  double uav_altitude_m = 90.0;
  // Free-space term distance: slant range sqrt(d^2 + h^2) when true
  // (physical default), otherwise the horizontal distance clamped >= 1 m.
  bool slant_range_for_fspl = true;
  // Restrict interference to transmissions sharing the bandwidth as well as
  // the spreading factor. Off by default: interference is same-SF only.
  bool same_bw_interference_only = false;

  bool valid() const {
    return carrier_hz > 0.0 && light_speed_mps > 0.0 && env_a > 0.0 &&
           env_b > 0.0 && uav_altitude_m > 0.0;
  }
};

// Minimum detection SNR in dB per (spreading factor, bandwidth) pair.
class SnrThresholdTable {
 public:
  static constexpr int kNumSf = 6;  // SF 7..12
  static constexpr int kNumBw = 3;  // 125/250/500 kHz

  // Compiled-in default table.
  SnrThresholdTable();

  // Loads the same 6x3 layout (rows SF7..SF12, columns 125/250/500 kHz)
  // from whitespace-separated text. Lines starting with '#' are skipped.
  // Throws std::runtime_error on malformed input or non-monotone entries.
  static SnrThresholdTable from_file(const std::string& path);

  // sf in 7..12, bw_khz in {125, 250, 500}; throws std::out_of_range
  // otherwise.
  double threshold_db(int sf, int bw_khz) const;
  double threshold_by_index(int sf_idx, int bw_idx) const;

 private:
  std::array<std::array<double, kNumBw>, kNumSf> db_{};
  void validate() const;
};

struct LinkMetrics {
  double elevation_deg = 0.0;
  double p_los = 0.0;
  double path_loss_db = 0.0;
  double gain_linear = 0.0;
  double snr_linear = 0.0;
  double sinr_linear = 0.0;
  double rate_bps = 0.0;
  double margin_db = 0.0;  // SNR in dB minus the detection threshold
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double db_from_linear(double x);

// atan(altitude / horizontal) in degrees; horizontal clamped >= 1 m.
double elevation_angle(double horizontal_dist_m, double altitude_m);

// 1 / (1 + a * exp(-b * (theta - a))), nondecreasing in theta.
double p_los(double theta_deg, const ChannelParams& params);

// Free-space term plus LoS/NLoS excess weighted by p_los.
double path_loss_db(double horizontal_dist_m, const ChannelParams& params);

double gain_linear(double path_loss_db);

// Transmit power and noise in dBm, gain linear; returns linear SNR.
double snr_linear(double tp_dbm, double gain_linear, double noise_dbm);

// target / (sum of same-SF interferer SNRs + 1).
double sinr_linear(double target_snr, const std::vector<double>& interferer_snrs);

double rate_bps(double bw_hz, double sinr_linear);

}  // namespace uavlora
