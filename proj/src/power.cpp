#include "uavlora/power.hpp"

#include <cmath>
#include <stdexcept>

namespace uavlora {

double hover_power_formula(const HoverParams& p) {
  const double profile = std::pow(p.air_density, -0.5) * p.solidity *
                         std::pow(p.disc_area_m2, -0.5) *
                         std::pow(p.thrust_coeff, -1.5) *
                         p.blade_drag_coeff / 8.0;
  const double induced = (1.0 + p.induced_power_factor) /
                         std::sqrt(2.0 * p.air_density * p.disc_area_m2);
  return p.rotor_count * std::pow(p.rotor_weight_n, 1.5) * (profile + induced);
}

double hover_power_w(const HoverParams& params) {
  if (!params.valid()) {
    throw std::invalid_argument("hover power parameters must be positive");
  }
  return hover_power_formula(params);
}

double system_ee(const std::vector<double>& per_uav_rates_bps,
                 const std::vector<double>& per_uav_uplink_w,
                 double hover_w) {
  double total = 0.0;
  for (std::size_t u = 0; u < per_uav_rates_bps.size(); ++u) {
    total += per_uav_rates_bps[u] / (per_uav_uplink_w[u] + hover_w);
  }
  return total;
}

EnergyBreakdown energy_breakdown(const std::vector<double>& per_uav_rates_bps,
                                 const std::vector<double>& per_uav_uplink_w,
                                 double hover_w) {
  EnergyBreakdown out;
  out.sum_rate_bps = per_uav_rates_bps;
  out.uplink_power_w = per_uav_uplink_w;
  out.hover_power_w = hover_w;
  out.per_uav_ee.reserve(per_uav_rates_bps.size());
  for (std::size_t u = 0; u < per_uav_rates_bps.size(); ++u) {
    out.per_uav_ee.push_back(per_uav_rates_bps[u] /
                             (per_uav_uplink_w[u] + hover_w));
    out.system_ee += out.per_uav_ee.back();
  }
  return out;
}

}  // namespace uavlora
