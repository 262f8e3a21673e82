#pragma once

#include <vector>

namespace uavlora {

// Multi-rotor hover power model. The reference constants for these fields
// live in an external report; the defaults below are documented stand-ins,
// and everything downstream treats hover power as an opaque positive
// constant.
struct HoverParams {
  int rotor_count = 4;
  double rotor_weight_n = 20.0;       // per-rotor share of airframe weight
  double air_density = 1.225;         // kg/m^3
  double solidity = 0.05;
  double disc_area_m2 = 0.503;
  double thrust_coeff = 0.008;
  double blade_drag_coeff = 0.012;
  double induced_power_factor = 0.1;

  bool valid() const {
    return rotor_count >= 1 && rotor_weight_n > 0.0 && air_density > 0.0 &&
           solidity > 0.0 && disc_area_m2 > 0.0 && thrust_coeff > 0.0 &&
           blade_drag_coeff > 0.0 && induced_power_factor > 0.0;
  }
};

// Raw formula, no validation: n * Wr^1.5 * (rho^-0.5 s A^-0.5 Ct^-1.5 d/8
// + (1+k)/sqrt(2 rho A)).
double hover_power_formula(const HoverParams& params);

// Validated entry point; throws std::invalid_argument on non-positive
// parameters.
double hover_power_w(const HoverParams& params);

struct EnergyBreakdown {
  std::vector<double> sum_rate_bps;    // per UAV
  std::vector<double> uplink_power_w;  // per UAV
  double hover_power_w = 0.0;
  std::vector<double> per_uav_ee;      // bits/J
  double system_ee = 0.0;              // bits/J, sum over UAVs
};

// Per-timestep system energy efficiency: sum over UAVs of
// rate / (uplink + hover). Lists are aligned by UAV index.
double system_ee(const std::vector<double>& per_uav_rates_bps,
                 const std::vector<double>& per_uav_uplink_w,
                 double hover_w);

EnergyBreakdown energy_breakdown(const std::vector<double>& per_uav_rates_bps,
                                 const std::vector<double>& per_uav_uplink_w,
                                 double hover_w);

}  // namespace uavlora
