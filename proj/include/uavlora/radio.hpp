#pragma once

#include <vector>

namespace uavlora {

// Discrete resource menus. Defaults are the standard EU868 LoRa choices.
struct RadioSets {
  std::vector<int> sf = {7, 8, 9, 10, 11, 12};
  std::vector<double> tp_dbm = {2.0, 5.0, 8.0, 11.0, 14.0};
  std::vector<double> bw_khz = {125.0, 250.0, 500.0};

  int num_sf() const { return static_cast<int>(sf.size()); }
  int num_tp() const { return static_cast<int>(tp_dbm.size()); }
  int num_bw() const { return static_cast<int>(bw_khz.size()); }

  bool valid() const { return !sf.empty() && !tp_dbm.empty() && !bw_khz.empty(); }
};

// Index-valued selection into RadioSets; holding indices makes the
// exactly-one-choice-per-dimension constraints true by construction.
struct RadioAssignment {
  int sf_idx = 0;
  int tp_idx = 0;
  int bw_idx = 0;

  bool operator==(const RadioAssignment& o) const {
    return sf_idx == o.sf_idx && tp_idx == o.tp_idx && bw_idx == o.bw_idx;
  }

  bool within(const RadioSets& sets) const {
    return sf_idx >= 0 && sf_idx < sets.num_sf() && tp_idx >= 0 &&
           tp_idx < sets.num_tp() && bw_idx >= 0 && bw_idx < sets.num_bw();
  }
};

}  // namespace uavlora
