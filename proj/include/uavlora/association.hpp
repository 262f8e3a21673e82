#pragma once

#include <string>
#include <vector>

#include "uavlora/vec2.hpp"

namespace uavlora {

constexpr int kUnassigned = -1;

// ED -> UAV matching under a per-UAV quota and a communication range.
struct AssociationState {
  std::vector<int> assignment;  // per ED: UAV index or kUnassigned
  int quota = 0;
  double comm_range_m = 0.0;

  bool is_assigned(int ed) const { return assignment[ed] != kUnassigned; }

  // Binary a[u][v] view of the assignment.
  std::vector<std::vector<bool>> matrix_view(int num_uavs) const;

  std::vector<int> loads(int num_uavs) const;

  // EDs served by UAV u, ascending ED index. Defines the observation slot
  // order.
  std::vector<int> served_by(int uav) const;
};

// Sequential channel-aware matching: EDs are processed in ascending index
// order; each takes the highest-gain UAV among those in range with spare
// quota (ties to the lowest UAV index). O(V*U). EDs with an empty feasible
// set stay unassigned.
AssociationState match(const std::vector<Vec2>& ed_positions,
                       const std::vector<Vec2>& uav_positions,
                       const std::vector<std::vector<double>>& gains,
                       int quota, double comm_range_m);

// CSV snapshot: ed_id, uav_id (-1 when unassigned), horizontal distance,
// gain.
std::string association_snapshot_csv(
    const AssociationState& assoc, const std::vector<Vec2>& ed_positions,
    const std::vector<Vec2>& uav_positions,
    const std::vector<std::vector<double>>& gains);

}  // namespace uavlora
