#include "uavlora/association.hpp"

#include <cstdio>
#include <stdexcept>

namespace uavlora {

std::vector<std::vector<bool>> AssociationState::matrix_view(int num_uavs) const {
  std::vector<std::vector<bool>> m(num_uavs,
                                   std::vector<bool>(assignment.size(), false));
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] != kUnassigned) m[assignment[v]][v] = true;
  }
  return m;
}

std::vector<int> AssociationState::loads(int num_uavs) const {
  std::vector<int> l(num_uavs, 0);
  for (int a : assignment) {
    if (a != kUnassigned) ++l[a];
  }
  return l;
}

std::vector<int> AssociationState::served_by(int uav) const {
  std::vector<int> out;
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] == uav) out.push_back(static_cast<int>(v));
  }
  return out;
}

AssociationState match(const std::vector<Vec2>& ed_positions,
                       const std::vector<Vec2>& uav_positions,
                       const std::vector<std::vector<double>>& gains,
                       int quota, double comm_range_m) {
  if (quota < 1) throw std::invalid_argument("association quota must be >= 1");
  const int num_eds = static_cast<int>(ed_positions.size());
  const int num_uavs = static_cast<int>(uav_positions.size());

  AssociationState out;
  out.assignment.assign(num_eds, kUnassigned);
  out.quota = quota;
  out.comm_range_m = comm_range_m;

  std::vector<int> load(num_uavs, 0);
  for (int v = 0; v < num_eds; ++v) {
    int best = kUnassigned;
    double best_gain = 0.0;
    for (int u = 0; u < num_uavs; ++u) {
      if (load[u] >= quota) continue;
      if (distance(ed_positions[v], uav_positions[u]) > comm_range_m) continue;
      if (best == kUnassigned || gains[v][u] > best_gain) {
        best = u;
        best_gain = gains[v][u];
      }
    }
    if (best != kUnassigned) {
      out.assignment[v] = best;
      ++load[best];
    }
  }
  return out;
}

std::string association_snapshot_csv(
    const AssociationState& assoc, const std::vector<Vec2>& ed_positions,
    const std::vector<Vec2>& uav_positions,
    const std::vector<std::vector<double>>& gains) {
  std::string out = "ed_id,uav_id,distance_m,gain\n";
  char line[128];
  for (std::size_t v = 0; v < assoc.assignment.size(); ++v) {
    const int u = assoc.assignment[v];
    if (u == kUnassigned) {
      std::snprintf(line, sizeof(line), "%zu,-1,,\n", v);
    } else {
      std::snprintf(line, sizeof(line), "%zu,%d,%.17g,%.17g\n", v, u,
                    distance(ed_positions[v], uav_positions[u]),
                    gains[v][u]);
    }
    out += line;
  }
  return out;
}

}  // namespace uavlora
