#include <optional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "uavlora/association.hpp"
#include "uavlora/rng.hpp"

using namespace uavlora;

namespace {

// Slow re-derivation of the sequential argmax process, used as the replay
// oracle: at the moment each ED was processed, its assigned UAV must have
// been the feasible gain maximizer.
void replay_check(const AssociationState& out,
                  const std::vector<Vec2>& ed_pos,
                  const std::vector<Vec2>& uav_pos,
                  const std::vector<std::vector<double>>& gains, int quota,
                  double range) {
  std::vector<int> load(uav_pos.size(), 0);
  for (std::size_t v = 0; v < ed_pos.size(); ++v) {
    std::optional<int> best;
    for (std::size_t u = 0; u < uav_pos.size(); ++u) {
      if (load[u] >= quota) continue;
      if (distance(ed_pos[v], uav_pos[u]) > range) continue;
      if (!best || gains[v][u] > gains[v][*best]) best = static_cast<int>(u);
    }
    if (best) {
      REQUIRE(out.assignment[v] == *best);
      ++load[*best];
    } else {
      REQUIRE(out.assignment[v] == kUnassigned);
    }
  }
}

}  // namespace

TEST_CASE("single UAV in range with spare quota") {
  const std::vector<Vec2> eds = {{100, 100}};
  const std::vector<Vec2> uavs = {{150, 100}};
  const std::vector<std::vector<double>> gains = {{0.5}};
  const AssociationState a = match(eds, uavs, gains, 1, 200.0);
  CHECK(a.assignment[0] == 0);
  CHECK(a.loads(1)[0] == 1);
}

TEST_CASE("full nearer UAV pushes the ED to the lower-gain one") {
  // ED0 grabs UAV0 (its gain maximizer); ED1 also prefers UAV0 but the
  // quota of 1 is taken, so it lands on UAV1.
  const std::vector<Vec2> eds = {{100, 100}, {110, 100}};
  const std::vector<Vec2> uavs = {{100, 110}, {400, 100}};
  const std::vector<std::vector<double>> gains = {{0.9, 0.1}, {0.8, 0.2}};
  const AssociationState a = match(eds, uavs, gains, 1, 1000.0);
  CHECK(a.assignment[0] == 0);
  CHECK(a.assignment[1] == 1);
}

TEST_CASE("all UAVs out of range leaves the ED unassigned") {
  const std::vector<Vec2> eds = {{0, 0}};
  const std::vector<Vec2> uavs = {{900, 900}};
  const std::vector<std::vector<double>> gains = {{0.5}};
  const AssociationState a = match(eds, uavs, gains, 4, 100.0);
  CHECK(a.assignment[0] == kUnassigned);
}

TEST_CASE("equal gains break ties toward the lower UAV index") {
  const std::vector<Vec2> eds = {{500, 500}};
  const std::vector<Vec2> uavs = {{400, 500}, {600, 500}};
  const std::vector<std::vector<double>> gains = {{0.25, 0.25}};
  const AssociationState a = match(eds, uavs, gains, 1, 1000.0);
  CHECK(a.assignment[0] == 0);
}

TEST_CASE("quota must be positive") {
  CHECK_THROWS_AS(match({}, {}, {}, 0, 100.0), std::invalid_argument);
}

TEST_CASE("matrix view and served_by agree with the assignment") {
  const std::vector<Vec2> eds = {{10, 10}, {20, 20}, {30, 30}};
  const std::vector<Vec2> uavs = {{0, 0}, {40, 40}};
  const std::vector<std::vector<double>> gains = {
      {0.9, 0.1}, {0.5, 0.6}, {0.1, 0.9}};
  const AssociationState a = match(eds, uavs, gains, 2, 100.0);
  const auto m = a.matrix_view(2);
  for (int v = 0; v < 3; ++v) {
    int count = 0;
    for (int u = 0; u < 2; ++u) count += m[u][v] ? 1 : 0;
    CHECK(count == (a.assignment[v] == kUnassigned ? 0 : 1));
  }
  for (int u = 0; u < 2; ++u) {
    for (int v : a.served_by(u)) CHECK(a.assignment[v] == u);
  }
}

TEST_CASE("property: constraints hold and the replay oracle confirms") {
  Rng rng(314);
  for (int trial = 0; trial < 1000; ++trial) {
    const int num_eds = 1 + static_cast<int>(rng.uniform_int(12));
    const int num_uavs = 1 + static_cast<int>(rng.uniform_int(4));
    const int quota = 1 + static_cast<int>(rng.uniform_int(4));
    const double range = rng.uniform(100.0, 900.0);

    std::vector<Vec2> eds(num_eds), uavs(num_uavs);
    for (auto& e : eds) e = {rng.uniform(0, 1000), rng.uniform(0, 1000)};
    for (auto& u : uavs) u = {rng.uniform(0, 1000), rng.uniform(0, 1000)};
    std::vector<std::vector<double>> gains(num_eds,
                                           std::vector<double>(num_uavs));
    for (auto& row : gains) {
      for (auto& g : row) g = rng.uniform(1e-12, 1e-6);
    }

    const AssociationState a = match(eds, uavs, gains, quota, range);

    // 15b: at most one UAV per ED is implied by the representation; check
    // quota (15c) and range on every assignment.
    const auto load = a.loads(num_uavs);
    for (int l : load) CHECK_LE(l, quota);
    for (int v = 0; v < num_eds; ++v) {
      if (a.assignment[v] == kUnassigned) continue;
      CHECK_LE(distance(eds[v], uavs[a.assignment[v]]), range);
    }
    replay_check(a, eds, uavs, gains, quota, range);

    // determinism and positive-rescaling invariance
    const AssociationState b = match(eds, uavs, gains, quota, range);
    CHECK(a.assignment == b.assignment);
    auto scaled = gains;
    for (auto& row : scaled) {
      for (auto& g : row) g *= 737.5;
    }
    const AssociationState c = match(eds, uavs, scaled, quota, range);
    CHECK(a.assignment == c.assignment);
  }
}

TEST_CASE("snapshot csv shape") {
  const std::vector<Vec2> eds = {{10, 10}, {990, 990}};
  const std::vector<Vec2> uavs = {{0, 0}};
  const std::vector<std::vector<double>> gains = {{0.5}, {0.1}};
  const AssociationState a = match(eds, uavs, gains, 1, 100.0);
  const std::string csv = association_snapshot_csv(a, eds, uavs, gains);
  CHECK(csv.find("ed_id,uav_id,distance_m,gain") == 0);
  CHECK(csv.find("\n0,0,") != std::string::npos);
  CHECK(csv.find("\n1,-1,") != std::string::npos);
}
