#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "uavlora/power.hpp"

using namespace uavlora;

TEST_CASE("hover power at the default parameters") {
  // Frozen from a high-precision evaluation of the formula at the defaults
  // (4 rotors, 20 N, 1.225 kg/m^3, 0.05, 0.503 m^2, 0.008, 0.012, 0.1).
  const HoverParams p;
  CHECK(hover_power_w(p) == doctest::Approx(402.2843897572969).epsilon(1e-12));
}

TEST_CASE("hover power scales as weight^(3/2)") {
  HoverParams p;
  const double base = hover_power_w(p);
  p.rotor_weight_n *= 2.0;
  CHECK(hover_power_w(p) / base ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
}

TEST_CASE("hover power validation rejects non-positive parameters") {
  HoverParams p;
  p.thrust_coeff = 0.0;
  CHECK_THROWS_AS(hover_power_w(p), std::invalid_argument);
  p = HoverParams{};
  p.rotor_count = 0;
  CHECK_THROWS_AS(hover_power_w(p), std::invalid_argument);
}

TEST_CASE("hover formula degenerates to zero when both terms vanish") {
  // hypothetical parameters, bypassing validation on purpose
  HoverParams p;
  p.blade_drag_coeff = 0.0;
  p.induced_power_factor = -1.0;
  CHECK(hover_power_formula(p) == doctest::Approx(0.0));
}

TEST_CASE("system EE: single UAV, zero load, additivity") {
  // 125 kbps over 14 dBm uplink (0.025119 W) plus 100 W hover
  CHECK(system_ee({125000.0}, {0.025119}, 100.0) ==
        doctest::Approx(1249.6860913507136).epsilon(1e-12));

  CHECK(system_ee({0.0}, {0.0}, 100.0) == doctest::Approx(0.0));

  const double one = system_ee({250000.0}, {0.05}, 402.0);
  const double two = system_ee({250000.0, 250000.0}, {0.05, 0.05}, 402.0);
  CHECK(two == doctest::Approx(2.0 * one));
}

TEST_CASE("EE decreases when uplink power rises at fixed rates") {
  const double lo = system_ee({1e6, 2e6}, {0.01, 0.02}, 400.0);
  const double hi = system_ee({1e6, 2e6}, {0.05, 0.08}, 400.0);
  CHECK_LT(hi, lo);
}

TEST_CASE("energy breakdown mirrors system_ee") {
  const EnergyBreakdown b =
      energy_breakdown({125000.0, 500000.0}, {0.01, 0.02}, 402.0);
  CHECK(b.per_uav_ee.size() == 2);
  CHECK(b.system_ee ==
        doctest::Approx(system_ee({125000.0, 500000.0}, {0.01, 0.02}, 402.0)));
}
