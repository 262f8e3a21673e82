#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "uavlora/channel.hpp"
#include "uavlora/rng.hpp"

using namespace uavlora;

namespace {
ChannelParams table2_params() { return ChannelParams{}; }
}  // namespace

TEST_CASE("elevation angle") {
  CHECK(elevation_angle(90, 90) == doctest::Approx(45.0));
  // d clamped to 1 m
  CHECK(elevation_angle(0, 90) == doctest::Approx(89.36340642403651).epsilon(1e-12));
  CHECK(elevation_angle(1000, 90) == doctest::Approx(5.142764557884241).epsilon(1e-12));
}

TEST_CASE("p_los at the anchor points") {
  const ChannelParams p = table2_params();
  // exponent vanishes at theta == env_a
  CHECK(p_los(4.88, p) == doctest::Approx(1.0 / 5.88).epsilon(1e-12));
  CHECK(p_los(0.0, p) == doctest::Approx(0.024517496465986447).epsilon(1e-9));
  CHECK(p_los(90.0, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("p_los is monotone nondecreasing on a 0.1 degree grid") {
  const ChannelParams p = table2_params();
  double prev = p_los(0.0, p);
  for (int i = 1; i <= 900; ++i) {
    const double cur = p_los(i * 0.1, p);
    CHECK_GE(cur, prev);
    prev = cur;
  }
}

TEST_CASE("free-space term at 868 MHz and 1 km") {
  ChannelParams p = table2_params();
  p.excess_los_db = 0.0;
  p.excess_nlos_db = 0.0;
  p.slant_range_for_fspl = false;  // pure horizontal distance
  CHECK(path_loss_db(1000.0, p) ==
        doctest::Approx(91.21216668957851).epsilon(1e-9));
}

TEST_CASE("path loss composition at d=1000, h=90 (slant mode)") {
  // FSPL(sqrt(1000^2+90^2)) + 0.1 * P_LoS(5.1428 deg) + 21 * (1 - P_LoS);
  // frozen from a high-precision evaluation of that composition.
  const ChannelParams p = table2_params();
  CHECK(path_loss_db(1000.0, p) ==
        doctest::Approx(108.34694800084172).epsilon(1e-9));
}

TEST_CASE("p_los == 1 collapses the excess term to the LoS value") {
  ChannelParams p = table2_params();
  p.env_b = 1000.0;  // step-like S-curve: theta > env_a gives p_los ~ 1
  p.slant_range_for_fspl = false;
  const double with_excess = path_loss_db(50.0, p);  // theta = 60.9 deg
  p.excess_los_db = 0.0;
  const double without = path_loss_db(50.0, p);
  CHECK(with_excess - without == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("path loss is monotone in distance in slant mode") {
  const ChannelParams p = table2_params();
  double prev = path_loss_db(1.0, p);
  for (int d = 2; d <= 2000; ++d) {
    const double cur = path_loss_db(static_cast<double>(d), p);
    CHECK_GE(cur, prev);
    prev = cur;
  }
}

TEST_CASE("gain from path loss") {
  CHECK(gain_linear(0.0) == doctest::Approx(1.0));
  CHECK(gain_linear(10.0) == doctest::Approx(0.1));
  CHECK(gain_linear(91.21) == doctest::Approx(7.568328950209744e-10).epsilon(1e-12));
}

TEST_CASE("snr in linear milliwatt arithmetic") {
  CHECK(snr_linear(0.0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(dbm_to_mw(14.0) == doctest::Approx(25.118864315095795).epsilon(1e-12));
  CHECK(snr_linear(14.0, 1e-9, -120.0) ==
        doctest::Approx(25118.864315095795).epsilon(1e-12));
}

TEST_CASE("dbm <-> mw round-trip") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double dbm = rng.uniform(-150.0, 40.0);
    CHECK(mw_to_dbm(dbm_to_mw(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
  }
}

TEST_CASE("sinr") {
  CHECK(sinr_linear(10.0, {}) == doctest::Approx(10.0));
  CHECK(sinr_linear(10.0, {9.0}) == doctest::Approx(1.0));
  CHECK(sinr_linear(4.0, {1.0, 2.0}) == doctest::Approx(1.0));
  // never exceeds the SNR
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double snr = rng.uniform(0.0, 100.0);
    std::vector<double> interferers;
    const int n = static_cast<int>(rng.uniform_int(5));
    for (int j = 0; j < n; ++j) interferers.push_back(rng.uniform(0.0, 50.0));
    CHECK_LE(sinr_linear(snr, interferers), snr);
  }
}

TEST_CASE("shannon rate") {
  CHECK(rate_bps(125000.0, 1.0) == doctest::Approx(125000.0));
  CHECK(rate_bps(125000.0, 3.0) == doctest::Approx(250000.0));
  CHECK(rate_bps(500000.0, 0.0) == doctest::Approx(0.0));
  // monotone in sinr, linear in bandwidth
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double cur = rate_bps(125000.0, i * 0.5);
    CHECK_GE(cur, prev);
    prev = cur;
  }
  CHECK(rate_bps(250000.0, 2.5) == doctest::Approx(2.0 * rate_bps(125000.0, 2.5)));
}

TEST_CASE("threshold table matches the published values exactly") {
  const SnrThresholdTable t;
  // hard-coded copy, indexed [sf][bw]
  const double expected[6][3] = {
      {-7.5, -9.0, -11.0},   {-10.0, -12.0, -13.8}, {-12.5, -14.5, -16.5},
      {-15.0, -17.0, -19.0}, {-18.0, -20.0, -21.8}, {-21.0, -23.0, -25.0}};
  const int sfs[6] = {7, 8, 9, 10, 11, 12};
  const int bws[3] = {125, 250, 500};
  for (int s = 0; s < 6; ++s) {
    for (int b = 0; b < 3; ++b) {
      CHECK(t.threshold_db(sfs[s], bws[b]) == expected[s][b]);
      CHECK(t.threshold_by_index(s, b) == expected[s][b]);
    }
  }
  CHECK(t.threshold_db(7, 125) == -7.5);
  CHECK(t.threshold_db(12, 500) == -25.0);
  CHECK(t.threshold_db(9, 250) == -14.5);
  CHECK_THROWS_AS(t.threshold_db(6, 125), std::out_of_range);
  CHECK_THROWS_AS(t.threshold_db(7, 100), std::out_of_range);
}

TEST_CASE("threshold table loads from text") {
  const char* path = "thresholds_test.txt";
  {
    std::ofstream f(path);
    f << "# rows SF7..SF12, columns 125/250/500 kHz\n";
    f << "-7.5 -9 -11\n-10 -12 -13.8\n-12.5 -14.5 -16.5\n";
    f << "-15 -17 -19\n-18 -20 -21.8\n-21 -23 -25\n";
  }
  const SnrThresholdTable t = SnrThresholdTable::from_file(path);
  CHECK(t.threshold_db(8, 500) == -13.8);
  std::remove(path);

  {
    std::ofstream f(path);
    f << "-7.5 -9 -11\n";  // truncated
  }
  CHECK_THROWS(SnrThresholdTable::from_file(path));
  std::remove(path);
}
