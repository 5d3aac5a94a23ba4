#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "rfbump/scenario.hpp"

using namespace rfbump;

TEST_CASE("empty document is the canonical scenario") {
  const Scenario sc = load_scenario(std::string{});
  CHECK(sc.radio.tx_power_dbm == 10.0);
  CHECK(sc.radio.tx_gain_dbi == 15.0);
  CHECK(sc.radio.rx_sensitivity_dbm == -90.0);
  CHECK(sc.radio.frequency_hz == 2.4e9);
  CHECK(sc.friction.mu == 0.7);
  CHECK(sc.friction.g_decel_mps2 == 10.0);
  CHECK(sc.rsu.beacon_interval_s == 0.1);
  CHECK(sc.rsu.payload.bump_speed_kmh == 6);
  CHECK(sc.rsu.payload.zone_length_m == 20);
  CHECK(sc.ivu.trigger_rssi_dbm == -48.0);
  CHECK(sc.ivu.acquisition_s == 10.0);
  CHECK(sc.vehicle_initial.speed_mps == doctest::Approx(kmh_to_mps(120.0)));
  CHECK(sc.bump_site_m - sc.rsu.rsu_position_m == doctest::Approx(80.0));
  CHECK(sc.dt_s == 0.01);
  CHECK(sc.shadowing.sigma_db == 0.0);
}

TEST_CASE("comments, blanks and overrides") {
  const Scenario sc = load_scenario(
      "# canonical with a slower approach\n"
      "\n"
      "vehicle.initial_speed_kmh = 80   # Table-1 row 1\n"
      "shadowing.sigma_db = 3\n"
      "shadowing.seed = 42\n");
  CHECK(sc.vehicle_initial.speed_mps == doctest::Approx(kmh_to_mps(80.0)));
  CHECK(sc.shadowing.sigma_db == 3.0);
  CHECK(sc.shadowing.seed == 42);
}

TEST_CASE("radio keys reach the shared radio params") {
  const Scenario sc = load_scenario("radio.tx_power_dbm = 30\n");
  CHECK(sc.radio.tx_power_dbm == 30.0);
  CHECK(sc.rsu.radio.tx_power_dbm == 30.0);
  CHECK(sc.ivu.radio.tx_power_dbm == 30.0);
}

TEST_CASE("parse errors identify the line") {
  CHECK_THROWS_WITH_AS(load_scenario(std::string("friction.mu 0.7\n")),
                       doctest::Contains("line 1"), ScenarioError);
  CHECK_THROWS_WITH_AS(load_scenario(std::string("\nfriction.mu = abc\n")),
                       doctest::Contains("line 2"), ScenarioError);
  CHECK_THROWS_WITH_AS(load_scenario(std::string("friction.mu = 0.7 nonsense\n")),
                       doctest::Contains("line 1"), ScenarioError);
  CHECK_THROWS_WITH_AS(load_scenario(std::string("rsu.enabled = maybe\n")),
                       doctest::Contains("true/false"), ScenarioError);
}

TEST_CASE("unknown keys are load errors") {
  CHECK_THROWS_WITH_AS(load_scenario(std::string("radio.tx_powr_dbm = 10\n")),
                       doctest::Contains("unknown key"), ScenarioError);
}

TEST_CASE("invariant violations name the rule") {
  CHECK_THROWS_WITH_AS(load_scenario(std::string("friction.mu = 1.5\n")),
                       doctest::Contains("mu"), ScenarioError);
  CHECK_THROWS_WITH_AS(load_scenario(std::string("sim.dt_s = 0\n")),
                       doctest::Contains("dt_s"), ScenarioError);
  CHECK_THROWS_WITH_AS(
      load_scenario(std::string("vehicle.initial_position_m = 600\n")),
      doctest::Contains("before the RSU"), ScenarioError);
  CHECK_THROWS_WITH_AS(load_scenario(std::string("rsu.payload_corrupt_prob = 2\n")),
                       doctest::Contains("corrupt_prob"), ScenarioError);
  CHECK_THROWS_WITH_AS(load_scenario(std::string("rsu.bump_speed_kmh = 13\n")),
                       doctest::Contains("payload"), ScenarioError);
}
