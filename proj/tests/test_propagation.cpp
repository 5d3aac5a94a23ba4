#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rfbump/propagation.hpp"

using namespace rfbump;

namespace {

RadioLinkParams table_params() { return {}; }  // defaults are the deployment set

// Independent bisection oracle on the link margin, used to cross-check the
// closed-form range solver.
double bisect_zero_margin(const RadioLinkParams& p) {
  double lo = 1.0, hi = 1e7;
  REQUIRE(link_margin_db(p, lo) > 0.0);
  REQUIRE(link_margin_db(p, hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (link_margin_db(p, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("fspl closed form") {
  CHECK(fspl_db(400.0, 2.4e9) == doctest::Approx(92.1).epsilon(0.0005));  // +-0.05
  CHECK(fspl_db(400.0, 2.4e9) == doctest::Approx(92.0932).epsilon(1e-6));
  CHECK(fspl_db(1.0, 2.4e9) == doctest::Approx(40.052).epsilon(1e-5));
  CHECK(fspl_db(100.0, 2.4e9) == doctest::Approx(80.052).epsilon(1e-5));
  // 20*log10 law: a decade in distance is 40 dB over the 1 m value
  CHECK(fspl_db(100.0, 2.4e9) - fspl_db(1.0, 2.4e9) == doctest::Approx(40.0).epsilon(1e-9));
  CHECK_THROWS_AS(fspl_db(0.0, 2.4e9), std::domain_error);
  CHECK_THROWS_AS(fspl_db(-1.0, 2.4e9), std::domain_error);
  CHECK_THROWS_AS(fspl_db(10.0, 0.0), std::domain_error);
}

TEST_CASE("fspl monotonicity and the 6 dB doubling law") {
  std::uint64_t s = 7;
  for (int i = 0; i < 200; ++i) {
    s = detail::splitmix64(s);
    const double d = 1.0 + 9999.0 * detail::uniform01(s);
    const double f = 1e8 + 1e10 * detail::uniform01(detail::splitmix64(s));
    CHECK(fspl_db(2.0 * d, f) - fspl_db(d, f) ==
          doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
    CHECK(fspl_db(d * 1.01, f) > fspl_db(d, f));
    CHECK(fspl_db(d, f * 1.01) > fspl_db(d, f));
  }
}

TEST_CASE("received power budget") {
  const auto p = table_params();
  CHECK(received_power_dbm(p, 400.0) == doctest::Approx(-74.0932).epsilon(1e-5));
  // the -48 dBm reference point sits at roughly 19.8 m
  CHECK(received_power_dbm(p, 19.8335) == doctest::Approx(-48.0).epsilon(1e-4));

  RadioLinkParams bare = p;
  bare.tx_gain_dbi = bare.tx_loss_db = bare.misc_loss_db = 0.0;
  bare.rx_gain_dbi = bare.rx_loss_db = 0.0;
  for (double d : {1.0, 37.0, 400.0, 2000.0})
    CHECK(received_power_dbm(bare, d) ==
          doctest::Approx(bare.tx_power_dbm - fspl_db(d, bare.frequency_hz)).epsilon(1e-12));
}

TEST_CASE("link margin") {
  const auto p = table_params();
  CHECK(link_margin_db(p, 400.0) == doctest::Approx(15.9).epsilon(0.013));
  CHECK(link_margin_db(p, 100.0) == doctest::Approx(27.95).epsilon(0.008));
  // margin is identically P_RX - sensitivity
  for (double d : {2.0, 50.0, 1234.0})
    CHECK(link_margin_db(p, d) ==
          doctest::Approx(received_power_dbm(p, d) - p.rx_sensitivity_dbm).epsilon(1e-12));
  // zero by definition where P_RX equals sensitivity
  RadioLinkParams q = p;
  q.rx_sensitivity_dbm = received_power_dbm(p, 400.0);
  CHECK(link_margin_db(q, 400.0) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("max range") {
  const auto p = table_params();
  const double r = max_range_m(p);
  CHECK(r == doctest::Approx(2496.9).epsilon(1e-3));
  CHECK(std::fabs(link_margin_db(p, r)) < 0.01);
  CHECK(std::fabs(r - bisect_zero_margin(p)) < 0.01);

  RadioLinkParams at400 = p;
  at400.rx_sensitivity_dbm = received_power_dbm(p, 400.0);
  CHECK(max_range_m(at400) == doctest::Approx(400.0).epsilon(0.00125));

  RadioLinkParams boosted = p;
  boosted.tx_power_dbm += 20.0;
  CHECK(max_range_m(boosted) == doctest::Approx(10.0 * r).epsilon(0.01));

  RadioLinkParams deaf = p;
  deaf.rx_sensitivity_dbm = 5.0;  // margin negative even at 1 m
  CHECK_THROWS_AS(max_range_m(deaf), std::domain_error);
}

TEST_CASE("rssi to distance round trip") {
  const auto p = table_params();
  CHECK(distance_from_rssi(p, -48.0) == doctest::Approx(19.834).epsilon(1e-3));
  CHECK(distance_from_rssi(p, -74.0932) == doctest::Approx(400.0).epsilon(0.005));
  std::uint64_t s = 42;
  for (int i = 0; i < 500; ++i) {
    s = detail::splitmix64(s);
    const double d = std::pow(10.0, 4.0 * detail::uniform01(s));  // [1, 1e4]
    CHECK(distance_from_rssi(p, received_power_dbm(p, d)) ==
          doctest::Approx(d).epsilon(1e-6));
  }
  CHECK_THROWS_AS(distance_from_rssi(p, received_power_dbm(p, 1.0) + 1.0),
                  std::domain_error);
}

TEST_CASE("shadowing determinism and zero-noise reduction") {
  const auto p = table_params();
  const ShadowingModel none{.sigma_db = 0.0, .seed = 9};
  CHECK(sample_rssi(p, 400.0, none, 0) == received_power_dbm(p, 400.0));
  CHECK(sample_rssi(p, 400.0, none, 12345) == received_power_dbm(p, 400.0));

  const ShadowingModel noisy{.sigma_db = 3.0, .seed = 77};
  const double a = sample_rssi(p, 400.0, noisy, 7);
  CHECK(sample_rssi(p, 400.0, noisy, 7) == a);
  CHECK(sample_rssi(p, 400.0, noisy, 8) != a);
  const ShadowingModel other{.sigma_db = 3.0, .seed = 78};
  CHECK(sample_rssi(p, 400.0, other, 7) != a);
}

TEST_CASE("shadowing sample statistics") {
  const auto p = table_params();
  const ShadowingModel noisy{.sigma_db = 3.0, .seed = 2024};
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = sample_rssi(p, 400.0, noisy, static_cast<std::uint64_t>(i));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(mean == doctest::Approx(-74.0932).scale(0).epsilon(0.0028));  // +-0.2 dB
  CHECK(stddev == doctest::Approx(3.0).epsilon(0.10));
}

TEST_CASE("parameter validation") {
  RadioLinkParams p;
  CHECK_NOTHROW(p.validate());
  p.frequency_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.tx_loss_db = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.rx_sensitivity_dbm = 20.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  ShadowingModel sm{.sigma_db = -0.1, .seed = 0};
  CHECK_THROWS_AS(sm.validate(), std::invalid_argument);
}
