#include <cmath>

#include "doctest.h"
#include "subdep/core.hpp"
#include "subdep/numerics/special.hpp"

using namespace subdep;

TEST_SUITE("core") {
  TEST_CASE("parameters and initial data validate their inputs") {
    CHECK_THROWS_AS(ModelParams(0.0, 2), Error);
    CHECK_THROWS_AS(ModelParams(1.0, 1), Error);
    CHECK_THROWS_AS(InitialData::power_law(1.0, 1.0), Error);
    CHECK_THROWS_AS(InitialData::power_law(-1.0, 1.5), Error);
    CHECK_THROWS_AS(InitialData::monomeric(-1.0), Error);
    const ModelParams p(2.0, 3);
    CHECK(p.scaling_exponent() == doctest::Approx(2.0 / 3.0));
    CHECK(p.scale_factor(10.0) == doctest::Approx(std::pow(15.0, 2.0 / 3.0)));
  }

  TEST_CASE("power-law clusters and tail counts") {
    const InitialData init = InitialData::power_law(2.0, 1.5, 0.25);
    CHECK(init.c1_0() == 0.25);
    CHECK(init.cluster(4) == doctest::Approx(2.0 / 8.0));
    double head = 0.0;
    for (long j = 10; j < 200000; ++j) head += init.cluster(j);
    const double rest = 2.0 * numerics::hurwitz_zeta(1.5, 200000.0);
    CHECK(init.tail_count(10) == doctest::Approx(head + rest).epsilon(1e-12));
    const InitialData mono = InitialData::monomeric();
    CHECK(mono.cluster(5) == 0.0);
    CHECK(mono.tail_count(2) == 0.0);
  }

  TEST_CASE("similarity profile") {
    const ModelParams p2(1.0, 2), p3(1.0, 3);
    CHECK(similarity_profile(2.0, p3) == 0.0);
    CHECK(similarity_profile(0.5, p2) == doctest::Approx(1.414214).epsilon(1e-6));
    CHECK(similarity_profile(1e-12, p3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(similarity_profile(1.0, p2), Error);
    CHECK_THROWS_AS(similarity_profile(0.0, p2), Error);
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
      const double v = similarity_profile(i / 100.0, p3);
      CHECK(v > prev);
      prev = v;
    }
    CHECK(similarity_profile(1.0 - 1e-12, p2) > 1e5);
  }

  TEST_CASE("eta guard") {
    CHECK_NOTHROW(check_eta_guard(0.95));
    CHECK_THROWS_AS(check_eta_guard(0.96), Error);
    CHECK_THROWS_AS(check_eta_guard(1.04), Error);
    CHECK_NOTHROW(check_eta_guard(1.04, 0.01));
  }

  TEST_CASE("rate envelope examples") {
    const ModelParams p(1.0, 2);
    const InitialData mono = InitialData::monomeric();
    const double expected = 0.5 * std::sqrt(2.0) * std::log(500.0) / 500.0;
    CHECK(rate_envelope(0.5, 1000.0, p, mono) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(rate_envelope(0.5, 1000.0, p, mono) == doctest::Approx(8.7889e-3).epsilon(1e-4));
    const InitialData pl = InitialData::power_law(1.0, 1.5);
    CHECK(rate_envelope(2.0, 100.0, p, pl) == doctest::Approx(5.0e-3).epsilon(1e-13));
    CHECK(rate_envelope(2.0, 100.0, p, mono) == 0.0);
  }

  TEST_CASE("envelope for eta > 1 scales exactly under doubling tau") {
    for (int n : {2, 3, 5}) {
      for (double mu : {1.25, 1.5, 3.0}) {
        const ModelParams p(0.7, n);
        const InitialData pl = InitialData::power_law(1.3, mu);
        const double factor = std::pow(2.0, p.scaling_exponent() - mu);
        for (double tau : {10.0, 123.0, 4096.0}) {
          const double ratio = rate_envelope(1.7, 2.0 * tau, p, pl) / rate_envelope(1.7, tau, p, pl);
          CHECK(ratio == doctest::Approx(factor).epsilon(1e-14));
        }
      }
    }
  }

  TEST_CASE("envelope for eta < 1 eventually decreases to zero") {
    const ModelParams p(1.0, 3);
    const InitialData mono = InitialData::monomeric();
    double prev = rate_envelope(0.3, 100.0, p, mono);
    for (double tau = 200.0; tau < 1e9; tau *= 2.0) {
      const double v = rate_envelope(0.3, tau, p, mono);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(prev < 1e-6);
  }
}
