#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "subdep/csv.hpp"
#include "subdep/harness.hpp"

using namespace subdep;

TEST_SUITE("harness") {
  TEST_CASE("compact-set regime thresholds") {
    const ModelParams p2(1.0, 2), p5(1.0, 5);
    CHECK(regime_classify(1.4, p2) == Regime::PowerLaw);
    CHECK(regime_classify(1.5, p2) == Regime::LogOverTau);
    CHECK(regime_classify(1.79, p5) == Regime::PowerLaw);
    CHECK(regime_classify(1.8, p5) == Regime::LogOverTau);
    CHECK_THROWS_AS(regime_classify(1.0, p2), Error);
  }

  TEST_CASE("pointwise regime") {
    const InitialData mono = InitialData::monomeric();
    const InitialData pl = InitialData::power_law(1.0, 3.0);
    CHECK(pointwise_regime(0.5, mono) == Regime::LogOverTau);
    CHECK(pointwise_regime(2.0, mono) == Regime::Exponential);
    CHECK(pointwise_regime(2.0, pl) == Regime::PowerLaw);
    CHECK(to_string(Regime::Exponential) == "Exponential");
  }

  TEST_CASE("geometric grid") {
    const auto g = geometric_grid(10.0, 1000.0, 3);
    CHECK(g[0] == 10.0);
    CHECK(g[1] == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(g[2] == 1000.0);
    CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 5), Error);
  }

  TEST_CASE("short grids and guarded eta are rejected") {
    const ModelParams p(1.0, 2);
    const InitialData mono = InitialData::monomeric();
    const ConstantHistory h(0.1);
    try {
      measure_convergence(0.5, p, mono, h, geometric_grid(100.0, 1000.0, 10));
      FAIL("expected InsufficientDecades");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientDecades);
    }
    CHECK_THROWS_AS(measure_convergence(1.02, p, mono, h, geometric_grid(100.0, 1e4, 10)), Error);
  }

  TEST_CASE("measurement series are consistent") {
    const ModelParams p(1.0, 2);
    const InitialData mono = InitialData::monomeric();
    const auto grid = geometric_grid(100.0, 5000.0, 12);
    const RateMeasurement m = measure_convergence(0.5, p, mono, grid);
    REQUIRE(m.errors.size() == grid.size());
    CHECK(m.profile == doctest::Approx(std::sqrt(2.0)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(m.errors[i] >= 0.0);
      CHECK(m.j[i] == std::lround(0.5 * grid[i]));
      CHECK(m.errors[i] == std::abs(m.scaled_int[i] - m.profile));
      CHECK(m.envelope_memory[i] == 0.0);
    }
    CHECK(m.fit.r2 >= 0.0);
    CHECK(m.fit.r2 <= 1.0);
    CHECK(m.fit.slope < 0.0);
    CHECK(m.regime == Regime::LogOverTau);
  }

  TEST_CASE("steep initial data: error stays below the transplanted log envelope") {
    const ModelParams p(1.0, 2);
    const InitialData pl = InitialData::power_law(1.0, 3.0);
    const auto grid = geometric_grid(100.0, 3000.0, 12);
    MeasureOptions opts;
    opts.min_decades = 1.4;
    const RateMeasurement m = measure_convergence(2.0, p, pl, grid, opts);
    CHECK(m.compact_regime == Regime::LogOverTau);
    CHECK(m.regime == Regime::PowerLaw);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double log_env = 0.5 * std::log(grid[i]) / grid[i];
      CHECK(m.errors[i] < log_env);
    }
  }

  TEST_CASE("sweep keeps going past failed cells and orders its output") {
    SweepConfig cfg;
    cfg.n = {2, 3};
    cfg.mu = {std::numeric_limits<double>::infinity(), 1.5};
    cfg.eta = {0.5, 0.98, 2.0};
    cfg.tau_min = 50.0;
    cfg.tau_max = 3000.0;
    cfg.tau_points = 10;
    const SweepReport report = sweep(cfg);
    REQUIRE(report.cells.size() == 12);
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      const SweepCell& c = report.cells[i];
      CHECK(c.index == i);
      if (c.eta == 0.98) {
        CHECK_FALSE(c.ok);
        CHECK(c.status == "Config");
      } else {
        CHECK(c.ok);
        CHECK(c.measurement.has_value());
      }
    }
    std::ostringstream a, b;
    write_summary_csv(report, a);
    write_summary_csv(sweep(cfg), b);
    CHECK(a.str() == b.str());

    const auto dir = std::filesystem::temp_directory_path() / "subdep_sweep_test";
    std::filesystem::remove_all(dir);
    write_report(report, dir);
    CHECK(std::filesystem::exists(dir / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "cell_0000.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "cell_0001.csv"));
    std::ifstream in(dir / "summary.csv");
    const csv::Table t = csv::read(in);
    CHECK(t.header.size() >= 8);
    CHECK(t.column("envelope_ratio_median") == 7);
    CHECK(t.rows.size() == 12);
    std::filesystem::remove_all(dir);
  }
}
