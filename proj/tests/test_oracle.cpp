#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "economy.hpp"
#include "oracle.hpp"

using namespace offload;

namespace {

EconomyConfig two_type_instance() {
  return make_economy_config({1.0, 1.5}, {0.5, 0.5}, 0.01, ValuationKind::square_root());
}

double relative_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0e-300, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_CASE("grid specification validation") {
  GridSpec grid;
  CHECK_NOTHROW(grid.validate());

  GridSpec bad = grid;
  bad.t_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = grid;
  bad.t_max = bad.t_min;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = grid;
  bad.points_per_axis = 8;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = grid;
  bad.refinement_rounds = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("zero-payoff scan finds the single-type optimum") {
  // theta = 1, c = 0.01, sqrt valuation: optimum at payment 2500 with
  // objective sqrt(2500) - 0.01 * 2500 = 25.
  const EconomyConfig config =
      make_economy_config({1.0}, {1.0}, 0.01, ValuationKind::square_root());
  GridSpec grid;
  grid.points_per_axis = 48;
  grid.refinement_rounds = 6;
  const OracleSolution solution = oracle_perfect_discrimination(config, grid);
  CHECK(relative_gap(solution.objective, 25.0) < 1e-8);
  CHECK(relative_gap(solution.menu.bundles[0].payment, 2500.0) < 1e-3);
  // The traffic extracted equals the full valuation of the scanned payment.
  CHECK(solution.menu.bundles[0].traffic ==
        doctest::Approx(valuation(config.valuation, solution.menu.bundles[0].payment))
            .epsilon(1e-12));
  CHECK(solution.menu.mechanism == Mechanism::PerfectDiscrimination);
}

TEST_CASE("zero-payoff scan reports boundary maximizers") {
  const EconomyConfig config =
      make_economy_config({1.0}, {1.0}, 0.01, ValuationKind::square_root());
  GridSpec too_low;
  too_low.t_max = 100.0;  // optimum 2500 sits beyond the box
  CHECK_THROWS_AS(oracle_perfect_discrimination(config, too_low), GridBoundaryError);
  GridSpec too_high;
  too_high.t_min = 1e4;  // optimum 2500 sits below the box
  too_high.t_max = 1e9;
  CHECK_THROWS_AS(oracle_perfect_discrimination(config, too_high), GridBoundaryError);
}

TEST_CASE("posted-price scan matches the square-root closed form") {
  // Square-root valuations put the profit-maximizing price at twice the
  // cost, independent of the type distribution.
  const EconomyConfig config = two_type_instance();
  const PriceScanResult scan = oracle_linear_pricing(config, 1.0, 64, 6);
  CHECK(relative_gap(scan.price, 0.02) < 1e-4);
  // Expected demand at that price is 0.5 * 625 + 0.5 * 1406.25 = 1015.625,
  // so profit is 0.01 * 1015.625.
  CHECK(relative_gap(scan.profit, 10.15625) < 1e-6);
}

TEST_CASE("posted-price scan matches the log valuation closed form") {
  // v = log(1 + T): per-type demand theta/P - 1, so the optimal price is
  // sqrt(c * E[theta]) whenever that is below the lowest type.
  const EconomyConfig config =
      make_economy_config({2.0, 4.0}, {0.5, 0.5}, 0.01, ValuationKind::log_one_plus());
  const PriceScanResult scan = oracle_linear_pricing(config, 1.5, 64, 6);
  CHECK(relative_gap(scan.price, std::sqrt(0.01 * 3.0)) < 1e-4);
}

TEST_CASE("posted-price scan error paths") {
  const EconomyConfig config = two_type_instance();
  // The optimum (0.02) lies beyond the scanned range.
  CHECK_THROWS_AS(oracle_linear_pricing(config, 0.015, 64, 4), GridBoundaryError);
  // Demand is undefined for every price above cost: log valuation with the
  // lowest type below the cost.
  const EconomyConfig hopeless =
      make_economy_config({0.005}, {1.0}, 0.01, ValuationKind::log_one_plus());
  CHECK_THROWS_AS(oracle_linear_pricing(hopeless, 1.0, 64, 4), DegenerateMarketError);
  CHECK_THROWS_AS(oracle_linear_pricing(config, 1.0, 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(oracle_linear_pricing(config, 1.0, 64, 0), std::invalid_argument);
}

TEST_CASE("screening scan, binding structure, two types") {
  // Frozen instance: theta = (1, 1.5), uniform weights, c = 0.01, sqrt.
  // Optimal menu: payments (625, 5625), traffic (25, 100), objective 31.25.
  const EconomyConfig config = two_type_instance();
  GridSpec grid;
  grid.points_per_axis = 48;
  grid.refinement_rounds = 8;
  const OracleSolution solution =
      oracle_anti_adverse_selection(config, grid, OracleMode::BindingStructure);
  CHECK(relative_gap(solution.objective, 31.25) < 1e-3);
  CHECK(relative_gap(solution.menu.bundles[0].payment, 625.0) < 1e-2);
  CHECK(relative_gap(solution.menu.bundles[1].payment, 5625.0) < 1e-2);
  CHECK(relative_gap(solution.menu.bundles[0].traffic, 25.0) < 1e-2);
  CHECK(relative_gap(solution.menu.bundles[1].traffic, 100.0) < 1e-2);
  CHECK(solution.menu.mechanism == Mechanism::AntiAdverseSelection);
}

TEST_CASE("screening scan, full grid, two types") {
  const EconomyConfig config = two_type_instance();
  GridSpec grid;
  // Payment box from first principles: no mechanism pays past the
  // efficient point of the keenest type, v'(T) = c / theta_2.
  grid.t_min = 1.0;
  grid.t_max = 1.05 * inverse_marginal_valuation(config.valuation, 0.01 / 1.5);
  grid.points_per_axis = 24;
  grid.refinement_rounds = 8;
  const OracleSolution solution =
      oracle_anti_adverse_selection(config, grid, OracleMode::FullGrid);
  CHECK(relative_gap(solution.objective, 31.25) < 5e-3);
}

TEST_CASE("screening scan, binding structure, three types") {
  // theta = (7, 8, 9), uniform, c = 0.01, sqrt: payments (62500, 122500,
  // 202500), traffic (1750, 2550, 3450), objective 3875/3.
  const EconomyConfig config = make_economy_config({7.0, 8.0, 9.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                                                   0.01, ValuationKind::square_root());
  GridSpec grid;
  grid.points_per_axis = 32;
  grid.refinement_rounds = 8;
  const OracleSolution solution =
      oracle_anti_adverse_selection(config, grid, OracleMode::BindingStructure);
  CHECK(relative_gap(solution.objective, 3875.0 / 3.0) < 1e-3);
  CHECK(relative_gap(solution.menu.bundles[0].payment, 62500.0) < 2e-2);
  CHECK(relative_gap(solution.menu.bundles[2].payment, 202500.0) < 2e-2);
}

TEST_CASE("screening scan rejects more than three types") {
  const EconomyConfig config = make_economy_config({1.0, 1.5, 2.2, 3.4}, {0.25, 0.25, 0.25, 0.25},
                                                   0.01, ValuationKind::square_root());
  GridSpec grid;
  CHECK_THROWS_AS(oracle_anti_adverse_selection(config, grid, OracleMode::BindingStructure),
                  std::invalid_argument);
}

TEST_CASE("screening scan rejects oversized grids") {
  const EconomyConfig config = make_economy_config({7.0, 8.0, 9.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3},
                                                   0.01, ValuationKind::square_root());
  GridSpec grid;
  grid.points_per_axis = 48;  // 48^6 full-grid evaluations per round
  CHECK_THROWS_AS(oracle_anti_adverse_selection(config, grid, OracleMode::FullGrid),
                  std::invalid_argument);
}

TEST_CASE("scans are deterministic") {
  const EconomyConfig config = two_type_instance();
  GridSpec grid;
  grid.points_per_axis = 32;
  grid.refinement_rounds = 5;
  const OracleSolution first =
      oracle_anti_adverse_selection(config, grid, OracleMode::BindingStructure);
  const OracleSolution second =
      oracle_anti_adverse_selection(config, grid, OracleMode::BindingStructure);
  CHECK(first.objective == second.objective);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(first.menu.bundles[k].payment == second.menu.bundles[k].payment);
    CHECK(first.menu.bundles[k].traffic == second.menu.bundles[k].traffic);
  }
  const PriceScanResult price_one = oracle_linear_pricing(config, 1.0, 48, 4);
  const PriceScanResult price_two = oracle_linear_pricing(config, 1.0, 48, 4);
  CHECK(price_one.price == price_two.price);
  CHECK(price_one.profit == price_two.profit);
}
