#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "economy.hpp"
#include "solvers.hpp"
#include "textio.hpp"
#include "verifier.hpp"

using namespace offload;

namespace {

EconomyConfig two_type_instance() {
  return make_economy_config({1.0, 1.5}, {0.5, 0.5}, 0.01, ValuationKind::square_root());
}

}  // namespace

TEST_CASE("screening menu verifies feasible with the frozen slack structure") {
  const EconomyConfig config = two_type_instance();
  const ContractMenu menu = solve_anti_adverse_selection(config);
  const FeasibilityReport report = verify_menu(menu, config);

  CHECK(report.mechanism == Mechanism::AntiAdverseSelection);
  CHECK(report.feasible());
  CHECK(report.worst_violation == 0.0);
  CHECK(report.self_revealing);
  CHECK(report.payments_strictly_increasing);
  CHECK(report.traffic_strictly_increasing);
  CHECK_FALSE(report.degenerate_menu);
  CHECK_FALSE(report.zero_information_rent);

  REQUIRE(report.ir_slack.size() == 2);
  CHECK(report.ir_slack[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.ir_slack[1] == doctest::Approx(12.5).epsilon(1e-12));

  REQUIRE(report.ic_slack.size() == 2);
  // Diagonal entries are exactly zero by definition, not merely small.
  CHECK(report.ic_slack[0][0] == 0.0);
  CHECK(report.ic_slack[1][1] == 0.0);
  // Type 1 at the big bundle: 1 * 75 - 100 = -25, so slack 0 - (-25) = 25.
  CHECK(report.ic_slack[0][1] == doctest::Approx(25.0).epsilon(1e-12));
  // Type 2's downward constraint binds: 1.5 * 25 - 25 = 12.5 on both bundles.
  CHECK(report.ic_slack[1][0] == doctest::Approx(0.0).epsilon(1e-12));

  REQUIRE(report.preferred_bundle.size() == 2);
  CHECK(report.preferred_bundle[0] == 0);
  CHECK(report.preferred_bundle[1] == 1);  // exact tie resolved toward own bundle
}

TEST_CASE("selection payoff matrix matches the frozen two-type values") {
  const EconomyConfig config = two_type_instance();
  const ContractMenu menu = solve_anti_adverse_selection(config);
  const std::vector<std::vector<double>> payoffs = selection_payoffs(menu, config);
  REQUIRE(payoffs.size() == 2);
  REQUIRE(payoffs[0].size() == 2);
  CHECK(payoffs[0][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(payoffs[0][1] == doctest::Approx(-25.0).epsilon(1e-12));
  CHECK(payoffs[1][0] == doctest::Approx(12.5).epsilon(1e-12));
  CHECK(payoffs[1][1] == doctest::Approx(12.5).epsilon(1e-12));
  for (const std::vector<double>& row : payoffs) {
    CHECK(payoff_unimodal(row));
  }
}

TEST_CASE("zero-payoff menu passes its own gate but fails the screening gate") {
  const EconomyConfig config = two_type_instance();
  ContractMenu menu = solve_perfect_discrimination(config);

  const FeasibilityReport as_pd = verify_menu(menu, config);
  CHECK(as_pd.feasible());
  CHECK(as_pd.zero_information_rent);
  // The high type envies the low type's bundle, but participation is the only
  // promise this mechanism makes.
  CHECK(as_pd.ic_slack[1][0] < 0.0);
  CHECK_FALSE(as_pd.self_revealing);

  menu.mechanism = Mechanism::AntiAdverseSelection;
  const FeasibilityReport as_screening = verify_menu(menu, config);
  CHECK_FALSE(as_screening.feasible());
  // Type 2 gains 1.5 * 50 - 50 = 25 by taking type 1's bundle instead of 0.
  CHECK(as_screening.worst_violation == doctest::Approx(25.0).epsilon(1e-9));
}

TEST_CASE("posted-price menu verifies against participation and swaps") {
  const EconomyConfig config = two_type_instance();
  const LinearPricingSolution solution = solve_linear_pricing(config);
  const FeasibilityReport report = verify_menu(solution.menu, config);
  CHECK(report.mechanism == Mechanism::LinearPricing);
  CHECK(report.feasible());
  // Self-selection from a posted price leaves every type strictly better off
  // on its own volume.
  CHECK(report.self_revealing);
  CHECK(report.ir_slack[0] == doctest::Approx(12.5).epsilon(1e-9));
  CHECK(report.ir_slack[1] == doctest::Approx(28.125).epsilon(1e-9));
}

TEST_CASE("tampered traffic becomes a participation violation") {
  const EconomyConfig config = two_type_instance();
  ContractMenu menu = solve_anti_adverse_selection(config);
  menu.bundles[0].traffic += 3.0;  // type 1 now pays for more than its value
  const FeasibilityReport report = verify_menu(menu, config);
  CHECK_FALSE(report.feasible());
  CHECK(report.ir_slack[0] == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(report.worst_violation == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("tampered payment order trips the monotonicity gate") {
  const EconomyConfig config = two_type_instance();
  ContractMenu menu = solve_anti_adverse_selection(config);
  std::swap(menu.bundles[0], menu.bundles[1]);
  const FeasibilityReport report = verify_menu(menu, config);
  CHECK_FALSE(report.payments_strictly_increasing);
  CHECK_FALSE(report.feasible());
}

TEST_CASE("payoff rows classified as single-peaked or not") {
  CHECK(payoff_unimodal({1.0, 2.0, 3.0}));
  CHECK(payoff_unimodal({3.0, 2.0, 1.0}));
  CHECK(payoff_unimodal({1.0, 3.0, 2.0}));
  CHECK_FALSE(payoff_unimodal({3.0, 1.0, 2.0}));
  CHECK(payoff_unimodal({1.0, 1.0, 1.0}));
  CHECK(payoff_unimodal({1.0, 2.0, 2.0, 1.0}));
  CHECK_FALSE(payoff_unimodal({2.0, 1.0, 1.0, 2.0}));
  CHECK(payoff_unimodal({5.0}));
  CHECK(payoff_unimodal({}));
  // Dips inside the tie window count as flat, not as a descent.
  CHECK(payoff_unimodal({1.0, 1.0 - 1e-12, 2.0}));
}

TEST_CASE("single-type menus are trivially monotone") {
  const EconomyConfig config =
      make_economy_config({2.0}, {1.0}, 0.01, ValuationKind::square_root());
  const ContractMenu menu = solve_anti_adverse_selection(config);
  const FeasibilityReport report = verify_menu(menu, config);
  CHECK(report.feasible());
  CHECK(report.payments_strictly_increasing);
  CHECK(report.traffic_strictly_increasing);
  CHECK(report.self_revealing);
}

TEST_CASE("equal bundles are flagged degenerate and non-monotone") {
  const EconomyConfig config = two_type_instance();
  ContractMenu menu;
  menu.mechanism = Mechanism::AntiAdverseSelection;
  menu.bundles = {ContractBundle{100.0, 5.0}, ContractBundle{100.0, 5.0}};
  const FeasibilityReport report = verify_menu(menu, config);
  CHECK(report.degenerate_menu);
  CHECK_FALSE(report.payments_strictly_increasing);
  CHECK_FALSE(report.feasible());
}

TEST_CASE("payoff table freezes the three-mechanism comparison") {
  const EconomyConfig config = two_type_instance();
  const ContractMenu pd = solve_perfect_discrimination(config);
  const ContractMenu aas = solve_anti_adverse_selection(config);
  const LinearPricingSolution lp = solve_linear_pricing(config);
  const PayoffTable table = payoff_table(&pd, &aas, &lp.menu, config);

  REQUIRE(table.mechanisms.size() == 3);
  CHECK(table.mechanisms[0] == Mechanism::PerfectDiscrimination);
  CHECK(table.mechanisms[1] == Mechanism::AntiAdverseSelection);
  CHECK(table.mechanisms[2] == Mechanism::LinearPricing);

  // Perfect discrimination: BS keeps the whole surplus.
  CHECK(table.bs_payoff[0][0] == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(table.bs_payoff[0][1] == doctest::Approx(56.25).epsilon(1e-12));
  CHECK(table.expected_bs[0] == doctest::Approx(40.625).epsilon(1e-12));
  CHECK(table.expected_ap[0] == doctest::Approx(0.0).epsilon(1e-12));

  // Screening menu: rents lower the BS take.
  CHECK(table.bs_payoff[1][0] == doctest::Approx(18.75).epsilon(1e-12));
  CHECK(table.bs_payoff[1][1] == doctest::Approx(43.75).epsilon(1e-12));
  CHECK(table.expected_bs[1] == doctest::Approx(31.25).epsilon(1e-12));
  CHECK(table.ap_payoff[1][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(table.ap_payoff[1][1] == doctest::Approx(12.5).epsilon(1e-12));

  // Posted price: P = 2c, volumes 625 and 1406.25.
  CHECK(table.bs_payoff[2][0] == doctest::Approx(6.25).epsilon(1e-9));
  CHECK(table.bs_payoff[2][1] == doctest::Approx(14.0625).epsilon(1e-9));
  CHECK(table.expected_bs[2] == doctest::Approx(10.15625).epsilon(1e-9));
  CHECK(table.ap_payoff[2][0] == doctest::Approx(12.5).epsilon(1e-9));
  CHECK(table.ap_payoff[2][1] == doctest::Approx(28.125).epsilon(1e-9));

  // Welfare columns are the sum of the two sides.
  for (std::size_t column = 0; column < 3; ++column) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(table.welfare[column][k] ==
            doctest::Approx(table.ap_payoff[column][k] + table.bs_payoff[column][k])
                .epsilon(1e-12));
    }
    CHECK(table.expected_welfare[column] ==
          doctest::Approx(table.expected_ap[column] + table.expected_bs[column])
              .epsilon(1e-12));
  }
}

TEST_CASE("payoff table skips absent menus but keeps the column order") {
  const EconomyConfig config = two_type_instance();
  const ContractMenu aas = solve_anti_adverse_selection(config);
  const LinearPricingSolution lp = solve_linear_pricing(config);
  const PayoffTable table = payoff_table(nullptr, &aas, &lp.menu, config);
  REQUIRE(table.mechanisms.size() == 2);
  CHECK(table.mechanisms[0] == Mechanism::AntiAdverseSelection);
  CHECK(table.mechanisms[1] == Mechanism::LinearPricing);
  CHECK(table.expected_bs[0] == doctest::Approx(31.25).epsilon(1e-12));
}

TEST_CASE("report summary names the outcome") {
  const EconomyConfig config = two_type_instance();
  const ContractMenu menu = solve_anti_adverse_selection(config);
  const FeasibilityReport report = verify_menu(menu, config);
  const std::string summary = format_report_summary(report);
  CHECK(summary.find("anti-adverse-selection") != std::string::npos);
  CHECK(summary.find("FEASIBLE") != std::string::npos);
  CHECK(summary.find("self-revealing") != std::string::npos);

  ContractMenu broken = menu;
  broken.bundles[0].traffic += 3.0;
  const std::string bad = format_report_summary(verify_menu(broken, config));
  CHECK(bad.find("INFEASIBLE") != std::string::npos);
}

TEST_CASE("report CSV uses the fixed header and LF endings") {
  const EconomyConfig config = two_type_instance();
  const FeasibilityReport report = verify_menu(solve_anti_adverse_selection(config), config);
  const std::string path = "verifier_report_test.csv";
  write_report_csv(report, path);
  const std::string text = read_file(path);
  std::remove(path.c_str());
  CHECK(text.rfind("k,ir_slack,min_ic_slack,preferred_bundle,truthful\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  // One header plus one row per type.
  std::size_t lines = 0;
  for (char ch : text) {
    lines += ch == '\n' ? 1 : 0;
  }
  CHECK(lines == 3);
}

TEST_CASE("menu size must match the economy") {
  const EconomyConfig config = two_type_instance();
  ContractMenu menu = solve_anti_adverse_selection(config);
  menu.bundles.pop_back();
  CHECK_THROWS_AS(verify_menu(menu, config), std::invalid_argument);
  CHECK_THROWS_AS(selection_payoffs(menu, config), std::invalid_argument);
  CHECK_THROWS_AS(payoff_table(nullptr, &menu, nullptr, config), std::invalid_argument);
}
