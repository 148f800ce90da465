#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "economy.hpp"
#include "experiment.hpp"
#include "solvers.hpp"
#include "textio.hpp"

using namespace offload;
namespace fs = std::filesystem;

namespace {

EconomyConfig two_type_instance() {
  return make_economy_config({1.0, 1.5}, {0.5, 0.5}, 0.01, ValuationKind::square_root());
}

// Fresh empty directory under the test working directory; removed by the
// caller through Cleaner.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

bool header_is(const std::string& content, const std::string& header) {
  return content.rfind(header + "\n", 0) == 0;
}

bool lf_only(const std::string& content) {
  return !content.empty() && content.find('\r') == std::string::npos &&
         content.back() == '\n';
}

std::vector<std::string> data_rows(const std::string& content) {
  std::vector<std::string> rows = split(content, '\n');
  rows.erase(rows.begin());  // header
  while (!rows.empty() && trim(rows.back()).empty()) {
    rows.pop_back();
  }
  return rows;
}

}  // namespace

TEST_CASE("built-in type grids") {
  const EconomyConfig twenty = default_economy(20, 0.01, ValuationKind::square_root());
  REQUIRE(twenty.num_types() == 20);
  CHECK(twenty.theta.front() == 41.0);
  CHECK(twenty.theta.back() == 60.0);
  CHECK(twenty.beta.front() == doctest::Approx(0.05).epsilon(1e-15));

  const EconomyConfig two = default_economy(2, 0.01, ValuationKind::square_root());
  CHECK(two.theta == std::vector<double>{5.0, 6.0});
  const EconomyConfig three = default_economy(3, 0.01, ValuationKind::square_root());
  CHECK(three.theta == std::vector<double>{7.0, 8.0, 9.0});

  CHECK_THROWS_AS(default_economy(0, 0.01, ValuationKind::square_root()),
                  std::invalid_argument);

  // Every built-in grid admits the screening closed form.
  for (std::size_t size = 1; size <= 20; ++size) {
    const EconomyConfig economy = default_economy(size, 0.01, ValuationKind::square_root());
    CHECK_NOTHROW(solve_anti_adverse_selection(economy));
  }
}

TEST_CASE("default experiment shape") {
  const ExperimentConfig config = default_experiment();
  CHECK(config.economy.num_types() == 20);
  CHECK(config.mechanisms.pd);
  CHECK(config.mechanisms.aas);
  CHECK(config.mechanisms.lp);
  REQUIRE(config.sweep_sizes.size() == 19);
  CHECK(config.sweep_sizes.front() == 2);
  CHECK(config.sweep_sizes.back() == 20);
  CHECK(config.output_dir.empty());
  CHECK_FALSE(config.emit_oracle_checks);
}

TEST_CASE("valuation label parsing") {
  CHECK(parse_valuation_label("sqrt").family == ValuationFamily::SquareRoot);
  CHECK(parse_valuation_label(" log1p ").family == ValuationFamily::LogOnePlus);
  const ValuationKind pow = parse_valuation_label("pow:0.25");
  CHECK(pow.family == ValuationFamily::PowerAlpha);
  CHECK(pow.alpha == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(parse_valuation_label("cube"), std::invalid_argument);
  CHECK_THROWS_AS(parse_valuation_label("pow:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_valuation_label("pow:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_valuation_label("pow:1.5"), std::invalid_argument);
}

TEST_CASE("mechanism set parsing") {
  const MechanismSet two = parse_mechanism_set("pd,lp");
  CHECK(two.pd);
  CHECK_FALSE(two.aas);
  CHECK(two.lp);
  CHECK(two.count() == 2);
  CHECK(two.contains(Mechanism::PerfectDiscrimination));
  CHECK_FALSE(two.contains(Mechanism::AntiAdverseSelection));

  const MechanismSet one = parse_mechanism_set(" aas ");
  CHECK(one.count() == 1);
  CHECK(one.aas);

  CHECK_THROWS_AS(parse_mechanism_set("pd,xx"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mechanism_set(""), std::invalid_argument);
}

TEST_CASE("sweep specification parsing") {
  CHECK(parse_sweep_specification("2..5") == std::vector<std::size_t>{2, 3, 4, 5});
  CHECK(parse_sweep_specification("2,5,9") == std::vector<std::size_t>{2, 5, 9});
  CHECK(parse_sweep_specification("3..3") == std::vector<std::size_t>{3});
  CHECK(parse_sweep_specification("2..4,7") == std::vector<std::size_t>{2, 3, 4, 7});
  CHECK_THROWS_AS(parse_sweep_specification("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_specification("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_specification("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_specification("1..b"), std::invalid_argument);
}

TEST_CASE("experiment file loading") {
  TempDir dir("harness_cfg_tmp");

  const std::string full = dir.file("full.cfg");
  write_file_atomic(full,
                    "# comparison setup\n"
                    "\n"
                    "K = 3\n"
                    "c = 0.02\n"
                    "valuation = sqrt\n"
                    "mechanisms = pd,aas\n"
                    "sweep = 2..4\n"
                    "output_dir = figs\n"
                    "emit_oracle_checks = no\n");
  const ExperimentConfig config = load_experiment_file(full);
  CHECK(config.economy.theta == std::vector<double>{7.0, 8.0, 9.0});
  CHECK(config.economy.payment_unit_cost == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(config.mechanisms.pd);
  CHECK(config.mechanisms.aas);
  CHECK_FALSE(config.mechanisms.lp);
  CHECK(config.sweep_sizes == std::vector<std::size_t>{2, 3, 4});
  CHECK(config.output_dir == "figs");
  CHECK_FALSE(config.emit_oracle_checks);

  const std::string custom = dir.file("custom.cfg");
  write_file_atomic(custom, "theta = 1, 1.5\nbeta = 0.25, 0.75\n");
  const ExperimentConfig with_theta = load_experiment_file(custom);
  CHECK(with_theta.economy.theta == std::vector<double>{1.0, 1.5});
  CHECK(with_theta.economy.beta == std::vector<double>{0.25, 0.75});
  CHECK(with_theta.mechanisms.count() == 3);
  CHECK(with_theta.sweep_sizes.empty());

  const std::string uniform = dir.file("uniform.cfg");
  write_file_atomic(uniform, "theta = 1, 2, 4, 8\n");
  const ExperimentConfig defaults = load_experiment_file(uniform);
  REQUIRE(defaults.economy.beta.size() == 4);
  CHECK(defaults.economy.beta[0] == doctest::Approx(0.25).epsilon(1e-15));

  const std::string unknown = dir.file("unknown.cfg");
  write_file_atomic(unknown, "flavor = spicy\n");
  CHECK_THROWS_AS(load_experiment_file(unknown), std::invalid_argument);

  const std::string mismatch = dir.file("mismatch.cfg");
  write_file_atomic(mismatch, "K = 3\ntheta = 1, 2\n");
  CHECK_THROWS_AS(load_experiment_file(mismatch), std::invalid_argument);

  const std::string lengths = dir.file("lengths.cfg");
  write_file_atomic(lengths, "theta = 1, 2\nbeta = 0.2, 0.3, 0.5\n");
  CHECK_THROWS_AS(load_experiment_file(lengths), std::invalid_argument);

  const std::string no_equals = dir.file("noeq.cfg");
  write_file_atomic(no_equals, "just words\n");
  CHECK_THROWS_AS(load_experiment_file(no_equals), std::invalid_argument);

  const std::string bad_bool = dir.file("badbool.cfg");
  write_file_atomic(bad_bool, "emit_oracle_checks = maybe\n");
  CHECK_THROWS_AS(load_experiment_file(bad_bool), std::invalid_argument);

  CHECK_THROWS_AS(load_experiment_file(dir.file("missing.cfg")), std::runtime_error);
}

TEST_CASE("output directory precedence") {
  const char* saved = std::getenv("CONTRACT_OFFLOAD_OUT");
  const std::string saved_value = saved != nullptr ? saved : "";

  unsetenv("CONTRACT_OFFLOAD_OUT");
  CHECK(resolve_output_dir("cli", "cfg") == "cli");
  CHECK(resolve_output_dir("", "cfg") == "cfg");
  CHECK(resolve_output_dir("", "") == ".");

  setenv("CONTRACT_OFFLOAD_OUT", "envdir", 1);
  CHECK(resolve_output_dir("cli", "cfg") == "cli");
  CHECK(resolve_output_dir("", "cfg") == "envdir");
  CHECK(resolve_output_dir("", "") == "envdir");

  setenv("CONTRACT_OFFLOAD_OUT", "", 1);  // empty counts as unset
  CHECK(resolve_output_dir("", "cfg") == "cfg");

  if (saved != nullptr) {
    setenv("CONTRACT_OFFLOAD_OUT", saved_value.c_str(), 1);
  } else {
    unsetenv("CONTRACT_OFFLOAD_OUT");
  }
}

TEST_CASE("experiment computation freezes the two-type comparison") {
  ExperimentConfig config;
  config.economy = two_type_instance();

  const ExperimentResult result = compute_experiment(config);
  REQUIRE(result.table.mechanisms.size() == 3);
  CHECK(result.table.expected_bs[0] == doctest::Approx(40.625).epsilon(1e-12));
  CHECK(result.table.expected_bs[1] == doctest::Approx(31.25).epsilon(1e-12));
  CHECK(result.table.expected_bs[2] == doctest::Approx(10.15625).epsilon(1e-9));

  REQUIRE(result.lp_solution.has_value());
  CHECK(result.lp_solution->unit_price == doctest::Approx(0.02).epsilon(1e-9));

  REQUIRE(result.reports.size() == 3);
  for (const FeasibilityReport& report : result.reports) {
    CHECK(report.feasible());
  }

  REQUIRE(result.aas_selection.size() == 2);
  CHECK(result.aas_selection[1][0] == doctest::Approx(12.5).epsilon(1e-12));

  CHECK(result.sweep.empty());
  CHECK(result.crossover_note.empty());
  CHECK(result.oracle_checks.empty());

  CHECK(result.summary.find("types: 2") != std::string::npos);
  CHECK(result.summary.find("mechanisms: pd aas lp") != std::string::npos);
  CHECK(result.summary.find("feasibility: pd=ok aas=ok lp=ok") != std::string::npos);
  CHECK(result.summary.find("posted price: ") != std::string::npos);
}

TEST_CASE("experiment rejects an empty mechanism selection") {
  ExperimentConfig config;
  config.economy = two_type_instance();
  config.mechanisms.pd = config.mechanisms.aas = config.mechanisms.lp = false;
  CHECK_THROWS_AS(compute_experiment(config), std::invalid_argument);
}

TEST_CASE("figure tables use the fixed schemas") {
  TempDir dir("harness_fig_tmp");
  ExperimentConfig config;
  config.economy = two_type_instance();
  config.output_dir = dir.path.string();

  const ExperimentResult result = run_experiment(config);

  const std::string menus = read_file(dir.file("contract_menus.csv"));
  CHECK(header_is(menus, "k,theta,T_pd,T_aas,T_lp,q_pd,q_aas,q_lp"));
  CHECK(lf_only(menus));
  const std::vector<std::string> rows = data_rows(menus);
  REQUIRE(rows.size() == 2);
  const std::vector<std::string> first = split(rows[0], ',');
  REQUIRE(first.size() == 8);
  CHECK(first[0] == "1");
  double parsed = 0.0;
  REQUIRE(parse_double(first[2], parsed));
  // %.17g output round-trips doubles exactly.
  CHECK(parsed == result.pd->bundles[0].payment);
  REQUIRE(parse_double(first[3], parsed));
  CHECK(parsed == result.aas->bundles[0].payment);
  REQUIRE(parse_double(first[7], parsed));
  CHECK(parsed == result.lp->bundles[0].traffic);

  const std::string bs = read_file(dir.file("payoffs_bs.csv"));
  CHECK(header_is(bs, "k,theta,u_pd,u_aas,u_lp"));
  CHECK(lf_only(bs));

  const std::string ap = read_file(dir.file("payoffs_ap.csv"));
  CHECK(header_is(ap, "k,theta,v_pd,v_aas,v_lp"));

  const std::string welfare = read_file(dir.file("welfare.csv"));
  CHECK(header_is(welfare, "k,theta,welfare_pd,welfare_aas,welfare_lp"));

  const std::string selection = read_file(dir.file("selection_payoffs.csv"));
  CHECK(header_is(selection, "k,theta,payoff_at_1,payoff_at_2"));
  CHECK(data_rows(selection).size() == 2);

  const std::string summary = read_file(dir.file("summary.txt"));
  CHECK(summary == result.summary);

  CHECK_FALSE(fs::exists(dir.file("sweep.csv")));
  CHECK_FALSE(fs::exists(dir.file("oracle_checks.csv")));
}

TEST_CASE("mechanism subsets drop columns but keep the order") {
  TempDir dir("harness_subset_tmp");
  ExperimentConfig config;
  config.economy = two_type_instance();
  config.mechanisms.pd = false;
  config.output_dir = dir.path.string();

  const ExperimentResult result = run_experiment(config);
  REQUIRE(result.table.mechanisms.size() == 2);
  CHECK(result.table.mechanisms[0] == Mechanism::AntiAdverseSelection);
  CHECK(result.table.mechanisms[1] == Mechanism::LinearPricing);
  CHECK_FALSE(result.pd.has_value());

  CHECK(header_is(read_file(dir.file("contract_menus.csv")), "k,theta,T_aas,T_lp,q_aas,q_lp"));
  CHECK(header_is(read_file(dir.file("payoffs_bs.csv")), "k,theta,u_aas,u_lp"));
  CHECK(result.summary.find("[pd]") == std::string::npos);

  ExperimentConfig lp_only;
  lp_only.economy = two_type_instance();
  lp_only.mechanisms.pd = lp_only.mechanisms.aas = false;
  const ExperimentResult lp_result = compute_experiment(lp_only);
  CHECK(lp_result.table.mechanisms.size() == 1);
  CHECK(lp_result.aas_selection.empty());
}

TEST_CASE("sweep rows rebuild the built-in grid per size") {
  ExperimentConfig config;
  config.economy = default_economy(3, 0.01, ValuationKind::square_root());
  config.sweep_sizes = {2, 3};

  const ExperimentResult result = compute_experiment(config);
  REQUIRE(result.sweep.size() == 2);

  const SweepRow& row = result.sweep[0];
  CHECK(row.num_types == 2);
  REQUIRE(row.expected_bs.size() == 3);
  CHECK(row.expected_bs[0] == doctest::Approx(762.5).epsilon(1e-12));
  CHECK(row.expected_bs[1] == doctest::Approx(650.0).epsilon(1e-12));
  CHECK(row.expected_bs[2] == doctest::Approx(190.625).epsilon(1e-12));
  CHECK(row.expected_ap[0] == 0.0);
  CHECK(row.expected_ap[1] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(row.expected_ap[2] == doctest::Approx(381.25).epsilon(1e-12));
  CHECK(row.expected_welfare[0] == doctest::Approx(762.5).epsilon(1e-12));
  CHECK(row.expected_welfare[1] == doctest::Approx(750.0).epsilon(1e-12));
  CHECK(row.expected_welfare[2] == doctest::Approx(571.875).epsilon(1e-12));

  // The K = 3 row must match solving that economy directly.
  const SweepRow& row3 = result.sweep[1];
  CHECK(row3.num_types == 3);
  CHECK(row3.expected_bs[0] == doctest::Approx(4850.0 / 3.0).epsilon(1e-12));
  CHECK(row3.expected_bs[1] == doctest::Approx(3875.0 / 3.0).epsilon(1e-12));

  CHECK(result.crossover_note ==
        "AP rent crossover: not observed (screening rents stay below posted-price rents "
        "for every swept size)");
  CHECK(result.summary.find("AP rent crossover") != std::string::npos);
  CHECK(result.summary.find("sweep sizes: 2..3 (2 rows)") != std::string::npos);
}

TEST_CASE("sweep table layout") {
  TempDir dir("harness_sweep_tmp");
  ExperimentConfig config;
  config.economy = default_economy(2, 0.01, ValuationKind::square_root());
  config.sweep_sizes = {2, 3, 4};
  config.output_dir = dir.path.string();

  run_experiment(config);
  const std::string sweep = read_file(dir.file("sweep.csv"));
  CHECK(header_is(sweep,
                  "K,expected_u_pd,expected_u_aas,expected_u_lp,expected_v_pd,expected_v_aas,"
                  "expected_v_lp,welfare_pd,welfare_aas,welfare_lp"));
  const std::vector<std::string> rows = data_rows(sweep);
  REQUIRE(rows.size() == 3);
  const std::vector<std::string> first = split(rows[0], ',');
  REQUIRE(first.size() == 10);
  CHECK(first[0] == "2");
  double value = 0.0;
  REQUIRE(parse_double(first[1], value));
  CHECK(value == doctest::Approx(762.5).epsilon(1e-12));
  REQUIRE(parse_double(first[2], value));
  CHECK(value == doctest::Approx(650.0).epsilon(1e-12));
}

TEST_CASE("menu files round-trip exactly") {
  TempDir dir("harness_menu_tmp");
  const EconomyConfig config = two_type_instance();
  const ContractMenu menu = solve_anti_adverse_selection(config);

  const std::string path = dir.file("menu_aas.csv");
  write_menu_csv(menu, path);
  const std::string text = read_file(path);
  CHECK(header_is(text, "k,T,q"));
  CHECK(lf_only(text));

  const ContractMenu loaded = read_menu_csv(path, Mechanism::AntiAdverseSelection);
  CHECK(loaded.mechanism == Mechanism::AntiAdverseSelection);
  REQUIRE(loaded.bundles.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(loaded.bundles[k].payment == menu.bundles[k].payment);
    CHECK(loaded.bundles[k].traffic == menu.bundles[k].traffic);
  }

  const std::string bad_header = dir.file("bad_header.csv");
  write_file_atomic(bad_header, "T,q\n1,2\n");
  CHECK_THROWS_AS(read_menu_csv(bad_header, Mechanism::AntiAdverseSelection),
                  std::invalid_argument);

  const std::string bad_order = dir.file("bad_order.csv");
  write_file_atomic(bad_order, "k,T,q\n1,625,25\n3,5625,100\n");
  CHECK_THROWS_AS(read_menu_csv(bad_order, Mechanism::AntiAdverseSelection),
                  std::invalid_argument);

  const std::string empty = dir.file("empty.csv");
  write_file_atomic(empty, "k,T,q\n");
  CHECK_THROWS_AS(read_menu_csv(empty, Mechanism::AntiAdverseSelection),
                  std::invalid_argument);

  const std::string words = dir.file("words.csv");
  write_file_atomic(words, "k,T,q\n1,lots,little\n");
  CHECK_THROWS_AS(read_menu_csv(words, Mechanism::AntiAdverseSelection),
                  std::invalid_argument);

  CHECK_THROWS_AS(read_menu_csv(dir.file("missing.csv"), Mechanism::AntiAdverseSelection),
                  std::runtime_error);
}

TEST_CASE("solver-versus-scan battery passes on the built-in instances") {
  TempDir dir("harness_oracle_tmp");
  const std::vector<OracleCheckRow> rows =
      run_oracle_checks(default_economy(2, 0.01, ValuationKind::square_root()));
  REQUIRE(rows.size() == 6);
  for (const OracleCheckRow& row : rows) {
    CAPTURE(row.name);
    CAPTURE(row.relative_gap);
    CHECK(row.pass);
    CHECK(row.relative_gap <= row.tolerance);
  }

  const std::string path = dir.file("oracle_checks.csv");
  write_oracle_check_csv(rows, path);
  const std::string text = read_file(path);
  CHECK(header_is(text, "check,solver_value,oracle_value,relative_gap,tolerance,pass"));
  CHECK(data_rows(text).size() == 6);
  CHECK(text.find("screening-objective-2types-binding") != std::string::npos);
  CHECK(text.find("posted-price-3types") != std::string::npos);
}

TEST_CASE("figure emission is byte-identical across runs") {
  TempDir first("harness_det_a");
  TempDir second("harness_det_b");

  ExperimentConfig config;
  config.economy = default_economy(4, 0.01, ValuationKind::square_root());
  config.sweep_sizes = {2, 3, 4};

  config.output_dir = first.path.string();
  run_experiment(config);
  config.output_dir = second.path.string();
  run_experiment(config);

  const char* files[] = {"contract_menus.csv", "payoffs_bs.csv", "payoffs_ap.csv",
                         "welfare.csv",        "selection_payoffs.csv",
                         "sweep.csv",          "summary.txt"};
  for (const char* name : files) {
    CAPTURE(name);
    CHECK(read_file(first.file(name)) == read_file(second.file(name)));
  }
}
