#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "textio.hpp"

namespace offload {

namespace {

double relative_gap(double reference, double other) {
  const double scale = std::max({1e-300, std::fabs(reference), std::fabs(other)});
  return std::fabs(reference - other) / scale;
}

double ordering_tolerance(double scale) { return 1e-9 * std::max(1.0, std::fabs(scale)); }

}  // namespace

bool MechanismSet::contains(Mechanism mechanism) const {
  switch (mechanism) {
    case Mechanism::PerfectDiscrimination:
      return pd;
    case Mechanism::AntiAdverseSelection:
      return aas;
    case Mechanism::LinearPricing:
      return lp;
  }
  return false;
}

MechanismSet parse_mechanism_set(const std::string& text) {
  MechanismSet set;
  set.pd = set.aas = set.lp = false;
  for (const std::string& raw : split(text, ',')) {
    const std::string tag = trim(raw);
    if (tag == "pd") {
      set.pd = true;
    } else if (tag == "aas") {
      set.aas = true;
    } else if (tag == "lp") {
      set.lp = true;
    } else {
      throw std::invalid_argument("unknown mechanism tag '" + tag +
                                  "' (expected pd, aas, or lp)");
    }
  }
  if (set.count() == 0) {
    throw std::invalid_argument("mechanism list is empty");
  }
  return set;
}

ValuationKind parse_valuation_label(const std::string& text) {
  const std::string label = trim(text);
  if (label == "sqrt") {
    return ValuationKind::square_root();
  }
  if (label == "log1p") {
    return ValuationKind::log_one_plus();
  }
  if (label.rfind("pow:", 0) == 0) {
    double alpha = 0.0;
    if (!parse_double(label.substr(4), alpha)) {
      throw std::invalid_argument("bad exponent in valuation '" + label + "'");
    }
    return ValuationKind::power(alpha);
  }
  throw std::invalid_argument("unknown valuation '" + label +
                              "' (expected sqrt, log1p, or pow:<alpha>)");
}

EconomyConfig default_economy(std::size_t num_types, double payment_unit_cost,
                              ValuationKind kind) {
  if (num_types == 0) {
    throw std::invalid_argument("need at least one type");
  }
  std::vector<double> theta(num_types), beta(num_types);
  for (std::size_t k = 0; k < num_types; ++k) {
    theta[k] = static_cast<double>(2 * num_types + k + 1);
    beta[k] = 1.0 / static_cast<double>(num_types);
  }
  return make_economy_config(std::move(theta), std::move(beta), payment_unit_cost, kind);
}

ExperimentConfig default_experiment() {
  ExperimentConfig config;
  config.economy = default_economy(20, 0.01, ValuationKind::square_root());
  config.mechanisms = MechanismSet::all();
  for (std::size_t size = 2; size <= 20; ++size) {
    config.sweep_sizes.push_back(size);
  }
  return config;
}

std::vector<std::size_t> parse_sweep_specification(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const std::string& raw : split(text, ',')) {
    const std::string token = trim(raw);
    const std::size_t dots = token.find("..");
    if (dots != std::string::npos) {
      std::size_t lo = 0, hi = 0;
      if (!parse_size(trim(token.substr(0, dots)), lo) ||
          !parse_size(trim(token.substr(dots + 2)), hi) || lo == 0 || hi < lo) {
        throw std::invalid_argument("bad sweep range '" + token + "'");
      }
      for (std::size_t size = lo; size <= hi; ++size) {
        sizes.push_back(size);
      }
    } else {
      std::size_t size = 0;
      if (!parse_size(token, size) || size == 0) {
        throw std::invalid_argument("bad sweep entry '" + token + "'");
      }
      sizes.push_back(size);
    }
  }
  return sizes;
}

namespace {

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "1" || text == "true" || text == "yes") {
    return true;
  }
  if (text == "0" || text == "false" || text == "no") {
    return false;
  }
  throw std::invalid_argument("bad boolean for '" + key + "': " + text);
}

}  // namespace

ExperimentConfig load_experiment_file(const std::string& path) {
  const std::string content = read_file(path);

  std::size_t num_types = 0;
  bool have_num_types = false;
  double cost = 0.01;
  ValuationKind kind = ValuationKind::square_root();
  std::vector<double> theta, beta;
  MechanismSet mechanisms;
  std::vector<std::size_t> sweep_sizes;
  std::string output_dir;
  bool emit_oracle_checks = false;

  std::size_t line_number = 0;
  for (const std::string& raw_line : split(content, '\n')) {
    ++line_number;
    const std::string line = trim(raw_line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const std::size_t equals = line.find('=');
    if (equals == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, equals));
    const std::string value = trim(line.substr(equals + 1));
    if (key == "K") {
      if (!parse_size(value, num_types) || num_types == 0) {
        throw std::invalid_argument("bad K: " + value);
      }
      have_num_types = true;
    } else if (key == "c") {
      if (!parse_double(value, cost)) {
        throw std::invalid_argument("bad c: " + value);
      }
    } else if (key == "valuation") {
      kind = parse_valuation_label(value);
    } else if (key == "theta") {
      theta = parse_double_list(value, "theta");
    } else if (key == "beta") {
      beta = parse_double_list(value, "beta");
    } else if (key == "mechanisms") {
      mechanisms = parse_mechanism_set(value);
    } else if (key == "sweep") {
      sweep_sizes = parse_sweep_specification(value);
    } else if (key == "output_dir") {
      output_dir = value;
    } else if (key == "emit_oracle_checks") {
      emit_oracle_checks = parse_bool(value, key);
    } else {
      throw std::invalid_argument("line " + std::to_string(line_number) + ": unknown key '" +
                                  key + "'");
    }
  }

  if (!theta.empty() && have_num_types && theta.size() != num_types) {
    throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                " entries but K is " + std::to_string(num_types));
  }
  if (!beta.empty() && !theta.empty() && beta.size() != theta.size()) {
    throw std::invalid_argument("beta and theta lengths differ");
  }
  if (!beta.empty() && theta.empty() && have_num_types && beta.size() != num_types) {
    throw std::invalid_argument("beta has " + std::to_string(beta.size()) +
                                " entries but K is " + std::to_string(num_types));
  }

  ExperimentConfig config;
  if (theta.empty()) {
    config.economy = default_economy(have_num_types ? num_types : 20, cost, kind);
  } else {
    if (beta.empty()) {
      beta.assign(theta.size(), 1.0 / static_cast<double>(theta.size()));
    }
    config.economy = make_economy_config(std::move(theta), std::move(beta), cost, kind);
  }
  config.mechanisms = mechanisms;
  config.sweep_sizes = std::move(sweep_sizes);
  config.output_dir = output_dir;
  config.emit_oracle_checks = emit_oracle_checks;
  return config;
}

std::string resolve_output_dir(const std::string& cli_value, const std::string& config_value) {
  if (!cli_value.empty()) {
    return cli_value;
  }
  if (const char* env = std::getenv("CONTRACT_OFFLOAD_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  if (!config_value.empty()) {
    return config_value;
  }
  return ".";
}

namespace {

struct PresentMenu {
  Mechanism mechanism;
  const ContractMenu* menu;
};

std::vector<PresentMenu> present_menus(const ExperimentResult& result) {
  std::vector<PresentMenu> menus;
  if (result.pd) {
    menus.push_back({Mechanism::PerfectDiscrimination, &*result.pd});
  }
  if (result.aas) {
    menus.push_back({Mechanism::AntiAdverseSelection, &*result.aas});
  }
  if (result.lp) {
    menus.push_back({Mechanism::LinearPricing, &*result.lp});
  }
  return menus;
}

int column_index(const PayoffTable& table, Mechanism mechanism) {
  for (std::size_t column = 0; column < table.mechanisms.size(); ++column) {
    if (table.mechanisms[column] == mechanism) {
      return static_cast<int>(column);
    }
  }
  return -1;
}

// Cross-mechanism relations implied by optimality for every regular
// instance; a violation indicates a solver defect, not bad input.
void assert_orderings(const ExperimentResult& result) {
  if (!(result.pd && result.aas && result.lp)) {
    return;
  }
  const std::size_t num_types = result.economy.num_types();
  const std::size_t top = num_types - 1;

  // Screening never over-pays relative to full information, and the top
  // type's payment is exactly efficient.
  for (std::size_t k = 0; k < num_types; ++k) {
    const double pd_payment = result.pd->bundles[k].payment;
    const double aas_payment = result.aas->bundles[k].payment;
    if (aas_payment > pd_payment + ordering_tolerance(pd_payment)) {
      throw std::logic_error("screening payment exceeds the full-information payment at type " +
                             std::to_string(k + 1));
    }
  }
  if (std::fabs(result.pd->bundles[top].payment - result.aas->bundles[top].payment) > 1e-9) {
    throw std::logic_error("top-type payments differ between screening and full information");
  }

  const int pd_col = column_index(result.table, Mechanism::PerfectDiscrimination);
  const int aas_col = column_index(result.table, Mechanism::AntiAdverseSelection);
  const int lp_col = column_index(result.table, Mechanism::LinearPricing);
  const double bs_pd = result.table.expected_bs[pd_col];
  const double bs_aas = result.table.expected_bs[aas_col];
  const double bs_lp = result.table.expected_bs[lp_col];
  if (bs_aas > bs_pd + ordering_tolerance(bs_pd) ||
      bs_lp > bs_aas + ordering_tolerance(bs_aas)) {
    throw std::logic_error("expected BS payoffs are not ordered full-information >= "
                           "screening >= posted price");
  }
  for (std::size_t k = 0; k < num_types; ++k) {
    const double w_pd = result.table.welfare[pd_col][k];
    if (result.table.welfare[aas_col][k] > w_pd + ordering_tolerance(w_pd) ||
        result.table.welfare[lp_col][k] > w_pd + ordering_tolerance(w_pd)) {
      throw std::logic_error("full information is not welfare-maximal at type " +
                             std::to_string(k + 1));
    }
  }
}

SweepRow sweep_row(std::size_t size, const ExperimentConfig& config) {
  const EconomyConfig economy =
      default_economy(size, config.economy.payment_unit_cost, config.economy.valuation);
  std::optional<ContractMenu> pd, aas, lp;
  if (config.mechanisms.pd) {
    pd = solve_perfect_discrimination(economy);
  }
  if (config.mechanisms.aas) {
    aas = solve_anti_adverse_selection(economy);
  }
  if (config.mechanisms.lp) {
    lp = solve_linear_pricing(economy).menu;
  }
  const PayoffTable table = payoff_table(pd ? &*pd : nullptr, aas ? &*aas : nullptr,
                                         lp ? &*lp : nullptr, economy);
  SweepRow row;
  row.num_types = size;
  row.expected_bs = table.expected_bs;
  row.expected_ap = table.expected_ap;
  row.expected_welfare = table.expected_welfare;
  return row;
}

std::string build_summary(const ExperimentResult& result) {
  std::ostringstream out;
  out << "types: " << result.economy.num_types() << "\n";
  out << "payment unit cost: " << format_double(result.economy.payment_unit_cost) << "\n";
  out << "valuation: " << result.economy.valuation.label() << "\n";
  out << "mechanisms:";
  for (const PresentMenu& entry : present_menus(result)) {
    out << ' ' << mechanism_tag(entry.mechanism);
  }
  out << "\n";
  if (result.lp_solution) {
    out << "posted price: " << format_double(result.lp_solution->unit_price) << "\n";
  }
  for (std::size_t column = 0; column < result.table.mechanisms.size(); ++column) {
    const char* tag = mechanism_tag(result.table.mechanisms[column]);
    out << "expected BS payoff [" << tag
        << "]: " << format_double(result.table.expected_bs[column]) << "\n";
    out << "expected AP payoff [" << tag
        << "]: " << format_double(result.table.expected_ap[column]) << "\n";
    out << "expected welfare [" << tag
        << "]: " << format_double(result.table.expected_welfare[column]) << "\n";
  }
  out << "feasibility:";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    out << ' ' << mechanism_tag(result.reports[i].mechanism) << '='
        << (result.reports[i].feasible() ? "ok" : "VIOLATED");
  }
  out << "\n";
  if (!result.sweep.empty()) {
    out << "sweep sizes: " << result.sweep.front().num_types << ".."
        << result.sweep.back().num_types << " (" << result.sweep.size() << " rows)\n";
  }
  if (!result.crossover_note.empty()) {
    out << result.crossover_note << "\n";
  }
  if (!result.oracle_checks.empty()) {
    int passed = 0;
    for (const OracleCheckRow& row : result.oracle_checks) {
      passed += row.pass ? 1 : 0;
    }
    out << "oracle checks passed: " << passed << "/" << result.oracle_checks.size() << "\n";
  }
  return out.str();
}

}  // namespace

std::vector<OracleCheckRow> run_oracle_checks(const EconomyConfig& economy) {
  economy.validate();
  const double cost = economy.payment_unit_cost;
  const ValuationKind kind = economy.valuation;
  std::vector<OracleCheckRow> rows;

  const auto expected_bs = [](const ContractMenu& menu, const EconomyConfig& config) {
    double total = 0.0;
    for (std::size_t k = 0; k < config.num_types(); ++k) {
      total += config.beta[k] * bs_payoff(menu.bundles[k], config.payment_unit_cost);
    }
    return total;
  };
  const auto push = [&rows](std::string name, double solver_value, double oracle_value,
                            double tolerance) {
    OracleCheckRow row;
    row.name = std::move(name);
    row.solver_value = solver_value;
    row.oracle_value = oracle_value;
    row.relative_gap = relative_gap(solver_value, oracle_value);
    row.tolerance = tolerance;
    row.pass = row.relative_gap <= tolerance;
    rows.push_back(std::move(row));
  };

  const EconomyConfig two = default_economy(2, cost, kind);
  const EconomyConfig three = default_economy(3, cost, kind);

  // Search box guaranteed to contain every optimal screening menu: no
  // optimal payment exceeds the efficient top-type payment, and the built-in
  // grids keep every payment far above a thousandth of the bottom type's
  // efficient payment. A tight box matters for the full-grid scans, whose
  // linear traffic axes would otherwise be too coarse to resolve the optimum
  // in the first round.
  const auto screening_grid = [](const EconomyConfig& instance, int points, int rounds) {
    GridSpec grid;
    grid.points_per_axis = points;
    grid.refinement_rounds = rounds;
    grid.t_max = 1.05 * inverse_marginal_valuation(
                            instance.valuation,
                            instance.payment_unit_cost / instance.theta.back());
    grid.t_min = 1e-3 * inverse_marginal_valuation(
                            instance.valuation,
                            instance.payment_unit_cost / instance.theta.front());
    return grid;
  };

  {
    const double solver = expected_bs(solve_anti_adverse_selection(two), two);
    push("screening-objective-2types-binding", solver,
         oracle_anti_adverse_selection(two, screening_grid(two, 48, 6),
                                       OracleMode::BindingStructure)
             .objective,
         1e-5);
    push("screening-objective-2types-fullgrid", solver,
         oracle_anti_adverse_selection(two, screening_grid(two, 20, 8), OracleMode::FullGrid)
             .objective,
         5e-3);
  }
  {
    const double solver = expected_bs(solve_anti_adverse_selection(three), three);
    push("screening-objective-3types-binding", solver,
         oracle_anti_adverse_selection(three, screening_grid(three, 32, 6),
                                       OracleMode::BindingStructure)
             .objective,
         1e-5);
    push("screening-objective-3types-fullgrid", solver,
         oracle_anti_adverse_selection(three, screening_grid(three, 12, 8),
                                       OracleMode::FullGrid)
             .objective,
         5e-3);
  }
  {
    const double solver = expected_bs(solve_perfect_discrimination(three), three);
    GridSpec grid;
    grid.points_per_axis = 48;
    grid.refinement_rounds = 6;
    push("zero-payoff-objective-3types", solver,
         oracle_perfect_discrimination(three, grid).objective, 1e-6);
  }
  {
    const LinearPricingSolution solver = solve_linear_pricing(three);
    const PriceScanResult scan = oracle_linear_pricing(three, 200.0 * cost, 64, 6);
    push("posted-price-3types", solver.unit_price, scan.price, 1e-5);
  }
  return rows;
}

ExperimentResult compute_experiment(const ExperimentConfig& config) {
  config.economy.validate();
  if (config.mechanisms.count() == 0) {
    throw std::invalid_argument("no mechanism selected");
  }

  ExperimentResult result;
  result.economy = config.economy;
  result.mechanisms = config.mechanisms;
  if (config.mechanisms.pd) {
    result.pd = solve_perfect_discrimination(config.economy);
  }
  if (config.mechanisms.aas) {
    result.aas = solve_anti_adverse_selection(config.economy);
  }
  if (config.mechanisms.lp) {
    result.lp_solution = solve_linear_pricing(config.economy);
    result.lp = result.lp_solution->menu;
  }

  for (const PresentMenu& entry : present_menus(result)) {
    FeasibilityReport report = verify_menu(*entry.menu, config.economy);
    if (!report.feasible()) {
      throw InfeasibleMenuError(std::string(mechanism_name(entry.mechanism)) +
                                " produced a menu violating its own requirements (worst "
                                "violation " +
                                format_double(report.worst_violation) + ")");
    }
    result.reports.push_back(std::move(report));
  }

  result.table = payoff_table(result.pd ? &*result.pd : nullptr,
                              result.aas ? &*result.aas : nullptr,
                              result.lp ? &*result.lp : nullptr, config.economy);
  if (result.aas) {
    result.aas_selection = selection_payoffs(*result.aas, config.economy);
  }
  assert_orderings(result);

  for (std::size_t size : config.sweep_sizes) {
    result.sweep.push_back(sweep_row(size, config));
  }

  if (result.aas && result.lp && !result.sweep.empty()) {
    const int aas_col = column_index(result.table, Mechanism::AntiAdverseSelection);
    const int lp_col = column_index(result.table, Mechanism::LinearPricing);
    std::size_t crossover = 0;
    for (const SweepRow& row : result.sweep) {
      if (row.expected_ap[aas_col] >= row.expected_ap[lp_col]) {
        crossover = row.num_types;
        break;
      }
    }
    if (crossover != 0) {
      result.crossover_note =
          "AP rent crossover: screening rents reach the posted-price level first at K = " +
          std::to_string(crossover);
    } else {
      result.crossover_note =
          "AP rent crossover: not observed (screening rents stay below posted-price rents "
          "for every swept size)";
    }
  }

  if (config.emit_oracle_checks) {
    result.oracle_checks = run_oracle_checks(config.economy);
  }

  result.summary = build_summary(result);
  return result;
}

namespace {

std::string csv_path(const std::string& dir, const char* name) { return dir + "/" + name; }

void write_per_type_table(const ExperimentResult& result, const std::string& dir,
                          const char* file, const char* prefix,
                          const std::vector<std::vector<double>>& columns) {
  std::string content = "k,theta";
  for (std::size_t column = 0; column < result.table.mechanisms.size(); ++column) {
    content += ',';
    content += prefix;
    content += '_';
    content += mechanism_tag(result.table.mechanisms[column]);
  }
  content += '\n';
  for (std::size_t k = 0; k < result.economy.num_types(); ++k) {
    content += std::to_string(k + 1) + ',' + format_double(result.economy.theta[k]);
    for (std::size_t column = 0; column < columns.size(); ++column) {
      content += ',' + format_double(columns[column][k]);
    }
    content += '\n';
  }
  write_file_atomic(csv_path(dir, file), content);
}

void write_contract_menus(const ExperimentResult& result, const std::string& dir) {
  const std::vector<PresentMenu> menus = present_menus(result);
  std::string content = "k,theta";
  for (const PresentMenu& entry : menus) {
    content += std::string(",T_") + mechanism_tag(entry.mechanism);
  }
  for (const PresentMenu& entry : menus) {
    content += std::string(",q_") + mechanism_tag(entry.mechanism);
  }
  content += '\n';
  for (std::size_t k = 0; k < result.economy.num_types(); ++k) {
    content += std::to_string(k + 1) + ',' + format_double(result.economy.theta[k]);
    for (const PresentMenu& entry : menus) {
      content += ',' + format_double(entry.menu->bundles[k].payment);
    }
    for (const PresentMenu& entry : menus) {
      content += ',' + format_double(entry.menu->bundles[k].traffic);
    }
    content += '\n';
  }
  write_file_atomic(csv_path(dir, "contract_menus.csv"), content);
}

void write_selection_payoffs(const ExperimentResult& result, const std::string& dir) {
  const std::size_t num_types = result.economy.num_types();
  std::string content = "k,theta";
  for (std::size_t l = 1; l <= num_types; ++l) {
    content += ",payoff_at_" + std::to_string(l);
  }
  content += '\n';
  for (std::size_t k = 0; k < num_types; ++k) {
    content += std::to_string(k + 1) + ',' + format_double(result.economy.theta[k]);
    for (std::size_t l = 0; l < num_types; ++l) {
      content += ',' + format_double(result.aas_selection[k][l]);
    }
    content += '\n';
  }
  write_file_atomic(csv_path(dir, "selection_payoffs.csv"), content);
}

void write_sweep(const ExperimentResult& result, const std::string& dir) {
  std::string content = "K";
  for (std::size_t column = 0; column < result.table.mechanisms.size(); ++column) {
    content += std::string(",expected_u_") + mechanism_tag(result.table.mechanisms[column]);
  }
  for (std::size_t column = 0; column < result.table.mechanisms.size(); ++column) {
    content += std::string(",expected_v_") + mechanism_tag(result.table.mechanisms[column]);
  }
  for (std::size_t column = 0; column < result.table.mechanisms.size(); ++column) {
    content += std::string(",welfare_") + mechanism_tag(result.table.mechanisms[column]);
  }
  content += '\n';
  for (const SweepRow& row : result.sweep) {
    content += std::to_string(row.num_types);
    for (double value : row.expected_bs) {
      content += ',' + format_double(value);
    }
    for (double value : row.expected_ap) {
      content += ',' + format_double(value);
    }
    for (double value : row.expected_welfare) {
      content += ',' + format_double(value);
    }
    content += '\n';
  }
  write_file_atomic(csv_path(dir, "sweep.csv"), content);
}

}  // namespace

void write_oracle_check_csv(const std::vector<OracleCheckRow>& rows, const std::string& path) {
  std::string content = "check,solver_value,oracle_value,relative_gap,tolerance,pass\n";
  for (const OracleCheckRow& row : rows) {
    content += row.name + ',' + format_double(row.solver_value) + ',' +
               format_double(row.oracle_value) + ',' + format_double(row.relative_gap) + ',' +
               format_double(row.tolerance) + ',' + (row.pass ? "1" : "0") + '\n';
  }
  write_file_atomic(path, content);
}

void write_figure_data(const ExperimentResult& result, const std::string& dir) {
  const std::string out = dir.empty() ? std::string(".") : dir;
  write_contract_menus(result, out);
  write_per_type_table(result, out, "payoffs_bs.csv", "u", result.table.bs_payoff);
  write_per_type_table(result, out, "payoffs_ap.csv", "v", result.table.ap_payoff);
  write_per_type_table(result, out, "welfare.csv", "welfare", result.table.welfare);
  if (!result.aas_selection.empty()) {
    write_selection_payoffs(result, out);
  }
  if (!result.sweep.empty()) {
    write_sweep(result, out);
  }
  if (!result.oracle_checks.empty()) {
    write_oracle_check_csv(result.oracle_checks, csv_path(out, "oracle_checks.csv"));
  }
  write_file_atomic(csv_path(out, "summary.txt"), result.summary);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = compute_experiment(config);
  write_figure_data(result, config.output_dir);
  return result;
}

void write_menu_csv(const ContractMenu& menu, const std::string& path) {
  std::string content = "k,T,q\n";
  for (std::size_t k = 0; k < menu.bundles.size(); ++k) {
    content += std::to_string(k + 1) + ',' + format_double(menu.bundles[k].payment) + ',' +
               format_double(menu.bundles[k].traffic) + '\n';
  }
  write_file_atomic(path, content);
}

ContractMenu read_menu_csv(const std::string& path, Mechanism mechanism) {
  const std::string content = read_file(path);
  const std::vector<std::string> lines = split(content, '\n');
  if (lines.empty() || trim(lines.front()) != "k,T,q") {
    throw std::invalid_argument(path + ": expected header 'k,T,q'");
  }
  ContractMenu menu;
  menu.mechanism = mechanism;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split(line, ',');
    std::size_t row_index = 0;
    double payment = 0.0, traffic = 0.0;
    if (fields.size() != 3 || !parse_size(trim(fields[0]), row_index) ||
        !parse_double(trim(fields[1]), payment) || !parse_double(trim(fields[2]), traffic)) {
      throw std::invalid_argument(path + ": bad menu row '" + line + "'");
    }
    if (row_index != menu.bundles.size() + 1) {
      throw std::invalid_argument(path + ": menu rows must be numbered 1..K in order");
    }
    menu.bundles.push_back(ContractBundle{payment, traffic});
  }
  if (menu.bundles.empty()) {
    throw std::invalid_argument(path + ": menu has no rows");
  }
  return menu;
}

}  // namespace offload
