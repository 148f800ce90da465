#include "verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "textio.hpp"

namespace offload {

namespace {

bool strictly_increasing(const std::vector<double>& values) {
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i + 1] - values[i] > kMonotoneTolerance)) {
      return false;
    }
  }
  return true;
}

double min_or_zero(const std::vector<double>& values) {
  if (values.empty()) {
    return 0.0;
  }
  return *std::min_element(values.begin(), values.end());
}

}  // namespace

bool FeasibilityReport::feasible() const { return worst_violation == 0.0; }

std::vector<std::vector<double>> selection_payoffs(const ContractMenu& menu,
                                                   const EconomyConfig& config) {
  config.validate();
  const std::size_t num_types = config.num_types();
  if (menu.bundles.size() != num_types) {
    throw std::invalid_argument("menu size differs from the number of types");
  }
  std::vector<std::vector<double>> payoff(num_types, std::vector<double>(num_types));
  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t l = 0; l < num_types; ++l) {
      payoff[k][l] = ap_payoff(config.theta[k], menu.bundles[l], config.valuation);
    }
  }
  return payoff;
}

FeasibilityReport verify_menu(const ContractMenu& menu, const EconomyConfig& config) {
  const std::vector<std::vector<double>> payoff = selection_payoffs(menu, config);
  const std::size_t num_types = config.num_types();

  FeasibilityReport report;
  report.mechanism = menu.mechanism;
  report.ir_slack.resize(num_types);
  report.ic_slack.assign(num_types, std::vector<double>(num_types, 0.0));
  report.preferred_bundle.resize(num_types);

  for (std::size_t k = 0; k < num_types; ++k) {
    report.ir_slack[k] = payoff[k][k];
    for (std::size_t l = 0; l < num_types; ++l) {
      report.ic_slack[k][l] = l == k ? 0.0 : payoff[k][k] - payoff[k][l];
    }
    // Best alternative bundle; type k is recorded as truthful unless some
    // other bundle beats its own by more than the tie window.
    std::size_t preferred = k;
    double best = payoff[k][k];
    for (std::size_t l = 0; l < num_types; ++l) {
      if (payoff[k][l] > best + kSlackTolerance) {
        best = payoff[k][l];
        preferred = l;
      }
    }
    report.preferred_bundle[k] = preferred;
  }

  std::vector<double> payments(num_types), traffic(num_types);
  for (std::size_t k = 0; k < num_types; ++k) {
    payments[k] = menu.bundles[k].payment;
    traffic[k] = menu.bundles[k].traffic;
  }
  report.payments_strictly_increasing = strictly_increasing(payments);
  report.traffic_strictly_increasing = strictly_increasing(traffic);

  report.self_revealing = true;
  for (std::size_t k = 0; k < num_types; ++k) {
    if (report.preferred_bundle[k] != k) {
      report.self_revealing = false;
    }
  }

  report.degenerate_menu = true;
  for (std::size_t k = 1; k < num_types; ++k) {
    if (std::fabs(payments[k] - payments[0]) > kSlackTolerance ||
        std::fabs(traffic[k] - traffic[0]) > kSlackTolerance) {
      report.degenerate_menu = false;
      break;
    }
  }

  report.zero_information_rent = true;
  for (std::size_t k = 0; k < num_types; ++k) {
    if (std::fabs(report.ir_slack[k]) > kSlackTolerance) {
      report.zero_information_rent = false;
      break;
    }
  }

  // Violation magnitudes for the constraints this mechanism promises.
  double worst = 0.0;
  const auto require_nonnegative = [&](double slack) {
    if (slack < -kSlackTolerance) {
      worst = std::max(worst, -slack);
    }
  };
  for (std::size_t k = 0; k < num_types; ++k) {
    require_nonnegative(report.ir_slack[k]);
  }
  if (menu.mechanism != Mechanism::PerfectDiscrimination) {
    for (std::size_t k = 0; k < num_types; ++k) {
      for (std::size_t l = 0; l < num_types; ++l) {
        require_nonnegative(report.ic_slack[k][l]);
      }
    }
  }
  if (menu.mechanism == Mechanism::AntiAdverseSelection) {
    if (!report.payments_strictly_increasing || !report.traffic_strictly_increasing) {
      worst = std::max(worst, kSlackTolerance);
    }
    if (!report.self_revealing) {
      worst = std::max(worst, kSlackTolerance);
    }
  }
  report.worst_violation = worst;
  return report;
}

bool payoff_unimodal(const std::vector<double>& row) {
  bool falling = false;
  for (std::size_t i = 0; i + 1 < row.size(); ++i) {
    const double diff = row[i + 1] - row[i];
    if (diff > kSlackTolerance) {
      if (falling) {
        return false;  // a strict rise after a strict fall
      }
    } else if (diff < -kSlackTolerance) {
      falling = true;
    }
  }
  return true;
}

PayoffTable payoff_table(const ContractMenu* pd, const ContractMenu* aas,
                         const ContractMenu* lp, const EconomyConfig& config) {
  config.validate();
  const std::size_t num_types = config.num_types();

  PayoffTable table;
  const ContractMenu* menus[] = {pd, aas, lp};
  const Mechanism order[] = {Mechanism::PerfectDiscrimination,
                             Mechanism::AntiAdverseSelection, Mechanism::LinearPricing};
  for (int column = 0; column < 3; ++column) {
    const ContractMenu* menu = menus[column];
    if (menu == nullptr) {
      continue;
    }
    if (menu->bundles.size() != num_types) {
      throw std::invalid_argument("menu size differs from the number of types");
    }
    table.mechanisms.push_back(order[column]);
    std::vector<double> ap(num_types), bs(num_types), welfare(num_types);
    double expected_ap = 0.0, expected_bs = 0.0;
    for (std::size_t k = 0; k < num_types; ++k) {
      ap[k] = ap_payoff(config.theta[k], menu->bundles[k], config.valuation);
      bs[k] = bs_payoff(menu->bundles[k], config.payment_unit_cost);
      welfare[k] = ap[k] + bs[k];
      expected_ap += config.beta[k] * ap[k];
      expected_bs += config.beta[k] * bs[k];
    }
    table.ap_payoff.push_back(std::move(ap));
    table.bs_payoff.push_back(std::move(bs));
    table.welfare.push_back(std::move(welfare));
    table.expected_ap.push_back(expected_ap);
    table.expected_bs.push_back(expected_bs);
    table.expected_welfare.push_back(expected_ap + expected_bs);
  }
  return table;
}

std::string format_report_summary(const FeasibilityReport& report) {
  std::ostringstream out;
  const std::size_t num_types = report.ir_slack.size();
  out << "mechanism: " << mechanism_name(report.mechanism) << "\n";
  out << "types: " << num_types << "\n";
  out << "participation slack (min): " << format_double(min_or_zero(report.ir_slack)) << "\n";
  double min_ic = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t l = 0; l < num_types; ++l) {
      if (l != k) {
        min_ic = std::min(min_ic, report.ic_slack[k][l]);
      }
    }
  }
  out << "truth-telling slack (min): "
      << format_double(num_types > 1 ? min_ic : 0.0) << "\n";
  out << "payments strictly increasing: "
      << (report.payments_strictly_increasing ? "yes" : "no") << "\n";
  out << "traffic strictly increasing: "
      << (report.traffic_strictly_increasing ? "yes" : "no") << "\n";
  out << "self-revealing: " << (report.self_revealing ? "yes" : "no") << "\n";
  if (report.degenerate_menu) {
    out << "note: all bundles identical within tolerance\n";
  }
  out << "zero information rent: " << (report.zero_information_rent ? "yes" : "no") << "\n";
  out << "result: "
      << (report.feasible() ? "FEASIBLE" : "INFEASIBLE") << " (worst violation "
      << format_double(report.worst_violation) << ")\n";
  return out.str();
}

void write_report_csv(const FeasibilityReport& report, const std::string& path) {
  std::string content = "k,ir_slack,min_ic_slack,preferred_bundle,truthful\n";
  const std::size_t num_types = report.ir_slack.size();
  for (std::size_t k = 0; k < num_types; ++k) {
    double min_ic = 0.0;
    bool first = true;
    for (std::size_t l = 0; l < num_types; ++l) {
      if (l == k) {
        continue;
      }
      min_ic = first ? report.ic_slack[k][l] : std::min(min_ic, report.ic_slack[k][l]);
      first = false;
    }
    content += std::to_string(k + 1) + ',' + format_double(report.ir_slack[k]) + ',' +
               format_double(min_ic) + ',' + std::to_string(report.preferred_bundle[k] + 1) +
               ',' + (report.preferred_bundle[k] == k ? "1" : "0") + '\n';
  }
  write_file_atomic(path, content);
}

}  // namespace offload
