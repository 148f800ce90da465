#include "solvers.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace offload {

double demand(const ValuationKind& kind, double theta_k, double price) {
  if (!(theta_k > 0.0) || !(price > 0.0)) {
    throw std::domain_error("demand needs positive type and price");
  }
  return inverse_marginal_valuation(kind, price / theta_k);
}

double aggregate_demand(const EconomyConfig& config, double price) {
  double total = 0.0;
  for (std::size_t k = 0; k < config.num_types(); ++k) {
    total += config.beta[k] * demand(config.valuation, config.theta[k], price);
  }
  return total;
}

double aggregate_demand_derivative(const EconomyConfig& config, double price) {
  double total = 0.0;
  for (std::size_t k = 0; k < config.num_types(); ++k) {
    const double t = demand(config.valuation, config.theta[k], price);
    total += config.beta[k] /
             (config.theta[k] * valuation_second_derivative(config.valuation, t));
  }
  return total;
}

double aggregate_demand_derivative_numeric(const EconomyConfig& config, double price) {
  const double step = 1e-6 * price;
  return (aggregate_demand(config, price + step) - aggregate_demand(config, price - step)) /
         (2.0 * step);
}

ContractMenu solve_perfect_discrimination(const EconomyConfig& config) {
  config.validate();
  ContractMenu menu;
  menu.mechanism = Mechanism::PerfectDiscrimination;
  for (std::size_t k = 0; k < config.num_types(); ++k) {
    const double payment =
        inverse_marginal_valuation(config.valuation, config.payment_unit_cost / config.theta[k]);
    menu.bundles.push_back(
        ContractBundle{payment, config.theta[k] * valuation(config.valuation, payment)});
  }
  return menu;
}

namespace {

// Largest price at which every type still demands a positive payment; only
// the bounded-slope LogOnePlus family caps it.
double demand_price_cap(const EconomyConfig& config) {
  if (config.valuation.family == ValuationFamily::LogOnePlus) {
    return config.theta.front();
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

LinearPricingSolution solve_linear_pricing(const EconomyConfig& config) {
  config.validate();
  const double c = config.payment_unit_cost;
  const double cap = demand_price_cap(config);

  double lo = c * (1.0 + 1e-12);
  if (!(lo < cap)) {
    throw DegenerateMarketError("every price above cost exceeds some type's demand range");
  }

  // Profit first-order condition; positive just above cost, negative past
  // the optimum.
  const auto foc = [&](double price) {
    return aggregate_demand(config, price) +
           (price - c) * aggregate_demand_derivative(config, price);
  };
  if (!(foc(lo) > 0.0)) {
    throw DegenerateMarketError("posted-price profit is not increasing anywhere above cost");
  }

  double hi;
  if (std::isfinite(cap)) {
    hi = cap * (1.0 - 1e-12);
    if (!(foc(hi) < 0.0)) {
      throw DegenerateMarketError("posted-price profit has no interior maximizer below the "
                                  "demand cutoff");
    }
  } else {
    hi = 2.0 * lo;
    int expansions = 0;
    while (foc(hi) > 0.0) {
      hi *= 2.0;
      if (++expansions > 200) {
        throw DegenerateMarketError("posted-price profit never turns down; no finite "
                                    "maximizer found");
      }
    }
  }

  for (int i = 0; i < 500 && (hi - lo) > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (foc(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double price = 0.5 * (lo + hi);

  LinearPricingSolution solution;
  solution.unit_price = price;
  solution.menu.mechanism = Mechanism::LinearPricing;
  solution.menu.unit_price = price;
  for (std::size_t k = 0; k < config.num_types(); ++k) {
    const double payment = demand(config.valuation, config.theta[k], price);
    solution.menu.bundles.push_back(ContractBundle{payment, price * payment});
  }
  solution.aggregate_payment = aggregate_demand(config, price);
  solution.bs_profit = (price - c) * solution.aggregate_payment;
  return solution;
}

KktMultipliers ic_multipliers(const EconomyConfig& config) {
  config.validate();
  KktMultipliers multipliers;
  multipliers.mu.assign(config.num_types(), 0.0);
  double tail = 0.0;
  for (std::size_t k = config.num_types(); k-- > 0;) {
    tail += config.beta[k];
    multipliers.mu[k] = tail;
  }
  multipliers.nu = multipliers.mu.front();
  return multipliers;
}

ContractMenu solve_anti_adverse_selection(const EconomyConfig& config) {
  config.validate();
  const std::size_t num_types = config.num_types();
  const double c = config.payment_unit_cost;
  const KktMultipliers multipliers = ic_multipliers(config);

  // Marginal-value targets v'(T_k); the top type is efficient and shares the
  // exact expression used by perfect discrimination.
  std::vector<double> target(num_types, 0.0);
  target[num_types - 1] = c / config.theta[num_types - 1];
  for (std::size_t k = 0; k + 1 < num_types; ++k) {
    const double margin = multipliers.mu[k] * config.theta[k] -
                          multipliers.mu[k + 1] * config.theta[k + 1];
    if (!(margin > 0.0)) {
      throw NonregularInstanceError(
          "screening program is nonregular at type index " + std::to_string(k + 1) +
              ": the payment recursion's denominator is not positive; ironing is not "
              "implemented",
          k + 1);
    }
    target[k] = config.beta[k] * c / margin;
  }
  for (std::size_t k = 0; k + 1 < num_types; ++k) {
    if (!(target[k] > target[k + 1])) {
      throw NonregularInstanceError(
          "screening program is nonregular at type index " + std::to_string(k + 1) +
              ": marginal-value targets are not strictly decreasing, so the payment "
              "schedule would not increase; ironing is not implemented",
          k + 1);
    }
  }

  ContractMenu menu;
  menu.mechanism = Mechanism::AntiAdverseSelection;
  std::vector<double> value(num_types, 0.0);
  for (std::size_t k = 0; k < num_types; ++k) {
    const double payment = inverse_marginal_valuation(config.valuation, target[k]);
    value[k] = valuation(config.valuation, payment);
    double traffic;
    if (k == 0) {
      traffic = config.theta[0] * value[0];
    } else {
      traffic = menu.bundles[k - 1].traffic +
                config.theta[k] * (value[k] - value[k - 1]);
    }
    menu.bundles.push_back(ContractBundle{payment, traffic});
  }
  return menu;
}

}  // namespace offload
