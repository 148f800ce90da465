#pragma once

#include <vector>

#include "economy.hpp"

// Closed-form / root-finding solvers for the three contracting mechanisms.
//
// * Perfect discrimination: the BS observes each AP's type and pins every
//   type to zero payoff; payments satisfy theta_k * v'(T_k) = c.
// * Linear pricing: the BS posts one traffic-per-payment-unit price P and
//   lets APs self-select their payment volume; P maximizes (P - c) * D(P).
// * Anti-adverse-selection menu: the BS cannot observe types and offers a
//   feasible menu maximizing expected profit; solved through the standard
//   binding structure (lowest type held at zero payoff, adjacent
//   truth-telling constraints tight).

namespace offload {

// Payment volume demanded by one AP of type theta_k facing traffic price
// `price` per unit of payment: the T solving theta_k * v'(T) = price.
// Throws NoSolutionError when no positive T qualifies (price out of the
// range of theta_k * v').
double demand(const ValuationKind& kind, double theta_k, double price);

// Expected demand D(P) = sum_k beta_k * demand(theta_k, P).
double aggregate_demand(const EconomyConfig& config, double price);

// dD/dP via the inverse-function rule: demand'(P) = 1 / (theta_k * v''(T)).
// Strictly negative wherever defined.
double aggregate_demand_derivative(const EconomyConfig& config, double price);

// Same quantity by central finite differences (relative step 1e-6); kept as
// an independent cross-check of the closed-form derivative.
double aggregate_demand_derivative_numeric(const EconomyConfig& config, double price);

// Menu with theta_k * v'(T_k) = c and q_k = theta_k * v(T_k): every type
// participates and earns exactly zero.
ContractMenu solve_perfect_discrimination(const EconomyConfig& config);

struct LinearPricingSolution {
  ContractMenu menu;          // bundle per type: T_k = demand(theta_k, P), q_k = P * T_k
  double unit_price = 0.0;    // profit-maximizing P
  double aggregate_payment = 0.0;  // D(P) at the optimum
  double bs_profit = 0.0;          // (P - c) * D(P)
};

// Finds the posted price by bisecting the profit first-order condition
// phi(P) = D(P) + (P - c) * D'(P) on (c, P_hi), expanding P_hi until the
// sign flips. Throws DegenerateMarketError when no price above cost clears
// (e.g. every type's demand is undefined above cost).
LinearPricingSolution solve_linear_pricing(const EconomyConfig& config);

// Lagrange weights attached to the downward-adjacent truth-telling
// constraints: mu_k = sum_{j >= k} beta_j (so mu_1 = 1), and the
// participation weight nu = mu_1. Diagnostic companions to
// solve_anti_adverse_selection.
struct KktMultipliers {
  std::vector<double> mu;
  double nu = 1.0;
};

KktMultipliers ic_multipliers(const EconomyConfig& config);

// Screening menu from the binding structure. Payments solve
//   theta_K * v'(T_K) = c                                 (top type)
//   v'(T_k) = beta_k * c / (mu_k theta_k - mu_{k+1} theta_{k+1})   (k < K)
// and traffic follows q_1 = theta_1 v(T_1),
// q_k = q_{k-1} + theta_k (v(T_k) - v(T_{k-1})).
//
// Requires a regular instance: every denominator above must be strictly
// positive and the induced payment schedule strictly increasing. Otherwise
// throws NonregularInstanceError carrying the first offending 1-based type
// index; ironing is not implemented.
ContractMenu solve_anti_adverse_selection(const EconomyConfig& config);

}  // namespace offload
