#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Economic primitives for the mobile-data-offloading contract model.
//
// A base station (BS) buys offloaded traffic from access points (APs).
// An AP of type theta values a payment T at theta * v(T), where v is a
// strictly increasing, strictly concave valuation curve with v(0) = 0.
// A contract bundle (T, q) pays the AP T in exchange for q units of
// offloaded traffic; the BS values traffic at one monetary unit per unit
// and bears cost c per unit of payment.

namespace offload {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// A first-order condition has no admissible solution (e.g. a marginal value
// outside the range of v').
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The screening program violates the regularity required by the closed-form
// payment recursion, or the recursion would produce a non-increasing payment
// schedule. Ironing is not implemented; the first offending 1-based type
// index is carried along.
class NonregularInstanceError : public std::runtime_error {
 public:
  NonregularInstanceError(const std::string& message, std::size_t type_index)
      : std::runtime_error(message), type_index_(type_index) {}
  std::size_t type_index() const noexcept { return type_index_; }

 private:
  std::size_t type_index_;
};

// No interior profit maximizer exists for posted-price trading (e.g. demand
// vanishes for every price above cost).
class DegenerateMarketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A grid-search optimum landed on the boundary of the search box; the caller
// should widen the grid.
class GridBoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A menu failed a feasibility requirement (individual rationality, incentive
// compatibility, or a structural property the mechanism promises).
class InfeasibleMenuError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Valuation curves
// ---------------------------------------------------------------------------

enum class ValuationFamily {
  SquareRoot,  // v(T) = sqrt(T)
  LogOnePlus,  // v(T) = log(1 + T)
  PowerAlpha,  // v(T) = T^alpha, alpha in (0, 1)
};

struct ValuationKind {
  ValuationFamily family = ValuationFamily::SquareRoot;
  double alpha = 0.5;  // only meaningful for PowerAlpha

  static ValuationKind square_root() { return {ValuationFamily::SquareRoot, 0.5}; }
  static ValuationKind log_one_plus() { return {ValuationFamily::LogOnePlus, 0.5}; }
  static ValuationKind power(double alpha);

  // "sqrt", "log1p", or "pow:<alpha>"
  std::string label() const;
};

// v(T). Requires T >= 0; throws std::domain_error otherwise.
double valuation(const ValuationKind& kind, double payment);

// v'(T). Requires T > 0 (the derivative is unbounded at 0 for SquareRoot and
// PowerAlpha); throws std::domain_error otherwise.
double valuation_derivative(const ValuationKind& kind, double payment);

// v''(T). Requires T > 0. Strictly negative for all supported families.
double valuation_second_derivative(const ValuationKind& kind, double payment);

// Solves v'(T) = marginal for T > 0 using the closed form of the family.
// Throws NoSolutionError when marginal lies outside the range of v'
// (e.g. marginal >= 1 for LogOnePlus) and std::domain_error for
// marginal <= 0.
double inverse_marginal_valuation(const ValuationKind& kind, double marginal);

// Same contract as inverse_marginal_valuation, but solved by bracket
// expansion and bisection instead of the closed form. Kept as an independent
// route for cross-checking; terminates when |v'(T) - marginal| <= 1e-10 *
// marginal.
double inverse_marginal_valuation_numeric(const ValuationKind& kind, double marginal);

// ---------------------------------------------------------------------------
// Contracts and configurations
// ---------------------------------------------------------------------------

// One menu entry: the BS pays `payment` (T) and receives `traffic` (q).
struct ContractBundle {
  double payment = 0.0;
  double traffic = 0.0;
};

enum class Mechanism {
  PerfectDiscrimination,
  AntiAdverseSelection,
  LinearPricing,
};

// Long name, e.g. "perfect-discrimination".
const char* mechanism_name(Mechanism mechanism);
// Short column tag: "pd", "aas", "lp".
const char* mechanism_tag(Mechanism mechanism);

// Market description: K AP types with valuations theta (strictly increasing,
// positive) occurring with probabilities beta (positive, summing to one), a
// per-unit payment cost c for the BS, and a common valuation curve.
struct EconomyConfig {
  std::vector<double> theta;
  std::vector<double> beta;
  double payment_unit_cost = 0.01;
  ValuationKind valuation = ValuationKind::square_root();

  std::size_t num_types() const { return theta.size(); }

  // Throws std::invalid_argument on any malformed field. Degenerate inputs
  // (theta_k <= 0, beta_k <= 0, unsorted theta, probabilities not summing to
  // one within 1e-12) are rejected here, not handled downstream.
  void validate() const;
};

EconomyConfig make_economy_config(std::vector<double> theta, std::vector<double> beta,
                                  double payment_unit_cost, ValuationKind kind);

// A complete menu of K bundles, one per type, in type order. unit_price is
// set for linear pricing only.
struct ContractMenu {
  Mechanism mechanism = Mechanism::PerfectDiscrimination;
  std::vector<ContractBundle> bundles;
  std::optional<double> unit_price;
};

// AP-side payoff theta_k * v(T) - q of a type accepting a bundle.
double ap_payoff(double theta_k, const ContractBundle& bundle, const ValuationKind& kind);

// BS-side payoff q - c * T from one accepted bundle.
double bs_payoff(const ContractBundle& bundle, double payment_unit_cost);

// Expected social welfare sum_k beta_k * (theta_k * v(T_k) - c * T_k).
// Equals expected BS payoff plus expected AP payoff. Throws
// std::invalid_argument when the menu size differs from the config.
double social_welfare(const ContractMenu& menu, const EconomyConfig& config);

}  // namespace offload
