#include "economy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace offload {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

ValuationKind ValuationKind::power(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("power valuation exponent must lie strictly in (0, 1)");
  }
  return {ValuationFamily::PowerAlpha, alpha};
}

std::string ValuationKind::label() const {
  switch (family) {
    case ValuationFamily::SquareRoot:
      return "sqrt";
    case ValuationFamily::LogOnePlus:
      return "log1p";
    case ValuationFamily::PowerAlpha: {
      std::ostringstream os;
      os << "pow:" << alpha;
      return os.str();
    }
  }
  return "sqrt";
}

double valuation(const ValuationKind& kind, double payment) {
  if (!(payment >= 0.0)) {
    throw std::domain_error("valuation requires a nonnegative payment");
  }
  switch (kind.family) {
    case ValuationFamily::SquareRoot:
      return std::sqrt(payment);
    case ValuationFamily::LogOnePlus:
      return std::log1p(payment);
    case ValuationFamily::PowerAlpha:
      return std::pow(payment, kind.alpha);
  }
  throw std::logic_error("unknown valuation family");
}

double valuation_derivative(const ValuationKind& kind, double payment) {
  if (!(payment > 0.0)) {
    throw std::domain_error("valuation derivative requires a positive payment");
  }
  switch (kind.family) {
    case ValuationFamily::SquareRoot:
      return 0.5 / std::sqrt(payment);
    case ValuationFamily::LogOnePlus:
      return 1.0 / (1.0 + payment);
    case ValuationFamily::PowerAlpha:
      return kind.alpha * std::pow(payment, kind.alpha - 1.0);
  }
  throw std::logic_error("unknown valuation family");
}

double valuation_second_derivative(const ValuationKind& kind, double payment) {
  if (!(payment > 0.0)) {
    throw std::domain_error("valuation second derivative requires a positive payment");
  }
  switch (kind.family) {
    case ValuationFamily::SquareRoot:
      return -0.25 / (payment * std::sqrt(payment));
    case ValuationFamily::LogOnePlus:
      return -1.0 / ((1.0 + payment) * (1.0 + payment));
    case ValuationFamily::PowerAlpha:
      return kind.alpha * (kind.alpha - 1.0) * std::pow(payment, kind.alpha - 2.0);
  }
  throw std::logic_error("unknown valuation family");
}

double inverse_marginal_valuation(const ValuationKind& kind, double marginal) {
  if (!(marginal > 0.0) || !std::isfinite(marginal)) {
    throw std::domain_error("inverse marginal valuation requires a positive finite marginal value");
  }
  switch (kind.family) {
    case ValuationFamily::SquareRoot:
      // v'(T) = 1 / (2 sqrt(T))  =>  T = 1 / (4 m^2)
      return 0.25 / (marginal * marginal);
    case ValuationFamily::LogOnePlus:
      // v'(T) = 1 / (1 + T), with range (0, 1) over T > 0
      if (marginal >= 1.0) {
        throw NoSolutionError("marginal value lies outside the range of the log valuation derivative");
      }
      return 1.0 / marginal - 1.0;
    case ValuationFamily::PowerAlpha:
      // v'(T) = alpha T^(alpha-1)  =>  T = (m / alpha)^(1 / (alpha - 1))
      return std::pow(marginal / kind.alpha, 1.0 / (kind.alpha - 1.0));
  }
  throw std::logic_error("unknown valuation family");
}

double inverse_marginal_valuation_numeric(const ValuationKind& kind, double marginal) {
  if (!(marginal > 0.0) || !std::isfinite(marginal)) {
    throw std::domain_error("inverse marginal valuation requires a positive finite marginal value");
  }
  if (kind.family == ValuationFamily::LogOnePlus && marginal >= 1.0) {
    throw NoSolutionError("marginal value lies outside the range of the log valuation derivative");
  }

  // v' is strictly decreasing, so a root of v'(T) - marginal is bracketed by
  // [lo, hi] once v'(lo) >= marginal >= v'(hi). Start from a wide default
  // bracket and expand outward if required.
  double lo = 1e-12;
  double hi = 1e12;
  int guard = 0;
  while (valuation_derivative(kind, lo) < marginal) {
    lo /= 100.0;
    if (++guard > 150 || lo < 1e-290) {
      throw NoSolutionError("marginal value lies outside the range of the valuation derivative");
    }
  }
  guard = 0;
  while (valuation_derivative(kind, hi) > marginal) {
    hi *= 100.0;
    if (++guard > 150 || hi > 1e290) {
      throw NoSolutionError("marginal value lies outside the range of the valuation derivative");
    }
  }

  double mid = std::sqrt(lo * hi);
  for (int iter = 0; iter < 400; ++iter) {
    mid = std::sqrt(lo * hi);
    const double d = valuation_derivative(kind, mid);
    if (std::fabs(d - marginal) <= 1e-10 * marginal) {
      return mid;
    }
    if (d > marginal) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * mid) {
      break;
    }
  }
  return mid;
}

const char* mechanism_name(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::PerfectDiscrimination:
      return "perfect-discrimination";
    case Mechanism::AntiAdverseSelection:
      return "anti-adverse-selection";
    case Mechanism::LinearPricing:
      return "linear-pricing";
  }
  return "?";
}

const char* mechanism_tag(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::PerfectDiscrimination:
      return "pd";
    case Mechanism::AntiAdverseSelection:
      return "aas";
    case Mechanism::LinearPricing:
      return "lp";
  }
  return "?";
}

void EconomyConfig::validate() const {
  const std::size_t k = theta.size();
  if (k == 0) {
    throw std::invalid_argument("config needs at least one AP type");
  }
  if (beta.size() != k) {
    throw std::invalid_argument("config theta and beta must have the same length");
  }
  require_finite(payment_unit_cost, "payment unit cost");
  if (!(payment_unit_cost > 0.0)) {
    throw std::invalid_argument("payment unit cost must be positive");
  }
  double beta_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    require_finite(theta[i], "theta");
    require_finite(beta[i], "beta");
    if (!(theta[i] > 0.0)) {
      throw std::invalid_argument("every theta must be positive");
    }
    if (i > 0 && !(theta[i] > theta[i - 1])) {
      throw std::invalid_argument("theta must be strictly increasing");
    }
    if (!(beta[i] > 0.0)) {
      throw std::invalid_argument("every beta must be positive");
    }
    beta_sum += beta[i];
  }
  if (std::fabs(beta_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("beta must sum to one (within 1e-12)");
  }
  if (valuation.family == ValuationFamily::PowerAlpha &&
      (!(valuation.alpha > 0.0) || !(valuation.alpha < 1.0))) {
    throw std::invalid_argument("power valuation exponent must lie strictly in (0, 1)");
  }
}

EconomyConfig make_economy_config(std::vector<double> theta, std::vector<double> beta,
                                  double payment_unit_cost, ValuationKind kind) {
  EconomyConfig config;
  config.theta = std::move(theta);
  config.beta = std::move(beta);
  config.payment_unit_cost = payment_unit_cost;
  config.valuation = kind;
  config.validate();
  return config;
}

double ap_payoff(double theta_k, const ContractBundle& bundle, const ValuationKind& kind) {
  if (!(theta_k > 0.0) || !std::isfinite(theta_k)) {
    throw std::domain_error("ap_payoff requires a positive finite theta");
  }
  if (!(bundle.traffic >= 0.0)) {
    throw std::domain_error("ap_payoff requires nonnegative traffic");
  }
  return theta_k * valuation(kind, bundle.payment) - bundle.traffic;
}

double bs_payoff(const ContractBundle& bundle, double payment_unit_cost) {
  if (!(payment_unit_cost > 0.0) || !std::isfinite(payment_unit_cost)) {
    throw std::domain_error("bs_payoff requires a positive finite payment unit cost");
  }
  if (!(bundle.payment >= 0.0) || !(bundle.traffic >= 0.0)) {
    throw std::domain_error("bs_payoff requires a nonnegative bundle");
  }
  return bundle.traffic - payment_unit_cost * bundle.payment;
}

double social_welfare(const ContractMenu& menu, const EconomyConfig& config) {
  config.validate();
  if (menu.bundles.size() != config.num_types()) {
    throw std::invalid_argument("social_welfare: menu size does not match the number of types");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < config.num_types(); ++k) {
    const ContractBundle& b = menu.bundles[k];
    total += config.beta[k] *
             (config.theta[k] * valuation(config.valuation, b.payment) -
              config.payment_unit_cost * b.payment);
  }
  return total;
}

}  // namespace offload
