#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace offload {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> points(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    points[i] = lo * std::exp(step * i);
  }
  points.front() = lo;
  points.back() = hi;
  return points;
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
  std::vector<double> points(n);
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    points[i] = lo + step * i;
  }
  points.front() = lo;
  points.back() = hi;
  return points;
}

// Largest price at which demand is defined for every type (see
// inverse_marginal_valuation): theta_1 * sup v'. Infinite except for the
// bounded-slope LogOnePlus family.
double price_cap(const EconomyConfig& config) {
  if (config.valuation.family == ValuationFamily::LogOnePlus) {
    return config.theta.front();
  }
  return std::numeric_limits<double>::infinity();
}

// 1-D maximizer of `objective` over a log grid with zoom-in refinement.
// Returns the best abscissa/value pair; flags a first-round boundary
// incumbent through GridBoundaryError.
template <typename F>
std::pair<double, double> scan_1d(double lo, double hi, int points, int rounds, F&& objective,
                                  const char* boundary_message) {
  const double box_lo = lo;
  const double box_hi = hi;
  double best_x = lo;
  double best_value = kNegInf;
  for (int round = 0; round <= rounds; ++round) {
    const std::vector<double> grid = log_spaced(lo, hi, points);
    int round_best = -1;
    double round_value = kNegInf;
    for (int i = 0; i < points; ++i) {
      const double value = objective(grid[i]);
      if (value > round_value) {
        round_value = value;
        round_best = i;
      }
    }
    if (round == 0 && (round_best == 0 || round_best == points - 1)) {
      throw GridBoundaryError(boundary_message);
    }
    if (round_value > best_value) {
      best_value = round_value;
      best_x = grid[round_best];
    }
    // Re-center a +/-2-cell window on the incumbent. Clamping to the original
    // box (not the previous window) lets the window crawl back toward an
    // optimum that an earlier round fenced out by one cell.
    const double cell = std::log(hi / lo) / (points - 1);
    lo = std::max(box_lo, best_x * std::exp(-2.0 * cell));
    hi = std::min(box_hi, best_x * std::exp(2.0 * cell));
    if (!(hi > lo)) {
      break;  // window collapsed to a point
    }
  }
  return {best_x, best_value};
}

}  // namespace

void GridSpec::validate() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw std::invalid_argument("grid needs 0 < t_min < t_max < infinity");
  }
  if (points_per_axis < 12) {
    throw std::invalid_argument("grid needs at least 12 points per axis");
  }
  if (refinement_rounds < 1) {
    throw std::invalid_argument("grid needs at least one refinement round");
  }
}

OracleSolution oracle_perfect_discrimination(const EconomyConfig& config, const GridSpec& grid) {
  config.validate();
  grid.validate();
  const double c = config.payment_unit_cost;

  OracleSolution solution;
  solution.menu.mechanism = Mechanism::PerfectDiscrimination;
  for (std::size_t k = 0; k < config.num_types(); ++k) {
    const double theta = config.theta[k];
    const auto [payment, payoff] = scan_1d(
        grid.t_min, grid.t_max, grid.points_per_axis, grid.refinement_rounds,
        [&](double t) { return theta * valuation(config.valuation, t) - c * t; },
        "payment maximizer on the grid boundary; widen the grid");
    solution.menu.bundles.push_back(
        ContractBundle{payment, theta * valuation(config.valuation, payment)});
    solution.objective += config.beta[k] * payoff;
  }
  return solution;
}

PriceScanResult oracle_linear_pricing(const EconomyConfig& config, double price_max, int points,
                                      int rounds) {
  config.validate();
  if (points < 16) {
    throw std::invalid_argument("price scan needs at least 16 points");
  }
  if (rounds < 1) {
    throw std::invalid_argument("price scan needs at least one refinement round");
  }
  const double c = config.payment_unit_cost;
  double hi = price_max;
  const double cap = price_cap(config);
  if (std::isfinite(cap)) {
    hi = std::min(hi, cap * (1.0 - 1e-9));
  }
  const double lo = c * (1.0 + 1e-9);
  if (!(hi > lo)) {
    throw DegenerateMarketError("no price above cost has demand from every type");
  }

  const auto profit = [&](double price) {
    double aggregate = 0.0;
    for (std::size_t k = 0; k < config.num_types(); ++k) {
      aggregate += config.beta[k] *
                   inverse_marginal_valuation(config.valuation, price / config.theta[k]);
    }
    return (price - c) * aggregate;
  };
  const auto [price, value] =
      scan_1d(lo, hi, points, rounds, profit,
              "price maximizer on the scan boundary; widen the price range");
  if (!(value > 0.0)) {
    throw DegenerateMarketError("posted-price profit is nonpositive everywhere on the scan");
  }
  return PriceScanResult{price, value};
}

namespace {

// Shared state of one multi-axis screening scan. Axes 0..K-1 are payments
// (log-spaced); in full mode axes K..2K-1 are traffic levels (lin-spaced,
// starting at zero).
struct ScreeningScan {
  const EconomyConfig& config;
  OracleMode mode;
  int points;
  std::size_t num_types;
  std::size_t num_axes;
  double feasibility_tol;

  std::vector<double> box_lo, box_hi;            // original search box per axis
  std::vector<double> axis_lo, axis_hi;          // current window per axis
  std::vector<std::vector<double>> axis_points;  // rebuilt every round
  std::vector<std::vector<double>> values;       // v(T) per payment axis point
  // theta_weighted[k][l * points + p] = theta_k * v(T-axis-l point p)
  std::vector<std::vector<double>> theta_weighted;

  bool have_best = false;
  double best_objective = kNegInf;
  std::vector<double> best_payment, best_traffic;

  explicit ScreeningScan(const EconomyConfig& cfg, const GridSpec& grid, OracleMode m)
      : config(cfg),
        mode(m),
        points(grid.points_per_axis),
        num_types(cfg.num_types()),
        num_axes(m == OracleMode::FullGrid ? 2 * cfg.num_types() : cfg.num_types()) {
    const double value_scale =
        cfg.theta.back() * valuation(cfg.valuation, grid.t_max);
    feasibility_tol = 1e-9 * std::max(1.0, value_scale);
    axis_lo.assign(num_axes, 0.0);
    axis_hi.assign(num_axes, 0.0);
    for (std::size_t k = 0; k < num_types; ++k) {
      axis_lo[k] = grid.t_min;
      axis_hi[k] = grid.t_max;
      if (mode == OracleMode::FullGrid) {
        axis_lo[num_types + k] = 0.0;
        axis_hi[num_types + k] = cfg.theta[k] * valuation(cfg.valuation, grid.t_max);
      }
    }
    box_lo = axis_lo;
    box_hi = axis_hi;
    best_payment.assign(num_types, 0.0);
    best_traffic.assign(num_types, 0.0);
  }

  void rebuild_round_grids() {
    axis_points.assign(num_axes, {});
    for (std::size_t a = 0; a < num_axes; ++a) {
      axis_points[a] = a < num_types ? log_spaced(axis_lo[a], axis_hi[a], points)
                                     : lin_spaced(axis_lo[a], axis_hi[a], points);
    }
    values.assign(num_types, std::vector<double>(points));
    for (std::size_t l = 0; l < num_types; ++l) {
      for (int p = 0; p < points; ++p) {
        values[l][p] = valuation(config.valuation, axis_points[l][p]);
      }
    }
    theta_weighted.assign(num_types, std::vector<double>(num_types * points));
    for (std::size_t k = 0; k < num_types; ++k) {
      for (std::size_t l = 0; l < num_types; ++l) {
        for (int p = 0; p < points; ++p) {
          theta_weighted[k][l * points + p] = config.theta[k] * values[l][p];
        }
      }
    }
  }

  // Full IR + IC filter on a candidate (payments given via per-axis indices,
  // traffic passed explicitly).
  bool feasible(const int* t_index, const double* traffic) const {
    double own[3];
    for (std::size_t k = 0; k < num_types; ++k) {
      own[k] = theta_weighted[k][k * points + t_index[k]] - traffic[k];
      if (own[k] < -feasibility_tol) {
        return false;  // individual rationality
      }
    }
    for (std::size_t k = 0; k < num_types; ++k) {
      for (std::size_t l = 0; l < num_types; ++l) {
        if (l == k) {
          continue;
        }
        const double mimic = theta_weighted[k][l * points + t_index[l]] - traffic[l];
        if (own[k] < mimic - feasibility_tol) {
          return false;  // incentive compatibility
        }
      }
    }
    return true;
  }

  void offer(const int* t_index, const double* traffic, double objective) {
    if (objective > best_objective) {
      best_objective = objective;
      have_best = true;
      for (std::size_t k = 0; k < num_types; ++k) {
        best_payment[k] = axis_points[k][t_index[k]];
        best_traffic[k] = traffic[k];
      }
    }
  }

  void scan_round() {
    const double c = config.payment_unit_cost;
    std::vector<int> index(num_axes, 0);
    double traffic[3] = {0.0, 0.0, 0.0};
    while (true) {
      if (mode == OracleMode::BindingStructure) {
        // Lowest type pinned to zero payoff; each next type indifferent to
        // the bundle right below its own.
        traffic[0] = theta_weighted[0][0 * points + index[0]];
        for (std::size_t k = 1; k < num_types; ++k) {
          traffic[k] = traffic[k - 1] +
                       config.theta[k] * (values[k][index[k]] - values[k - 1][index[k - 1]]);
        }
      } else {
        for (std::size_t k = 0; k < num_types; ++k) {
          traffic[k] = axis_points[num_types + k][index[num_types + k]];
        }
      }
      bool admissible = true;
      for (std::size_t k = 0; k < num_types; ++k) {
        if (traffic[k] < 0.0) {
          admissible = false;
          break;
        }
      }
      if (admissible && feasible(index.data(), traffic)) {
        double objective = 0.0;
        for (std::size_t k = 0; k < num_types; ++k) {
          objective += config.beta[k] * (traffic[k] - c * axis_points[k][index[k]]);
        }
        offer(index.data(), traffic, objective);
      }
      // odometer increment, least significant axis first
      std::size_t a = 0;
      while (a < num_axes && ++index[a] == points) {
        index[a] = 0;
        ++a;
      }
      if (a == num_axes) {
        return;
      }
    }
  }

  // Re-center a +/-2-cell window per axis on the incumbent, clamped to the
  // original box (not the previous window) so the window can crawl back
  // toward an optimum that an earlier round fenced out by a cell or two.
  void zoom() {
    for (std::size_t a = 0; a < num_axes; ++a) {
      const double center =
          a < num_types ? best_payment[a] : best_traffic[a - num_types];
      if (a < num_types) {
        const double cell = std::log(axis_hi[a] / axis_lo[a]) / (points - 1);
        axis_lo[a] = std::max(box_lo[a], center * std::exp(-2.0 * cell));
        axis_hi[a] = std::min(box_hi[a], center * std::exp(2.0 * cell));
      } else {
        const double cell = (axis_hi[a] - axis_lo[a]) / (points - 1);
        axis_lo[a] = std::max(box_lo[a], center - 2.0 * cell);
        axis_hi[a] = std::min(box_hi[a], center + 2.0 * cell);
      }
      if (!(axis_hi[a] > axis_lo[a])) {  // collapsed window (e.g. q pinned at 0)
        axis_hi[a] = axis_lo[a] + std::max(1e-12, 1e-9 * std::fabs(axis_lo[a]));
      }
    }
  }
};

}  // namespace

OracleSolution oracle_anti_adverse_selection(const EconomyConfig& config, const GridSpec& grid,
                                             OracleMode mode) {
  config.validate();
  grid.validate();
  const std::size_t num_types = config.num_types();
  if (num_types > 3) {
    throw std::invalid_argument("screening oracle supports at most three types");
  }
  const std::size_t axes = mode == OracleMode::FullGrid ? 2 * num_types : num_types;
  double evaluations = 1.0;
  for (std::size_t a = 0; a < axes; ++a) {
    evaluations *= grid.points_per_axis;
  }
  if (evaluations > 5e8) {
    throw std::invalid_argument("grid too large: reduce points_per_axis");
  }

  ScreeningScan scan(config, grid, mode);
  for (int round = 0; round <= grid.refinement_rounds; ++round) {
    scan.rebuild_round_grids();
    scan.scan_round();
    if (!scan.have_best) {
      throw InfeasibleMenuError("no feasible menu on the oracle grid");
    }
    scan.zoom();
  }

  OracleSolution solution;
  solution.menu.mechanism = Mechanism::AntiAdverseSelection;
  for (std::size_t k = 0; k < num_types; ++k) {
    solution.menu.bundles.push_back(ContractBundle{scan.best_payment[k], scan.best_traffic[k]});
  }
  solution.objective = scan.best_objective;
  return solution;
}

}  // namespace offload
