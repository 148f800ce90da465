#pragma once

#include <cstddef>

#include "economy.hpp"

// Brute-force grid optimizers, deliberately independent of the closed-form
// solvers. They exist so the analytic results can be distrusted: every
// first-order condition and payment recursion in solvers.cpp is validated
// against these scans before being believed.
//
// All scans are deterministic: fixed grids, single-threaded lexicographic
// sweeps, and incumbents replaced only on a strict objective improvement, so
// ties resolve to the lexicographically first index vector.

namespace offload {

// Log-spaced payment search box shared by every payment axis.
struct GridSpec {
  double t_min = 1e-6;
  double t_max = 1e9;
  int points_per_axis = 48;
  int refinement_rounds = 4;

  void validate() const;  // throws std::invalid_argument
};

struct OracleSolution {
  ContractMenu menu;
  double objective = 0.0;  // expected BS payoff sum_k beta_k (q_k - c T_k)
};

enum class OracleMode {
  // Search payment vectors only; traffic follows the binding pattern
  // (lowest type held at zero payoff, every higher type indifferent to the
  // next lower bundle). Candidates still must pass the full feasibility
  // check.
  BindingStructure,
  // Search payments and traffic jointly (2K axes) with full individual-
  // rationality and incentive-compatibility filtering.
  FullGrid,
};

// Grid optimum of the screening program. K <= 3 only (the search is
// exponential in K); throws std::invalid_argument beyond that and
// InfeasibleMenuError when no grid point passes the feasibility filter.
OracleSolution oracle_anti_adverse_selection(const EconomyConfig& config, const GridSpec& grid,
                                             OracleMode mode);

// Per-type 1-D scan of theta_k v(T) - ... the BS objective q - cT with
// q = theta_k v(T). Throws GridBoundaryError when a maximizer lands on the
// edge of the box (widen the grid).
OracleSolution oracle_perfect_discrimination(const EconomyConfig& config, const GridSpec& grid);

struct PriceScanResult {
  double price = 0.0;
  double profit = 0.0;
};

// Scans BS profit (P - c) * D(P) over prices in (c, price_max], refining
// around the incumbent. Throws GridBoundaryError for a boundary maximizer
// and DegenerateMarketError when no scanned price earns positive profit.
PriceScanResult oracle_linear_pricing(const EconomyConfig& config, double price_max, int points,
                                      int rounds);

}  // namespace offload
