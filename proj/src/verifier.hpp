#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "economy.hpp"

// Feasibility checking for contract menus, independent of how the menu was
// produced. Every quantity is recomputed from the menu and the economy
// configuration.
//
// Which constraints a menu must satisfy depends on its mechanism:
// * perfect discrimination promises participation only (each type is pinned
//   to zero payoff; other types would envy its bundle, by design);
// * linear pricing promises participation and no profitable bundle swap;
// * the anti-adverse-selection menu additionally promises strictly
//   increasing payment and traffic schedules and truthful self-selection.

namespace offload {

// Absolute tolerance for recomputed slacks and ties.
inline constexpr double kSlackTolerance = 1e-9;
// Strict-monotonicity margin for payment/traffic schedules.
inline constexpr double kMonotoneTolerance = 1e-12;

struct FeasibilityReport {
  Mechanism mechanism = Mechanism::AntiAdverseSelection;

  // Participation slack theta_k v(T_k) - q_k per type; also the information
  // rent earned under truthful play.
  std::vector<double> ir_slack;
  // Truth-telling slack [k][l]: payoff of type k at its own bundle minus its
  // payoff when taking bundle l. Diagonal entries are exactly zero.
  std::vector<std::vector<double>> ic_slack;
  // argmax_l of type k's payoff over the menu, ties resolved toward k.
  std::vector<std::size_t> preferred_bundle;

  bool payments_strictly_increasing = false;
  bool traffic_strictly_increasing = false;
  bool self_revealing = false;
  // All bundles identical within the tie window; self-selection is then
  // trivial and the flag warns that preferred_bundle carries no information.
  bool degenerate_menu = false;
  // max_k |ir_slack_k| <= tolerance: no type earns a rent.
  bool zero_information_rent = false;
  // Magnitude of the worst violated constraint among those the mechanism
  // promises; zero when feasible() holds.
  double worst_violation = 0.0;

  bool feasible() const;
};

// Recomputes all slacks for `menu` under `config`. Throws
// std::invalid_argument when the menu size differs from the number of types.
FeasibilityReport verify_menu(const ContractMenu& menu, const EconomyConfig& config);

// payoff[k][l] = theta_k * v(T_l) - q_l: what type k would earn from every
// bundle on the menu.
std::vector<std::vector<double>> selection_payoffs(const ContractMenu& menu,
                                                   const EconomyConfig& config);

// True when `row` rises (weakly) to a peak and then falls (weakly): no
// strict increase may follow a strict decrease. Plateaus within the slack
// tolerance count as flat.
bool payoff_unimodal(const std::vector<double>& row);

// Side-by-side per-type payoffs for up to three menus over one economy.
// Null menu pointers are simply skipped; columns keep the fixed order
// perfect discrimination, anti-adverse-selection, linear pricing.
struct PayoffTable {
  std::vector<Mechanism> mechanisms;
  std::vector<std::vector<double>> ap_payoff;   // [column][type]
  std::vector<std::vector<double>> bs_payoff;   // [column][type]
  std::vector<std::vector<double>> welfare;     // [column][type], ap + bs
  std::vector<double> expected_ap;              // [column], beta-weighted
  std::vector<double> expected_bs;
  std::vector<double> expected_welfare;
};

PayoffTable payoff_table(const ContractMenu* pd, const ContractMenu* aas,
                         const ContractMenu* lp, const EconomyConfig& config);

// Human-readable multi-line digest of a report.
std::string format_report_summary(const FeasibilityReport& report);

// CSV rows `k,ir_slack,min_ic_slack,preferred_bundle,truthful`, one per
// type, written atomically. min_ic_slack is over l != k (zero when K = 1).
void write_report_csv(const FeasibilityReport& report, const std::string& path);

}  // namespace offload
