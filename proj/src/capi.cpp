#include "contract_offload.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "economy.hpp"
#include "experiment.hpp"
#include "oracle.hpp"
#include "solvers.hpp"
#include "textio.hpp"
#include "verifier.hpp"

// Opaque handle definitions. Each wraps the corresponding library object
// plus caches for any strings handed back to the caller.

struct co_config {
  offload::EconomyConfig config;
  std::string valuation_label;
};

struct co_menu {
  offload::ContractMenu menu;
};

struct co_report {
  offload::FeasibilityReport report;
  std::string summary;
};

struct co_experiment_options {
  offload::MechanismSet mechanisms;
  std::vector<std::size_t> sweep_sizes;
  std::string output_dir;
  bool emit_oracle_checks = false;
};

struct co_experiment {
  offload::ExperimentResult result;
  co_menu pd, aas, lp;
  std::string summary;
  std::string crossover_note;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* message) { g_last_error = message == nullptr ? "" : message; }

co_status map_exception(co_status io_invalid_as = CO_ERR_INVALID_ARGUMENT) {
  try {
    throw;
  } catch (const offload::NonregularInstanceError& error) {
    set_error(error.what());
    return CO_ERR_NONREGULAR;
  } catch (const offload::NoSolutionError& error) {
    set_error(error.what());
    return CO_ERR_NO_SOLUTION;
  } catch (const offload::DegenerateMarketError& error) {
    set_error(error.what());
    return CO_ERR_DEGENERATE_MARKET;
  } catch (const offload::GridBoundaryError& error) {
    set_error(error.what());
    return CO_ERR_GRID_BOUNDARY;
  } catch (const offload::InfeasibleMenuError& error) {
    set_error(error.what());
    return CO_ERR_INFEASIBLE;
  } catch (const std::domain_error& error) {
    set_error(error.what());
    return CO_ERR_DOMAIN;
  } catch (const std::invalid_argument& error) {
    set_error(error.what());
    return io_invalid_as;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return CO_ERR_INTERNAL;
  } catch (const std::logic_error& error) {
    set_error(error.what());
    return CO_ERR_INTERNAL;
  } catch (const std::runtime_error& error) {
    set_error(error.what());
    return CO_ERR_IO;
  } catch (const std::exception& error) {
    set_error(error.what());
    return CO_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return CO_ERR_INTERNAL;
  }
}

// Runs `body`, translating exceptions into status codes. When
// `file_context` is true, malformed content maps to CO_ERR_PARSE instead of
// CO_ERR_INVALID_ARGUMENT.
template <typename F>
co_status guarded(F&& body, bool file_context = false) noexcept {
  try {
    body();
    return CO_OK;
  } catch (...) {
    return map_exception(file_context ? CO_ERR_PARSE : CO_ERR_INVALID_ARGUMENT);
  }
}

co_status invalid(const char* message) {
  set_error(message);
  return CO_ERR_INVALID_ARGUMENT;
}

offload::ValuationKind make_kind(co_valuation_family family, double alpha) {
  switch (family) {
    case CO_VALUATION_SQRT:
      return offload::ValuationKind::square_root();
    case CO_VALUATION_LOG1P:
      return offload::ValuationKind::log_one_plus();
    case CO_VALUATION_POW:
      return offload::ValuationKind::power(alpha);
  }
  throw std::invalid_argument("unknown valuation family");
}

offload::Mechanism make_mechanism(co_mechanism mechanism) {
  switch (mechanism) {
    case CO_MECH_PD:
      return offload::Mechanism::PerfectDiscrimination;
    case CO_MECH_AAS:
      return offload::Mechanism::AntiAdverseSelection;
    case CO_MECH_LP:
      return offload::Mechanism::LinearPricing;
  }
  throw std::invalid_argument("unknown mechanism");
}

co_mechanism to_c_mechanism(offload::Mechanism mechanism) {
  switch (mechanism) {
    case offload::Mechanism::PerfectDiscrimination:
      return CO_MECH_PD;
    case offload::Mechanism::AntiAdverseSelection:
      return CO_MECH_AAS;
    case offload::Mechanism::LinearPricing:
      return CO_MECH_LP;
  }
  return CO_MECH_PD;
}

co_config* wrap_config(offload::EconomyConfig config) {
  auto* handle = new co_config{std::move(config), {}};
  handle->valuation_label = handle->config.valuation.label();
  return handle;
}

offload::ExperimentConfig to_experiment_config(const co_config* config,
                                               const co_experiment_options* options) {
  offload::ExperimentConfig experiment;
  experiment.economy = config->config;
  if (options != nullptr) {
    experiment.mechanisms = options->mechanisms;
    experiment.sweep_sizes = options->sweep_sizes;
    experiment.output_dir = options->output_dir;
    experiment.emit_oracle_checks = options->emit_oracle_checks;
  }
  return experiment;
}

co_experiment* wrap_experiment(offload::ExperimentResult result) {
  auto* handle = new co_experiment;
  handle->result = std::move(result);
  if (handle->result.pd) {
    handle->pd.menu = *handle->result.pd;
  }
  if (handle->result.aas) {
    handle->aas.menu = *handle->result.aas;
  }
  if (handle->result.lp) {
    handle->lp.menu = *handle->result.lp;
  }
  handle->summary = handle->result.summary;
  handle->crossover_note = handle->result.crossover_note;
  return handle;
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

extern "C" {

const char* co_last_error(void) { return g_last_error.c_str(); }

const char* co_status_name(co_status status) {
  switch (status) {
    case CO_OK:
      return "ok";
    case CO_ERR_INVALID_ARGUMENT:
      return "invalid-argument";
    case CO_ERR_DOMAIN:
      return "domain";
    case CO_ERR_NO_SOLUTION:
      return "no-solution";
    case CO_ERR_NONREGULAR:
      return "nonregular-instance";
    case CO_ERR_DEGENERATE_MARKET:
      return "degenerate-market";
    case CO_ERR_INFEASIBLE:
      return "infeasible-menu";
    case CO_ERR_GRID_BOUNDARY:
      return "grid-boundary";
    case CO_ERR_IO:
      return "io";
    case CO_ERR_PARSE:
      return "parse";
    case CO_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* co_version(void) { return "1.0.0"; }

/* ------------------------------------------------------------------ */
/* Configs                                                             */
/* ------------------------------------------------------------------ */

co_status co_config_create(const double* theta, const double* beta, size_t num_types,
                           double payment_unit_cost, co_valuation_family family, double alpha,
                           co_config** out_config) {
  if (out_config == nullptr) {
    return invalid("out_config is NULL");
  }
  *out_config = nullptr;
  if (theta == nullptr || beta == nullptr || num_types == 0) {
    return invalid("theta/beta must be non-NULL with at least one type");
  }
  return guarded([&] {
    offload::EconomyConfig config = offload::make_economy_config(
        std::vector<double>(theta, theta + num_types),
        std::vector<double>(beta, beta + num_types), payment_unit_cost,
        make_kind(family, alpha));
    *out_config = wrap_config(std::move(config));
  });
}

co_status co_config_create_default(size_t num_types, double payment_unit_cost,
                                   co_valuation_family family, double alpha,
                                   co_config** out_config) {
  if (out_config == nullptr) {
    return invalid("out_config is NULL");
  }
  *out_config = nullptr;
  return guarded([&] {
    *out_config = wrap_config(
        offload::default_economy(num_types, payment_unit_cost, make_kind(family, alpha)));
  });
}

void co_config_free(co_config* config) { delete config; }

size_t co_config_num_types(const co_config* config) {
  return config == nullptr ? 0 : config->config.num_types();
}

double co_config_theta(const co_config* config, size_t k) {
  if (config == nullptr || k >= config->config.num_types()) {
    return nan_value();
  }
  return config->config.theta[k];
}

double co_config_beta(const co_config* config, size_t k) {
  if (config == nullptr || k >= config->config.num_types()) {
    return nan_value();
  }
  return config->config.beta[k];
}

double co_config_unit_cost(const co_config* config) {
  return config == nullptr ? nan_value() : config->config.payment_unit_cost;
}

const char* co_config_valuation_label(const co_config* config) {
  return config == nullptr ? "" : config->valuation_label.c_str();
}

/* ------------------------------------------------------------------ */
/* Options and setup loading                                           */
/* ------------------------------------------------------------------ */

co_status co_options_create(co_experiment_options** out_options) {
  if (out_options == nullptr) {
    return invalid("out_options is NULL");
  }
  *out_options = new (std::nothrow) co_experiment_options;
  if (*out_options == nullptr) {
    set_error("out of memory");
    return CO_ERR_INTERNAL;
  }
  return CO_OK;
}

void co_options_free(co_experiment_options* options) { delete options; }

co_status co_options_set_mechanisms(co_experiment_options* options, unsigned flags) {
  if (options == nullptr) {
    return invalid("options is NULL");
  }
  if ((flags & CO_MECH_FLAG_ALL) == 0 || (flags & ~CO_MECH_FLAG_ALL) != 0) {
    return invalid("flags must be a nonempty subset of CO_MECH_FLAG_*");
  }
  options->mechanisms.pd = (flags & CO_MECH_FLAG_PD) != 0;
  options->mechanisms.aas = (flags & CO_MECH_FLAG_AAS) != 0;
  options->mechanisms.lp = (flags & CO_MECH_FLAG_LP) != 0;
  return CO_OK;
}

co_status co_options_set_sweep_range(co_experiment_options* options, size_t lo, size_t hi) {
  if (options == nullptr) {
    return invalid("options is NULL");
  }
  if (lo == 0 || hi < lo) {
    return invalid("sweep range needs 1 <= lo <= hi");
  }
  options->sweep_sizes.clear();
  for (size_t size = lo; size <= hi; ++size) {
    options->sweep_sizes.push_back(size);
  }
  return CO_OK;
}

co_status co_options_set_sweep_list(co_experiment_options* options, const size_t* sizes,
                                    size_t count) {
  if (options == nullptr) {
    return invalid("options is NULL");
  }
  if (sizes == nullptr && count > 0) {
    return invalid("sizes is NULL");
  }
  for (size_t i = 0; i < count; ++i) {
    if (sizes[i] == 0) {
      return invalid("sweep sizes must be positive");
    }
  }
  options->sweep_sizes.assign(sizes, sizes + count);
  return CO_OK;
}

co_status co_options_set_output_dir(co_experiment_options* options, const char* dir) {
  if (options == nullptr) {
    return invalid("options is NULL");
  }
  options->output_dir = dir == nullptr ? "" : dir;
  return CO_OK;
}

co_status co_options_set_emit_oracle_checks(co_experiment_options* options, int emit) {
  if (options == nullptr) {
    return invalid("options is NULL");
  }
  options->emit_oracle_checks = emit != 0;
  return CO_OK;
}

unsigned co_options_mechanisms(const co_experiment_options* options) {
  if (options == nullptr) {
    return 0;
  }
  unsigned flags = 0;
  flags |= options->mechanisms.pd ? CO_MECH_FLAG_PD : 0u;
  flags |= options->mechanisms.aas ? CO_MECH_FLAG_AAS : 0u;
  flags |= options->mechanisms.lp ? CO_MECH_FLAG_LP : 0u;
  return flags;
}

int co_options_has_sweep(const co_experiment_options* options) {
  return options != nullptr && !options->sweep_sizes.empty() ? 1 : 0;
}

const char* co_options_output_dir(const co_experiment_options* options) {
  return options == nullptr ? "" : options->output_dir.c_str();
}

int co_options_emit_oracle_checks(const co_experiment_options* options) {
  return options != nullptr && options->emit_oracle_checks ? 1 : 0;
}

co_status co_load_setup(const char* config_path, const co_overrides* overrides,
                        co_config** out_config, co_experiment_options** out_options) {
  if (out_config == nullptr || out_options == nullptr) {
    return invalid("out_config/out_options is NULL");
  }
  *out_config = nullptr;
  *out_options = nullptr;
  return guarded(
      [&] {
        offload::ExperimentConfig base;
        if (config_path != nullptr && *config_path != '\0') {
          base = offload::load_experiment_file(config_path);
        } else {
          base.economy =
              offload::default_economy(20, 0.01, offload::ValuationKind::square_root());
        }

        double cost = base.economy.payment_unit_cost;
        offload::ValuationKind kind = base.economy.valuation;
        std::vector<double> theta = base.economy.theta;
        std::vector<double> beta = base.economy.beta;

        if (overrides != nullptr) {
          if (overrides->payment_unit_cost > 0.0) {
            cost = overrides->payment_unit_cost;
          }
          if (overrides->valuation != nullptr) {
            kind = offload::parse_valuation_label(overrides->valuation);
          }
          const bool theta_given = overrides->theta != nullptr && overrides->num_theta > 0;
          const bool beta_given = overrides->beta != nullptr && overrides->num_beta > 0;
          if (overrides->num_types > 0 && theta_given &&
              overrides->num_types != overrides->num_theta) {
            throw std::invalid_argument("num_types disagrees with the theta override");
          }
          if (theta_given) {
            theta.assign(overrides->theta, overrides->theta + overrides->num_theta);
            beta.assign(overrides->num_theta, 1.0 / double(overrides->num_theta));
          } else if (overrides->num_types > 0 &&
                     overrides->num_types != theta.size()) {
            const offload::EconomyConfig regenerated =
                offload::default_economy(overrides->num_types, cost, kind);
            theta = regenerated.theta;
            beta = regenerated.beta;
          }
          if (beta_given) {
            if (overrides->num_beta != theta.size()) {
              throw std::invalid_argument("beta override length differs from theta");
            }
            beta.assign(overrides->beta, overrides->beta + overrides->num_beta);
          }
        }

        offload::ExperimentConfig merged;
        merged.economy =
            offload::make_economy_config(std::move(theta), std::move(beta), cost, kind);
        merged.mechanisms =
            overrides != nullptr && overrides->mechanisms != nullptr
                ? offload::parse_mechanism_set(overrides->mechanisms)
                : base.mechanisms;
        merged.sweep_sizes =
            overrides != nullptr && overrides->sweep != nullptr
                ? offload::parse_sweep_specification(overrides->sweep)
                : base.sweep_sizes;
        merged.output_dir = offload::resolve_output_dir(
            overrides != nullptr && overrides->output_dir != nullptr ? overrides->output_dir
                                                                     : "",
            base.output_dir);
        merged.emit_oracle_checks =
            overrides != nullptr && overrides->emit_oracle_checks >= 0
                ? overrides->emit_oracle_checks != 0
                : base.emit_oracle_checks;

        auto* options = new co_experiment_options;
        options->mechanisms = merged.mechanisms;
        options->sweep_sizes = merged.sweep_sizes;
        options->output_dir = merged.output_dir;
        options->emit_oracle_checks = merged.emit_oracle_checks;
        *out_config = wrap_config(std::move(merged.economy));
        *out_options = options;
      },
      /*file_context=*/config_path != nullptr && *config_path != '\0');
}

/* ------------------------------------------------------------------ */
/* Solving and menus                                                   */
/* ------------------------------------------------------------------ */

co_status co_solve(const co_config* config, co_mechanism mechanism, co_menu** out_menu) {
  if (out_menu == nullptr) {
    return invalid("out_menu is NULL");
  }
  *out_menu = nullptr;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    offload::ContractMenu menu;
    switch (make_mechanism(mechanism)) {
      case offload::Mechanism::PerfectDiscrimination:
        menu = offload::solve_perfect_discrimination(config->config);
        break;
      case offload::Mechanism::AntiAdverseSelection:
        menu = offload::solve_anti_adverse_selection(config->config);
        break;
      case offload::Mechanism::LinearPricing:
        menu = offload::solve_linear_pricing(config->config).menu;
        break;
    }
    *out_menu = new co_menu{std::move(menu)};
  });
}

void co_menu_free(co_menu* menu) { delete menu; }

co_mechanism co_menu_mechanism(const co_menu* menu) {
  return menu == nullptr ? CO_MECH_PD : to_c_mechanism(menu->menu.mechanism);
}

size_t co_menu_size(const co_menu* menu) {
  return menu == nullptr ? 0 : menu->menu.bundles.size();
}

double co_menu_payment(const co_menu* menu, size_t k) {
  if (menu == nullptr || k >= menu->menu.bundles.size()) {
    return nan_value();
  }
  return menu->menu.bundles[k].payment;
}

double co_menu_traffic(const co_menu* menu, size_t k) {
  if (menu == nullptr || k >= menu->menu.bundles.size()) {
    return nan_value();
  }
  return menu->menu.bundles[k].traffic;
}

int co_menu_has_unit_price(const co_menu* menu) {
  return menu != nullptr && menu->menu.unit_price.has_value() ? 1 : 0;
}

double co_menu_unit_price(const co_menu* menu) {
  if (menu == nullptr || !menu->menu.unit_price.has_value()) {
    return nan_value();
  }
  return *menu->menu.unit_price;
}

co_status co_menu_write_csv(const co_menu* menu, const char* path) {
  if (menu == nullptr || path == nullptr) {
    return invalid("menu/path is NULL");
  }
  return guarded([&] { offload::write_menu_csv(menu->menu, path); });
}

co_status co_menu_read_csv(const char* path, co_mechanism mechanism, co_menu** out_menu) {
  if (out_menu == nullptr) {
    return invalid("out_menu is NULL");
  }
  *out_menu = nullptr;
  if (path == nullptr) {
    return invalid("path is NULL");
  }
  return guarded(
      [&] {
        *out_menu =
            new co_menu{offload::read_menu_csv(path, make_mechanism(mechanism))};
      },
      /*file_context=*/true);
}

/* ------------------------------------------------------------------ */
/* Verification                                                        */
/* ------------------------------------------------------------------ */

co_status co_verify_menu(const co_config* config, const co_menu* menu, co_report** out_report) {
  if (out_report == nullptr) {
    return invalid("out_report is NULL");
  }
  *out_report = nullptr;
  if (config == nullptr || menu == nullptr) {
    return invalid("config/menu is NULL");
  }
  return guarded([&] {
    auto* report = new co_report;
    report->report = offload::verify_menu(menu->menu, config->config);
    *out_report = report;
  });
}

void co_report_free(co_report* report) { delete report; }

int co_report_passes(const co_report* report) {
  return report != nullptr && report->report.feasible() ? 1 : 0;
}

double co_report_worst_violation(const co_report* report) {
  return report == nullptr ? nan_value() : report->report.worst_violation;
}

double co_report_ir_slack(const co_report* report, size_t k) {
  if (report == nullptr || k >= report->report.ir_slack.size()) {
    return nan_value();
  }
  return report->report.ir_slack[k];
}

double co_report_min_ic_slack(const co_report* report, size_t k) {
  if (report == nullptr || k >= report->report.ic_slack.size()) {
    return nan_value();
  }
  const std::vector<double>& row = report->report.ic_slack[k];
  double minimum = 0.0;
  bool first = true;
  for (size_t l = 0; l < row.size(); ++l) {
    if (l == k) {
      continue;
    }
    minimum = first ? row[l] : std::min(minimum, row[l]);
    first = false;
  }
  return minimum;
}

size_t co_report_preferred_bundle(const co_report* report, size_t k) {
  if (report == nullptr || k >= report->report.preferred_bundle.size()) {
    return size_t(-1);
  }
  return report->report.preferred_bundle[k];
}

int co_report_self_revealing(const co_report* report) {
  return report != nullptr && report->report.self_revealing ? 1 : 0;
}

int co_report_monotone(const co_report* report) {
  return report != nullptr && report->report.payments_strictly_increasing &&
                 report->report.traffic_strictly_increasing
             ? 1
             : 0;
}

int co_report_zero_information_rent(const co_report* report) {
  return report != nullptr && report->report.zero_information_rent ? 1 : 0;
}

const char* co_report_summary(co_report* report) {
  if (report == nullptr) {
    return "";
  }
  if (report->summary.empty()) {
    report->summary = offload::format_report_summary(report->report);
  }
  return report->summary.c_str();
}

co_status co_report_write_csv(const co_report* report, const char* path) {
  if (report == nullptr || path == nullptr) {
    return invalid("report/path is NULL");
  }
  return guarded([&] { offload::write_report_csv(report->report, path); });
}

/* ------------------------------------------------------------------ */
/* Experiments                                                         */
/* ------------------------------------------------------------------ */

co_status co_compute_experiment(const co_config* config, const co_experiment_options* options,
                                co_experiment** out_experiment) {
  if (out_experiment == nullptr) {
    return invalid("out_experiment is NULL");
  }
  *out_experiment = nullptr;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    *out_experiment =
        wrap_experiment(offload::compute_experiment(to_experiment_config(config, options)));
  });
}

co_status co_run_experiment(const co_config* config, const co_experiment_options* options,
                            co_experiment** out_experiment) {
  if (out_experiment == nullptr) {
    return invalid("out_experiment is NULL");
  }
  *out_experiment = nullptr;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    *out_experiment =
        wrap_experiment(offload::run_experiment(to_experiment_config(config, options)));
  });
}

void co_experiment_free(co_experiment* experiment) { delete experiment; }

const char* co_experiment_summary(const co_experiment* experiment) {
  return experiment == nullptr ? "" : experiment->summary.c_str();
}

size_t co_experiment_num_columns(const co_experiment* experiment) {
  return experiment == nullptr ? 0 : experiment->result.table.mechanisms.size();
}

co_mechanism co_experiment_column_mechanism(const co_experiment* experiment, size_t column) {
  if (experiment == nullptr || column >= experiment->result.table.mechanisms.size()) {
    return CO_MECH_PD;
  }
  return to_c_mechanism(experiment->result.table.mechanisms[column]);
}

double co_experiment_expected_bs(const co_experiment* experiment, size_t column) {
  if (experiment == nullptr || column >= experiment->result.table.expected_bs.size()) {
    return nan_value();
  }
  return experiment->result.table.expected_bs[column];
}

double co_experiment_expected_ap(const co_experiment* experiment, size_t column) {
  if (experiment == nullptr || column >= experiment->result.table.expected_ap.size()) {
    return nan_value();
  }
  return experiment->result.table.expected_ap[column];
}

double co_experiment_expected_welfare(const co_experiment* experiment, size_t column) {
  if (experiment == nullptr || column >= experiment->result.table.expected_welfare.size()) {
    return nan_value();
  }
  return experiment->result.table.expected_welfare[column];
}

const co_menu* co_experiment_menu(const co_experiment* experiment, co_mechanism mechanism) {
  if (experiment == nullptr) {
    return nullptr;
  }
  switch (mechanism) {
    case CO_MECH_PD:
      return experiment->result.pd ? &experiment->pd : nullptr;
    case CO_MECH_AAS:
      return experiment->result.aas ? &experiment->aas : nullptr;
    case CO_MECH_LP:
      return experiment->result.lp ? &experiment->lp : nullptr;
  }
  return nullptr;
}

size_t co_experiment_num_sweep_rows(const co_experiment* experiment) {
  return experiment == nullptr ? 0 : experiment->result.sweep.size();
}

size_t co_experiment_sweep_num_types(const co_experiment* experiment, size_t row) {
  if (experiment == nullptr || row >= experiment->result.sweep.size()) {
    return 0;
  }
  return experiment->result.sweep[row].num_types;
}

double co_experiment_sweep_expected_bs(const co_experiment* experiment, size_t row,
                                       size_t column) {
  if (experiment == nullptr || row >= experiment->result.sweep.size() ||
      column >= experiment->result.sweep[row].expected_bs.size()) {
    return nan_value();
  }
  return experiment->result.sweep[row].expected_bs[column];
}

double co_experiment_sweep_expected_ap(const co_experiment* experiment, size_t row,
                                       size_t column) {
  if (experiment == nullptr || row >= experiment->result.sweep.size() ||
      column >= experiment->result.sweep[row].expected_ap.size()) {
    return nan_value();
  }
  return experiment->result.sweep[row].expected_ap[column];
}

double co_experiment_sweep_expected_welfare(const co_experiment* experiment, size_t row,
                                            size_t column) {
  if (experiment == nullptr || row >= experiment->result.sweep.size() ||
      column >= experiment->result.sweep[row].expected_welfare.size()) {
    return nan_value();
  }
  return experiment->result.sweep[row].expected_welfare[column];
}

const char* co_experiment_crossover_note(const co_experiment* experiment) {
  return experiment == nullptr ? "" : experiment->crossover_note.c_str();
}

co_status co_reproduce_figures(const char* output_dir) {
  return guarded([&] {
    offload::ExperimentConfig config = offload::default_experiment();
    config.output_dir =
        offload::resolve_output_dir(output_dir == nullptr ? "" : output_dir, "");
    offload::run_experiment(config);
  });
}

/* ------------------------------------------------------------------ */
/* Oracles                                                             */
/* ------------------------------------------------------------------ */

co_status co_oracle_screening(const co_config* config, double t_min, double t_max,
                              int points_per_axis, int refinement_rounds, int full_grid,
                              co_menu** out_menu, double* out_objective) {
  if (out_menu == nullptr || out_objective == nullptr) {
    return invalid("out_menu/out_objective is NULL");
  }
  *out_menu = nullptr;
  *out_objective = 0.0;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    offload::GridSpec grid;
    grid.t_min = t_min;
    grid.t_max = t_max;
    grid.points_per_axis = points_per_axis;
    grid.refinement_rounds = refinement_rounds;
    offload::OracleSolution solution = offload::oracle_anti_adverse_selection(
        config->config, grid,
        full_grid != 0 ? offload::OracleMode::FullGrid : offload::OracleMode::BindingStructure);
    *out_objective = solution.objective;
    *out_menu = new co_menu{std::move(solution.menu)};
  });
}

co_status co_oracle_zero_payoff(const co_config* config, double t_min, double t_max,
                                int points_per_axis, int refinement_rounds, co_menu** out_menu,
                                double* out_objective) {
  if (out_menu == nullptr || out_objective == nullptr) {
    return invalid("out_menu/out_objective is NULL");
  }
  *out_menu = nullptr;
  *out_objective = 0.0;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    offload::GridSpec grid;
    grid.t_min = t_min;
    grid.t_max = t_max;
    grid.points_per_axis = points_per_axis;
    grid.refinement_rounds = refinement_rounds;
    offload::OracleSolution solution = offload::oracle_perfect_discrimination(config->config, grid);
    *out_objective = solution.objective;
    *out_menu = new co_menu{std::move(solution.menu)};
  });
}

co_status co_oracle_posted_price(const co_config* config, double price_max, int points,
                                 int rounds, double* out_price, double* out_profit) {
  if (out_price == nullptr || out_profit == nullptr) {
    return invalid("out_price/out_profit is NULL");
  }
  *out_price = 0.0;
  *out_profit = 0.0;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    const offload::PriceScanResult scan =
        offload::oracle_linear_pricing(config->config, price_max, points, rounds);
    *out_price = scan.price;
    *out_profit = scan.profit;
  });
}

co_status co_oracle_check(const co_config* config, const char* dir, int* out_all_passed) {
  if (out_all_passed == nullptr) {
    return invalid("out_all_passed is NULL");
  }
  *out_all_passed = 0;
  if (config == nullptr) {
    return invalid("config is NULL");
  }
  return guarded([&] {
    const std::vector<offload::OracleCheckRow> rows =
        offload::run_oracle_checks(config->config);
    bool all_passed = true;
    for (const offload::OracleCheckRow& row : rows) {
      all_passed = all_passed && row.pass;
    }
    if (dir != nullptr && *dir != '\0') {
      offload::write_oracle_check_csv(rows, std::string(dir) + "/oracle_checks.csv");
    }
    *out_all_passed = all_passed ? 1 : 0;
  });
}

} /* extern "C" */
