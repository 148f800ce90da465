/*
 * contract_offload - mobile-data-offloading contract design library.
 *
 * A base station (BS) buys offloaded traffic from access points (APs) whose
 * willingness to trade is private information. The library solves three
 * mechanisms over a common market description:
 *
 *   - perfect discrimination: type-observable benchmark, every AP pinned to
 *     zero payoff;
 *   - anti-adverse-selection menu: profit-maximizing screening menu that is
 *     individually rational, incentive compatible, monotone, and
 *     self-revealing;
 *   - linear pricing: one posted traffic-per-payment price for everyone.
 *
 * It verifies menus against those requirements, cross-checks the solvers
 * against independent grid-search oracles, and writes deterministic CSV
 * tables for the standard comparison figures.
 *
 * Conventions:
 *   - Every fallible call returns a co_status; CO_OK is zero. On failure,
 *     co_last_error() returns a thread-local description of what went wrong.
 *   - Objects are opaque handles created and destroyed by this library.
 *     Strings returned through const char* are owned by the handle they came
 *     from (or by thread-local storage for co_last_error) and stay valid
 *     until that handle is freed or the next call on the same handle.
 *   - Types are indexed 0..K-1 in increasing valuation order.
 */

#ifndef CONTRACT_OFFLOAD_H
#define CONTRACT_OFFLOAD_H

#include <stddef.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  if defined(CO_BUILD)
#    define CO_API __declspec(dllexport)
#  else
#    define CO_API __declspec(dllimport)
#  endif
#else
#  if defined(CO_BUILD)
#    define CO_API __attribute__((visibility("default")))
#  else
#    define CO_API
#  endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum co_status {
    CO_OK = 0,
    CO_ERR_INVALID_ARGUMENT = 1,  /* malformed input (sizes, ranges, tags) */
    CO_ERR_DOMAIN = 2,            /* quantity outside a function's domain */
    CO_ERR_NO_SOLUTION = 3,       /* first-order condition has no root */
    CO_ERR_NONREGULAR = 4,        /* screening needs ironing; not implemented */
    CO_ERR_DEGENERATE_MARKET = 5, /* posted pricing has no interior optimum */
    CO_ERR_INFEASIBLE = 6,        /* menu violates its mechanism's promises */
    CO_ERR_GRID_BOUNDARY = 7,     /* grid-search optimum on the search-box edge */
    CO_ERR_IO = 8,                /* file could not be read or written */
    CO_ERR_PARSE = 9,             /* file content is malformed */
    CO_ERR_INTERNAL = 10          /* invariant violation inside the library */
} co_status;

typedef enum co_valuation_family {
    CO_VALUATION_SQRT = 0,  /* v(T) = sqrt(T) */
    CO_VALUATION_LOG1P = 1, /* v(T) = log(1 + T) */
    CO_VALUATION_POW = 2    /* v(T) = T^alpha, 0 < alpha < 1 */
} co_valuation_family;

typedef enum co_mechanism {
    CO_MECH_PD = 0, /* perfect discrimination */
    CO_MECH_AAS = 1,/* anti-adverse-selection menu */
    CO_MECH_LP = 2  /* linear pricing */
} co_mechanism;

/* Mechanism subsets for experiment options. */
#define CO_MECH_FLAG_PD 1u
#define CO_MECH_FLAG_AAS 2u
#define CO_MECH_FLAG_LP 4u
#define CO_MECH_FLAG_ALL 7u

typedef struct co_config co_config;                     /* market description */
typedef struct co_menu co_menu;                         /* contract menu */
typedef struct co_report co_report;                     /* feasibility report */
typedef struct co_experiment co_experiment;             /* experiment results */
typedef struct co_experiment_options co_experiment_options;

/* Thread-local description of the most recent failure in this thread.
   Never NULL; empty before the first failure. */
CO_API const char* co_last_error(void);

/* Stable short name of a status code, e.g. "nonregular-instance". */
CO_API const char* co_status_name(co_status status);

/* Library version, e.g. "1.0.0". */
CO_API const char* co_version(void);

/* ------------------------------------------------------------------ */
/* Market configuration                                                */
/* ------------------------------------------------------------------ */

/* Creates a market with `num_types` AP types. theta must be strictly
   increasing and positive; beta positive, summing to one within 1e-12.
   alpha is only read for CO_VALUATION_POW (must lie in (0, 1)). */
CO_API co_status co_config_create(const double* theta, const double* beta, size_t num_types,
                                  double payment_unit_cost, co_valuation_family family,
                                  double alpha, co_config** out_config);

/* Built-in market: theta_k = 2K + k for k = 1..K with uniform weights.
   Regular for every K >= 1. */
CO_API co_status co_config_create_default(size_t num_types, double payment_unit_cost,
                                          co_valuation_family family, double alpha,
                                          co_config** out_config);

CO_API void co_config_free(co_config* config);

CO_API size_t co_config_num_types(const co_config* config);
/* Out-of-range indices yield NaN. */
CO_API double co_config_theta(const co_config* config, size_t k);
CO_API double co_config_beta(const co_config* config, size_t k);
CO_API double co_config_unit_cost(const co_config* config);
/* "sqrt", "log1p", or "pow:<alpha>"; owned by the config handle. */
CO_API const char* co_config_valuation_label(const co_config* config);

/* ------------------------------------------------------------------ */
/* Experiment options and the one-call setup loader                    */
/* ------------------------------------------------------------------ */

/* Defaults: all mechanisms, no sweep, no oracle checks, output directory
   unresolved (empty, meaning the current directory when used directly). */
CO_API co_status co_options_create(co_experiment_options** out_options);
CO_API void co_options_free(co_experiment_options* options);

/* `flags` is an OR of CO_MECH_FLAG_*; must select at least one. */
CO_API co_status co_options_set_mechanisms(co_experiment_options* options, unsigned flags);
CO_API co_status co_options_set_sweep_range(co_experiment_options* options, size_t lo,
                                            size_t hi);
CO_API co_status co_options_set_sweep_list(co_experiment_options* options, const size_t* sizes,
                                           size_t count);
CO_API co_status co_options_set_output_dir(co_experiment_options* options, const char* dir);
CO_API co_status co_options_set_emit_oracle_checks(co_experiment_options* options, int emit);

CO_API unsigned co_options_mechanisms(const co_experiment_options* options);
CO_API int co_options_has_sweep(const co_experiment_options* options);
/* Owned by the options handle. */
CO_API const char* co_options_output_dir(const co_experiment_options* options);
CO_API int co_options_emit_oracle_checks(const co_experiment_options* options);

/* Command-line overrides for co_load_setup. Leave a field at its "unset"
   marker to keep the config-file value (or the built-in default). */
typedef struct co_overrides {
    const double* theta;      /* unset: NULL */
    size_t num_theta;
    const double* beta;       /* unset: NULL */
    size_t num_beta;
    size_t num_types;         /* unset: 0; regenerates the default grid */
    double payment_unit_cost; /* unset: <= 0 */
    const char* valuation;    /* unset: NULL; "sqrt", "log1p", "pow:<alpha>" */
    const char* mechanisms;   /* unset: NULL; e.g. "pd,aas,lp" */
    const char* sweep;        /* unset: NULL; e.g. "2..20" or "2,5,9" */
    const char* output_dir;   /* unset: NULL; highest-precedence destination */
    int emit_oracle_checks;   /* unset: < 0 */
} co_overrides;

/* Builds a config and options from an optional flat key=value file
   (config_path may be NULL) plus optional overrides (may be NULL).
   Precedence: overrides, then file, then built-in defaults (20 types,
   cost 0.01, square-root valuation, all mechanisms, no sweep).
   The output directory additionally honours the CONTRACT_OFFLOAD_OUT
   environment variable between the override and the file value, falling
   back to ".". File-format problems map to CO_ERR_PARSE. */
CO_API co_status co_load_setup(const char* config_path, const co_overrides* overrides,
                               co_config** out_config, co_experiment_options** out_options);

/* ------------------------------------------------------------------ */
/* Solving and menus                                                   */
/* ------------------------------------------------------------------ */

/* Solves one mechanism. CO_ERR_NONREGULAR (with the offending 1-based type
   index in co_last_error) when the screening instance needs ironing;
   CO_ERR_DEGENERATE_MARKET when posted pricing has no interior optimum. */
CO_API co_status co_solve(const co_config* config, co_mechanism mechanism, co_menu** out_menu);

CO_API void co_menu_free(co_menu* menu);

CO_API co_mechanism co_menu_mechanism(const co_menu* menu);
CO_API size_t co_menu_size(const co_menu* menu);
/* Payment T_k handed to the AP / traffic q_k delivered to the BS.
   Out-of-range indices yield NaN. */
CO_API double co_menu_payment(const co_menu* menu, size_t k);
CO_API double co_menu_traffic(const co_menu* menu, size_t k);
CO_API int co_menu_has_unit_price(const co_menu* menu);
CO_API double co_menu_unit_price(const co_menu* menu);

/* Interchange file with header `k,T,q`, one row per type, written
   atomically with LF endings and full 17-significant-digit floats. */
CO_API co_status co_menu_write_csv(const co_menu* menu, const char* path);
CO_API co_status co_menu_read_csv(const char* path, co_mechanism mechanism, co_menu** out_menu);

/* ------------------------------------------------------------------ */
/* Verification                                                        */
/* ------------------------------------------------------------------ */

/* Recomputes every slack of `menu` under `config`. Which constraints gate
   the verdict depends on the menu's mechanism: participation only for
   perfect discrimination; plus incentive compatibility for linear pricing;
   plus strict monotonicity and self-revelation for the screening menu. */
CO_API co_status co_verify_menu(const co_config* config, const co_menu* menu,
                                co_report** out_report);

CO_API void co_report_free(co_report* report);

/* 1 when every gated constraint holds within tolerance 1e-9. */
CO_API int co_report_passes(const co_report* report);
CO_API double co_report_worst_violation(const co_report* report);
/* Participation slack of type k (also its information rent). */
CO_API double co_report_ir_slack(const co_report* report, size_t k);
/* Smallest truth-telling slack of type k against the other bundles
   (0 when there is a single type). */
CO_API double co_report_min_ic_slack(const co_report* report, size_t k);
/* 0-based index of the bundle type k likes best (ties go to k). */
CO_API size_t co_report_preferred_bundle(const co_report* report, size_t k);
CO_API int co_report_self_revealing(const co_report* report);
/* 1 when both the payment and traffic schedules strictly increase. */
CO_API int co_report_monotone(const co_report* report);
CO_API int co_report_zero_information_rent(const co_report* report);
/* Multi-line digest; owned by the report handle. */
CO_API const char* co_report_summary(co_report* report);
/* CSV rows `k,ir_slack,min_ic_slack,preferred_bundle,truthful`. */
CO_API co_status co_report_write_csv(const co_report* report, const char* path);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */
/* ------------------------------------------------------------------ */

/* Solves the selected mechanisms, verifies every menu (CO_ERR_INFEASIBLE if
   one fails its own gate), cross-checks mechanism orderings, and runs the
   sweep. co_compute_experiment writes nothing; co_run_experiment also emits
   the CSV tables into the options' output directory. `options` may be NULL
   for the defaults. */
CO_API co_status co_compute_experiment(const co_config* config,
                                       const co_experiment_options* options,
                                       co_experiment** out_experiment);
CO_API co_status co_run_experiment(const co_config* config,
                                   const co_experiment_options* options,
                                   co_experiment** out_experiment);

CO_API void co_experiment_free(co_experiment* experiment);

/* Multi-line digest; owned by the experiment handle. */
CO_API const char* co_experiment_summary(const co_experiment* experiment);
/* Mechanism columns present, in the fixed order pd, aas, lp. */
CO_API size_t co_experiment_num_columns(const co_experiment* experiment);
CO_API co_mechanism co_experiment_column_mechanism(const co_experiment* experiment,
                                                   size_t column);
CO_API double co_experiment_expected_bs(const co_experiment* experiment, size_t column);
CO_API double co_experiment_expected_ap(const co_experiment* experiment, size_t column);
CO_API double co_experiment_expected_welfare(const co_experiment* experiment, size_t column);
/* Borrowed pointer owned by the experiment; NULL when the mechanism was not
   selected. Do not free. */
CO_API const co_menu* co_experiment_menu(const co_experiment* experiment,
                                         co_mechanism mechanism);
CO_API size_t co_experiment_num_sweep_rows(const co_experiment* experiment);
CO_API size_t co_experiment_sweep_num_types(const co_experiment* experiment, size_t row);
CO_API double co_experiment_sweep_expected_bs(const co_experiment* experiment, size_t row,
                                              size_t column);
CO_API double co_experiment_sweep_expected_ap(const co_experiment* experiment, size_t row,
                                              size_t column);
CO_API double co_experiment_sweep_expected_welfare(const co_experiment* experiment, size_t row,
                                                   size_t column);
/* Whether screening rents reach the posted-price level across the sweep;
   empty unless both mechanisms ran with a sweep. Owned by the handle. */
CO_API const char* co_experiment_crossover_note(const co_experiment* experiment);

/* Runs the full default study (20 types, cost 0.01, square-root valuation,
   all three mechanisms, sweep over 2..20 types) and writes every figure
   table into output_dir (NULL or empty: CONTRACT_OFFLOAD_OUT, then ".").
   Byte-identical across runs. */
CO_API co_status co_reproduce_figures(const char* output_dir);

/* ------------------------------------------------------------------ */
/* Grid-search oracles                                                 */
/* ------------------------------------------------------------------ */

/* Exhaustive screening-menu search over payment grids (and traffic grids
   when full_grid is nonzero) on [t_min, t_max] with zoom-in refinement;
   limited to at most three types. Objective is the expected BS payoff. */
CO_API co_status co_oracle_screening(const co_config* config, double t_min, double t_max,
                                     int points_per_axis, int refinement_rounds, int full_grid,
                                     co_menu** out_menu, double* out_objective);

/* Per-type payment scan for the zero-payoff benchmark. */
CO_API co_status co_oracle_zero_payoff(const co_config* config, double t_min, double t_max,
                                       int points_per_axis, int refinement_rounds,
                                       co_menu** out_menu, double* out_objective);

/* Posted-price profit scan over (cost, price_max]. */
CO_API co_status co_oracle_posted_price(const co_config* config, double price_max, int points,
                                        int rounds, double* out_price, double* out_profit);

/* Solver-versus-oracle battery on small built-in instances sharing the
   config's cost and valuation curve. Writes oracle_checks.csv into `dir`
   when dir is non-NULL and non-empty. *out_all_passed is set to 1 when
   every check lands inside its tolerance. */
CO_API co_status co_oracle_check(const co_config* config, const char* dir,
                                 int* out_all_passed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CONTRACT_OFFLOAD_H */
