// offloadctl - command-line front end for the contract_offload library.
//
// Subcommands:
//   solve              solve the selected mechanisms, print the summary, and
//                      write one menu CSV per mechanism
//   verify             check a menu CSV against its mechanism's requirements
//   sweep              run the type-count sweep and write the figure tables
//   reproduce-figures  run the full default study (byte-identical output)
//   oracle-check       compare the solvers against the grid-search oracles
//
// Exit codes: 0 success, 1 computation/verification failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contract_offload.h"

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<double> theta;
  std::vector<double> beta;
  std::size_t num_types = 0;
  double cost = -1.0;  // <= 0 means "not given"
  std::string valuation;
  std::string mechanisms;
  std::string sweep;
  std::string out_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_mechanisms,
                      bool with_sweep) {
  cmd->add_option("--config", flags.config_path, "key=value configuration file");
  cmd->add_option("--K", flags.num_types,
                  "number of AP types (regenerates the built-in type grid)");
  cmd->add_option("--theta", flags.theta, "comma-separated AP type valuations")
      ->delimiter(',');
  cmd->add_option("--beta", flags.beta,
                  "comma-separated type probabilities (default: uniform)")
      ->delimiter(',');
  cmd->add_option("--c", flags.cost, "payment unit cost for the BS");
  cmd->add_option("--valuation", flags.valuation, "valuation curve: sqrt, log1p, pow:<alpha>");
  if (with_mechanisms) {
    cmd->add_option("--mechanisms", flags.mechanisms, "subset of pd,aas,lp (default: all)");
  }
  if (with_sweep) {
    cmd->add_option("--sweep", flags.sweep, "type counts to sweep, e.g. 2..20 or 2,5,9");
  }
  cmd->add_option("--out", flags.out_dir,
                  "output directory (overrides CONTRACT_OFFLOAD_OUT and the config file)");
}

co_overrides make_overrides(const CommonFlags& flags) {
  co_overrides overrides{};
  overrides.emit_oracle_checks = -1;
  overrides.payment_unit_cost = flags.cost;
  overrides.num_types = flags.num_types;
  if (!flags.theta.empty()) {
    overrides.theta = flags.theta.data();
    overrides.num_theta = flags.theta.size();
  }
  if (!flags.beta.empty()) {
    overrides.beta = flags.beta.data();
    overrides.num_beta = flags.beta.size();
  }
  if (!flags.valuation.empty()) {
    overrides.valuation = flags.valuation.c_str();
  }
  if (!flags.mechanisms.empty()) {
    overrides.mechanisms = flags.mechanisms.c_str();
  }
  if (!flags.sweep.empty()) {
    overrides.sweep = flags.sweep.c_str();
  }
  if (!flags.out_dir.empty()) {
    overrides.output_dir = flags.out_dir.c_str();
  }
  return overrides;
}

int report_failure(co_status status) {
  std::fprintf(stderr, "error: %s (%s)\n", co_last_error(), co_status_name(status));
  return 1;
}

struct Setup {
  co_config* config = nullptr;
  co_experiment_options* options = nullptr;

  ~Setup() {
    co_config_free(config);
    co_options_free(options);
  }
};

int load_setup(const CommonFlags& flags, Setup& setup) {
  const co_overrides overrides = make_overrides(flags);
  const co_status status =
      co_load_setup(flags.config_path.empty() ? nullptr : flags.config_path.c_str(),
                    &overrides, &setup.config, &setup.options);
  if (status != CO_OK) {
    return report_failure(status);
  }
  return 0;
}

const char* mechanism_tag(co_mechanism mechanism) {
  switch (mechanism) {
    case CO_MECH_PD:
      return "pd";
    case CO_MECH_AAS:
      return "aas";
    case CO_MECH_LP:
      return "lp";
  }
  return "?";
}

int run_solve(const CommonFlags& flags, bool with_oracle) {
  Setup setup;
  if (int rc = load_setup(flags, setup); rc != 0) {
    return rc;
  }
  co_experiment* experiment = nullptr;
  if (co_status status = co_compute_experiment(setup.config, setup.options, &experiment);
      status != CO_OK) {
    return report_failure(status);
  }
  std::fputs(co_experiment_summary(experiment), stdout);

  const std::string out_dir = co_options_output_dir(setup.options);
  const co_mechanism order[] = {CO_MECH_PD, CO_MECH_AAS, CO_MECH_LP};
  for (co_mechanism mechanism : order) {
    const co_menu* menu = co_experiment_menu(experiment, mechanism);
    if (menu == nullptr) {
      continue;
    }
    const std::string path = out_dir + "/menu_" + mechanism_tag(mechanism) + ".csv";
    if (co_status status = co_menu_write_csv(menu, path.c_str()); status != CO_OK) {
      co_experiment_free(experiment);
      return report_failure(status);
    }
    std::printf("wrote %s\n", path.c_str());
  }
  co_experiment_free(experiment);

  if (with_oracle) {
    int all_passed = 0;
    if (co_status status = co_oracle_check(setup.config, out_dir.c_str(), &all_passed);
        status != CO_OK) {
      return report_failure(status);
    }
    std::printf("oracle checks: %s (%s/oracle_checks.csv)\n",
                all_passed ? "PASS" : "FAIL", out_dir.c_str());
    if (all_passed == 0) {
      return 1;
    }
  }
  return 0;
}

int run_verify(const CommonFlags& flags, const std::string& menu_path,
               const std::string& mechanism_name) {
  co_mechanism mechanism;
  if (mechanism_name == "pd") {
    mechanism = CO_MECH_PD;
  } else if (mechanism_name == "aas") {
    mechanism = CO_MECH_AAS;
  } else if (mechanism_name == "lp") {
    mechanism = CO_MECH_LP;
  } else {
    std::fprintf(stderr, "error: unknown mechanism '%s' (expected pd, aas, or lp)\n",
                 mechanism_name.c_str());
    return 2;
  }

  Setup setup;
  if (int rc = load_setup(flags, setup); rc != 0) {
    return rc;
  }
  co_menu* menu = nullptr;
  if (co_status status = co_menu_read_csv(menu_path.c_str(), mechanism, &menu);
      status != CO_OK) {
    return report_failure(status);
  }
  co_report* report = nullptr;
  const co_status status = co_verify_menu(setup.config, menu, &report);
  co_menu_free(menu);
  if (status != CO_OK) {
    return report_failure(status);
  }
  std::fputs(co_report_summary(report), stdout);
  const int passes = co_report_passes(report);
  co_report_free(report);
  return passes != 0 ? 0 : 1;
}

int run_sweep(const CommonFlags& flags) {
  Setup setup;
  if (int rc = load_setup(flags, setup); rc != 0) {
    return rc;
  }
  if (co_options_has_sweep(setup.options) == 0) {
    if (co_status status = co_options_set_sweep_range(setup.options, 2, 20);
        status != CO_OK) {
      return report_failure(status);
    }
  }
  co_experiment* experiment = nullptr;
  if (co_status status = co_run_experiment(setup.config, setup.options, &experiment);
      status != CO_OK) {
    return report_failure(status);
  }
  std::fputs(co_experiment_summary(experiment), stdout);
  std::printf("wrote figure tables to %s\n", co_options_output_dir(setup.options));
  co_experiment_free(experiment);
  return 0;
}

int run_reproduce_figures(const std::string& out_dir) {
  if (co_status status = co_reproduce_figures(out_dir.empty() ? nullptr : out_dir.c_str());
      status != CO_OK) {
    return report_failure(status);
  }
  std::string resolved = out_dir;
  if (resolved.empty()) {
    const char* env = std::getenv("CONTRACT_OFFLOAD_OUT");
    resolved = env != nullptr && *env != '\0' ? env : ".";
  }
  std::printf("wrote figure tables to %s\n", resolved.c_str());
  return 0;
}

int run_oracle_check(const CommonFlags& flags) {
  Setup setup;
  if (int rc = load_setup(flags, setup); rc != 0) {
    return rc;
  }
  const std::string out_dir = co_options_output_dir(setup.options);
  int all_passed = 0;
  if (co_status status = co_oracle_check(setup.config, out_dir.c_str(), &all_passed);
      status != CO_OK) {
    return report_failure(status);
  }
  std::printf("oracle checks: %s (%s/oracle_checks.csv)\n", all_passed ? "PASS" : "FAIL",
              out_dir.c_str());
  return all_passed != 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contract-based mobile data offloading: solvers, verification, and "
               "figure reproduction"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  bool with_oracle = false;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "solve mechanisms and write their menus");
  add_common_flags(solve_cmd, solve_flags, /*with_mechanisms=*/true, /*with_sweep=*/false);
  solve_cmd->add_flag("--with-oracle", with_oracle,
                      "also run the solver-versus-oracle battery");

  CommonFlags verify_flags;
  std::string menu_path, mechanism_name;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "verify a menu CSV against its requirements");
  add_common_flags(verify_cmd, verify_flags, /*with_mechanisms=*/false, /*with_sweep=*/false);
  verify_cmd->add_option("--menu", menu_path, "menu CSV (header k,T,q)")->required();
  verify_cmd->add_option("--mechanism", mechanism_name, "mechanism the menu claims: pd, aas, lp")
      ->required();

  CommonFlags sweep_flags;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "sweep the number of types and write the figure tables");
  add_common_flags(sweep_cmd, sweep_flags, /*with_mechanisms=*/true, /*with_sweep=*/true);

  std::string figures_out;
  CLI::App* figures_cmd =
      app.add_subcommand("reproduce-figures", "run the full default study");
  figures_cmd->add_option("--out", figures_out, "output directory");

  CommonFlags oracle_flags;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle-check", "compare solvers against grid-search oracles");
  add_common_flags(oracle_cmd, oracle_flags, /*with_mechanisms=*/false, /*with_sweep=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(solve_cmd)) {
    return run_solve(solve_flags, with_oracle);
  }
  if (app.got_subcommand(verify_cmd)) {
    return run_verify(verify_flags, menu_path, mechanism_name);
  }
  if (app.got_subcommand(sweep_cmd)) {
    return run_sweep(sweep_flags);
  }
  if (app.got_subcommand(figures_cmd)) {
    return run_reproduce_figures(figures_out);
  }
  if (app.got_subcommand(oracle_cmd)) {
    return run_oracle_check(oracle_flags);
  }
  return 2;
}
