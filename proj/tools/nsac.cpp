#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsac/errors.hpp"
#include "nsac/field_io.hpp"
#include "nsac/harness.hpp"
#include "nsac/spectral_check.hpp"

using namespace nsac;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::vector<double> eps;
  std::optional<std::size_t> grid;
  std::optional<int> order;
};

ExperimentConfig load(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.eps.empty()) cfg.eps_list = o.eps;
  if (o.grid) cfg.grid = *o.grid;
  if (o.order) {
    if (*o.order != 0 && *o.order != 1) throw Error(ErrorCode::BadConfig, "order must be 0 or 1");
    cfg.order = *o.order;
  }
  cfg.validate();
  return cfg;
}

double default_lambda0(const ExperimentConfig& cfg, const ProfileTable& table) {
  return cfg.lambda0 ? *cfg.lambda0 : compute_lambda0(initial_interface(cfg), std::nullopt, table.sigma);
}

void cmd_profiles(const ExperimentConfig& cfg) {
  auto table = build_profiles(cfg.potential);
  const double lambda0 = default_lambda0(cfg, table);
  table = solve_c1(std::move(table), lambda0);
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / "profiles.csv";
  {
    CsvWriter w(path, {"rho", "theta0", "theta0_prime", "theta1", "c1"});
    for (std::size_t i = 0; i < table.size(); ++i)
      w.row(std::vector<double>{table.rho[i], table.theta0[i], table.theta0_prime[i], table.theta1[i], table.c1[i]});
  }
  const std::string summary = "sigma=" + format_double(table.sigma) + ",alpha=" + format_double(table.alpha) +
                              ",theta0_residual=" + format_double(table.theta0_residual) +
                              ",theta1_residual=" + format_double(table.theta1_residual) +
                              ",c1_residual=" + format_double(table.c1_residual) + ",lambda0=" + format_double(lambda0);
  std::ofstream(path, std::ios::app) << "# " << summary << '\n';
  std::cout << summary << '\n';
}

void print_records(const ErrorReport& rep) {
  for (const auto& r : rep.records)
    std::cout << "eps=" << format_double(r.eps) << " nx=" << r.nx << " steps=" << r.steps
              << " l2_sup=" << format_double(r.sup.l2_omega) << " hausdorff_sup=" << format_double(r.hausdorff_sup)
              << " lambda_plateau=" << format_double(r.lambda_plateau) << " mass_drift=" << format_double(r.mass_drift)
              << '\n';
}

void cmd_simulate(const ExperimentConfig& cfg) {
  print_records(run_experiment(cfg, build_profiles(cfg.potential)));
}

void cmd_converge(const ExperimentConfig& cfg) {
  if (cfg.eps_list.size() < 3) throw Error(ErrorCode::BadConfig, "converge needs at least three eps values");
  const auto rep = run_experiment(cfg, build_profiles(cfg.potential));
  print_records(rep);
  if (rep.l2_rate)
    std::cout << "l2_rate=" << format_double(rep.l2_rate->rate) << " r2=" << format_double(rep.l2_rate->r2) << '\n';
  if (rep.hausdorff_rate)
    std::cout << "hausdorff_rate=" << format_double(rep.hausdorff_rate->rate)
              << " r2=" << format_double(rep.hausdorff_rate->r2) << '\n';
}

void cmd_sharp(const ExperimentConfig& cfg) {
  const auto res = run_sharp(cfg);
  std::cout << "t=" << format_double(res.final_state.t) << " steps=" << res.steps
            << " length=" << format_double(res.final_state.total_length())
            << " area=" << format_double(res.final_state.total_area())
            << " max_area_drift=" << format_double(res.max_area_drift) << '\n';
}

void cmd_spectral(const ExperimentConfig& cfg) {
  const auto table = build_profiles(cfg.potential);
  const double lambda0 = default_lambda0(cfg, table);
  const auto rows = spectral_sweep(table, cfg.eps_list, cfg.order, lambda0);
  std::filesystem::create_directories(cfg.out_dir);
  CsvWriter w(cfg.out_dir / "spectral.csv", {"eps", "min_eig", "overlap_with_theta0prime"});
  for (const auto& r : rows) {
    w.row(std::vector<double>{r.eps, r.min_eig, r.overlap});
    std::cout << "eps=" << format_double(r.eps) << " min_eig=" << format_double(r.min_eig)
              << " overlap=" << format_double(r.overlap) << '\n';
  }
}

void cmd_asymptotics(const ExperimentConfig& cfg) {
  for (const auto& r : run_asymptotics(cfg, build_profiles(cfg.potential)))
    std::cout << "eps=" << format_double(r.eps) << " nx=" << r.nx << " lambda0=" << format_double(r.lambda0)
              << " l2_omega=" << format_double(r.residual.l2_omega) << " l1_tube=" << format_double(r.residual.l1_tube)
              << " l2_outside=" << format_double(r.residual.l2_outside) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mass-conserving Allen-Cahn / Navier-Stokes sharp-interface toolkit", "nsac"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "TOML-style key = value file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--eps", o.eps, "eps value(s), comma separated")->delimiter(',');
  app.add_option("--grid", o.grid, "cells along x");
  app.add_option("--order", o.order, "order of the approximate solution (0 or 1)");

  using Command = void (*)(const ExperimentConfig&);
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands{
      {"profiles", {"layer profiles theta0, theta1, c1 and sigma", cmd_profiles}},
      {"simulate", {"diffuse-interface run with diagnostics and snapshots", cmd_simulate}},
      {"sharp", {"front tracking of volume-preserving mean curvature flow", cmd_sharp}},
      {"spectral", {"smallest eigenvalue of the linearized operator per eps", cmd_spectral}},
      {"asymptotics", {"approximate solution snapshots and residual norms per eps", cmd_asymptotics}},
      {"converge", {"eps sweep with error norms and fitted rates", cmd_converge}},
  };
  Command selected = nullptr;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->callback([&selected, fn = entry.second] { selected = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    selected(load(o));
  } catch (const Error& e) {
    std::cerr << "nsac: " << e.what() << '\n';
    return is_numerical(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "nsac: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
