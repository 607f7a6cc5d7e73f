#include <Eigen/Dense>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <random>

#include "CLI11.hpp"
#include "hrm/diagnostics.hpp"
#include "hrm/entropy.hpp"
#include "hrm/io.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidationFail = 2;
constexpr int kExitInconclusive = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  double eps_override = -1.0;
  int cells_override = -1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "Path to a key-value config file");
  cmd->add_option("--out", o.out_dir, "Output directory (overrides config and HRM1D_OUT_DIR)");
  cmd->add_option("--eps", o.eps_override, "Override solver.eps");
  cmd->add_option("--cells", o.cells_override, "Override grid.n_cells");
  cmd->add_flag("--quiet", o.quiet, "Suppress progress output");
}

hrm::RunConfig make_config(const CommonOpts& o) {
  hrm::RunConfig cfg;
  if (!o.config_path.empty()) cfg = hrm::load_config(o.config_path);
  if (!o.out_dir.empty()) {
    cfg.outputs.dir = o.out_dir;
  } else if (!cfg.has("outputs.dir")) {
    if (const char* env = std::getenv("HRM1D_OUT_DIR")) cfg.outputs.dir = env;
  }
  if (o.eps_override > 0.0) cfg.solver.eps = o.eps_override;
  if (o.cells_override > 0) cfg.grid.n_cells = o.cells_override;
  cfg.validate();
  return cfg;
}

double wall_seconds() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

std::string emit(const fs::path& dir, const std::string& name, const std::string& content,
                 hrm::Manifest& manifest) {
  const fs::path path = dir / name;
  hrm::write_file_atomic(path.string(), content);
  manifest.file_checksums[name] = hrm::checksum_file(path.string());
  return path.string();
}

int cmd_run(const CommonOpts& o, const std::string& forced_preset = "") {
  hrm::RunConfig cfg = make_config(o);
  if (!forced_preset.empty()) {
    cfg.preset.name = forced_preset;
    if (forced_preset == "riemann" && !cfg.has("grid.boundary"))
      cfg.grid.boundary = hrm::Boundary::outflow;
    cfg.validate();
  }

  const fs::path dir(cfg.outputs.dir);
  fs::create_directories(dir);
  hrm::Manifest manifest;
  manifest.config = cfg;
  manifest.wall_start = wall_seconds();

  try {
    const auto ic = hrm::preset_initial_condition(cfg.preset, cfg.grid, cfg.eos);
    const hrm::SolutionField field = hrm::run(ic, cfg.solver, cfg.grid, cfg.eos);
    emit(dir, "fields.csv", hrm::fields_csv(field, cfg.eos), manifest);
    emit(dir, "series.csv", hrm::series_csv(field, cfg.eos), manifest);
    manifest.wall_end = wall_seconds();
    hrm::write_manifest((dir / "manifest.txt").string(), manifest);
    if (!o.quiet) {
      const Eigen::ArrayXd S = hrm::total_entropy_series(field, cfg.eos);
      std::cout << "run: preset=" << cfg.preset.name << " cells=" << cfg.grid.n_cells
                << " eps=" << cfg.solver.eps << " snapshots=" << field.n_times() << "\n"
                << "run: total entropy " << hrm::format_g17(S[0]) << " -> "
                << hrm::format_g17(S[S.size() - 1]) << "\n"
                << "run: outputs in " << dir.string() << "\n";
    }
    return kExitOk;
  } catch (const hrm::Error& e) {
    manifest.status = "error";
    manifest.error = e.what();
    manifest.wall_end = wall_seconds();
    hrm::write_manifest((dir / "manifest.txt").string(), manifest);
    std::cerr << "run: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_sweep(const CommonOpts& o) {
  hrm::RunConfig cfg = make_config(o);
  if (cfg.sweep.eps_list.size() < 3) {
    std::cerr << "sweep: need at least three eps values\n";
    return kExitError;
  }

  const fs::path dir(cfg.outputs.dir);
  fs::create_directories(dir);
  hrm::Manifest manifest;
  manifest.config = cfg;
  manifest.wall_start = wall_seconds();

  try {
    hrm::Report rep;
    std::string verdict;
    if (cfg.sweep.synthetic) {
      std::vector<double> errors;
      for (double e : cfg.sweep.eps_list) errors.push_back(std::pow(e, cfg.sweep.synthetic_exponent));
      const double slope = hrm::fit_loglog_slope(cfg.sweep.eps_list, errors);
      rep.set("sweep.mode", "synthetic");
      rep.set("sweep.synthetic_exponent", cfg.sweep.synthetic_exponent);
      rep.set("sweep.slope", slope);
      verdict = std::abs(slope - cfg.sweep.synthetic_exponent) < 1e-12 ? "PASS" : "FAIL";
      rep.set("sweep.verdict", std::string(verdict));
    } else {
      hrm::RateStudyOptions opts;
      opts.precheck = cfg.sweep.precheck;
      const hrm::RateReport rr =
          hrm::rate_study(cfg.preset, cfg.sweep.eps_list, cfg.grid, cfg.solver, cfg.eos, opts);
      rep.set("sweep.mode", "production");
      for (size_t k = 0; k < rr.eps_values.size(); ++k) {
        const std::string i = std::to_string(k);
        rep.set("sweep.eps." + i, rr.eps_values[k]);
        rep.set("sweep.err_p." + i, rr.errors_p[k]);
        rep.set("sweep.err_u." + i, rr.errors_u[k]);
        rep.set("sweep.residual_constant." + i, rr.residual_constant[k]);
      }
      rep.set("sweep.slope_p", rr.slope_p);
      rep.set("sweep.slope_u", rr.slope_u);
      rep.set("sweep.precheck_ran", rr.precheck_ran);
      rep.set("sweep.precheck_pass", rr.precheck_pass);
      rep.set("sweep.precheck_scheme_err_p", rr.precheck_scheme_err_p);
      rep.set("sweep.precheck_scheme_err_u", rr.precheck_scheme_err_u);
      verdict = rr.verdict == hrm::Verdict::pass ? "PASS"
                : rr.verdict == hrm::Verdict::inconclusive ? "INCONCLUSIVE" : "FAIL";
      rep.set("sweep.verdict", std::string(verdict));
    }
    emit(dir, "rate_report.txt", rep.text(), manifest);
    manifest.verdicts.emplace_back("sweep", verdict);
    manifest.wall_end = wall_seconds();
    hrm::write_manifest((dir / "manifest.txt").string(), manifest);
    if (!o.quiet) std::cout << "sweep: " << verdict << " (report in " << dir.string() << ")\n";
    if (verdict == "PASS") return kExitOk;
    if (verdict == "INCONCLUSIVE") return kExitInconclusive;
    return kExitValidationFail;
  } catch (const hrm::Error& e) {
    manifest.status = "error";
    manifest.error = e.what();
    manifest.wall_end = wall_seconds();
    hrm::write_manifest((dir / "manifest.txt").string(), manifest);
    std::cerr << "sweep: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_validate_eos(const CommonOpts& o) {
  hrm::RunConfig cfg = make_config(o);
  const fs::path dir(cfg.outputs.dir);
  fs::create_directories(dir);
  hrm::Manifest manifest;
  manifest.config = cfg;
  manifest.wall_start = wall_seconds();

  try {
    const hrm::EosModel& eos = cfg.eos;
    constexpr int kSweep = 1000;
    hrm::Report rep;

    Eigen::ArrayXd p_grid = Eigen::ArrayXd::LinSpaced(kSweep, eos.p_lo, eos.p_hi);
    const hrm::SubcharReport sub = hrm::validate_subcharacteristic(eos, p_grid);
    rep.set("subcharacteristic.min_margin", sub.min_margin);
    rep.set("subcharacteristic.argmin_p", sub.argmin_p);
    rep.set("subcharacteristic.pass", sub.pass);
    if (sub.equal_density_in_range)
      rep.set("subcharacteristic.warn", "operating range crosses the equal-density point p = rho_l R T0");

    // Monotone equilibrium density over the grid.
    double min_slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p_grid.size(); ++i)
      min_slope = std::min(min_slope, hrm::equilibrium_density_slope(p_grid[i], eos));
    rep.set("rho_eq.min_slope", min_slope);
    rep.set("rho_eq.monotone", min_slope > 0.0);

    // Entropy curvature sweep over random admissible states. The full 3x3
    // Hessian is positive semidefinite with a one-dimensional kernel along
    // (rho_l - rho_m, u (rho_l - rho_m), -Gamma); the sweep checks the
    // Gamma-curvature, the two nonzero eigenvalues, the kernel residual,
    // and strict convexity of the equilibrium-restricted entropy.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double min_gg = std::numeric_limits<double>::infinity();
    double min_lambda1 = std::numeric_limits<double>::infinity();
    double max_kernel_residual = 0.0;
    double min_eig_full = std::numeric_limits<double>::infinity();
    double min_eig_eq = std::numeric_limits<double>::infinity();
    for (int s = 0; s < kSweep; ++s) {
      const double p = eos.p_lo + (eos.p_hi - eos.p_lo) * unif(rng);
      const double a = 0.05 + 0.9 * unif(rng);
      const double u = -2.0 + 4.0 * unif(rng);
      const hrm::ConservedState U = hrm::cons_from_prim({p, u, a}, eos);
      const Eigen::Matrix3d H = hrm::entropy_hessian(U, eos);
      min_gg = std::min(min_gg, H(2, 2));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H);
      const Eigen::Vector3d ev = es.eigenvalues();
      min_eig_full = std::min(min_eig_full, ev[0]);
      min_lambda1 = std::min(min_lambda1, ev[1]);
      Eigen::Vector3d kernel(eos.rho_l - U.rho_m, u * (eos.rho_l - U.rho_m), -U.Gamma);
      kernel.normalize();
      max_kernel_residual = std::max(max_kernel_residual, (H * kernel).norm() / H.norm());

      const double rho = hrm::equilibrium_mixture_density(p, eos);
      const Eigen::Matrix2d Heq = hrm::canonical_eq_entropy_hessian(rho, rho * u, eos);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es2(Heq);
      min_eig_eq = std::min(min_eig_eq, es2.eigenvalues()[0]);
    }
    const double psd_tol = 64.0 * std::numeric_limits<double>::epsilon();
    rep.set("hessian.min_d2eta_dGamma2", min_gg);
    rep.set("hessian.min_eigenvalue", min_eig_full);
    rep.set("hessian.min_nonzero_eigenvalue", min_lambda1);
    rep.set("hessian.max_kernel_residual", max_kernel_residual);
    rep.set("hessian.psd_within_roundoff", min_eig_full > -psd_tol);
    rep.set("equilibrium_hessian.min_eigenvalue", min_eig_eq);

    const double delta_lo = hrm::criticality_offset(eos.p_lo, eos);
    const double delta_hi = hrm::criticality_offset(eos.p_hi, eos);
    rep.set("criticality_offset.p_lo", delta_lo);
    rep.set("criticality_offset.p_hi", delta_hi);
    rep.set("criticality_offset.calibrated_A_g_at_midrange",
            hrm::calibrated_gas_constant(0.5 * (eos.p_lo + eos.p_hi), eos));

    const bool convex_ok = min_gg > 0.0 && min_lambda1 > 0.0 && min_eig_full > -psd_tol &&
                           min_eig_eq > 0.0;
    const bool pass = sub.pass && min_slope > 0.0 && convex_ok;
    rep.set("validate_eos.convexity_pass", convex_ok);
    rep.set("validate_eos.verdict", pass ? "PASS" : "FAIL");

    emit(dir, "eos_report.txt", rep.text(), manifest);
    manifest.verdicts.emplace_back("validate_eos", pass ? "PASS" : "FAIL");
    manifest.wall_end = wall_seconds();
    hrm::write_manifest((dir / "manifest.txt").string(), manifest);
    if (!o.quiet) {
      std::cout << "validate-eos: " << (pass ? "PASS" : "FAIL") << " (min subchar margin "
                << sub.min_margin << ")\n";
      if (sub.equal_density_in_range)
        std::cout << "validate-eos: WARN operating range crosses p = rho_l R T0\n";
    }
    return pass ? kExitOk : kExitValidationFail;
  } catch (const hrm::Error& e) {
    manifest.status = "error";
    manifest.error = e.what();
    manifest.wall_end = wall_seconds();
    hrm::write_manifest((dir / "manifest.txt").string(), manifest);
    std::cerr << "validate-eos: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hrm1d: finite-volume experiments for a stiff two-phase relaxation model"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, eos_opts, riemann_opts;
  CLI::App* c_run = app.add_subcommand("run", "One solver run with diagnostics");
  add_common(c_run, run_opts);
  CLI::App* c_sweep = app.add_subcommand("sweep", "Relaxation-limit rate study over an eps list");
  add_common(c_sweep, sweep_opts);
  CLI::App* c_eos = app.add_subcommand("validate-eos", "Model admissibility sweeps");
  add_common(c_eos, eos_opts);
  CLI::App* c_riemann = app.add_subcommand("riemann", "Run the riemann preset");
  add_common(c_riemann, riemann_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_run->parsed()) return cmd_run(run_opts);
    if (c_sweep->parsed()) return cmd_sweep(sweep_opts);
    if (c_eos->parsed()) return cmd_validate_eos(eos_opts);
    if (c_riemann->parsed()) return cmd_run(riemann_opts, "riemann");
  } catch (const hrm::Error& e) {
    std::cerr << "hrm1d: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "hrm1d: unexpected error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
