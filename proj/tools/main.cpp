// Command-line driver for ground-state, fidelity, variance and
// entanglement-scaling scans of the four-mode pair-tunneling model.
//
// Exit codes: 0 success, 2 validation error, 3 solver non-convergence,
// 4 internal invariant violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "paircorr/analysis.hpp"

namespace {

using paircorr::ScanConfig;

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitInvariant = 4;

struct CommonOptions {
  std::string config_path;
  std::vector<int> n_list;
  int n = 0;
  double u = 0.0, j = 0.0, t2 = 1.0;
  std::vector<double> j_grid;
  std::string solver = "auto";
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
  std::vector<int> bipartition;

  CLI::App* app = nullptr;

  void attach(CLI::App* cmd) {
    app = cmd;
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--n", n, "single particle number");
    cmd->add_option("--n-list", n_list, "list of particle numbers")->delimiter(',');
    cmd->add_option("--u", u, "on-site interaction strength");
    cmd->add_option("--j", j, "single-particle tunneling amplitude");
    cmd->add_option("--j-grid", j_grid, "list of J values")->delimiter(',');
    cmd->add_option("--t2", t2, "pair-tunneling amplitude");
    cmd->add_option("--solver", solver, "dense|lanczos|reduced|auto")
        ->check(CLI::IsMember({"dense", "lanczos", "reduced", "auto"}));
    cmd->add_option("--tol", tol, "solver tolerance");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--workers", workers, "worker threads (0 = PAIRCORR_WORKERS or hardware)");
    cmd->add_option("--out", out, "output path (default: stdout)");
    cmd->add_option("--bipartition", bipartition, "two modes of subsystem A")->delimiter(',')->expected(2);
  }

  ScanConfig build() const {
    ScanConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw paircorr::validation_error("cannot open config file: " + config_path);
      paircorr::json doc = paircorr::json::parse(in);
      config.merge_json(doc);
    }
    auto passed = [&](const std::string& flag) { return app->count(flag) > 0; };
    if (passed("--n-list")) config.n_list = n_list;
    if (passed("--n")) config.n_list = {n};
    if (passed("--u")) config.u = u;
    if (passed("--j")) config.j = j;
    if (passed("--j-grid")) config.j_grid = j_grid;
    if (passed("--t2")) config.t2 = t2;
    if (passed("--solver")) config.solver = solver;
    if (passed("--tol")) config.tol = tol;
    if (passed("--seed")) config.seed = seed;
    if (passed("--workers")) config.workers = workers;
    if (passed("--out")) config.out = out;
    if (passed("--bipartition")) config.bipartition = {bipartition[0], bipartition[1]};
    return config;
  }
};

void emit(const ScanConfig& config, const std::string& text) {
  if (config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw paircorr::validation_error("cannot open output file: " + config.out);
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{"four-mode pair-correlated tunneling: solvers, fidelities, entanglement scans"};
  app.require_subcommand(1);

  CommonOptions ground_opts, fig1_opts, fig2_opts, fig3_opts;
  auto* ground = app.add_subcommand("ground-state", "solve one (N, U, J, T2) point and emit a JSON record");
  ground_opts.attach(ground);
  bool ground_amplitudes = false;
  ground->add_flag("--amplitudes", ground_amplitudes, "include the state amplitudes in the record");
  auto* fig1 = app.add_subcommand("fig1", "variational and model fidelities vs N (CSV) plus 1/N extrapolation");
  fig1_opts.attach(fig1);
  auto* fig2 = app.add_subcommand("fig2", "on-site number variance over an (N, J) grid (CSV)");
  fig2_opts.attach(fig2);
  auto* fig3 = app.add_subcommand("fig3", "entanglement scaling vs N (CSV) plus log fits");
  fig3_opts.attach(fig3);
  std::string fits_out;
  fig1->add_option("--fits-out", fits_out, "write the fit record to this path instead of stderr");
  std::string fig3_fits_out;
  fig3->add_option("--fits-out", fig3_fits_out, "write the fit records to this path instead of stderr");
  double fig3_fit_n_min = 0.0;
  fig3->add_option("--fit-n-min", fig3_fit_n_min,
                   "exclude N below this from the scaling fits (window is recorded in the output)");

  auto* fit = app.add_subcommand("fit", "least-squares scaling fit over CSV columns");
  std::string fit_in, x_col = "n", y_col, fit_model = "log";
  fit->add_option("--in", fit_in, "input CSV path")->required();
  fit->add_option("--x-col", x_col, "abscissa column (default n)");
  fit->add_option("--y-col", y_col, "ordinate column")->required();
  fit->add_option("--model", fit_model, "log (a lnN + b + c/N) or inverse (a + b/N)")
      ->check(CLI::IsMember({"log", "inverse"}));
  std::string fit_out;
  fit->add_option("--out", fit_out, "output path (default: stdout)");

  auto* self_check = app.add_subcommand("self-check", "re-validate CSV entropy identities or run built-in checks");
  std::string check_in;
  self_check->add_option("--in", check_in, "CSV file to validate (omit to run built-in invariants)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (ground->parsed()) {
    ScanConfig config = ground_opts.build();
    if (ground_amplitudes) config.include_amplitudes = true;
    if (config.n_list.empty()) throw paircorr::validation_error("ground-state requires --n");
    const paircorr::json record = paircorr::ground_state_record(config);
    emit(config, record.dump(2) + "\n");
    return 0;
  }
  if (fig1->parsed()) {
    ScanConfig config = fig1_opts.build();
    const auto rows = paircorr::run_fig1(config);
    for (const auto& row : rows) {
      if (row.f_variational < 1.0 - 1e-8) {
        std::cerr << "warning: variational fidelity below 1 - 1e-8 at N = " << row.n << " (F = "
                  << row.f_variational << ")\n";
      }
    }
    std::ostringstream csv;
    paircorr::write_fig1_csv(csv, rows);
    emit(config, csv.str());
    const paircorr::json fits = paircorr::fit_record(paircorr::fig1_extrapolation(rows));
    if (fits_out.empty()) {
      std::cerr << fits.dump(2) << "\n";
    } else {
      std::ofstream out(fits_out, std::ios::binary);
      out << fits.dump(2) << "\n";
    }
    return 0;
  }
  if (fig2->parsed()) {
    ScanConfig config = fig2_opts.build();
    const auto rows = paircorr::run_fig2(config);
    std::ostringstream csv;
    paircorr::write_fig2_csv(csv, rows);
    emit(config, csv.str());
    return 0;
  }
  if (fig3->parsed()) {
    ScanConfig config = fig3_opts.build();
    const auto rows = paircorr::run_fig3(config);
    std::ostringstream csv;
    paircorr::write_fig3_csv(csv, rows);
    emit(config, csv.str());
    paircorr::json fits;
    for (const auto& [name, fit_result] : paircorr::fig3_fits(rows, fig3_fit_n_min)) {
      fits[name] = paircorr::fit_record(fit_result);
    }
    if (fig3_fits_out.empty()) {
      std::cerr << fits.dump(2) << "\n";
    } else {
      std::ofstream out(fig3_fits_out, std::ios::binary);
      out << fits.dump(2) << "\n";
    }
    return 0;
  }
  if (fit->parsed()) {
    std::ifstream in(fit_in);
    if (!in) throw paircorr::validation_error("cannot open CSV: " + fit_in);
    const paircorr::CsvTable table = paircorr::read_csv(in);
    const int xc = table.column(x_col);
    const int yc = table.column(y_col);
    std::vector<std::pair<double, double>> points;
    for (const auto& row : table.rows) {
      points.emplace_back(row[static_cast<std::size_t>(xc)], row[static_cast<std::size_t>(yc)]);
    }
    const paircorr::FitResult result =
        fit_model == "log" ? paircorr::fit_log_model(points) : paircorr::fit_inverse_model(points);
    const std::string text = paircorr::fit_record(result).dump(2) + "\n";
    if (fit_out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(fit_out, std::ios::binary);
      out << text;
    }
    return 0;
  }
  if (self_check->parsed()) {
    if (check_in.empty()) {
      std::cout << paircorr::self_check_builtin();
      return 0;
    }
    std::ifstream in(check_in);
    if (!in) throw paircorr::validation_error("cannot open CSV: " + check_in);
    const paircorr::SelfCheckResult result = paircorr::self_check_csv(paircorr::read_csv(in));
    std::cout << "rows checked: " << result.rows_checked << "\n"
              << "entropy triples per row: " << result.triples_checked << "\n"
              << "max |svn - (sfluct + sacc)|: " << result.max_deviation << "\n";
    if (!result.ok) throw paircorr::invariant_error("entropy decomposition identity violated in CSV");
    std::cout << "identity holds to 1e-10\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const paircorr::validation_error& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const paircorr::convergence_error& err) {
    std::cerr << "solver did not converge: " << err.what() << " (best residual " << err.best_residual << ")\n";
    return kExitConvergence;
  } catch (const paircorr::invariant_error& err) {
    std::cerr << "invariant violation: " << err.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInvariant;
  }
}
