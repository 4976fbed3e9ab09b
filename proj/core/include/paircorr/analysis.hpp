#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "paircorr/ansatz.hpp"
#include "paircorr/entanglement.hpp"
#include "paircorr/solver.hpp"

namespace paircorr {

using json = nlohmann::ordered_json;

/// Parameters of one scan or single-point run. Mirrors the CLI flags and
/// the JSON config document one-to-one.
struct ScanConfig {
  std::vector<int> n_list;
  double u = 0.0;
  double j = 0.0;
  double t2 = 1.0;
  std::vector<double> j_grid;
  std::string solver = "auto";  // auto | dense | lanczos | reduced
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 -> default_workers()
  std::string out;
  std::array<int, 2> bipartition{0, 1};
  index_t dense_cap = 4000;
  int max_iter = 500;
  bool include_amplitudes = false;

  void merge_json(const json& j);
};

/// Worker count from the PAIRCORR_WORKERS environment variable, falling
/// back to the hardware concurrency (at least 1).
int default_workers();

/// Runs fn(0..count-1) on up to `workers` threads. Tasks write results
/// into caller-indexed slots, so output order never depends on
/// scheduling. Exceptions are captured and rethrown on the caller thread.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

/// Least-squares fit results for the scaling models. `model` is "log" for
/// S = a ln N + b + c/N and "inverse" for F = a + b/N (a is then the
/// extrapolated N -> infinity value, c unused).
struct FitResult {
  std::string model;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rss = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  int points = 0;
};

/// OLS fit of S = a ln N + b + c/N. Points are sorted by N internally so
/// the result is independent of input order. Requires >= 3 distinct N.
FitResult fit_log_model(std::vector<std::pair<double, double>> points);

/// OLS fit of F = a + b/N; requires >= 2 distinct N.
FitResult fit_inverse_model(std::vector<std::pair<double, double>> points);

struct Fig1Row {
  int n = 0;
  double f_variational = 0.0;
  double f_model = 0.0;
};

struct Fig2Row {
  int n = 0;
  double j = 0.0;
  double variance = 0.0;
};

struct Fig3Row {
  int n = 0;
  // gs = pure pair-tunneling ground state, model = parameter-free model
  // state; *_sw = the same states after the beamsplitter switch, under the
  // rotated-pair bipartition.
  double svn_gs = 0, sfluct_gs = 0, sacc_gs = 0;
  double svn_model = 0, sfluct_model = 0, sacc_model = 0;
  double svn_gs_sw = 0, sfluct_gs_sw = 0, sacc_gs_sw = 0;
  double svn_model_sw = 0, sfluct_model_sw = 0, sacc_model_sw = 0;
};

/// Fidelity-vs-N scan: optimal variational fidelity and model-state
/// fidelity against the pure pair-tunneling ground state, both evaluated
/// on the reduced pair ladder. Requires even N.
std::vector<Fig1Row> run_fig1(const ScanConfig& config);

/// On-site number variance over (N, J) at U = 0: the reduced solver at
/// J = 0, exact diagonalization or Lanczos otherwise.
std::vector<Fig2Row> run_fig2(const ScanConfig& config);

/// Entanglement scaling scan for the ground and model states before and
/// after the switch. Bipartition {0,1} vs {2,3}; the post-switch states
/// live on the pair ladder, where the same bipartition is evaluated
/// directly.
std::vector<Fig3Row> run_fig3(const ScanConfig& config);

/// Fits attached to the fig1 scan: model fidelity vs 1/N.
FitResult fig1_extrapolation(const std::vector<Fig1Row>& rows, double n_min = 32);

/// The six scaling fits attached to a fig3 scan, keyed by series name.
/// Points with N < n_min are excluded so the slow small-N transient does
/// not bias the logarithmic coefficients; the window used is recorded in
/// each FitResult.
std::vector<std::pair<std::string, FitResult>> fig3_fits(const std::vector<Fig3Row>& rows, double n_min = 0);

/// Single-point ground-state record: energy, residual, occupation
/// moments, entropies and (at the pure pair-tunneling point) the
/// variational and model-state summary.
json ground_state_record(const ScanConfig& config);

json fit_record(const FitResult& fit);

/// 12-significant-digit value formatting used in all CSV output.
std::string csv_value(double v);

void write_fig1_csv(std::ostream& os, const std::vector<Fig1Row>& rows);
void write_fig2_csv(std::ostream& os, const std::vector<Fig2Row>& rows);
void write_fig3_csv(std::ostream& os, const std::vector<Fig3Row>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by name; throws validation_error when missing.
  int column(const std::string& name) const;
};

CsvTable read_csv(std::istream& is);

struct SelfCheckResult {
  int rows_checked = 0;
  int triples_checked = 0;
  double max_deviation = 0.0;
  bool ok = true;
};

/// Re-validates the entropy decomposition identity on every
/// (svn, sfluct, sacc) column triple found in a CSV, to 1e-10.
SelfCheckResult self_check_csv(const CsvTable& table);

/// Built-in invariant sweep (symmetries, unitarity, solver cross-checks at
/// small N); returns a human-readable report and throws invariant_error on
/// failure.
std::string self_check_builtin();

}  // namespace paircorr
