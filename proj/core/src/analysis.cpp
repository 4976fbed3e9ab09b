#include "paircorr/analysis.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>

namespace paircorr {

void ScanConfig::merge_json(const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "n_list") {
      n_list = value.get<std::vector<int>>();
    } else if (key == "u") {
      u = value.get<double>();
    } else if (key == "j") {
      this->j = value.get<double>();
    } else if (key == "t2") {
      t2 = value.get<double>();
    } else if (key == "j_grid") {
      j_grid = value.get<std::vector<double>>();
    } else if (key == "solver") {
      solver = value.get<std::string>();
    } else if (key == "tol") {
      tol = value.get<double>();
    } else if (key == "seed") {
      seed = value.get<std::uint64_t>();
    } else if (key == "workers") {
      workers = value.get<int>();
    } else if (key == "out") {
      out = value.get<std::string>();
    } else if (key == "bipartition") {
      auto v = value.get<std::vector<int>>();
      if (v.size() != 2) throw validation_error("bipartition must list the two modes of subsystem A");
      bipartition = {v[0], v[1]};
    } else if (key == "dense_cap") {
      dense_cap = value.get<index_t>();
    } else if (key == "max_iter") {
      max_iter = value.get<int>();
    } else if (key == "amplitudes") {
      include_amplitudes = value.get<bool>();
    } else {
      throw validation_error("unknown config key: " + key);
    }
  }
}

int default_workers() {
  if (const char* env = std::getenv("PAIRCORR_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (workers <= 0) workers = default_workers();
  const int threads = std::min(workers, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

FitResult ols_fit(std::vector<std::pair<double, double>> points, const std::string& model, int columns) {
  std::sort(points.begin(), points.end());
  const int rows = static_cast<int>(points.size());
  if (rows < columns) {
    throw validation_error("fit requires at least " + std::to_string(columns) + " points");
  }
  Eigen::MatrixXd x(rows, columns);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    const double n = points[static_cast<std::size_t>(i)].first;
    if (n <= 0.0) throw validation_error("fit abscissa must be positive");
    if (model == "log") {
      x(i, 0) = std::log(n);
      x(i, 1) = 1.0;
      x(i, 2) = 1.0 / n;
    } else {
      x(i, 0) = 1.0;
      x(i, 1) = 1.0 / n;
    }
    y[i] = points[static_cast<std::size_t>(i)].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < columns) throw validation_error("rank-deficient fit design (duplicate N values?)");
  const Eigen::VectorXd beta = qr.solve(y);

  FitResult fit;
  fit.model = model;
  fit.a = beta[0];
  fit.b = beta[1];
  fit.c = columns > 2 ? beta[2] : 0.0;
  fit.rss = (y - x * beta).squaredNorm();
  fit.n_min = points.front().first;
  fit.n_max = points.back().first;
  fit.points = rows;
  return fit;
}

void require_even(int n, const std::string& what) {
  if (n % 2 != 0 || n < 2) {
    throw validation_error(what + " requires positive even particle numbers, got " + std::to_string(n));
  }
}

GroundStateResult solve_full(const ScanConfig& config, const HamiltonianParams& params, int n) {
  if (config.solver == "reduced") {
    throw validation_error("the reduced solver applies only at the pure pair-tunneling point (U = J = 0, even N)");
  }
  auto basis = shared_basis(n);
  SparseOperator h = build_hamiltonian(params, *basis);
  const bool dense = config.solver == "dense" || (config.solver == "auto" && basis->size() <= config.dense_cap);
  if (dense) return ground_state_dense(h, basis, std::max(config.dense_cap, basis->size()));
  LanczosOptions options;
  options.tol = config.tol;
  options.max_iter = config.max_iter;
  options.seed = config.seed;
  return ground_state_lanczos(h, basis, options);
}

}  // namespace

FitResult fit_log_model(std::vector<std::pair<double, double>> points) {
  return ols_fit(std::move(points), "log", 3);
}

FitResult fit_inverse_model(std::vector<std::pair<double, double>> points) {
  return ols_fit(std::move(points), "inverse", 2);
}

std::vector<Fig1Row> run_fig1(const ScanConfig& config) {
  if (config.n_list.empty()) throw validation_error("fig1 requires a non-empty N list");
  for (int n : config.n_list) require_even(n, "fig1");
  std::vector<Fig1Row> rows(config.n_list.size());
  parallel_for(static_cast<int>(rows.size()), config.workers, [&](int i) {
    const int n = config.n_list[static_cast<std::size_t>(i)];
    const int m = n / 2;
    const ReducedGroundState gs = reduced_ground_state(m, config.t2);
    Fig1Row row;
    row.n = n;
    row.f_variational = optimal_fidelity(gs.amplitudes, m).fidelity;
    row.f_model = std::abs(model_state_reduced(m).dot(gs.amplitudes));
    rows[static_cast<std::size_t>(i)] = row;
  });
  return rows;
}

std::vector<Fig2Row> run_fig2(const ScanConfig& config) {
  if (config.n_list.empty() || config.j_grid.empty()) {
    throw validation_error("fig2 requires both an N list and a J grid");
  }
  for (double jv : config.j_grid) {
    if (jv < 0.0) throw validation_error("fig2 requires J >= 0");
  }
  std::vector<Fig2Row> rows(config.n_list.size() * config.j_grid.size());
  parallel_for(static_cast<int>(rows.size()), config.workers, [&](int task) {
    const std::size_t ji = static_cast<std::size_t>(task) % config.j_grid.size();
    const std::size_t ni = static_cast<std::size_t>(task) / config.j_grid.size();
    const int n = config.n_list[ni];
    const double jv = config.j_grid[ji];
    Fig2Row row;
    row.n = n;
    row.j = jv;
    if (jv == 0.0 && n % 2 == 0 && n >= 2) {
      const ReducedGroundState gs = reduced_ground_state(n / 2, config.t2);
      row.variance = number_moments(embed_reduced(gs.amplitudes, n / 2), 0).variance;
    } else {
      HamiltonianParams params{config.u, jv, config.t2, false};
      row.variance = number_moments(solve_full(config, params, n).state, 0).variance;
    }
    rows[static_cast<std::size_t>(task)] = row;
  });
  return rows;
}

std::vector<Fig3Row> run_fig3(const ScanConfig& config) {
  if (config.n_list.empty()) throw validation_error("fig3 requires a non-empty N list");
  for (int n : config.n_list) require_even(n, "fig3");
  const Bipartition part{0, 1};
  std::vector<Fig3Row> rows(config.n_list.size());
  parallel_for(static_cast<int>(rows.size()), config.workers, [&](int i) {
    const int n = config.n_list[static_cast<std::size_t>(i)];
    const int m = n / 2;
    const ReducedGroundState gs = reduced_ground_state(m, config.t2);
    const Eigen::VectorXd model = model_state_reduced(m);

    Fig3Row row;
    row.n = n;
    const EntanglementReport gs_full = entropies(embed_reduced(gs.amplitudes, m), part);
    const EntanglementReport model_full = entropies(model_state_full(m), part);
    // After the switch both states live on the pair ladder, so the rotated
    // bipartition is evaluated on the ladder amplitudes directly.
    const EntanglementReport gs_sw = entropies(reduced_support_state(gs.amplitudes, m), part);
    const EntanglementReport model_sw = entropies(reduced_support_state(model, m), part);

    row.svn_gs = gs_full.svn;
    row.sfluct_gs = gs_full.sfluct;
    row.sacc_gs = gs_full.sacc;
    row.svn_model = model_full.svn;
    row.sfluct_model = model_full.sfluct;
    row.sacc_model = model_full.sacc;
    row.svn_gs_sw = gs_sw.svn;
    row.sfluct_gs_sw = gs_sw.sfluct;
    row.sacc_gs_sw = gs_sw.sacc;
    row.svn_model_sw = model_sw.svn;
    row.sfluct_model_sw = model_sw.sfluct;
    row.sacc_model_sw = model_sw.sacc;
    rows[static_cast<std::size_t>(i)] = row;
  });
  return rows;
}

FitResult fig1_extrapolation(const std::vector<Fig1Row>& rows, double n_min) {
  std::vector<std::pair<double, double>> points;
  for (const auto& row : rows) {
    if (row.n >= n_min) points.emplace_back(row.n, row.f_model);
  }
  if (points.size() < 2) {
    points.clear();
    for (const auto& row : rows) points.emplace_back(row.n, row.f_model);
  }
  return fit_inverse_model(std::move(points));
}

std::vector<std::pair<std::string, FitResult>> fig3_fits(const std::vector<Fig3Row>& rows, double n_min) {
  auto series = [&](auto member) {
    std::vector<std::pair<double, double>> points;
    points.reserve(rows.size());
    for (const auto& row : rows) {
      if (row.n >= n_min) points.emplace_back(row.n, row.*member);
    }
    return points;
  };
  std::vector<std::pair<std::string, FitResult>> fits;
  fits.emplace_back("svn_gs", fit_log_model(series(&Fig3Row::svn_gs)));
  fits.emplace_back("sacc_gs", fit_log_model(series(&Fig3Row::sacc_gs)));
  fits.emplace_back("svn_model", fit_log_model(series(&Fig3Row::svn_model)));
  fits.emplace_back("sacc_model", fit_log_model(series(&Fig3Row::sacc_model)));
  fits.emplace_back("sacc_gs_switched", fit_log_model(series(&Fig3Row::sacc_gs_sw)));
  fits.emplace_back("sacc_model_switched", fit_log_model(series(&Fig3Row::sacc_model_sw)));
  return fits;
}

json ground_state_record(const ScanConfig& config) {
  if (config.n_list.size() != 1) throw validation_error("ground-state record requires exactly one N");
  const int n = config.n_list.front();
  if (n < 0) throw validation_error("N must be non-negative");

  const bool pure_pair = config.u == 0.0 && config.j == 0.0;
  std::string method = config.solver;
  if (method == "reduced" && (!pure_pair || n % 2 != 0 || n < 2)) {
    throw validation_error("the reduced solver applies only to the pure pair-tunneling point with even N");
  }
  if (method == "auto") {
    if (FockBasis::dimension(n) <= config.dense_cap) {
      method = "dense";
    } else if (pure_pair && n % 2 == 0) {
      method = "reduced";
    } else {
      method = "lanczos";
    }
  }

  json record;
  record["n"] = n;
  record["u"] = config.u;
  record["j"] = config.j;
  record["t2"] = config.t2;
  record["solver"] = method;
  record["tol"] = config.tol;
  record["seed"] = config.seed;

  StateVector state;
  if (method == "reduced") {
    const int m = n / 2;
    const ReducedGroundState gs = reduced_ground_state(m, config.t2);
    const ReducedPairHamiltonian h = reduced_pair_hamiltonian(m, config.t2);
    Eigen::VectorXd resid = -gs.energy * gs.amplitudes;
    for (int s = 0; s <= m; ++s) {
      if (s > 0) resid[s] += h.off_diagonal[s - 1] * gs.amplitudes[s - 1];
      if (s < m) resid[s] += h.off_diagonal[s] * gs.amplitudes[s + 1];
    }
    record["energy"] = gs.energy;
    record["residual"] = resid.norm();
    record["iterations"] = 1;
    record["degenerate"] = false;
    if (FockBasis::dimension(n) > 5'000'000) {
      throw validation_error("full-basis observables unavailable at this N; use the scan commands");
    }
    state = embed_reduced(gs.amplitudes, m);
  } else {
    ScanConfig sub = config;
    sub.solver = method;
    HamiltonianParams params{config.u, config.j, config.t2, false};
    GroundStateResult result = solve_full(sub, params, n);
    record["energy"] = result.energy;
    record["residual"] = result.residual;
    record["iterations"] = result.iterations;
    record["degenerate"] = result.degenerate_warning;
    state = std::move(result.state);
  }

  json occupation;
  std::vector<double> means, variances;
  for (int mode = 0; mode < kNumModes; ++mode) {
    const NumberMoments moments = number_moments(state, mode);
    means.push_back(moments.mean);
    variances.push_back(moments.variance);
  }
  occupation["mean"] = means;
  occupation["variance"] = variances;
  record["occupation"] = occupation;

  if (config.include_amplitudes) {
    json amps = json::array();
    for (index_t i = 0; i < state.amps.size(); ++i) {
      amps.push_back(json::array({state.amps[i].real(), state.amps[i].imag()}));
    }
    record["amplitudes"] = amps;
  }

  const Bipartition part{config.bipartition[0], config.bipartition[1]};
  const EntanglementReport report = entropies(state, part);
  json ent;
  ent["bipartition"] = std::vector<int>{part.a0, part.a1};
  ent["svn"] = report.svn;
  ent["sfluct"] = report.sfluct;
  ent["sacc"] = report.sacc;
  ent["sector_probabilities"] =
      std::vector<double>(report.sector_probabilities.data(),
                          report.sector_probabilities.data() + report.sector_probabilities.size());
  record["entanglement"] = ent;

  if (pure_pair && n % 2 == 0 && n >= 2) {
    const int m = n / 2;
    const ReducedGroundState gs = reduced_ground_state(m, config.t2);
    const OptimalFidelity opt = optimal_fidelity(gs.amplitudes, m);
    json variational;
    variational["fidelity"] = opt.fidelity;
    variational["imag_residual"] = opt.imag_residual;
    variational["gram_condition"] = opt.gram_condition;
    json coeffs = json::array();
    for (int l = 0; l < opt.coefficients.size(); ++l) {
      json entry;
      entry["l"] = l;
      entry["k"] = wavenumber(l, m);
      entry["c"] = opt.coefficients[l];
      coeffs.push_back(entry);
    }
    variational["coefficients"] = coeffs;
    record["variational"] = variational;
    json model;
    model["fidelity"] = std::abs(model_state_reduced(m).dot(gs.amplitudes));
    record["model"] = model;
  }
  return record;
}

json fit_record(const FitResult& fit) {
  json j;
  j["model"] = fit.model;
  j["a"] = fit.a;
  j["b"] = fit.b;
  if (fit.model == "log") j["c"] = fit.c;
  j["rss"] = fit.rss;
  j["n_min"] = fit.n_min;
  j["n_max"] = fit.n_max;
  j["points"] = fit.points;
  return j;
}

std::string csv_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_fig1_csv(std::ostream& os, const std::vector<Fig1Row>& rows) {
  os << "n,f_variational,f_model\n";
  for (const auto& row : rows) {
    os << row.n << ',' << csv_value(row.f_variational) << ',' << csv_value(row.f_model) << '\n';
  }
}

void write_fig2_csv(std::ostream& os, const std::vector<Fig2Row>& rows) {
  os << "n,j,variance\n";
  for (const auto& row : rows) {
    os << row.n << ',' << csv_value(row.j) << ',' << csv_value(row.variance) << '\n';
  }
}

void write_fig3_csv(std::ostream& os, const std::vector<Fig3Row>& rows) {
  os << "n,svn_gs,sfluct_gs,sacc_gs,svn_model,sfluct_model,sacc_model,"
        "svn_gs_switched,sfluct_gs_switched,sacc_gs_switched,"
        "svn_model_switched,sfluct_model_switched,sacc_model_switched\n";
  for (const auto& row : rows) {
    os << row.n << ',' << csv_value(row.svn_gs) << ',' << csv_value(row.sfluct_gs) << ',' << csv_value(row.sacc_gs)
       << ',' << csv_value(row.svn_model) << ',' << csv_value(row.sfluct_model) << ',' << csv_value(row.sacc_model)
       << ',' << csv_value(row.svn_gs_sw) << ',' << csv_value(row.sfluct_gs_sw) << ',' << csv_value(row.sacc_gs_sw)
       << ',' << csv_value(row.svn_model_sw) << ',' << csv_value(row.sfluct_model_sw) << ','
       << csv_value(row.sacc_model_sw) << '\n';
  }
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw validation_error("CSV column not found: " + name);
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) table.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != table.header.size()) throw validation_error("ragged CSV row: " + line);
    table.rows.push_back(std::move(row));
  }
  if (first) throw validation_error("empty CSV input");
  return table;
}

SelfCheckResult self_check_csv(const CsvTable& table) {
  // Collect (svn*, sfluct*, sacc*) column triples by common suffix.
  std::vector<std::array<int, 3>> triples;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const std::string& name = table.header[i];
    if (name.rfind("svn", 0) != 0) continue;
    const std::string suffix = name.substr(3);
    int fluct = -1, acc = -1;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
      if (table.header[k] == "sfluct" + suffix) fluct = static_cast<int>(k);
      if (table.header[k] == "sacc" + suffix) acc = static_cast<int>(k);
    }
    if (fluct >= 0 && acc >= 0) triples.push_back({static_cast<int>(i), fluct, acc});
  }
  if (triples.empty()) throw validation_error("no (svn, sfluct, sacc) column triples found");

  SelfCheckResult result;
  result.triples_checked = static_cast<int>(triples.size());
  for (const auto& row : table.rows) {
    ++result.rows_checked;
    for (const auto& [svn, fluct, acc] : triples) {
      const double dev = std::abs(row[static_cast<std::size_t>(svn)] -
                                  (row[static_cast<std::size_t>(fluct)] + row[static_cast<std::size_t>(acc)]));
      result.max_deviation = std::max(result.max_deviation, dev);
    }
  }
  result.ok = result.max_deviation <= 1e-10;
  return result;
}

std::string self_check_builtin() {
  std::ostringstream report;
  auto require = [&](bool ok, const std::string& what, double value) {
    report << (ok ? "ok   " : "FAIL ") << what << " (" << value << ")\n";
    if (!ok) throw invariant_error("self-check failed: " + what + " = " + std::to_string(value));
  };

  {
    auto basis = shared_basis(5);
    const Eigen::MatrixXcd h = build_pair_hamiltonian(1.0, *basis).to_dense();
    const Eigen::MatrixXcd w = alternating_phase_unitary(*basis).to_dense();
    const double dev = (w.adjoint() * h * w + h).cwiseAbs().maxCoeff();
    require(dev <= 1e-12, "alternating phase flips the pair coupling sign", dev);
  }
  {
    auto basis = shared_basis(4);
    const Eigen::MatrixXcd h = build_pair_hamiltonian(1.0, *basis).to_dense();
    const Eigen::MatrixXcd v02 = beamsplitter_operator(*basis, 0, 2, std::acos(-1.0) / 4.0).to_dense();
    const Eigen::MatrixXcd v13 = beamsplitter_operator(*basis, 1, 3, std::acos(-1.0) / 4.0).to_dense();
    const Eigen::MatrixXcd v = v02 * v13;
    const double unit = (v.adjoint() * v - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff();
    require(unit <= 1e-12, "beamsplitter network unitarity", unit);
    const Eigen::MatrixXcd target = pair_exchange_hamiltonian(1.0, *basis).to_dense();
    const double conj = (v * h * v.adjoint() - target).cwiseAbs().maxCoeff();
    require(conj <= 1e-11, "switch conjugation reaches the pair-exchange form", conj);
  }
  for (int n = 2; n <= 12; n += 2) {
    auto basis = shared_basis(n);
    const GroundStateResult dense = ground_state_dense(build_pair_hamiltonian(1.0, *basis), basis);
    const ReducedGroundState reduced = reduced_ground_state(n / 2, 1.0);
    const double de = std::abs(dense.energy - reduced.energy);
    require(de <= 1e-9 * std::max(1.0, std::abs(dense.energy)), "reduced/dense energy agreement at N=" + std::to_string(n), de);
    const double f = fidelity(dense.state, embed_reduced(reduced.amplitudes, n / 2));
    require(f >= 1.0 - 1e-9, "reduced/dense ground-state fidelity at N=" + std::to_string(n), f);
  }
  {
    // Entropy decomposition on a seeded random state, all bipartitions.
    auto basis = shared_basis(6);
    std::mt19937_64 rng(12345);
    StateVector psi;
    psi.basis = basis;
    psi.amps.resize(basis->size());
    for (index_t i = 0; i < basis->size(); ++i) {
      const auto a = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
      const auto b = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
      psi.amps[i] = complex_t{a, b};
    }
    psi.normalize();
    for (const Bipartition part : {Bipartition{0, 1}, Bipartition{0, 2}, Bipartition{0, 3}}) {
      const EntanglementReport rep = entropies(psi, part);
      const double dev = std::abs(rep.svn - rep.sfluct - rep.sacc);
      require(dev <= 1e-10, "entropy decomposition identity", dev);
    }
  }
  report << "all built-in checks passed\n";
  return report.str();
}

}  // namespace paircorr
