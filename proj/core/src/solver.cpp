#include "paircorr/solver.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace paircorr {

namespace {

constexpr double kDegeneracyGap = 1e-8;

void fix_phase(Eigen::VectorXcd& amps) {
  index_t best = 0;
  double best_mag = -1.0;
  for (index_t i = 0; i < amps.size(); ++i) {
    const double mag = std::abs(amps[i]);
    if (mag > best_mag + 1e-15) {
      best_mag = mag;
      best = i;
    }
  }
  const complex_t pivot = amps[best];
  if (std::abs(pivot) > 0.0) amps *= std::conj(pivot) / std::abs(pivot);
}

GroundStateResult finalize(const SparseOperator& op, std::shared_ptr<const FockBasis> basis, double energy,
                           Eigen::VectorXcd amps, const std::string& method, int iterations, double gap) {
  fix_phase(amps);
  GroundStateResult result;
  result.energy = energy;
  result.state.basis = std::move(basis);
  result.state.amps = std::move(amps);
  result.residual = (op.apply(result.state.amps) - energy * result.state.amps).norm();
  result.method = method;
  result.iterations = iterations;
  result.degenerate_warning = gap < kDegeneracyGap * std::max(1.0, std::abs(energy));
  return result;
}

// Portable uniform double in [-0.5, 0.5) from raw generator output, so a
// fixed seed reproduces the same start vector on any platform.
double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53 - 0.5;
}

}  // namespace

GroundStateResult ground_state_dense(const SparseOperator& op, std::shared_ptr<const FockBasis> basis,
                                     index_t dim_cap) {
  if (op.dim() > dim_cap) {
    throw validation_error("dense solver limited to dimension " + std::to_string(dim_cap) + ", got " +
                           std::to_string(op.dim()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.to_dense());
  if (solver.info() != Eigen::Success) throw invariant_error("dense eigensolver failed");
  const double e0 = solver.eigenvalues()[0];
  const double gap = op.dim() > 1 ? solver.eigenvalues()[1] - e0 : std::numeric_limits<double>::infinity();
  return finalize(op, std::move(basis), e0, solver.eigenvectors().col(0), "dense", 1, gap);
}

GroundStateResult ground_state_lanczos(const SparseOperator& op, std::shared_ptr<const FockBasis> basis,
                                       const LanczosOptions& options) {
  if (options.tol <= 0.0) throw validation_error("lanczos tolerance must be positive");
  const index_t dim = op.dim();
  if (dim == 0) throw validation_error("empty operator");

  std::mt19937_64 rng(options.seed);
  Eigen::VectorXcd v(dim);
  for (index_t i = 0; i < dim; ++i) v[i] = complex_t{unit_double(rng()), unit_double(rng())};
  v /= v.norm();

  std::vector<Eigen::VectorXcd> krylov{v};
  std::vector<double> alphas;
  std::vector<double> betas;
  Eigen::VectorXcd w(dim);
  double best_residual = std::numeric_limits<double>::infinity();

  const int max_iter = static_cast<int>(std::min<index_t>(options.max_iter, dim));
  for (int it = 0; it < max_iter; ++it) {
    op.apply(krylov.back(), w);
    const double alpha = std::real(krylov.back().dot(w));
    alphas.push_back(alpha);
    w -= alpha * krylov.back();
    if (it > 0) w -= betas.back() * krylov[krylov.size() - 2];
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : krylov) w -= u.dot(w) * u;
    }
    const double beta = w.norm();

    const int k = static_cast<int>(alphas.size());
    double theta;
    double gap = std::numeric_limits<double>::infinity();
    Eigen::VectorXd ritz;
    if (k == 1) {
      theta = alphas[0];
      ritz = Eigen::VectorXd::Ones(1);
    } else {
      Eigen::VectorXd ad = Eigen::Map<const Eigen::VectorXd>(alphas.data(), k);
      Eigen::VectorXd bd = Eigen::Map<const Eigen::VectorXd>(betas.data(), k - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(ad, bd);
      theta = tri.eigenvalues()[0];
      gap = tri.eigenvalues()[1] - theta;
      ritz = tri.eigenvectors().col(0);
    }
    const double estimate = beta * std::abs(ritz[k - 1]);
    const double scale = std::max(1.0, std::abs(theta));
    best_residual = std::min(best_residual, estimate);

    const bool breakdown = beta < 1e-14 * std::max(1.0, op.max_abs());
    if (estimate <= options.tol * scale || breakdown || it + 1 == max_iter) {
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
      for (int c = 0; c < k; ++c) x += ritz[c] * krylov[static_cast<std::size_t>(c)];
      x /= x.norm();
      const double residual = (op.apply(x) - theta * x).norm();
      if (residual <= options.tol * scale || breakdown) {
        return finalize(op, std::move(basis), theta, std::move(x), "lanczos", k, gap);
      }
      best_residual = std::min(best_residual, residual);
      if (it + 1 == max_iter) break;
    }
    krylov.push_back(w / beta);
    betas.push_back(beta);
  }
  throw convergence_error("lanczos did not reach tolerance " + std::to_string(options.tol) + " within " +
                              std::to_string(max_iter) + " iterations",
                          best_residual, max_iter);
}

double rayleigh_quotient(const SparseOperator& op, const Eigen::VectorXcd& x) {
  return std::real(x.dot(op.apply(x))) / x.squaredNorm();
}

ReducedPairHamiltonian reduced_pair_hamiltonian(int m, double t2) {
  if (m < 0) throw validation_error("reduced basis requires M >= 0");
  ReducedPairHamiltonian h;
  h.m = m;
  h.t2 = t2;
  h.diagonal = Eigen::VectorXd::Zero(m + 1);
  h.off_diagonal = Eigen::VectorXd::Zero(std::max(m, 0));
  for (int s = 0; s + 1 <= m; ++s) {
    h.off_diagonal[s] = -4.0 * t2 * (s + 1) * (m - s);
  }
  return h;
}

ReducedGroundState reduced_ground_state(int m, double t2) {
  if (m < 1) throw validation_error("reduced ground state requires M >= 1");
  ReducedPairHamiltonian h = reduced_pair_hamiltonian(m, t2);
  const lapack_int n = m + 1;
  std::vector<double> d(h.diagonal.data(), h.diagonal.data() + n);
  std::vector<double> e(h.off_diagonal.data(), h.off_diagonal.data() + m);
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n));
  std::vector<lapack_int> isuppz(2);
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, 1, 0.0, &found, w.data(),
                     z.data(), n, isuppz.data());
  if (info != 0 || found < 1) throw invariant_error("tridiagonal eigensolver failed (dstevr info != 0)");

  ReducedGroundState gs;
  gs.m = m;
  gs.energy = w[0];
  gs.amplitudes = Eigen::Map<const Eigen::VectorXd>(z.data(), n);
  gs.amplitudes /= gs.amplitudes.norm();
  // Perron sign fix: the lowest eigenvector of a tridiagonal with negative
  // off-diagonals has single-signed components.
  int pivot = 0;
  gs.amplitudes.cwiseAbs().maxCoeff(&pivot);
  if (gs.amplitudes[pivot] < 0.0) gs.amplitudes = -gs.amplitudes;
  return gs;
}

SparseState reduced_support_state(const Eigen::VectorXd& amplitudes, int m) {
  if (amplitudes.size() != m + 1) throw validation_error("ladder amplitudes must have size M+1");
  SparseState state;
  state.particle_number = 2 * m;
  state.entries.reserve(static_cast<std::size_t>(m) + 1);
  for (int s = 0; s <= m; ++s) {
    if (amplitudes[s] == 0.0) continue;
    state.entries.emplace_back(Occupation{{s, m - s, s, m - s}}, complex_t{amplitudes[s], 0.0});
  }
  return state;
}

StateVector embed_reduced(const Eigen::VectorXd& amplitudes, int m) {
  const double norm_dev = std::abs(amplitudes.norm() - 1.0);
  if (norm_dev > 1e-8) throw validation_error("ladder amplitudes must be normalized");
  SparseState rotated = apply_entanglement_switch(reduced_support_state(amplitudes, m), /*inverse=*/true);
  StateVector psi = rotated.to_state_vector(shared_basis(2 * m));
  fix_phase(psi.amps);
  return psi;
}

double jx_extremal_expectation(int m, double t2) {
  if (m < 1) throw validation_error("jx_extremal_expectation requires M >= 1");
  // Binomial amplitudes sqrt(C(M,s))/2^(M/2) in log form; the quadratic
  // form of the zero-diagonal tridiagonal reduces to the off-diagonal sum.
  const double log2v = std::log(2.0);
  auto log_amp = [&](int s) {
    return 0.5 * (std::lgamma(m + 1.0) - std::lgamma(s + 1.0) - std::lgamma(m - s + 1.0)) - 0.5 * m * log2v;
  };
  long double acc = 0.0L;
  for (int s = 0; s + 1 <= m; ++s) {
    const double element = -4.0 * t2 * (s + 1) * (m - s);
    acc += 2.0L * element * std::exp(log_amp(s) + log_amp(s + 1));
  }
  return static_cast<double>(acc);
}

}  // namespace paircorr
