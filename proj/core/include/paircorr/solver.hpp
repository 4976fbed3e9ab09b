#pragma once

#include <cstdint>
#include <string>

#include "paircorr/operators.hpp"

namespace paircorr {

/// Lowest eigenpair of a Hermitian operator, with solver diagnostics.
/// The phase convention is fixed: the amplitude of largest magnitude
/// (lowest index on ties) is real and positive.
struct GroundStateResult {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  std::string method;
  int iterations = 0;
  /// Set when the gap to the next (Ritz) value is below 1e-8; the returned
  /// state is then only a canonical representative of the ground space.
  bool degenerate_warning = false;
};

struct LanczosOptions {
  double tol = 1e-10;
  int max_iter = 400;
  std::uint64_t seed = 1;
};

/// Full Hermitian diagonalization; intended for dimensions up to `dim_cap`
/// (throws validation_error beyond it).
GroundStateResult ground_state_dense(const SparseOperator& op, std::shared_ptr<const FockBasis> basis,
                                     index_t dim_cap = 4000);

/// Lanczos iteration with full reorthogonalization and a deterministic
/// seeded start vector. The returned residual is the true ||H x - E x||.
/// Throws convergence_error (carrying the best residual) when the
/// tolerance is not reached within max_iter iterations.
GroundStateResult ground_state_lanczos(const SparseOperator& op, std::shared_ptr<const FockBasis> basis,
                                       const LanczosOptions& options = {});

/// Rayleigh quotient <x|H|x> / <x|x> (real part; exact for Hermitian H).
double rayleigh_quotient(const SparseOperator& op, const Eigen::VectorXcd& x);

/// The pair Hamiltonian restricted to the invariant ladder
/// { |s, M-s, s, M-s> : s = 0..M } reached after the beamsplitter
/// rotation: a real symmetric tridiagonal matrix with zero diagonal and
/// off-diagonal elements -4 T2 (s+1)(M-s) between s and s+1.
struct ReducedPairHamiltonian {
  int m = 0;
  double t2 = 1.0;
  Eigen::VectorXd diagonal;      // size m+1, identically zero
  Eigen::VectorXd off_diagonal;  // size m
};

ReducedPairHamiltonian reduced_pair_hamiltonian(int m, double t2);

struct ReducedGroundState {
  int m = 0;
  double energy = 0.0;
  /// Amplitudes over the ladder states, all positive (the sign-flipped
  /// tridiagonal is irreducible with positive off-diagonals, so the lowest
  /// eigenvector is a Perron vector).
  Eigen::VectorXd amplitudes;
};

/// Lowest eigenpair of the reduced tridiagonal problem. O(M) time and
/// memory; fine for M in the thousands.
ReducedGroundState reduced_ground_state(int m, double t2);

/// Wraps ladder amplitudes as a sparse state over |s, M-s, s, M-s>.
SparseState reduced_support_state(const Eigen::VectorXd& amplitudes, int m);

/// Maps ladder amplitudes back to the full 2M-particle basis by applying
/// the inverse beamsplitter network, then applies the solver phase
/// convention. Exact beamsplitter coefficients; O(N^3) work.
StateVector embed_reduced(const Eigen::VectorXd& amplitudes, int m);

/// Expectation of the reduced pair Hamiltonian in the binomial trial state
/// with amplitudes sqrt(C(M,s))/2^(M/2). This is the extremal spin
/// coherent state of the leading collective term, so the value is
/// -2 T2 M^2 + O(M) and upper-bounds the ground state energy E0(2M).
double jx_extremal_expectation(int m, double t2);

}  // namespace paircorr
