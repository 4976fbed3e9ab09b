#pragma once

#include "paircorr/operators.hpp"
#include "paircorr/solver.hpp"

namespace paircorr {

/// Ladder wavenumber k_l = 2 pi l / M for the variational family,
/// l = 0 .. floor(M/2).
double wavenumber(int l, int m);

/// True when k_l is 0 or pi; those members are single plane waves on the
/// pair ladder, the rest are two-wave superpositions.
bool is_axis_wavenumber(int l, int m);

/// Norm of the unnormalized two-term pair-power state
///   [ (a†0² + e^{ik} a†1² + a†2² + e^{ik} a†3²)^M + (k -> -k) ] |vac>,
/// closed form: 2^{M+1} M! sqrt(M+1) when k_l is 0 or pi, otherwise
/// 2^M M! sqrt(2M+4). Overflows to +inf for M beyond ~85; use the log
/// variant internally.
double normalization_constant(int l, int m);
double log_normalization_constant(int l, int m);

/// The normalized variational basis state in the full 2M-particle basis.
/// Supported on even occupations only; amplitudes are real.
StateVector variational_basis_state(int l, int m, std::shared_ptr<const FockBasis> basis);

/// Plane-wave amplitudes e^{+-i k_l (M-j)} / sqrt(M+1) over the ladder
/// states |j, M-j, j, M-j>; the sign of l_signed selects the branch.
/// Distinct waves overlap as <xi_q|xi_l> = 1/(M+1).
Eigen::VectorXcd reduced_plane_wave(int l_signed, int m);

/// Real ladder amplitudes of the switch-rotated basis state: the rotation
/// maps |phi_l> onto the ladder up to the global phase i^M, which is
/// dropped here so the whole variational family shares one real
/// representation. Column l of these vectors has unit norm and their
/// pairwise dot products reproduce gram_matrix.
Eigen::VectorXd reduced_amplitudes(int l, int m);

/// Gram matrix of the normalized (non-orthogonal) variational basis, from
/// the closed forms 1/(M+1), sqrt(2/((M+1)(M+2))) and 2/(M+2) depending on
/// which of k_l, k_r lie on the axis {0, pi}. Unit diagonal, positive
/// definite.
Eigen::MatrixXd gram_matrix(int m);

/// The pair Hamiltonian projected onto the variational subspace, in the
/// non-orthogonal basis: H_sub[l,r] = <phi_l|H|phi_r>. Minimizing
/// c^T H_sub c subject to c^T G c = 1 reproduces the ground energy where
/// the subspace is exact.
Eigen::MatrixXd reduced_subspace_hamiltonian(int m, double t2);

struct OptimalFidelity {
  double fidelity = 0.0;
  /// Real coefficients, normalized to c^T G c = 1.
  Eigen::VectorXd coefficients;
  /// Norm of the imaginary part of the overlap vector after phase
  /// alignment; nonzero values mean the complex optimum is not real and
  /// the reported fidelity is the best real-coefficient value.
  double imag_residual = 0.0;
  /// Spectral condition number of the Gram matrix.
  double gram_condition = 1.0;
};

/// Best overlap of the variational family with a target given by ladder
/// amplitudes: F = sqrt(u^T G^{-1} u) with u the overlap vector, attained
/// at c proportional to G^{-1} u.
OptimalFidelity optimal_fidelity(const Eigen::VectorXd& target_ladder, int m);

/// Same, with the target and the basis states expanded in the full basis.
OptimalFidelity optimal_fidelity(const StateVector& target, int m);

/// Ladder amplitudes sqrt(C(M,j)) / 2^{M/2} of the switch-rotated
/// parameter-free model state; binomially distributed weights.
Eigen::VectorXd model_state_reduced(int m);

/// The model state in the full basis (inverse switch applied to the
/// binomial ladder amplitudes).
StateVector model_state_full(int m);

/// |<a|b>| for two normalized states over the same basis.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace paircorr
