#pragma once

#include "paircorr/operators.hpp"

namespace paircorr {

/// Entanglement of a pure state under a two-mode bipartition, decomposed
/// into the fluctuation part (Shannon entropy of the subsystem particle
/// number) and the accessible part (sector-weighted conditional
/// entropies). All entropies are in nats. The identity
/// S_vN = S_fluct + S_acc is verified to 1e-10 at construction.
struct EntanglementReport {
  double svn = 0.0;
  double sacc = 0.0;
  double sfluct = 0.0;
  Eigen::VectorXd sector_probabilities;  // size N+1, indexed by n_A
  Bipartition bipartition{0, 1};
};

/// One particle-number sector of the reduced density matrix: rho is the
/// unnormalized (n_a+1)-dimensional block with trace = probability.
struct SectorBlock {
  int n_a = 0;
  double probability = 0.0;
  Eigen::MatrixXcd rho;
};

/// Blocks of the reduced density matrix over subsystem A, one per occupied
/// particle-number sector (zero-probability sectors are skipped). Requires
/// a normalized state.
std::vector<SectorBlock> reduced_density_blocks(const StateVector& psi, const Bipartition& part);
std::vector<SectorBlock> reduced_density_blocks(const SparseState& psi, const Bipartition& part);

/// Von Neumann, fluctuation, and accessible entropies. S_vN comes from the
/// pooled spectrum of the block-diagonal reduced density matrix, S_acc
/// from per-sector conditional spectra; non-positive eigenvalue noise is
/// clamped to zero before x ln x and sectors below probability 1e-14 are
/// skipped. The full density matrix is never assembled across sectors.
EntanglementReport entropies(const StateVector& psi, const Bipartition& part);
EntanglementReport entropies(const SparseState& psi, const Bipartition& part);

/// Sector-probability-weighted average of the conditional 2nd Renyi
/// entropies, -sum_n p_n ln Tr (rho_n / p_n)^2. Since Renyi entropies are
/// non-increasing in their order, this average lower-bounds S_acc, with
/// equality when every conditional block has a flat spectrum.
double renyi2_accessible_bound(const StateVector& psi, const Bipartition& part);
double renyi2_accessible_bound(const SparseState& psi, const Bipartition& part);

/// Closed form of the Renyi-2 average for the switch-rotated variational
/// state with coefficients c (normalized to c^T G c = 1), under the
/// bipartition that has no particle-number fluctuations: -ln sum_j w_j^4
/// where w = sum_l c_l * (ladder amplitudes of member l).
double analytic_bound_variational(const Eigen::VectorXd& c, int m);

/// Shannon entropy of the symmetric binomial distribution B(M, 1/2); this
/// equals the entanglement of the switch-rotated model state and grows as
/// (1/2) ln M + O(1).
double binomial_entropy(int m);

struct ZeroAccessibleCheck {
  bool zero = false;
  double max_deviation = 0.0;  // largest conditional entropy across sectors
};

/// True when every occupied sector's conditional state is pure to 1e-10,
/// i.e. no entanglement survives the particle-number measurement.
ZeroAccessibleCheck zero_accessible_check(const StateVector& psi, const Bipartition& part);
ZeroAccessibleCheck zero_accessible_check(const SparseState& psi, const Bipartition& part);

}  // namespace paircorr
