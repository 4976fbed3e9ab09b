#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "paircorr/fock_basis.hpp"

namespace paircorr {

using complex_t = std::complex<double>;

/// Couplings of the four-mode ring Hamiltonian
///   H = sum_j [ (U/2) n_j(n_j-1) - J (a†_{j+1} a_j + h.c.)
///               - T2 (a†²_{j+1} a²_j + h.c.) ]
/// with the mode index periodic (j+1 mod 4). Energies are expressed in
/// units of T2 by convention (T2 = 1 unless stated otherwise).
struct HamiltonianParams {
  double u = 0.0;
  double j = 0.0;
  double t2 = 1.0;
  /// Negative couplings are rejected by default; set to explore e.g. the
  /// sign-flipped pair coupling regardless.
  bool allow_negative = false;
};

/// Sparse complex matrix in CSR form acting on one fixed-N Fock basis.
/// Entries are exact square roots of integer combinatorial factors times
/// couplings; explicit zeros are pruned at assembly. Immutable after
/// construction; apply() is safe to call concurrently.
class SparseOperator {
 public:
  struct Triplet {
    index_t row;
    index_t col;
    complex_t value;
  };

  /// Builds CSR storage from (possibly duplicated) triplets. When
  /// `expect_hermitian` is set the assembled matrix is checked against its
  /// conjugate transpose to 1e-13 of its largest entry magnitude and an
  /// invariant_error is thrown on violation.
  static SparseOperator from_triplets(index_t dim, std::vector<Triplet> triplets, bool expect_hermitian);

  index_t dim() const { return dim_; }
  index_t nonzeros() const { return static_cast<index_t>(values_.size()); }
  bool is_hermitian() const { return hermitian_; }

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& in) const;

  /// Largest entry magnitude (0 for an empty matrix).
  double max_abs() const;
  /// max_ij |A_ij - conj(A_ji)|.
  double hermiticity_deviation() const;

  Eigen::MatrixXcd to_dense() const;

  /// Debug export: one "row col re im" line per stored entry, sorted by
  /// (row, col).
  void write_coordinate_text(std::ostream& os) const;

 private:
  index_t dim_ = 0;
  std::vector<index_t> row_ptr_;
  std::vector<index_t> col_;
  std::vector<complex_t> values_;
  bool hermitian_ = false;
};

/// Complex amplitudes over a full Fock basis.
struct StateVector {
  std::shared_ptr<const FockBasis> basis;
  Eigen::VectorXcd amps;

  int particle_number() const { return basis->particle_number(); }
  double norm() const { return amps.norm(); }
  void normalize() { amps /= amps.norm(); }
};

/// A state given by its (typically few) nonzero amplitudes, keyed by
/// occupation. Used for states confined to small invariant subspaces,
/// where the full O(N^3) basis would be wasteful.
struct SparseState {
  int particle_number = 0;
  std::vector<std::pair<Occupation, complex_t>> entries;

  double norm() const;
  StateVector to_state_vector(std::shared_ptr<const FockBasis> basis) const;
};

/// Shared, cached basis instances (immutable, so safe to share across
/// threads).
std::shared_ptr<const FockBasis> shared_basis(int particle_number);

/// Assembles the ring Hamiltonian for the given couplings. Hermitian by
/// construction; commutes with total particle number since it acts within
/// one fixed-N basis. Throws validation_error on negative couplings unless
/// params.allow_negative is set.
SparseOperator build_hamiltonian(const HamiltonianParams& params, const FockBasis& basis);

/// The pure pair-tunneling part alone (U = J = 0).
SparseOperator build_pair_hamiltonian(double t2, const FockBasis& basis);

/// The pair Hamiltonian conjugated by the beamsplitter network, built
/// directly in the hybridized mode labels: -4 T2 (a†_0 a†_2 a_1 a_3 + h.c.).
SparseOperator pair_exchange_hamiltonian(double t2, const FockBasis& basis);

/// Diagonal unitary exp(i sum_j theta_j n_j).
SparseOperator phase_unitary(const std::array<double, 4>& thetas, const FockBasis& basis);

/// The alternating on-site phase shift with thetas (-pi/4, +pi/4, -pi/4,
/// +pi/4); conjugating the pair Hamiltonian by it flips the sign of the
/// pair coupling. On a fixed-N basis it agrees with exp(i(pi/2)(n1+n3))
/// up to the global phase exp(-i pi N/4), and with exp(-i(pi/2)(n0+n2))
/// up to exp(+i pi N/4); the three act identically on density matrices at
/// fixed particle number. Any of them can be built via phase_unitary; the
/// global phases are documented rather than normalized away.
SparseOperator alternating_phase_unitary(const FockBasis& basis);

/// Permutation operator P with P a†_j P† = a†_{perm[j]}. Unitary;
/// composition follows the group law P_sigma P_pi = P_{sigma o pi}.
SparseOperator mode_permutation(const std::array<int, 4>& perm, const FockBasis& basis);

/// Exact unitary of exp(i theta (a†_p a_q + a†_q a_p)) restricted to the
/// two-mode sector with t particles, as a (t+1)x(t+1) matrix in the basis
/// |m⟩ = |m particles in p, t-m in q⟩. Columns are generated by the ladder
/// recurrence in extended precision, so the result is accurate to a few
/// ulp even for t in the hundreds; no matrix exponential is involved.
Eigen::MatrixXcd two_mode_rotation(int t, double theta);

/// Applies exp(i theta (a†_p a_q + h.c.)) to a state. The Heisenberg
/// action on creation operators is a†_p -> cos(theta) a†_p + i sin(theta) a†_q.
StateVector apply_beamsplitter(const StateVector& psi, int p, int q, double theta);
SparseState apply_beamsplitter(const SparseState& psi, int p, int q, double theta);

/// Materialized beamsplitter as a sparse operator (intended for small N;
/// the per-sector blocks are dense).
SparseOperator beamsplitter_operator(const FockBasis& basis, int p, int q, double theta);

/// The two-beamsplitter network exp(i(pi/4)(a†_0 a_2 + h.c.)) followed by
/// exp(i(pi/4)(a†_1 a_3 + h.c.)); `inverse` applies its adjoint. This is
/// the mode-hybridizing "entanglement switch": it maps a†_j to
/// (a†_j + i a†_{j+2})/sqrt(2).
StateVector apply_entanglement_switch(const StateVector& psi, bool inverse = false);
SparseState apply_entanglement_switch(const SparseState& psi, bool inverse = false);

struct NumberMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of the occupation of one mode. Requires a normalized
/// state (throws validation_error otherwise).
NumberMoments number_moments(const StateVector& psi, int mode);

}  // namespace paircorr
