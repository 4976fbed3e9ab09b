#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

#include "paircorr/errors.hpp"

namespace paircorr {

inline constexpr int kNumModes = 4;

using index_t = std::int64_t;

/// Occupation numbers of the four modes; the Fock-basis label.
struct Occupation {
  std::array<int, kNumModes> n{0, 0, 0, 0};

  int operator[](int mode) const { return n[static_cast<std::size_t>(mode)]; }
  int& operator[](int mode) { return n[static_cast<std::size_t>(mode)]; }
  int total() const { return n[0] + n[1] + n[2] + n[3]; }

  friend bool operator==(const Occupation&, const Occupation&) = default;
  friend auto operator<=>(const Occupation&, const Occupation&) = default;
};

/// A bipartition of the four modes into two pairs. Only subsystem A is
/// stored; the complement B is implied.
struct Bipartition {
  int a0, a1;  // the two modes of subsystem A, a0 < a1

  Bipartition(int first, int second);

  std::array<int, 2> subsystem_a() const { return {a0, a1}; }
  std::array<int, 2> subsystem_b() const;

  bool contains(int mode) const { return mode == a0 || mode == a1; }

  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

/// Deterministic enumeration of the N-particle four-mode Fock basis in
/// strict lexicographic order on (n0, n1, n2, n3).
///
/// The basis size is C(N+3, 3) and therefore grows as O(N^3); callers that
/// loop over particle numbers should budget memory accordingly. Instances
/// are immutable after construction and safe for concurrent reads.
class FockBasis {
 public:
  explicit FockBasis(int particle_number);

  int particle_number() const { return n_; }
  index_t size() const { return static_cast<index_t>(states_.size()); }

  const Occupation& occ_of(index_t index) const { return states_[static_cast<std::size_t>(index)]; }
  const std::vector<Occupation>& states() const { return states_; }

  /// Position of `occ` in the lexicographic ordering (combinatorial
  /// ranking; O(1) lookup, no hash table). Throws validation_error if the
  /// occupation belongs to a different particle sector.
  index_t index_of(const Occupation& occ) const;

  /// Number of basis states for a given particle number.
  static index_t dimension(int particle_number);

 private:
  int n_;
  std::vector<Occupation> states_;
  // rank0_[m] = number of states with n0 < m; rank1_[m] = number of
  // 3-mode suffixes with first entry < m at fixed remaining total.
  std::vector<index_t> rank0_;
};

/// Builds the N-particle basis. N = 0 yields the single vacuum state.
FockBasis enumerate_basis(int particle_number);

/// Indices of the basis grouped by the particle count on subsystem A.
/// sector[n_a] lists, in ascending order, all basis indices whose
/// occupations on A sum to n_a. Every index appears in exactly one sector;
/// sector n_a has (n_a+1)*(N-n_a+1) members.
std::vector<std::vector<index_t>> sector_split(const FockBasis& basis, const Bipartition& part);

}  // namespace paircorr
