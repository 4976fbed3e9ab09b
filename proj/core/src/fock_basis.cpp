#include "paircorr/fock_basis.hpp"

#include <string>

namespace paircorr {

namespace {

// Number of 3-mode occupation vectors with total t: C(t+2, 2).
index_t count3(int t) { return static_cast<index_t>(t + 2) * (t + 1) / 2; }

}  // namespace

Bipartition::Bipartition(int first, int second) {
  if (first == second || first < 0 || first >= kNumModes || second < 0 || second >= kNumModes) {
    throw validation_error("bipartition requires two distinct modes in {0,1,2,3}");
  }
  a0 = first < second ? first : second;
  a1 = first < second ? second : first;
}

std::array<int, 2> Bipartition::subsystem_b() const {
  std::array<int, 2> b{};
  int k = 0;
  for (int m = 0; m < kNumModes; ++m) {
    if (!contains(m)) b[static_cast<std::size_t>(k++)] = m;
  }
  return b;
}

FockBasis::FockBasis(int particle_number) : n_(particle_number) {
  if (particle_number < 0) throw validation_error("particle number must be non-negative");
  states_.reserve(static_cast<std::size_t>(dimension(particle_number)));
  for (int n0 = 0; n0 <= n_; ++n0)
    for (int n1 = 0; n1 <= n_ - n0; ++n1)
      for (int n2 = 0; n2 <= n_ - n0 - n1; ++n2)
        states_.push_back(Occupation{{n0, n1, n2, n_ - n0 - n1 - n2}});

  rank0_.assign(static_cast<std::size_t>(n_) + 2, 0);
  for (int m = 0; m <= n_; ++m) rank0_[static_cast<std::size_t>(m) + 1] = rank0_[static_cast<std::size_t>(m)] + count3(n_ - m);
}

index_t FockBasis::dimension(int particle_number) {
  const index_t n = particle_number;
  return (n + 3) * (n + 2) * (n + 1) / 6;
}

index_t FockBasis::index_of(const Occupation& occ) const {
  if (occ.total() != n_ || occ[0] < 0 || occ[1] < 0 || occ[2] < 0 || occ[3] < 0) {
    throw validation_error("occupation (" + std::to_string(occ[0]) + "," + std::to_string(occ[1]) + "," +
                           std::to_string(occ[2]) + "," + std::to_string(occ[3]) + ") is not in the " +
                           std::to_string(n_) + "-particle sector");
  }
  // Lexicographic rank: states with smaller n0 first, then smaller n1,
  // then smaller n2. Within fixed (n0, n1) the 2-mode tail ranks by n2.
  index_t r = rank0_[static_cast<std::size_t>(occ[0])];
  const int t1 = n_ - occ[0];
  // Sum over m < n1 of (t1 - m + 1).
  const index_t m1 = occ[1];
  r += m1 * (t1 + 1) - m1 * (m1 - 1) / 2;
  r += occ[2];
  return r;
}

FockBasis enumerate_basis(int particle_number) { return FockBasis(particle_number); }

std::vector<std::vector<index_t>> sector_split(const FockBasis& basis, const Bipartition& part) {
  const int n = basis.particle_number();
  std::vector<std::vector<index_t>> sectors(static_cast<std::size_t>(n) + 1);
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const index_t na = static_cast<index_t>(s);
    sectors[s].reserve(static_cast<std::size_t>((na + 1) * (n - na + 1)));
  }
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    sectors[static_cast<std::size_t>(occ[part.a0] + occ[part.a1])].push_back(i);
  }
  return sectors;
}

}  // namespace paircorr
