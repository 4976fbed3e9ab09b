#include <doctest.h>

#include "paircorr/fock_basis.hpp"

using namespace paircorr;

TEST_SUITE_BEGIN("fock_basis");

TEST_CASE("enumeration sizes follow the stars-and-bars count") {
  CHECK(enumerate_basis(0).size() == 1);
  CHECK(enumerate_basis(2).size() == 10);
  CHECK(enumerate_basis(4).size() == 35);
  CHECK(enumerate_basis(0).occ_of(0) == Occupation{{0, 0, 0, 0}});
  for (int n = 0; n <= 64; ++n) {
    CHECK(FockBasis::dimension(n) == (static_cast<index_t>(n) + 3) * (n + 2) * (n + 1) / 6);
    CHECK(enumerate_basis(n).size() == FockBasis::dimension(n));
  }
}

TEST_CASE("lexicographic ordering is strict and deterministic") {
  const FockBasis basis = enumerate_basis(2);
  CHECK(basis.occ_of(0) == Occupation{{0, 0, 0, 2}});
  CHECK(basis.occ_of(9) == Occupation{{2, 0, 0, 0}});
  for (index_t i = 0; i + 1 < basis.size(); ++i) {
    CHECK(basis.occ_of(i) < basis.occ_of(i + 1));
  }
}

TEST_CASE("index_of inverts occ_of") {
  const FockBasis basis = enumerate_basis(4);
  REQUIRE(basis.size() == 35);
  for (index_t i = 0; i < basis.size(); ++i) {
    CHECK(basis.index_of(basis.occ_of(i)) == i);
  }
  CHECK(basis.index_of(Occupation{{0, 0, 0, 4}}) == 0);
  CHECK_THROWS_AS(basis.index_of(Occupation{{1, 0, 0, 0}}), validation_error);
}

TEST_CASE("index_of round-trips for all N up to 12") {
  for (int n = 0; n <= 12; ++n) {
    const FockBasis basis = enumerate_basis(n);
    for (index_t i = 0; i < basis.size(); ++i) {
      REQUIRE(basis.index_of(basis.occ_of(i)) == i);
    }
  }
}

TEST_CASE("sector_split counts") {
  SUBCASE("N=2, A={0,1}") {
    const FockBasis basis = enumerate_basis(2);
    const auto sectors = sector_split(basis, Bipartition{0, 1});
    REQUIRE(sectors.size() == 3);
    CHECK(sectors[0].size() == 3);
    CHECK(sectors[1].size() == 4);
    CHECK(sectors[2].size() == 3);
  }
  SUBCASE("N=1, A={0,1}") {
    const auto sectors = sector_split(enumerate_basis(1), Bipartition{0, 1});
    CHECK(sectors[0].size() == 2);
    CHECK(sectors[1].size() == 2);
  }
  SUBCASE("N=4, A={0,2}: sizes match a brute-force count") {
    const FockBasis basis = enumerate_basis(4);
    const auto sectors = sector_split(basis, Bipartition{0, 2});
    // Independent count over the raw enumeration.
    std::vector<int> expected(5, 0);
    for (index_t i = 0; i < basis.size(); ++i) {
      const Occupation& occ = basis.occ_of(i);
      expected[static_cast<std::size_t>(occ[0] + occ[2])]++;
    }
    const std::vector<int> counted{5, 8, 9, 8, 5};
    for (int na = 0; na <= 4; ++na) {
      CHECK(static_cast<int>(sectors[static_cast<std::size_t>(na)].size()) == expected[static_cast<std::size_t>(na)]);
      CHECK(expected[static_cast<std::size_t>(na)] == counted[static_cast<std::size_t>(na)]);
    }
  }
}

TEST_CASE("sector sizes follow (n_a+1)(N-n_a+1) and partition the basis") {
  for (int n = 0; n <= 12; ++n) {
    const FockBasis basis = enumerate_basis(n);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const auto sectors = sector_split(basis, Bipartition{a, b});
        std::vector<bool> seen(static_cast<std::size_t>(basis.size()), false);
        index_t total = 0;
        for (int na = 0; na <= n; ++na) {
          const auto& sector = sectors[static_cast<std::size_t>(na)];
          REQUIRE(static_cast<index_t>(sector.size()) == static_cast<index_t>(na + 1) * (n - na + 1));
          for (index_t idx : sector) {
            REQUIRE_FALSE(seen[static_cast<std::size_t>(idx)]);
            seen[static_cast<std::size_t>(idx)] = true;
            REQUIRE(basis.occ_of(idx)[a] + basis.occ_of(idx)[b] == na);
          }
          total += static_cast<index_t>(sector.size());
        }
        REQUIRE(total == basis.size());
      }
    }
  }
}

TEST_CASE("bipartition validation") {
  CHECK_THROWS_AS(Bipartition(1, 1), validation_error);
  CHECK_THROWS_AS(Bipartition(0, 4), validation_error);
  const Bipartition part{3, 1};
  CHECK(part.a0 == 1);
  CHECK(part.a1 == 3);
  CHECK(part.subsystem_b() == std::array<int, 2>{0, 2});
}

TEST_SUITE_END();
