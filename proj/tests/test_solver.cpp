#include <doctest.h>

#include <chrono>
#include <cmath>

#include "paircorr/ansatz.hpp"
#include "paircorr/solver.hpp"

using namespace paircorr;

TEST_SUITE_BEGIN("solver");

TEST_CASE("dense solver on the pure pair points and degenerate inputs") {
  {
    auto basis = shared_basis(2);
    const auto gs = ground_state_dense(build_pair_hamiltonian(1.0, *basis), basis);
    CHECK(std::abs(gs.energy + 4.0) < 1e-12);
    CHECK(gs.residual <= 1e-10 * std::max(1.0, std::abs(gs.energy)));
    CHECK(gs.method == "dense");
  }
  {
    auto basis = shared_basis(4);
    const auto gs = ground_state_dense(build_pair_hamiltonian(1.0, *basis), basis);
    CHECK(std::abs(gs.energy + 8.0 * std::sqrt(2.0)) < 1e-12);
  }
  {
    // Zero operator: E0 = 0, unit state with the phase convention, and a
    // degeneracy warning.
    auto basis = shared_basis(1);
    const auto zero = SparseOperator::from_triplets(basis->size(), {}, true);
    const auto gs = ground_state_dense(zero, basis);
    CHECK(gs.energy == doctest::Approx(0.0));
    CHECK(gs.state.norm() == doctest::Approx(1.0));
    CHECK(gs.degenerate_warning);
    int pivot = 0;
    gs.state.amps.cwiseAbs().maxCoeff(&pivot);
    CHECK(gs.state.amps[pivot].real() > 0.0);
    CHECK(std::abs(gs.state.amps[pivot].imag()) < 1e-14);
  }
  {
    auto basis = shared_basis(20);  // dim 1771 > tiny cap
    const auto h = build_pair_hamiltonian(1.0, *basis);
    CHECK_THROWS_AS(ground_state_dense(h, basis, 100), validation_error);
  }
}

TEST_CASE("lanczos matches the closed-form and dense results") {
  {
    auto basis = shared_basis(4);
    LanczosOptions options;
    options.seed = 1;
    const auto gs = ground_state_lanczos(build_pair_hamiltonian(1.0, *basis), basis, options);
    CHECK(std::abs(gs.energy + 8.0 * std::sqrt(2.0)) <= 1e-10);
    CHECK(gs.method == "lanczos");
    CHECK(gs.residual <= options.tol * std::max(1.0, std::abs(gs.energy)));
  }
  {
    // Identity operator: immediate invariant subspace, E0 = 1.
    auto basis = shared_basis(2);
    std::vector<SparseOperator::Triplet> trip;
    for (index_t i = 0; i < basis->size(); ++i) trip.push_back({i, i, 1.0});
    const auto identity = SparseOperator::from_triplets(basis->size(), trip, true);
    const auto gs = ground_state_lanczos(identity, basis, {});
    CHECK(gs.energy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gs.iterations <= 2);
  }
  {
    // N=20 pure pair: Lanczos vs the reduced ladder solver.
    auto basis = shared_basis(20);
    const auto lan = ground_state_lanczos(build_pair_hamiltonian(1.0, *basis), basis, {});
    const auto red = reduced_ground_state(10, 1.0);
    CHECK(std::abs(lan.energy - red.energy) <= 1e-9 * std::max(1.0, std::abs(red.energy)));
  }
  {
    // Determinism: same seed, same state bit for bit.
    auto basis = shared_basis(8);
    const auto h = build_pair_hamiltonian(1.0, *basis);
    LanczosOptions options;
    options.seed = 42;
    const auto a = ground_state_lanczos(h, basis, options);
    const auto b = ground_state_lanczos(h, basis, options);
    CHECK(a.energy == b.energy);
    CHECK((a.state.amps - b.state.amps).norm() == 0.0);
    CHECK(a.iterations == b.iterations);
  }
  {
    // Non-convergence carries the best residual.
    auto basis = shared_basis(10);
    const auto h = build_pair_hamiltonian(1.0, *basis);
    LanczosOptions options;
    options.tol = 1e-13;
    options.max_iter = 3;
    CHECK_THROWS_AS(ground_state_lanczos(h, basis, options), convergence_error);
    try {
      ground_state_lanczos(h, basis, options);
    } catch (const convergence_error& err) {
      CHECK(err.best_residual > 0.0);
      CHECK(err.iterations == 3);
    }
  }
  CHECK_THROWS_AS(ground_state_lanczos(build_pair_hamiltonian(1.0, *shared_basis(2)), shared_basis(2),
                                       LanczosOptions{-1.0, 10, 1}),
                  validation_error);
}

TEST_CASE("reduced pair matrix elements") {
  {
    const auto h = reduced_pair_hamiltonian(1, 1.0);
    REQUIRE(h.off_diagonal.size() == 1);
    CHECK(h.off_diagonal[0] == doctest::Approx(-4.0));
    CHECK(h.diagonal.norm() == 0.0);
  }
  {
    const auto h = reduced_pair_hamiltonian(2, 1.0);
    REQUIRE(h.off_diagonal.size() == 2);
    CHECK(h.off_diagonal[0] == doctest::Approx(-8.0));
    CHECK(h.off_diagonal[1] == doctest::Approx(-8.0));
    // Eigenvalues of [[0,-8,0],[-8,0,-8],[0,-8,0]] are {-8 sqrt 2, 0, 8 sqrt 2}.
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(3, 3);
    dense(0, 1) = dense(1, 0) = -8.0;
    dense(1, 2) = dense(2, 1) = -8.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-8.0 * std::sqrt(2.0)));
    CHECK(es.eigenvalues()[1] == doctest::Approx(0.0));
  }
  {
    const auto h = reduced_pair_hamiltonian(0, 1.0);
    CHECK(h.diagonal.size() == 1);
    CHECK(h.off_diagonal.size() == 0);
  }
  CHECK_THROWS_AS(reduced_pair_hamiltonian(-1, 1.0), validation_error);
}

TEST_CASE("reduced ladder matrix agrees with the rotated Hamiltonian restricted to the ladder") {
  // Oracle gate for the ladder formula: take matrix elements of the
  // independently assembled pair-exchange Hamiltonian between ladder
  // occupations.
  for (int m : {1, 2, 3, 5}) {
    auto basis = shared_basis(2 * m);
    const Eigen::MatrixXcd full = pair_exchange_hamiltonian(1.0, *basis).to_dense();
    const auto reduced = reduced_pair_hamiltonian(m, 1.0);
    for (int s = 0; s <= m; ++s) {
      const index_t row = basis->index_of(Occupation{{s, m - s, s, m - s}});
      for (int r = 0; r <= m; ++r) {
        const index_t col = basis->index_of(Occupation{{r, m - r, r, m - r}});
        double expected = 0.0;
        if (r == s + 1) expected = reduced.off_diagonal[s];
        if (r + 1 == s) expected = reduced.off_diagonal[r];
        CHECK(std::abs(full(row, col).real() - expected) < 1e-12);
        CHECK(std::abs(full(row, col).imag()) < 1e-15);
      }
      // The ladder is invariant: no matrix elements leave it.
      for (index_t col = 0; col < basis->size(); ++col) {
        const Occupation& occ = basis->occ_of(col);
        if (occ[0] == occ[2] && occ[1] == occ[3]) continue;
        CHECK(std::abs(full(row, col)) < 1e-15);
      }
    }
  }
}

TEST_CASE("reduced ground state amplitudes") {
  {
    const auto gs = reduced_ground_state(1, 1.0);
    CHECK(gs.energy == doctest::Approx(-4.0));
    CHECK(gs.amplitudes[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(gs.amplitudes[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  {
    const auto gs = reduced_ground_state(2, 1.0);
    CHECK(gs.energy == doctest::Approx(-8.0 * std::sqrt(2.0)));
    CHECK(gs.amplitudes[0] == doctest::Approx(0.5));
    CHECK(gs.amplitudes[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(gs.amplitudes[2] == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(reduced_ground_state(0, 1.0), validation_error);
  // Perron positivity over a range of M.
  for (int m : {3, 8, 21, 64}) {
    const auto gs = reduced_ground_state(m, 1.0);
    CHECK(gs.amplitudes.minCoeff() > 0.0);
    CHECK(gs.amplitudes.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("embedding the reduced ground state reproduces full diagonalization") {
  for (int n = 2; n <= 16; n += 2) {
    auto basis = shared_basis(n);
    const auto dense = ground_state_dense(build_pair_hamiltonian(1.0, *basis), basis);
    const auto red = reduced_ground_state(n / 2, 1.0);
    CHECK(std::abs(dense.energy - red.energy) <= 1e-9 * std::max(1.0, std::abs(dense.energy)));
    const StateVector embedded = embed_reduced(red.amplitudes, n / 2);
    CHECK(fidelity(embedded, dense.state) >= 1.0 - 1e-10);
  }
}

TEST_CASE("embedding basics") {
  {
    // M=1: amplitude 1/2 on each doubly occupied mode.
    const auto red = reduced_ground_state(1, 1.0);
    const StateVector psi = embed_reduced(red.amplitudes, 1);
    const FockBasis& basis = *psi.basis;
    for (int mode = 0; mode < 4; ++mode) {
      Occupation occ;
      occ[mode] = 2;
      CHECK(std::abs(psi.amps[basis.index_of(occ)] - complex_t{0.5, 0.0}) < 1e-13);
    }
  }
  {
    // M=0 vacuum amplitude passes through.
    Eigen::VectorXd vac(1);
    vac[0] = 1.0;
    const StateVector psi = embed_reduced(vac, 0);
    CHECK(std::abs(psi.amps[0] - 1.0) < 1e-15);
  }
  for (int m : {8, 32, 64}) {
    const auto red = reduced_ground_state(m, 1.0);
    const StateVector psi = embed_reduced(red.amplitudes, m);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);
  }
  Eigen::VectorXd bad(2);
  bad << 2.0, 0.0;
  CHECK_THROWS_AS(embed_reduced(bad, 1), validation_error);
}

TEST_CASE("cross-solver agreement of all three routes") {
  for (int n = 2; n <= 16; n += 2) {
    auto basis = shared_basis(n);
    const auto h = build_pair_hamiltonian(1.0, *basis);
    const auto dense = ground_state_dense(h, basis);
    const auto lanczos = ground_state_lanczos(h, basis, {});
    const auto red = reduced_ground_state(n / 2, 1.0);
    const StateVector embedded = embed_reduced(red.amplitudes, n / 2);
    const double scale = std::max(1.0, std::abs(dense.energy));
    CHECK(std::abs(dense.energy - lanczos.energy) <= 1e-9 * scale);
    CHECK(std::abs(dense.energy - red.energy) <= 1e-9 * scale);
    CHECK(fidelity(dense.state, lanczos.state) >= 1.0 - 1e-9);
    CHECK(fidelity(dense.state, embedded) >= 1.0 - 1e-9);
  }
}

TEST_CASE("rayleigh quotients upper-bound the ground energy") {
  for (int n : {4, 8, 12}) {
    const int m = n / 2;
    const auto red = reduced_ground_state(m, 1.0);
    auto basis = shared_basis(n);
    const auto h = build_pair_hamiltonian(1.0, *basis);
    const StateVector model = model_state_full(m);
    CHECK(rayleigh_quotient(h, model.amps) >= red.energy - 1e-10);
    for (int l = 0; l <= m / 2; ++l) {
      const StateVector phi = variational_basis_state(l, m, basis);
      CHECK(rayleigh_quotient(h, phi.amps) >= red.energy - 1e-10);
    }
  }
}

TEST_CASE("ground state energy is decreasing in N for pure pair tunneling") {
  double prev = 0.0;
  for (int m = 1; m <= 32; ++m) {
    const double e = reduced_ground_state(m, 1.0).energy;
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("binomial trial state expectation") {
  CHECK(jx_extremal_expectation(1, 1.0) == doctest::Approx(-4.0));
  {
    // Independent evaluation through the dense tridiagonal quadratic form.
    for (int m : {2, 5, 16}) {
      const auto h = reduced_pair_hamiltonian(m, 1.0);
      Eigen::VectorXd x(m + 1);
      for (int s = 0; s <= m; ++s) {
        x[s] = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(s + 1.0) - std::lgamma(m - s + 1.0)) -
                        0.5 * m * std::log(2.0));
      }
      double expect = 0.0;
      for (int s = 0; s + 1 <= m; ++s) expect += 2.0 * h.off_diagonal[s] * x[s] * x[s + 1];
      CHECK(jx_extremal_expectation(m, 1.0) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  {
    // Scaling: the value sits at -2M^2 - O(M), so the ratio to -2M^2
    // decreases toward 1 from above.
    const double r16 = jx_extremal_expectation(16, 1.0) / (-2.0 * 16.0 * 16.0);
    const double r64 = jx_extremal_expectation(64, 1.0) / (-2.0 * 64.0 * 64.0);
    const double r256 = jx_extremal_expectation(256, 1.0) / (-2.0 * 256.0 * 256.0);
    CHECK(r16 > 1.0);
    CHECK(r16 < 1.1);
    CHECK(r64 < r16);
    CHECK(r256 < r64);
    CHECK(r256 == doctest::Approx(1.0).epsilon(5e-3));
    // The linear correction band: -2M^2 - 2M <= value <= -2M^2.
    for (int m : {16, 64, 256}) {
      const double value = jx_extremal_expectation(m, 1.0);
      CHECK(value <= -2.0 * m * m);
      CHECK(value >= -2.0 * m * m - 2.0 * m);
    }
  }
  // Variational property: E0 below the trial expectation, ratio to -N^2/2
  // bounded as in the quadratic scaling analysis.
  for (int n = 2; n <= 64; n += 2) {
    const int m = n / 2;
    const double e0 = reduced_ground_state(m, 1.0).energy;
    const double bound = jx_extremal_expectation(m, 1.0);
    CHECK(e0 <= bound);
  }
}

TEST_CASE("reduced solver handles M = 4096 quickly") {
  const auto start = std::chrono::steady_clock::now();
  const auto gs = reduced_ground_state(4096, 1.0);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(gs.energy < -2.0 * 4096.0 * 4096.0);
  CHECK(seconds < 1.0);
}

TEST_CASE("degeneracy warning on gapless spectra") {
  auto basis = shared_basis(1);
  std::vector<SparseOperator::Triplet> trip{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 2.0}, {3, 3, 2.0}};
  const auto op = SparseOperator::from_triplets(4, trip, true);
  const auto gs = ground_state_dense(op, basis);
  CHECK(gs.degenerate_warning);
  CHECK(gs.energy == doctest::Approx(1.0));
}

TEST_SUITE_END();
