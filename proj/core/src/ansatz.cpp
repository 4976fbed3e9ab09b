#include "paircorr/ansatz.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

namespace paircorr {

namespace {

const double kPi = std::acos(-1.0);

int max_index(int m) { return m / 2; }

void check_index(int l, int m, bool allow_negative = false) {
  if (m < 1) throw validation_error("variational family requires M >= 1");
  const int bound = max_index(m);
  if (l > bound || (allow_negative ? l < -bound : l < 0)) {
    throw validation_error("variational index l out of range for M = " + std::to_string(m));
  }
}

}  // namespace

double wavenumber(int l, int m) { return 2.0 * kPi * l / m; }

bool is_axis_wavenumber(int l, int m) {
  // k_l = 0 (l = 0) or k_l = pi (2l = M).
  return l == 0 || 2 * std::abs(l) == m;
}

double log_normalization_constant(int l, int m) {
  check_index(l, m);
  if (is_axis_wavenumber(l, m)) {
    return (m + 1) * std::log(2.0) + std::lgamma(m + 1.0) + 0.5 * std::log(m + 1.0);
  }
  return m * std::log(2.0) + std::lgamma(m + 1.0) + 0.5 * std::log(2.0 * m + 4.0);
}

double normalization_constant(int l, int m) { return std::exp(log_normalization_constant(l, m)); }

StateVector variational_basis_state(int l, int m, std::shared_ptr<const FockBasis> basis) {
  check_index(l, m);
  if (basis->particle_number() != 2 * m) {
    throw validation_error("variational basis state requires an even, matching particle number");
  }
  const double k = wavenumber(l, m);
  const double log_norm = log_normalization_constant(l, m);

  StateVector psi;
  psi.basis = std::move(basis);
  psi.amps = Eigen::VectorXcd::Zero(psi.basis->size());

  // Multinomial expansion of the pair-power state: the term with m_i pairs
  // in mode i lands on |2m_0, 2m_1, 2m_2, 2m_3> with weight
  // M!/(prod m_i!) * prod sqrt((2 m_i)!), and the two k-branches combine
  // into 2 cos(k (m_1 + m_3)).
  for (int m0 = 0; m0 <= m; ++m0) {
    for (int m1 = 0; m1 <= m - m0; ++m1) {
      for (int m2 = 0; m2 <= m - m0 - m1; ++m2) {
        const int m3 = m - m0 - m1 - m2;
        double log_w = std::lgamma(m + 1.0);
        for (int mi : {m0, m1, m2, m3}) {
          log_w -= std::lgamma(mi + 1.0);
          log_w += 0.5 * std::lgamma(2.0 * mi + 1.0);
        }
        const double amp = 2.0 * std::cos(k * (m1 + m3)) * std::exp(log_w - log_norm);
        psi.amps[psi.basis->index_of(Occupation{{2 * m0, 2 * m1, 2 * m2, 2 * m3}})] = amp;
      }
    }
  }
  return psi;
}

Eigen::VectorXcd reduced_plane_wave(int l_signed, int m) {
  check_index(std::abs(l_signed), m, true);
  const double k = wavenumber(l_signed, m);
  Eigen::VectorXcd xi(m + 1);
  const double scale = 1.0 / std::sqrt(m + 1.0);
  for (int j = 0; j <= m; ++j) xi[j] = std::polar(scale, k * (m - j));
  return xi;
}

Eigen::VectorXd reduced_amplitudes(int l, int m) {
  check_index(l, m);
  const double k = wavenumber(l, m);
  Eigen::VectorXd w(m + 1);
  if (is_axis_wavenumber(l, m)) {
    const double scale = 1.0 / std::sqrt(m + 1.0);
    for (int j = 0; j <= m; ++j) w[j] = scale * std::cos(k * (m - j));
  } else {
    const double scale = 2.0 / std::sqrt(2.0 * m + 4.0);
    for (int j = 0; j <= m; ++j) w[j] = scale * std::cos(k * (m - j));
  }
  return w;
}

Eigen::MatrixXd gram_matrix(int m) {
  if (m < 1) throw validation_error("gram matrix requires M >= 1");
  const int size = max_index(m) + 1;
  Eigen::MatrixXd g(size, size);
  for (int l = 0; l < size; ++l) {
    for (int r = 0; r < size; ++r) {
      if (l == r) {
        g(l, r) = 1.0;
        continue;
      }
      const bool axis_l = is_axis_wavenumber(l, m);
      const bool axis_r = is_axis_wavenumber(r, m);
      if (axis_l && axis_r) {
        g(l, r) = 1.0 / (m + 1.0);
      } else if (axis_l || axis_r) {
        g(l, r) = std::sqrt(2.0 / ((m + 1.0) * (m + 2.0)));
      } else {
        g(l, r) = 2.0 / (m + 2.0);
      }
    }
  }
  return g;
}

Eigen::MatrixXd reduced_subspace_hamiltonian(int m, double t2) {
  const int size = max_index(m) + 1;
  const ReducedPairHamiltonian h = reduced_pair_hamiltonian(m, t2);
  Eigen::MatrixXd a(m + 1, size);
  for (int l = 0; l < size; ++l) a.col(l) = reduced_amplitudes(l, m);
  Eigen::MatrixXd ha(m + 1, size);
  for (int l = 0; l < size; ++l) {
    for (int s = 0; s <= m; ++s) {
      double acc = 0.0;
      if (s > 0) acc += h.off_diagonal[s - 1] * a(s - 1, l);
      if (s < m) acc += h.off_diagonal[s] * a(s + 1, l);
      ha(s, l) = acc;
    }
  }
  return a.transpose() * ha;
}

namespace {

OptimalFidelity solve_constrained(const Eigen::VectorXd& u, int m, double imag_residual) {
  const Eigen::MatrixXd g = gram_matrix(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  OptimalFidelity result;
  result.gram_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (lo <= 0.0) {
    throw invariant_error("gram matrix not positive definite (condition " + std::to_string(result.gram_condition) +
                          ")");
  }
  Eigen::VectorXd c = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose() * u;
  const double f2 = u.dot(c);
  result.fidelity = f2 > 0.0 ? std::sqrt(f2) : 0.0;
  result.coefficients = result.fidelity > 0.0 ? Eigen::VectorXd(c / result.fidelity) : c;
  result.imag_residual = imag_residual;
  return result;
}

}  // namespace

OptimalFidelity optimal_fidelity(const Eigen::VectorXd& target_ladder, int m) {
  if (target_ladder.size() != m + 1) throw validation_error("target ladder amplitudes must have size M+1");
  if (std::abs(target_ladder.norm() - 1.0) > 1e-8) throw validation_error("target must be normalized");
  const int size = max_index(m) + 1;
  Eigen::VectorXd u(size);
  for (int l = 0; l < size; ++l) u[l] = reduced_amplitudes(l, m).dot(target_ladder);
  return solve_constrained(u, m, 0.0);
}

OptimalFidelity optimal_fidelity(const StateVector& target, int m) {
  if (std::abs(target.norm() - 1.0) > 1e-8) throw validation_error("target must be normalized");
  if (target.particle_number() != 2 * m) throw validation_error("target particle number must equal 2M");
  const int size = max_index(m) + 1;
  Eigen::VectorXcd v(size);
  for (int l = 0; l < size; ++l) {
    const StateVector phi = variational_basis_state(l, m, target.basis);
    v[l] = phi.amps.dot(target.amps);
  }
  int pivot = 0;
  v.cwiseAbs().maxCoeff(&pivot);
  if (std::abs(v[pivot]) > 0.0) v *= std::conj(v[pivot]) / std::abs(v[pivot]);
  return solve_constrained(v.real(), m, v.imag().norm());
}

Eigen::VectorXd model_state_reduced(int m) {
  if (m < 1) throw validation_error("model state requires M >= 1");
  Eigen::VectorXd w(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double log_w =
        0.5 * (std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0)) - 0.5 * m * std::log(2.0);
    w[j] = std::exp(log_w);
  }
  return w;
}

StateVector model_state_full(int m) { return embed_reduced(model_state_reduced(m), m); }

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.basis->particle_number() != b.basis->particle_number() || a.amps.size() != b.amps.size()) {
    throw validation_error("fidelity requires states over the same basis");
  }
  if (std::abs(a.norm() - 1.0) > 1e-8 || std::abs(b.norm() - 1.0) > 1e-8) {
    throw validation_error("fidelity requires normalized states");
  }
  return std::abs(a.amps.dot(b.amps));
}

}  // namespace paircorr
