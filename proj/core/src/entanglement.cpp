#include "paircorr/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "paircorr/ansatz.hpp"

namespace paircorr {

namespace {

constexpr double kSectorClamp = 1e-14;
constexpr double kIdentityTol = 1e-10;
constexpr double kPurityTol = 1e-10;

// Non-positive eigenvalues (numerical noise around zero) are clamped to
// zero before x ln x; positive values are kept exactly, however small, so
// closed-form entropy comparisons hold to near machine precision even for
// distributions with long tails.
double xlnx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

// Amplitudes of each occupied sector arranged as an (n_a+1) x (N-n_a+1)
// matrix: row index = occupation of the lower A mode, column index =
// occupation of the lower B mode. The reduced block is Psi Psi^H.
using SectorMatrices = std::map<int, Eigen::MatrixXcd>;

void check_normalized(double norm) {
  if (std::abs(norm - 1.0) > 1e-8) throw validation_error("entanglement functions require a normalized state");
}

SectorMatrices sector_matrices(const StateVector& psi, const Bipartition& part) {
  check_normalized(psi.norm());
  const FockBasis& basis = *psi.basis;
  const int n = basis.particle_number();
  const int b_low = part.subsystem_b()[0];
  SectorMatrices mats;
  for (int na = 0; na <= n; ++na) mats.emplace(na, Eigen::MatrixXcd::Zero(na + 1, n - na + 1));
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    const int na = occ[part.a0] + occ[part.a1];
    mats[na](occ[part.a0], occ[b_low]) = psi.amps[i];
  }
  return mats;
}

SectorMatrices sector_matrices(const SparseState& psi, const Bipartition& part) {
  check_normalized(psi.norm());
  const int n = psi.particle_number;
  const int b_low = part.subsystem_b()[0];
  SectorMatrices mats;
  for (const auto& [occ, amp] : psi.entries) {
    if (occ.total() != n) throw validation_error("sparse state entry outside particle sector");
    const int na = occ[part.a0] + occ[part.a1];
    auto it = mats.find(na);
    if (it == mats.end()) it = mats.emplace(na, Eigen::MatrixXcd::Zero(na + 1, n - na + 1)).first;
    it->second(occ[part.a0], occ[b_low]) += amp;
  }
  return mats;
}

// Eigenvalues of Psi Psi^H via the smaller-side Gram matrix (identical
// nonzero spectrum either way).
Eigen::VectorXd block_spectrum(const Eigen::MatrixXcd& psi_mat) {
  const Eigen::MatrixXcd gram = psi_mat.rows() <= psi_mat.cols()
                                    ? Eigen::MatrixXcd(psi_mat * psi_mat.adjoint())
                                    : Eigen::MatrixXcd(psi_mat.adjoint() * psi_mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EntanglementReport report_from_matrices(const SectorMatrices& mats, int n, const Bipartition& part) {
  EntanglementReport report;
  report.bipartition = part;
  report.sector_probabilities = Eigen::VectorXd::Zero(n + 1);

  double svn = 0.0;
  double sfluct = 0.0;
  double sacc = 0.0;
  for (const auto& [na, psi_mat] : mats) {
    const double p = psi_mat.squaredNorm();
    report.sector_probabilities[na] = p;
    if (p < kSectorClamp) continue;
    sfluct -= xlnx(p);
    const Eigen::VectorXd lambda = block_spectrum(psi_mat);
    double conditional = 0.0;
    for (double v : lambda) {
      svn -= xlnx(std::max(v, 0.0));
      conditional -= xlnx(std::max(v, 0.0) / p);
    }
    sacc += p * conditional;
  }
  report.svn = svn;
  report.sfluct = sfluct;
  report.sacc = sacc;
  if (std::abs(report.svn - (report.sfluct + report.sacc)) > kIdentityTol) {
    throw invariant_error("entropy decomposition identity violated by " +
                          std::to_string(std::abs(report.svn - (report.sfluct + report.sacc))));
  }
  return report;
}

std::vector<SectorBlock> blocks_from_matrices(const SectorMatrices& mats) {
  std::vector<SectorBlock> blocks;
  for (const auto& [na, psi_mat] : mats) {
    const double p = psi_mat.squaredNorm();
    if (p < kSectorClamp) continue;
    SectorBlock block;
    block.n_a = na;
    block.probability = p;
    block.rho = psi_mat * psi_mat.adjoint();
    blocks.push_back(std::move(block));
  }
  return blocks;
}

double renyi2_from_matrices(const SectorMatrices& mats) {
  double bound = 0.0;
  for (const auto& [na, psi_mat] : mats) {
    const double p = psi_mat.squaredNorm();
    if (p < kSectorClamp) continue;
    const Eigen::MatrixXcd gram = psi_mat.rows() <= psi_mat.cols()
                                      ? Eigen::MatrixXcd(psi_mat * psi_mat.adjoint())
                                      : Eigen::MatrixXcd(psi_mat.adjoint() * psi_mat);
    const double purity = gram.squaredNorm() / (p * p);  // Tr (rho/p)^2
    bound -= p * std::log(purity);
  }
  return bound;
}

ZeroAccessibleCheck zero_check_from_matrices(const SectorMatrices& mats) {
  ZeroAccessibleCheck check;
  for (const auto& [na, psi_mat] : mats) {
    const double p = psi_mat.squaredNorm();
    if (p < kSectorClamp) continue;
    const Eigen::VectorXd lambda = block_spectrum(psi_mat);
    double conditional = 0.0;
    for (double v : lambda) conditional -= xlnx(std::max(v, 0.0) / p);
    check.max_deviation = std::max(check.max_deviation, conditional);
  }
  check.zero = check.max_deviation < kPurityTol;
  return check;
}

}  // namespace

std::vector<SectorBlock> reduced_density_blocks(const StateVector& psi, const Bipartition& part) {
  return blocks_from_matrices(sector_matrices(psi, part));
}

std::vector<SectorBlock> reduced_density_blocks(const SparseState& psi, const Bipartition& part) {
  return blocks_from_matrices(sector_matrices(psi, part));
}

EntanglementReport entropies(const StateVector& psi, const Bipartition& part) {
  return report_from_matrices(sector_matrices(psi, part), psi.particle_number(), part);
}

EntanglementReport entropies(const SparseState& psi, const Bipartition& part) {
  return report_from_matrices(sector_matrices(psi, part), psi.particle_number, part);
}

double renyi2_accessible_bound(const StateVector& psi, const Bipartition& part) {
  return renyi2_from_matrices(sector_matrices(psi, part));
}

double renyi2_accessible_bound(const SparseState& psi, const Bipartition& part) {
  return renyi2_from_matrices(sector_matrices(psi, part));
}

double analytic_bound_variational(const Eigen::VectorXd& c, int m) {
  const int expected = m / 2 + 1;
  if (c.size() != expected) {
    throw validation_error("coefficient vector must have size floor(M/2)+1 = " + std::to_string(expected));
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m + 1);
  for (int l = 0; l < expected; ++l) w += c[l] * reduced_amplitudes(l, m);
  const double norm2 = w.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-6) {
    throw validation_error("coefficients must satisfy c^T G c = 1 (got " + std::to_string(norm2) + ")");
  }
  double quartic = 0.0;
  for (int j = 0; j <= m; ++j) quartic += w[j] * w[j] * w[j] * w[j];
  return -std::log(quartic);
}

double binomial_entropy(int m) {
  if (m < 0) throw validation_error("binomial entropy requires M >= 0");
  const double log2v = std::log(2.0);
  long double s = 0.0L;
  for (int j = 0; j <= m; ++j) {
    const double log_p = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) - m * log2v;
    s -= std::exp(log_p) * static_cast<long double>(log_p);
  }
  return static_cast<double>(s);
}

ZeroAccessibleCheck zero_accessible_check(const StateVector& psi, const Bipartition& part) {
  return zero_check_from_matrices(sector_matrices(psi, part));
}

ZeroAccessibleCheck zero_accessible_check(const SparseState& psi, const Bipartition& part) {
  return zero_check_from_matrices(sector_matrices(psi, part));
}

}  // namespace paircorr
