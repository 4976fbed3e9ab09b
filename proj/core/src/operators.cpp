#include "paircorr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>

namespace paircorr {

namespace {

constexpr double kHermiticityTol = 1e-13;

using cld = std::complex<long double>;

std::ptrdiff_t other_index(const std::vector<index_t>& row_ptr, const std::vector<index_t>& col, index_t row,
                           index_t c) {
  // Binary search for column c within CSR row `row`; -1 if absent.
  auto first = col.begin() + row_ptr[static_cast<std::size_t>(row)];
  auto last = col.begin() + row_ptr[static_cast<std::size_t>(row) + 1];
  auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return -1;
  return it - col.begin();
}

}  // namespace

SparseOperator SparseOperator::from_triplets(index_t dim, std::vector<Triplet> triplets, bool expect_hermitian) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseOperator op;
  op.dim_ = dim;
  op.row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
  op.col_.reserve(triplets.size());
  op.values_.reserve(triplets.size());

  std::size_t i = 0;
  while (i < triplets.size()) {
    const index_t r = triplets[i].row;
    const index_t c = triplets[i].col;
    complex_t v = triplets[i].value;
    ++i;
    while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
      v += triplets[i].value;
      ++i;
    }
    if (v == complex_t{0.0, 0.0}) continue;
    op.col_.push_back(c);
    op.values_.push_back(v);
    op.row_ptr_[static_cast<std::size_t>(r) + 1]++;
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(dim); ++r) op.row_ptr_[r + 1] += op.row_ptr_[r];

  if (expect_hermitian) {
    const double dev = op.hermiticity_deviation();
    const double scale = std::max(op.max_abs(), 1.0);
    if (dev > kHermiticityTol * scale) {
      throw invariant_error("assembled operator deviates from Hermiticity by " + std::to_string(dev));
    }
    op.hermitian_ = true;
  }
  return op;
}

void SparseOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  if (in.size() != dim_) throw validation_error("operator/state dimension mismatch");
  out.resize(dim_);
  for (index_t r = 0; r < dim_; ++r) {
    complex_t acc{0.0, 0.0};
    for (index_t k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      acc += values_[static_cast<std::size_t>(k)] * in[col_[static_cast<std::size_t>(k)]];
    }
    out[r] = acc;
  }
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& in) const {
  Eigen::VectorXcd out;
  apply(in, out);
  return out;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::hermiticity_deviation() const {
  double dev = 0.0;
  for (index_t r = 0; r < dim_; ++r) {
    for (index_t k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      const index_t c = col_[static_cast<std::size_t>(k)];
      const complex_t v = values_[static_cast<std::size_t>(k)];
      const std::ptrdiff_t pos = other_index(row_ptr_, col_, c, r);
      const complex_t vt = pos >= 0 ? values_[static_cast<std::size_t>(pos)] : complex_t{0.0, 0.0};
      dev = std::max(dev, std::abs(v - std::conj(vt)));
    }
  }
  return dev;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (index_t r = 0; r < dim_; ++r) {
    for (index_t k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      m(r, col_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
    }
  }
  return m;
}

void SparseOperator::write_coordinate_text(std::ostream& os) const {
  char buf[96];
  for (index_t r = 0; r < dim_; ++r) {
    for (index_t k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      const complex_t v = values_[static_cast<std::size_t>(k)];
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g %.17g\n", static_cast<long long>(r),
                    static_cast<long long>(col_[static_cast<std::size_t>(k)]), v.real(), v.imag());
      os << buf;
    }
  }
}

double SparseState::norm() const {
  long double acc = 0.0L;
  for (const auto& [occ, amp] : entries) acc += std::norm(amp);
  return static_cast<double>(std::sqrt(acc));
}

StateVector SparseState::to_state_vector(std::shared_ptr<const FockBasis> basis) const {
  if (basis->particle_number() != particle_number) {
    throw validation_error("sparse state particle number does not match basis");
  }
  StateVector psi;
  psi.basis = std::move(basis);
  psi.amps = Eigen::VectorXcd::Zero(psi.basis->size());
  for (const auto& [occ, amp] : entries) psi.amps[psi.basis->index_of(occ)] += amp;
  return psi;
}

std::shared_ptr<const FockBasis> shared_basis(int particle_number) {
  static std::mutex mu;
  static std::map<int, std::weak_ptr<const FockBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[particle_number];
  if (auto existing = slot.lock()) return existing;
  auto fresh = std::make_shared<const FockBasis>(particle_number);
  slot = fresh;
  return fresh;
}

SparseOperator build_hamiltonian(const HamiltonianParams& params, const FockBasis& basis) {
  if (!params.allow_negative && (params.u < 0.0 || params.j < 0.0 || params.t2 < 0.0)) {
    throw validation_error("negative couplings require HamiltonianParams::allow_negative");
  }
  std::vector<SparseOperator::Triplet> trip;
  trip.reserve(static_cast<std::size_t>(basis.size()) * 13);
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    if (params.u != 0.0) {
      double diag = 0.0;
      for (int m = 0; m < kNumModes; ++m) diag += 0.5 * params.u * occ[m] * (occ[m] - 1);
      if (diag != 0.0) trip.push_back({i, i, complex_t{diag, 0.0}});
    }
    for (int m = 0; m < kNumModes; ++m) {
      const int m2 = (m + 1) % kNumModes;
      if (params.j != 0.0) {
        // a†_{m2} a_m and its conjugate a†_m a_{m2}.
        if (occ[m] >= 1) {
          Occupation to = occ;
          to[m] -= 1;
          to[m2] += 1;
          const double amp = -params.j * std::sqrt(static_cast<double>(occ[m]) * (occ[m2] + 1));
          trip.push_back({basis.index_of(to), i, complex_t{amp, 0.0}});
        }
        if (occ[m2] >= 1) {
          Occupation to = occ;
          to[m2] -= 1;
          to[m] += 1;
          const double amp = -params.j * std::sqrt(static_cast<double>(occ[m2]) * (occ[m] + 1));
          trip.push_back({basis.index_of(to), i, complex_t{amp, 0.0}});
        }
      }
      if (params.t2 != 0.0) {
        if (occ[m] >= 2) {
          Occupation to = occ;
          to[m] -= 2;
          to[m2] += 2;
          const double amp = -params.t2 * std::sqrt(static_cast<double>(occ[m]) * (occ[m] - 1) * (occ[m2] + 1) *
                                                    (occ[m2] + 2));
          trip.push_back({basis.index_of(to), i, complex_t{amp, 0.0}});
        }
        if (occ[m2] >= 2) {
          Occupation to = occ;
          to[m2] -= 2;
          to[m] += 2;
          const double amp = -params.t2 * std::sqrt(static_cast<double>(occ[m2]) * (occ[m2] - 1) * (occ[m] + 1) *
                                                    (occ[m] + 2));
          trip.push_back({basis.index_of(to), i, complex_t{amp, 0.0}});
        }
      }
    }
  }
  return SparseOperator::from_triplets(basis.size(), std::move(trip), /*expect_hermitian=*/true);
}

SparseOperator build_pair_hamiltonian(double t2, const FockBasis& basis) {
  return build_hamiltonian(HamiltonianParams{0.0, 0.0, t2, false}, basis);
}

SparseOperator pair_exchange_hamiltonian(double t2, const FockBasis& basis) {
  std::vector<SparseOperator::Triplet> trip;
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    // a†_0 a†_2 a_1 a_3 term.
    if (occ[1] >= 1 && occ[3] >= 1) {
      Occupation to = occ;
      to[0] += 1;
      to[2] += 1;
      to[1] -= 1;
      to[3] -= 1;
      const double amp = -4.0 * t2 *
                         std::sqrt(static_cast<double>(occ[1]) * occ[3] * (occ[0] + 1) * (occ[2] + 1));
      trip.push_back({basis.index_of(to), i, complex_t{amp, 0.0}});
    }
    if (occ[0] >= 1 && occ[2] >= 1) {
      Occupation to = occ;
      to[0] -= 1;
      to[2] -= 1;
      to[1] += 1;
      to[3] += 1;
      const double amp = -4.0 * t2 *
                         std::sqrt(static_cast<double>(occ[0]) * occ[2] * (occ[1] + 1) * (occ[3] + 1));
      trip.push_back({basis.index_of(to), i, complex_t{amp, 0.0}});
    }
  }
  return SparseOperator::from_triplets(basis.size(), std::move(trip), /*expect_hermitian=*/true);
}

SparseOperator phase_unitary(const std::array<double, 4>& thetas, const FockBasis& basis) {
  std::vector<SparseOperator::Triplet> trip;
  trip.reserve(static_cast<std::size_t>(basis.size()));
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    double phase = 0.0;
    for (int m = 0; m < kNumModes; ++m) phase += thetas[static_cast<std::size_t>(m)] * occ[m];
    trip.push_back({i, i, std::polar(1.0, phase)});
  }
  return SparseOperator::from_triplets(basis.size(), std::move(trip), /*expect_hermitian=*/false);
}

SparseOperator alternating_phase_unitary(const FockBasis& basis) {
  const double q = std::acos(-1.0) / 4.0;
  return phase_unitary({-q, q, -q, q}, basis);
}

SparseOperator mode_permutation(const std::array<int, 4>& perm, const FockBasis& basis) {
  std::array<bool, 4> seen{false, false, false, false};
  for (int m : perm) {
    if (m < 0 || m >= kNumModes || seen[static_cast<std::size_t>(m)]) {
      throw validation_error("mode_permutation requires a permutation of {0,1,2,3}");
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
  std::vector<SparseOperator::Triplet> trip;
  trip.reserve(static_cast<std::size_t>(basis.size()));
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    Occupation to;
    for (int m = 0; m < kNumModes; ++m) to[perm[static_cast<std::size_t>(m)]] = occ[m];
    trip.push_back({basis.index_of(to), i, complex_t{1.0, 0.0}});
  }
  return SparseOperator::from_triplets(basis.size(), std::move(trip), /*expect_hermitian=*/false);
}

namespace {

// Column m of the two-mode rotation in sector t, computed in extended
// precision by stepping the ladder recurrence up from column 0.
void rotation_column(int t, int m, long double c, long double s, std::vector<cld>& col) {
  // Column 0: amplitudes sqrt(C(t,k)) (i s)^k c^(t-k), no cancellation.
  col.assign(static_cast<std::size_t>(t) + 1, cld{0.0L, 0.0L});
  cld val{1.0L, 0.0L};
  for (int k = 0; k < t; ++k) val *= c;  // c^t
  col[0] = val;
  for (int k = 0; k + 1 <= t; ++k) {
    // ratio sqrt(C(t,k+1)/C(t,k)) * (i s)/c
    const long double ratio = std::sqrt(static_cast<long double>(t - k) / (k + 1));
    col[static_cast<std::size_t>(k) + 1] = col[static_cast<std::size_t>(k)] * cld{0.0L, ratio} * (s / c);
  }
  std::vector<cld> next(static_cast<std::size_t>(t) + 1);
  for (int col_m = 0; col_m < m; ++col_m) {
    const long double denom = std::sqrt(static_cast<long double>(col_m + 1) * (t - col_m));
    for (int k = 0; k <= t; ++k) {
      cld acc = cld{0.0L, s * c * (t - 2 * k)} * col[static_cast<std::size_t>(k)];
      if (k >= 1) {
        acc += c * c * std::sqrt(static_cast<long double>(k) * (t - k + 1)) * col[static_cast<std::size_t>(k) - 1];
      }
      if (k + 1 <= t) {
        acc += s * s * std::sqrt(static_cast<long double>(k + 1) * (t - k)) * col[static_cast<std::size_t>(k) + 1];
      }
      next[static_cast<std::size_t>(k)] = acc / denom;
    }
    col.swap(next);
  }
}

}  // namespace

Eigen::MatrixXcd two_mode_rotation(int t, double theta) {
  if (t < 0) throw validation_error("two_mode_rotation requires t >= 0");
  const long double c = std::cos(static_cast<long double>(theta));
  const long double s = std::sin(static_cast<long double>(theta));
  Eigen::MatrixXcd u(t + 1, t + 1);
  std::vector<cld> col;
  std::vector<cld> next(static_cast<std::size_t>(t) + 1);
  rotation_column(t, 0, c, s, col);
  for (int m = 0; m <= t; ++m) {
    for (int k = 0; k <= t; ++k) {
      u(k, m) = complex_t{static_cast<double>(col[static_cast<std::size_t>(k)].real()),
                          static_cast<double>(col[static_cast<std::size_t>(k)].imag())};
    }
    if (m == t) break;
    const long double denom = std::sqrt(static_cast<long double>(m + 1) * (t - m));
    for (int k = 0; k <= t; ++k) {
      cld acc = cld{0.0L, s * c * (t - 2 * k)} * col[static_cast<std::size_t>(k)];
      if (k >= 1) {
        acc += c * c * std::sqrt(static_cast<long double>(k) * (t - k + 1)) * col[static_cast<std::size_t>(k) - 1];
      }
      if (k + 1 <= t) {
        acc += s * s * std::sqrt(static_cast<long double>(k + 1) * (t - k)) * col[static_cast<std::size_t>(k) + 1];
      }
      next[static_cast<std::size_t>(k)] = acc / denom;
    }
    col.swap(next);
  }
  return u;
}

StateVector apply_beamsplitter(const StateVector& psi, int p, int q, double theta) {
  if (p == q) throw validation_error("beamsplitter requires two distinct modes");
  const FockBasis& basis = *psi.basis;
  StateVector out;
  out.basis = psi.basis;
  out.amps.resize(basis.size());

  std::map<int, Eigen::MatrixXcd> rotations;
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    const int t = occ[p] + occ[q];
    auto it = rotations.find(t);
    if (it == rotations.end()) it = rotations.emplace(t, two_mode_rotation(t, theta)).first;
    const Eigen::MatrixXcd& u = it->second;
    const int m = occ[p];
    complex_t acc{0.0, 0.0};
    Occupation from = occ;
    for (int mp = 0; mp <= t; ++mp) {
      from[p] = mp;
      from[q] = t - mp;
      acc += u(m, mp) * psi.amps[basis.index_of(from)];
    }
    out.amps[i] = acc;
  }
  return out;
}

SparseState apply_beamsplitter(const SparseState& psi, int p, int q, double theta) {
  if (p == q) throw validation_error("beamsplitter requires two distinct modes");
  const long double c = std::cos(static_cast<long double>(theta));
  const long double s = std::sin(static_cast<long double>(theta));

  // Cache of rotation columns keyed by (sector, source index); sparse
  // inputs typically reuse few distinct keys many times.
  std::map<std::pair<int, int>, std::vector<cld>> columns;
  std::map<Occupation, complex_t> acc;
  for (const auto& [occ, amp] : psi.entries) {
    const int t = occ[p] + occ[q];
    const int m = occ[p];
    auto it = columns.find({t, m});
    if (it == columns.end()) {
      std::vector<cld> col;
      rotation_column(t, m, c, s, col);
      it = columns.emplace(std::make_pair(t, m), std::move(col)).first;
    }
    const std::vector<cld>& col = it->second;
    Occupation to = occ;
    for (int k = 0; k <= t; ++k) {
      to[p] = k;
      to[q] = t - k;
      const cld v = col[static_cast<std::size_t>(k)];
      acc[to] += amp * complex_t{static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
  }
  SparseState out;
  out.particle_number = psi.particle_number;
  out.entries.reserve(acc.size());
  for (const auto& [occ, amp] : acc) {
    if (amp != complex_t{0.0, 0.0}) out.entries.emplace_back(occ, amp);
  }
  return out;
}

SparseOperator beamsplitter_operator(const FockBasis& basis, int p, int q, double theta) {
  if (p == q) throw validation_error("beamsplitter requires two distinct modes");
  std::vector<SparseOperator::Triplet> trip;
  std::map<int, Eigen::MatrixXcd> rotations;
  for (index_t i = 0; i < basis.size(); ++i) {
    const Occupation& occ = basis.occ_of(i);
    const int t = occ[p] + occ[q];
    auto it = rotations.find(t);
    if (it == rotations.end()) it = rotations.emplace(t, two_mode_rotation(t, theta)).first;
    const Eigen::MatrixXcd& u = it->second;
    const int m = occ[p];
    Occupation to = occ;
    for (int k = 0; k <= t; ++k) {
      to[p] = k;
      to[q] = t - k;
      trip.push_back({basis.index_of(to), i, u(k, m)});
    }
  }
  return SparseOperator::from_triplets(basis.size(), std::move(trip), /*expect_hermitian=*/false);
}

StateVector apply_entanglement_switch(const StateVector& psi, bool inverse) {
  const double q = std::acos(-1.0) / 4.0;
  const double theta = inverse ? -q : q;
  // The two factors act on disjoint mode pairs and commute.
  return apply_beamsplitter(apply_beamsplitter(psi, 1, 3, theta), 0, 2, theta);
}

SparseState apply_entanglement_switch(const SparseState& psi, bool inverse) {
  const double q = std::acos(-1.0) / 4.0;
  const double theta = inverse ? -q : q;
  return apply_beamsplitter(apply_beamsplitter(psi, 1, 3, theta), 0, 2, theta);
}

NumberMoments number_moments(const StateVector& psi, int mode) {
  if (mode < 0 || mode >= kNumModes) throw validation_error("mode out of range");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw validation_error("number_moments requires a normalized state");
  const FockBasis& basis = *psi.basis;
  long double mean = 0.0L;
  long double second = 0.0L;
  for (index_t i = 0; i < basis.size(); ++i) {
    const double w = std::norm(psi.amps[i]);
    const int nj = basis.occ_of(i)[mode];
    mean += w * nj;
    second += w * static_cast<long double>(nj) * nj;
  }
  NumberMoments moments;
  moments.mean = static_cast<double>(mean);
  moments.variance = std::max(0.0, static_cast<double>(second - mean * mean));
  return moments;
}

}  // namespace paircorr
