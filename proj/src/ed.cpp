// ed.cpp — dense truncated-Fock diagonalization.
#include "srpt/ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace srpt::ed {
namespace {

// Occupation of mode nu inside the boson multi-index (mode 0 slowest).
struct BosonIndexer {
  std::vector<int> n_max;
  std::vector<long> stride;  // stride[nu] in boson index units
  long size = 1;

  explicit BosonIndexer(const std::vector<int>& cutoffs) : n_max(cutoffs) {
    stride.assign(cutoffs.size(), 1);
    long acc = 1;  // mode 0 slowest: the last mode has stride 1
    for (int nu = static_cast<int>(cutoffs.size()) - 1; nu >= 0; --nu) {
      stride[nu] = acc;
      acc *= cutoffs[nu] + 1;
    }
    size = acc;
  }
  int occ(long b, int nu) const { return static_cast<int>((b / stride[nu]) % (n_max[nu] + 1)); }
};

}  // namespace

DenseModel build_dense(const PhysicalParams& p, Family family, const HilbertSpec& hilbert) {
  const int N = p.n_spins();
  const int M = p.n_modes();
  if (static_cast<int>(hilbert.n_max.size()) != M)
    throw std::invalid_argument("build_dense: need one photon cutoff per mode");
  for (int c : hilbert.n_max)
    if (c < 1) throw std::invalid_argument("build_dense: photon cutoffs must be >= 1");
  // Reduced-unit shape rules apply to the physical model too.
  require_valid(reduce(p, family));

  const BosonIndexer bos(hilbert.n_max);
  const long spin_dim = 1L << N;
  const long dim = bos.size * spin_dim;
  if (dim > hilbert.max_dim)
    throw std::invalid_argument("build_dense: dimension " + std::to_string(dim) +
                                " exceeds max_dim " + std::to_string(hilbert.max_dim));

  DenseModel m;
  m.hilbert = hilbert;
  m.n_spins = N;
  m.n_modes = M;
  m.H = Eigen::MatrixXd::Zero(dim, dim);

  const double root_n = std::sqrt(static_cast<double>(N));
  auto idx = [&](long b, long s) { return b * spin_dim + s; };
  auto zspin = [&](long s, int i) { return (s >> i) & 1L ? -1.0 : 1.0; };

  for (long b = 0; b < bos.size; ++b) {
    for (long s = 0; s < spin_dim; ++s) {
      const long col = idx(b, s);

      // Free part.
      double diag = 0.0;
      for (int nu = 0; nu < M; ++nu) diag += p.omega[nu] * bos.occ(b, nu);
      for (int i = 0; i < N; ++i) diag += p.Delta_i[i] * zspin(s, i);
      m.H(col, col) += diag;

      switch (family) {
        case Family::DQR:
        case Family::Multimode: {
          for (int i = 0; i < N; ++i)
            for (int nu = 0; nu < M; ++nu) {
              const double c = p.g_i_nu[i][nu] / root_n;
              const long s2 = s ^ (1L << i);
              const int n = bos.occ(b, nu);
              if (n > 0) m.H(idx(b - bos.stride[nu], s2), col) += c * std::sqrt(n);
              if (n < bos.n_max[nu])
                m.H(idx(b + bos.stride[nu], s2), col) += c * std::sqrt(n + 1.0);
            }
          break;
        }
        case Family::Biased: {
          for (int i = 0; i < N; ++i) {
            const double c = p.g_i_nu[i][0] / root_n;
            const long s2 = s ^ (1L << i);
            const int n = bos.occ(b, 0);
            if (n > 0) m.H(idx(b - bos.stride[0], s2), col) += c * std::sqrt(n);
            if (n < bos.n_max[0]) m.H(idx(b + bos.stride[0], s2), col) += c * std::sqrt(n + 1.0);
            if (i < static_cast<int>(p.e_i.size())) m.H(idx(b, s2), col) += p.e_i[i];
          }
          break;
        }
        case Family::AnisoInhomogeneous:
        case Family::TavisCummings: {
          // (g/2/sqrt(N)) [(1+l)(a+a+)sx + (1-l) i(a-a+)sy]; the second term is
          // real here: +P on a down->up flip, -P on up->down, with
          // P(n-1,n) = sqrt(n), P(n+1,n) = -sqrt(n+1).
          for (int i = 0; i < N; ++i) {
            const double cx = p.g_i_nu[i][0] * (1.0 + p.lambda_i[i]) / (2.0 * root_n);
            const double cy = p.g_i_nu[i][0] * (1.0 - p.lambda_i[i]) / (2.0 * root_n);
            const long s2 = s ^ (1L << i);
            const double ysign = ((s >> i) & 1L) ? 1.0 : -1.0;  // down->up : up->down
            const int n = bos.occ(b, 0);
            if (n > 0) {
              const double amp = std::sqrt(n);
              m.H(idx(b - bos.stride[0], s2), col) += cx * amp + cy * ysign * amp;
            }
            if (n < bos.n_max[0]) {
              const double amp = std::sqrt(n + 1.0);
              m.H(idx(b + bos.stride[0], s2), col) += cx * amp - cy * ysign * amp;
            }
          }
          break;
        }
        case Family::TwoPhoton: {
          const double c1 = p.g_i_nu[0][0];
          const double c2 = p.g_prime;
          const long s2 = s ^ 1L;
          const int n = bos.occ(b, 0);
          if (n > 0) m.H(idx(b - 1, s2), col) += c1 * std::sqrt(n);
          if (n < bos.n_max[0]) m.H(idx(b + 1, s2), col) += c1 * std::sqrt(n + 1.0);
          if (n > 1) m.H(idx(b - 2, s2), col) += c2 * std::sqrt(n * (n - 1.0));
          if (n + 1 < bos.n_max[0])
            m.H(idx(b + 2, s2), col) += c2 * std::sqrt((n + 1.0) * (n + 2.0));
          break;
        }
        case Family::TwoQubitXYZ: {
          // Dipole couplings carry no 1/sqrt(N) for the exchange-coupled pair.
          for (int i = 0; i < 2; ++i) {
            const double c = p.g_i_nu[i][0];
            const long s2 = s ^ (1L << i);
            const int n = bos.occ(b, 0);
            if (n > 0) m.H(idx(b - 1, s2), col) += c * std::sqrt(n);
            if (n < bos.n_max[0]) m.H(idx(b + 1, s2), col) += c * std::sqrt(n + 1.0);
          }
          const long sxx = s ^ 3L;
          m.H(idx(b, sxx), col) += p.J_alpha[0];
          // s1y s2y double flip: -1 between aligned pairs, +1 between
          // anti-aligned ones.
          const double yy = ((s & 1L) == ((s >> 1) & 1L)) ? -1.0 : 1.0;
          m.H(idx(b, sxx), col) += p.J_alpha[1] * yy;
          m.H(col, col) += p.J_alpha[2] * zspin(s, 0) * zspin(s, 1);
          break;
        }
      }
    }
  }

  // Joint parity: (-1)^(total photons + excited spins).
  m.parity_diag.resize(dim);
  for (long b = 0; b < bos.size; ++b) {
    long photons = 0;
    for (int nu = 0; nu < M; ++nu) photons += bos.occ(b, nu);
    for (long s = 0; s < spin_dim; ++s) {
      const long ups = N - std::popcount(static_cast<unsigned long long>(s));
      m.parity_diag[idx(b, s)] = ((photons + ups) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  m.parity_commutes = true;
  for (long r = 0; r < dim && m.parity_commutes; ++r)
    for (long c = r + 1; c < dim; ++c)
      if (m.H(r, c) != 0.0 && m.parity_diag[r] != m.parity_diag[c]) {
        m.parity_commutes = false;
        break;
      }
  return m;
}

GroundResult ground_state(const DenseModel& m, bool use_parity_blocks) {
  const Eigen::Index dim = m.dim();
  if (dim == 0) throw std::invalid_argument("ground_state: empty model");

  GroundResult g;
  if (use_parity_blocks && m.parity_commutes) {
    double best = std::numeric_limits<double>::infinity();
    for (double sector : {1.0, -1.0}) {
      std::vector<Eigen::Index> keep;
      for (Eigen::Index k = 0; k < dim; ++k)
        if (m.parity_diag[k] == sector) keep.push_back(k);
      if (keep.empty()) continue;
      Eigen::MatrixXd sub(keep.size(), keep.size());
      for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b = 0; b < keep.size(); ++b) sub(a, b) = m.H(keep[a], keep[b]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("ground_state: sector eigensolve failed");
      if (es.eigenvalues()(0) < best) {
        best = es.eigenvalues()(0);
        g.energy = best;
        g.state = Eigen::VectorXd::Zero(dim);
        for (size_t a = 0; a < keep.size(); ++a) g.state(keep[a]) = es.eigenvectors()(a, 0);
        g.parity = sector;
      }
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.H);
    if (es.info() != Eigen::Success) throw std::runtime_error("ground_state: eigensolve failed");
    g.energy = es.eigenvalues()(0);
    g.state = es.eigenvectors().col(0);
    double par = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) par += m.parity_diag[k] * g.state(k) * g.state(k);
    g.parity = par;
  }

  // Observables.
  const BosonIndexer bos(m.hilbert.n_max);
  const long spin_dim = 1L << m.n_spins;
  g.photon_number.assign(m.n_modes, 0.0);
  double sz = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double w = g.state(k) * g.state(k);
    if (w == 0.0) continue;
    const long b = k / spin_dim, s = k % spin_dim;
    for (int nu = 0; nu < m.n_modes; ++nu) g.photon_number[nu] += w * bos.occ(b, nu);
    for (int i = 0; i < m.n_spins; ++i) sz += w * (((s >> i) & 1L) ? -1.0 : 1.0);
  }
  g.spin_z = sz / m.n_spins;

  const double hnorm = m.H.norm();
  g.residual = (m.H * g.state - g.energy * g.state).norm() / std::max(hnorm, 1e-300);
  return g;
}

std::pair<std::vector<double>, std::vector<double>> spin_resolved_distribution(
    const DenseModel& m, const Eigen::VectorXd& psi) {
  if (m.n_spins != 1 || m.n_modes != 1)
    throw std::invalid_argument("spin_resolved_distribution: defined for one spin and one mode");
  if (psi.size() != m.dim())
    throw std::invalid_argument("spin_resolved_distribution: state size mismatch");
  const int n_max = m.hilbert.n_max[0];
  std::vector<double> pe(n_max + 1, 0.0), pg(n_max + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    pe[n] = psi(2 * n) * psi(2 * n);      // spin bit 0 = up (excited)
    pg[n] = psi(2 * n + 1) * psi(2 * n + 1);
  }
  return {pe, pg};
}

PartitionResult partition_function(const DenseModel& m, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("partition_function: beta must be positive and finite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("partition_function: eigensolve failed");
  const auto& ev = es.eigenvalues();
  const double e0 = ev(0);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) acc += std::exp(-beta * (ev(k) - e0));
  PartitionResult r;
  r.ground_energy = e0;
  r.log_Z = -beta * e0 + std::log(acc);
  r.dim = static_cast<int>(m.dim());
  return r;
}

TruncationStudy truncation_study(const PhysicalParams& p, Family family,
                                 const std::vector<int>& cutoffs, double beta,
                                 int max_dim) {
  if (cutoffs.size() < 2)
    throw std::invalid_argument("truncation_study: need at least two cutoffs");
  TruncationStudy st;
  st.cutoffs = cutoffs;
  const int M = p.n_modes();
  for (int c : cutoffs) {
    HilbertSpec hs;
    hs.n_max.assign(M, c);
    hs.max_dim = max_dim;
    const DenseModel m = build_dense(p, family, hs);
    if (beta == kInf || std::isinf(beta)) {
      st.ground_energy.push_back(ground_state(m, false).energy);
    } else {
      const auto pr = partition_function(m, beta);
      st.ground_energy.push_back(pr.ground_energy);
      st.log_Z.push_back(pr.log_Z);
    }
  }
  const size_t n = st.ground_energy.size();
  st.ground_shift_last = std::abs(st.ground_energy[n - 1] - st.ground_energy[n - 2]);
  if (st.log_Z.size() >= 2)
    st.log_Z_shift_last = std::abs(st.log_Z[n - 1] - st.log_Z[n - 2]);
  return st;
}

int suggest_n_max(double expected_photons) {
  const double x = std::max(0.0, expected_photons);
  return std::max(40, static_cast<int>(std::ceil(x + 12.0 * std::sqrt(x))));
}

}  // namespace srpt::ed
