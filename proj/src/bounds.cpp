// bounds.cpp — coherent-state sandwich on the partition function.
#include "srpt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "srpt/landau.hpp"
#include "srpt/parallel.hpp"
#include "srpt/spinblock.hpp"

namespace srpt::bounds {
namespace {

double logsumexp(std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  for (double& t : terms) t = std::exp(t - m);
  return m + std::log(parallel::pairwise_sum(terms));
}

// Quadrature dimensions that actually couple to the spins: one per mode for
// pure-dipole families, two when the conjugate quadrature enters.
int coupled_dims(const PhysicalParams& p, Family family) {
  switch (family) {
    case Family::DQR:
    case Family::Biased:
    case Family::TwoQubitXYZ:
      return 1;
    case Family::AnisoInhomogeneous: {
      for (double l : p.lambda_i)
        if (l != 1.0) return 2;
      return 1;
    }
    case Family::TavisCummings:
    case Family::TwoPhoton:
      return 2;
    case Family::Multimode:
      return p.n_modes();
  }
  return 1;
}

// log Tr_spin exp(-beta H_spin(x)) at the physical quadrature point x.
// Layout: dipole families and multimode use x[d] = Re alpha_d; two-dimensional
// families use x[0] = Re alpha, x[1] = Im alpha of the single mode.
double log_spin_trace(const PhysicalParams& p, Family family, double beta,
                      const std::vector<double>& x) {
  const int n = p.n_spins();
  const double root_n = std::sqrt(static_cast<double>(n));
  switch (family) {
    case Family::DQR:
    case Family::Multimode: {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double field = 0.0;
        for (int nu = 0; nu < p.n_modes(); ++nu)
          field += 2.0 * p.g_i_nu[i][nu] * x[nu] / root_n;
        acc += landau::ln2cosh(beta * std::sqrt(p.Delta_i[i] * p.Delta_i[i] + field * field));
      }
      return acc;
    }
    case Family::Biased: {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double field = p.e_i[i] + 2.0 * p.g_i_nu[i][0] * x[0] / root_n;
        acc += landau::ln2cosh(beta * std::sqrt(p.Delta_i[i] * p.Delta_i[i] + field * field));
      }
      return acc;
    }
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings: {
      double acc = 0.0;
      const double y = x.size() > 1 ? x[1] : 0.0;
      for (int i = 0; i < n; ++i) {
        const double hx = p.g_i_nu[i][0] * (1.0 + p.lambda_i[i]) * x[0] / root_n;
        const double hy = p.g_i_nu[i][0] * (1.0 - p.lambda_i[i]) * y / root_n;
        acc += landau::ln2cosh(
            beta * std::sqrt(p.Delta_i[i] * p.Delta_i[i] + hx * hx + hy * hy));
      }
      return acc;
    }
    case Family::TwoPhoton: {
      const double field =
          2.0 * p.g_i_nu[0][0] * x[0] + 2.0 * p.g_prime * (x[0] * x[0] - x[1] * x[1]);
      return landau::ln2cosh(beta * std::sqrt(p.Delta_i[0] * p.Delta_i[0] + field * field));
    }
    case Family::TwoQubitXYZ: {
      const auto h = spinblock::two_spin_matrix(2.0 * p.g_i_nu[0][0] * x[0],
                                                2.0 * p.g_i_nu[1][0] * x[0], p.Delta_i[0],
                                                p.Delta_i[1], p.J_alpha);
      const auto eig = spinblock::jacobi_eigensolve(h);
      double z = 0.0;
      for (double e : eig.values) z += std::exp(-beta * (e - eig.values[0]));
      return -beta * eig.values[0] + std::log(z);
    }
  }
  throw std::logic_error("log_spin_trace: unhandled family");
}

double eval_log_mean_field(const PhysicalParams& p, Family family, double beta,
                           int order, int dims) {
  const Quadrature q = gauss_hermite(order);
  // Physical scale per quadrature axis: x_phys = node / sqrt(beta * omega).
  std::vector<double> axis_omega(dims, p.omega[0]);
  if (family == Family::Multimode)
    for (int d = 0; d < dims; ++d) axis_omega[d] = p.omega[d];

  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(std::pow(order, dims)));
  std::vector<int> ix(dims, 0);
  std::vector<double> xs(dims, 0.0);
  while (true) {
    double logw = 0.0;
    for (int d = 0; d < dims; ++d) {
      logw += q.log_weights[ix[d]];
      xs[d] = q.nodes[ix[d]] / std::sqrt(beta * axis_omega[d]);
    }
    terms.push_back(logw + log_spin_trace(p, family, beta, xs));
    int d = dims - 1;
    while (d >= 0 && ++ix[d] == order) ix[d--] = 0;
    if (d < 0) break;
  }

  double log_z = logsumexp(terms);
  log_z -= 0.5 * dims * std::log(std::numbers::pi);
  for (int nu = 0; nu < p.n_modes(); ++nu) log_z -= std::log(beta * p.omega[nu]);
  return log_z;
}

}  // namespace

Quadrature gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(std::max(1, order - 1));
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(0, order - 1)));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite: tridiagonal eigensolve failed");

  Quadrature q;
  q.nodes.resize(order);
  q.weights.resize(order);
  q.log_weights.resize(order);
  // Weight at node x through the Christoffel function 1/sum_j p_j(x)^2 over
  // the orthonormal Hermite values p_0..p_{order-1}. The forward recurrence
  // follows the dominant solution, so it is relatively accurate even where
  // the weight itself is far below the underflow threshold; periodic
  // rescaling keeps the partial sum in range.
  const double p00 = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < order; ++k) {
    const double x = es.eigenvalues()(k);
    q.nodes[k] = x;
    double pm = p00;
    double s = pm * pm;
    double log_scale = 0.0;
    if (order > 1) {
      double pc = std::sqrt(2.0) * x * pm;
      s += pc * pc;
      for (int j = 1; j < order - 1; ++j) {
        const double pn = (x * pc - std::sqrt(j / 2.0) * pm) / std::sqrt((j + 1) / 2.0);
        pm = pc;
        pc = pn;
        s += pc * pc;
        if (std::abs(pc) > 1e120 || s > 1e240) {
          constexpr double kShrink = 1e-120;
          pm *= kShrink;
          pc *= kShrink;
          s *= kShrink * kShrink;
          log_scale += 2.0 * std::log(1e120);
        }
      }
    }
    q.log_weights[k] = -(log_scale + std::log(s));
    q.weights[k] = std::exp(q.log_weights[k]);
  }
  return q;
}

MeanFieldPartition mean_field_partition(const PhysicalParams& p, Family family,
                                        double beta, int order) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("mean_field_partition: beta must be positive and finite");
  require_valid(reduce(p, family));
  const int dims = coupled_dims(p, family);
  if (dims > 3)
    throw std::invalid_argument("mean_field_partition: tensor quadrature limited to 3 axes");

  MeanFieldPartition r;
  const double coarse = eval_log_mean_field(p, family, beta, order, dims);
  const double fine = eval_log_mean_field(p, family, beta, 2 * order, dims);
  r.log_value = fine;
  r.error_estimate = std::abs(fine - coarse);
  r.order_used = 2 * order;
  r.dims = dims;
  // |d log Z| is the relative change of Z; past 1e-6 the node count is too
  // low for the integrand and the value cannot be trusted.
  if (r.error_estimate > 1e-6)
    throw std::runtime_error("mean_field_partition: quadrature not converged (doubling the order moved log Z by " +
                             std::to_string(r.error_estimate) + ")");
  return r;
}

BoundsReport verify_bounds(const PhysicalParams& p, Family family, double beta,
                           const ed::HilbertSpec& hilbert, int order) {
  const ed::DenseModel m = ed::build_dense(p, family, hilbert);
  const auto exact = ed::partition_function(m, beta);
  const auto mf = mean_field_partition(p, family, beta, order);

  // Truncation estimate: redo the trace with a visibly smaller cutoff.
  ed::HilbertSpec smaller = hilbert;
  for (int& c : smaller.n_max) c = std::max(2, c - std::max(4, c / 8));
  const auto coarse = ed::partition_function(ed::build_dense(p, family, smaller), beta);

  BoundsReport rep;
  rep.beta = beta;
  rep.log_Z_exact = exact.log_Z;
  rep.log_Z_mean_field = mf.log_value;
  for (double w : p.omega) rep.log_upper_offset += beta * w;
  rep.quad_error = mf.error_estimate;
  rep.trunc_error = std::abs(exact.log_Z - coarse.log_Z);
  rep.margin_lower = rep.log_Z_exact - rep.log_Z_mean_field;
  rep.margin_upper = rep.log_Z_mean_field + rep.log_upper_offset - rep.log_Z_exact;
  const double tol = 1e-7 + rep.quad_error + rep.trunc_error;
  rep.lower_ok = rep.margin_lower >= -tol;
  rep.upper_ok = rep.margin_upper >= -tol;
  rep.quadrature_order = mf.order_used;
  rep.n_max_used = hilbert.n_max[0];
  rep.dim = exact.dim;
  return rep;
}

}  // namespace srpt::bounds
