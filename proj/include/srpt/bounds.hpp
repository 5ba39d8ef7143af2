// bounds.hpp — thermodynamic sandwich for the partition function: the
// coherent-state (mean-field) integral bounds the exact trace from below, and
// a per-mode thermal factor turns it into an upper bound:
//   Z_mf <= Z <= exp(beta sum_nu omega_nu) Z_mf.
#pragma once

#include <vector>

#include "srpt/ed.hpp"
#include "srpt/model.hpp"

namespace srpt::bounds {

struct Quadrature {
  std::vector<double> nodes;        // Gauss-Hermite abscissas (weight exp(-x^2))
  std::vector<double> weights;      // exp(log_weights); underflows to 0 in the far tail
  std::vector<double> log_weights;  // relatively accurate at every node
};

// Nodes from Golub-Welsch on the Hermite recurrence; weights through the
// Christoffel function with a rescaled recurrence, so the far-tail weights
// keep relative accuracy (eigenvector components only carry absolute
// accuracy, which exponentially growing integrands amplify). Weights sum to
// sqrt(pi).
Quadrature gauss_hermite(int order);

struct MeanFieldPartition {
  double log_value = 0.0;       // log Z_mf
  double error_estimate = 0.0;  // |change in log Z_mf| when the order doubles
  int order_used = 0;
  int dims = 0;                 // quadrature dimensions actually integrated
};

// Coherent-state integral over the quadratures that couple to the spins
// (the others integrate out exactly). One Gaussian dimension per mode for
// pure-dipole families, two when both quadratures enter (rotating-wave
// mixtures and the two-photon channel). Evaluated in log space; beta finite.
MeanFieldPartition mean_field_partition(const PhysicalParams& p, Family family,
                                        double beta, int order = 80);

struct BoundsReport {
  double beta = 0.0;
  double log_Z_exact = 0.0;       // truncated-Fock trace
  double log_Z_mean_field = 0.0;  // lower bound
  double log_upper_offset = 0.0;  // beta * sum_nu omega_nu
  double margin_lower = 0.0;      // log Z_exact - log Z_mf            (>= ~0)
  double margin_upper = 0.0;      // log Z_mf + offset - log Z_exact   (>= ~0)
  double quad_error = 0.0;        // quadrature doubling estimate
  double trunc_error = 0.0;       // cutoff shift of log Z_exact
  bool lower_ok = false;
  bool upper_ok = false;
  int quadrature_order = 0;
  int n_max_used = 0;
  int dim = 0;
};

// Checks the sandwich against the exact trace. A margin passes when it is no
// worse than -(1e-7 + quad_error + trunc_error); the truncation estimate
// comes from re-running the trace at a reduced cutoff.
BoundsReport verify_bounds(const PhysicalParams& p, Family family, double beta,
                           const ed::HilbertSpec& hilbert, int order = 80);

}  // namespace srpt::bounds
