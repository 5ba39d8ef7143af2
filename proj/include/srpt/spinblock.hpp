// spinblock.hpp — 4x4 symmetric two-spin blocks: deterministic eigensolve,
// characteristic polynomial, the criticality cubic in w = u^2, and the
// variational (displaced-cat) ground state of the dipole families.
#pragma once

#include <array>
#include <vector>

#include "srpt/model.hpp"

namespace srpt::spinblock {

// Dense symmetric 4x4, full storage. set() mirrors; asym() reports the largest
// asymmetry found on construction from raw data.
struct SymMatrix4 {
  std::array<std::array<double, 4>, 4> m{};

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }
  void set(int i, int j, double v) { m[i][j] = v; m[j][i] = v; }
  void add(int i, int j, double v) { m[i][j] += v; if (i != j) m[j][i] += v; }
  double frobenius() const;
};

// Two-spin block in the basis |uu>, |ud>, |du>, |dd> (spin 1 slow, up first):
//   ax1*s1x + ax2*s2x + dz1*s1z + dz2*s2z + J_x s1x s2x + J_y s1y s2y + J_z s1z s2z.
// The y-y exchange is real in this basis.
SymMatrix4 two_spin_matrix(double ax1, double ax2, double dz1, double dz2,
                           const std::array<double, 3>& J);

// Reduced two-spin block at order parameter u: ax_j = 2 gamma_j u, dz_j = delta_j,
// J = epsilon_alpha. Requires Family::TwoQubitXYZ.
SymMatrix4 build_h_xyz(const ModelSpec& spec, double u);

struct EigResult4 {
  std::array<double, 4> values;  // ascending
  std::array<std::array<double, 4>, 4> vectors;  // columns match values
  int sweeps = 0;
};

// Row-cyclic Jacobi; converged when the off-diagonal Frobenius norm drops
// below 1e-14 times the matrix norm. Branch order is fixed, so results are
// bit-reproducible for identical input.
EigResult4 jacobi_eigensolve(const SymMatrix4& m);
double smallest_eigenvalue(const SymMatrix4& m);

// Characteristic polynomial det(lambda*I - m), leading coefficient first:
// {1, c3, c2, c1, c0}. Faddeev-LeVerrier recurrence.
std::array<double, 5> char_poly(const SymMatrix4& m);

// Cubic P(w) obtained by inserting lambda = lambda0 - w into the secular
// polynomial of the reduced two-spin block, where lambda0 is the smallest
// eigenvalue at u = 0 and w = u^2. The secular quartic in w has the trivial
// root w = 0 removed; P is monic. Positive roots w* are candidate order
// parameters where the displaced branch returns to the u = 0 potential value.
struct CriticalityCubic {
  std::array<double, 4> coeffs{};  // leading first: P(w) = c0 w^3 + c1 w^2 + c2 w + c3
  double lambda0 = 0.0;            // smallest eigenvalue at u = 0
  double residual = 0.0;           // max relative sampling error of w*P(w) vs det form
  double eval(double w) const {
    return ((coeffs[0] * w + coeffs[1]) * w + coeffs[2]) * w + coeffs[3];
  }
};

// Requires Family::TwoQubitXYZ at beta_Delta = kInf. Coefficients come from
// polynomial arithmetic on the affine-in-u matrix entries and are verified by
// sampling against the determinant form at 50 points (throws on mismatch).
CriticalityCubic criticality_cubic(const ModelSpec& spec);

struct Discriminant {
  double value = 0.0;
  bool quadratic_fallback = false;  // set when the leading coefficient vanishes
};

// Discriminant of c0 w^3 + c1 w^2 + c2 w + c3 (leading first). Positive means
// three distinct real roots; zero, a repeated root. Falls back to the
// quadratic discriminant when |c0| is negligible against the other terms.
Discriminant cubic_discriminant(const std::array<double, 4>& coeffs);

// Real roots, ascending, Newton-polished. Handles the quadratic/linear
// degenerations of the leading coefficients.
std::vector<double> real_roots_cubic(const std::array<double, 4>& coeffs);

// Product ansatz for the dipole families at zero temperature: displaced mode
// plus per-spin rotation. theta_i is the half-angle of spin i against -z.
struct VariationalState {
  double u_min = 0.0;             // nonnegative representative
  double alpha = 0.0;             // coherent displacement, sqrt(C) * u_min
  std::vector<double> theta_i;    // per-spin rotation half-angles
  double spin_z = 0.0;            // mean z polarization, (1/N) sum <sigma_z>
  double C = 0.0;                 // macroscopicity used for alpha
  int parity_sector = +1;         // joint parity of the symmetrized cat (N = 1)
};

// Requires a single-mode unbiased dipole spec (DQR, lambda = 1 aniso, or
// single-mode Multimode) with params.C set.
VariationalState variational_state(const ModelSpec& spec);

// Joint photon-spin distribution of the symmetrized cat for N = 1:
// odd photon numbers carry the excited spin component, even ones the ground
// component (sector +1; mirrored for sector -1). total reports the analytic
// mass, 1 + cos(2 theta) exp(-2 alpha^2) for sector +1.
struct PhotonDist {
  std::vector<double> p_excited;  // P(n, e), n = 0..n_cut
  std::vector<double> p_ground;   // P(n, g)
  double total = 0.0;
  int parity_sector = +1;
};

// n_cut < 0 selects ceil(alpha^2 + 12*sqrt(alpha^2 + 1)) + 4.
PhotonDist photon_distribution_variational(const VariationalState& vs, int n_cut = -1);

}  // namespace srpt::spinblock
