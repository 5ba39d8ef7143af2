// critical.hpp — critical couplings, transition scans along coupling rays,
// and phase-diagram rasters built on the Landau potentials.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srpt/landau.hpp"
#include "srpt/model.hpp"

namespace srpt::critical {

enum class Order { None, Second, First };
const char* order_name(Order o);

// Affine path through coupling space: gamma_i_nu(t) = origin + t * direction.
// Detunings, biases, exchange, and the two-photon channel stay fixed.
struct CouplingRay {
  std::vector<std::vector<double>> origin;     // N x M offset at t = 0
  std::vector<std::vector<double>> direction;  // d gamma / dt
};

// Ray through the spec's own couplings: origin 0, direction = current gammas,
// so t = 1 reproduces the spec.
CouplingRay uniform_ray(const ModelSpec& spec);

// Copy of base with gamma_i_nu evaluated on the ray at t. Shape-checked.
ModelSpec spec_on_ray(const ModelSpec& base, const CouplingRay& ray, double t);

// ---- closed-form critical lines (curvature / coexistence conditions) ----

// Coupling where the normal-state curvature of the single-spin dipole family
// vanishes: gamma_c = sqrt(|delta| / (2 tanh(bD |delta|))).
double critical_line_dqr(const ModelSpec& spec);

// Normal-state curvature of the anisotropic family along one quadrature
// (branch 0: co-rotating u, branch 1: counter-rotating v). Negative means the
// normal state is unstable along that branch.
double normal_curvature_aniso(const ModelSpec& spec, int branch);

struct TwoPhotonCritical {
  double gamma_c = 0.0;  // first-order coexistence coupling
  double jump = 0.0;     // order-parameter discontinuity at gamma_c
};

// Zero-temperature coexistence line of the two-photon family at |delta| = 1:
// gamma_c = sqrt((1 - 4 gamma'^2)/2), jump = (2 gamma' / gamma_c)^2.
TwoPhotonCritical critical_line_twophoton(const ModelSpec& spec);

// Critical collinear coupling norm: ||gamma||_c^2 = N / (2 sum_i T_i/|delta_i|).
double critical_line_multimode(const ModelSpec& spec);

// Single-mode spec equivalent to the multimode one on the collinear section
// (coupling norm preserved).
ModelSpec multimode_reduce(const ModelSpec& spec);

struct XyzClosedForm {
  double gamma_c = 0.0;
  Order order = Order::None;
  double jump = 0.0;  // closed-form discontinuity for the first-order branch
};

// Closed form for the isotropic-exchange two-qubit model (equal couplings,
// equal detunings delta, exchange epsilon on all three axes) at zero
// temperature: first order with gamma_c = sqrt(epsilon/2) and
// jump = 2 epsilon - delta^2/4 when epsilon > |delta|/2, second order with
// gamma_c = sqrt(|delta|)/2 otherwise.
XyzClosedForm xyz_isotropic_closed_form(double epsilon, double delta);

// ---- scan route ----

struct TransitionRecord {
  double t = 0.0;      // ray parameter at the transition (bisection, |dt| <= 1e-6)
  Order order = Order::None;
  double jump = 0.0;   // Richardson-extrapolated order-parameter discontinuity
  bool degenerate_sr = false;  // broken side carries degenerate minima
};

struct ScanResult {
  std::vector<double> t_grid;
  std::vector<double> op_grid;  // total order parameter at each grid point
  std::vector<TransitionRecord> transitions;  // ascending in t
};

// Marches the ray, flags every normal/broken flip (bisected to 1e-6) and any
// interior first-order jump, and classifies each transition by extrapolating
// the discontinuity to the transition point: disc = max(0, 2 J(h) - J(2h))
// with h = 1e-4, where J(h) = |op(t+h) - op(t-h)|. First order iff
// disc > 1e-4; the linear term of a continuous onset cancels exactly.
ScanResult scan_transitions(const ModelSpec& base, const CouplingRay& ray,
                            double t0, double t1, int n_points,
                            const landau::ScanBudget& budget = {});

// ---- algebraic route for the two-qubit exchange family ----

struct XyzAlgebraicTransition {
  double t = 0.0;
  Order order = Order::None;
  double jump = 0.0;      // double root w* of the coexistence cubic (first order)
  double residual = 0.0;  // validation defect (eigenvalue identity / curvature)
};

// Zero-temperature transitions located from the criticality cubic: sign
// changes of P_t(0) give continuous onsets (normal-state curvature zeros);
// zeros of the cubic discriminant with a positive, lowest-branch double root
// give coexistence points, and w* is the exact order-parameter jump.
// Each candidate is confirmed against the potential before being reported.
std::vector<XyzAlgebraicTransition> xyz_discriminant_transitions(
    const ModelSpec& base, const CouplingRay& ray, double t0, double t1,
    int n_probe = 400);

struct CriticalPoint {
  double t_c = 0.0;
  Order order = Order::None;
  double jump = 0.0;
  std::string method;          // "scan" or "scan+algebraic"
  bool cross_validated = false;
};

// First transition on the ray. For the two-qubit exchange family at zero
// temperature the scan is cross-checked against the algebraic route; when the
// two agree within 1e-4 in t the sharper algebraic location is reported.
std::optional<CriticalPoint> critical_scan(const ModelSpec& base, const CouplingRay& ray,
                                           double t0, double t1, int n_points,
                                           const landau::ScanBudget& budget = {});

// ---- phase-diagram raster ----

struct AxisSpec {
  std::string name;  // parameter to vary; see apply_axis for the vocabulary
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;     // number of grid values (>= 2)
};

// Returns a copy of spec with the named parameter set to value. Names:
// "gamma" (all couplings), "gamma_scale" (multiply), "gamma1"/"gamma2"
// (per-spin, two-qubit), "gamma_prime", "bias" (all spins), "epsilon_x"/
// "epsilon_y"/"epsilon_z", "beta_Delta", "lambda" (all spins).
ModelSpec apply_axis(const ModelSpec& spec, const std::string& name, double value);

struct PhaseCell {
  double p1 = 0.0, p2 = 0.0;  // axis values
  int phase = 0;              // 0 normal, 1 symmetry-broken
  double order_parameter = 0.0;
  double phi_min = 0.0;
};

struct BoundaryEdge {
  int i1 = 0, j1 = 0, i2 = 0, j2 = 0;  // adjacent cells with different phase
  Order order = Order::Second;
  double jump = 0.0;  // order-parameter difference across the edge
};

struct PhaseGrid {
  AxisSpec ax1, ax2;
  std::vector<PhaseCell> cells;  // row-major, ax1 index slow
  std::vector<BoundaryEdge> edges;
  const PhaseCell& at(int i, int j) const { return cells[i * ax2.count + j]; }
};

// Classifies every grid cell via the reduced minimizer; boundary edges are
// marked first order when the order-parameter step across them dominates the
// in-phase variation (step > max(1e-4, 3x neighbor drift)). Workers follow
// parallel::resolve_workers.
PhaseGrid phase_diagram(const ModelSpec& base, const AxisSpec& ax1, const AxisSpec& ax2,
                        int workers = 0, const landau::ScanBudget& budget = {});

}  // namespace srpt::critical
