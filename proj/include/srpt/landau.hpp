// landau.hpp — family Landau potentials phi(u), gradients, and global
// minimization over the order-parameter box. Potentials are the exact
// macroscopic-limit free-energy surfaces in reduced units.
#pragma once

#include <optional>
#include <vector>

#include "srpt/model.hpp"

namespace srpt::landau {

// Order-parameter point; length must equal ModelSpec::arity().
using OrderVector = std::vector<double>;

enum class Degeneracy {
  None,        // unique minimum (typically the origin)
  SignPair,    // u and -u both minimal (broken Z2)
  Rotational,  // a full circle of minima (broken U(1)); one representative listed
};

struct MinResult {
  std::vector<OrderVector> minima;  // canonical order (norm ascending, nonnegative
                                    // representative first); every entry evaluates
                                    // to phi_min within 1e-10
  double phi_min = 0.0;
  std::vector<double> order_parameter;  // per physical mode, squared amplitude of the
                                        // largest-norm global minimum (the broken
                                        // branch when it ties with the origin)
  Degeneracy degenerate = Degeneracy::None;
  bool converged = false;
};

struct ScanBudget {
  int points_per_axis = 2001;        // dense grid resolution (forced odd so 0 is a node)
  double refine_tol = 1e-10;         // bracket width for local refinement
  int max_refine_sweeps = 200;       // coordinate-descent sweeps in 2-D
  bool force_full_scan = false;      // disable the exact collinear reduction (multimode)
  std::optional<double> box_radius;  // override the family-derived scan box half-width
};

// ---- scalar kernels (shared with the closed-form critical lines) ----
double ln2cosh(double x);                       // ln(2 cosh x), overflow-safe
double free_term(double beta_Delta, double s);  // F(s) = ln2cosh(bD s)/bD; |s| at bD = inf
double tanh_term(double beta_Delta, double s);  // F'(s) = tanh(bD s); sign(s) at bD = inf

// phi and grad_phi assume a valid spec (validate once upstream); they only
// check that u has the right arity. beta_Delta = kInf selects the
// zero-temperature surfaces.
double phi(const ModelSpec& spec, const OrderVector& u);
OrderVector grad_phi(const ModelSpec& spec, const OrderVector& u);

// Half-width R of the scan box [-R, R]^arity guaranteed to contain every
// stationary point; derived per family from a Lipschitz bound on the binding
// term (at least a factor-2 margin on the outermost minimum).
double scan_box_radius(const ModelSpec& spec);

// Dense grid scan plus golden-section refinement around the grid optimum and
// around the origin. Multimode specs with several modes use the exact
// collinear reduction unless force_full_scan is set (full scans support at
// most two axes). Throws on invalid specs.
MinResult minimize_global(const ModelSpec& spec, const ScanBudget& budget = {});

// Same result through the exact symmetry reductions: radial for the
// rotationally symmetric family, axis scans when every counter-rotating
// weight has the same sign, quadrature v = 0 for the two-photon family,
// collinear for multimode. Falls back to minimize_global when no reduction
// applies. Agreement with minimize_global is a test invariant, not assumed.
MinResult minimize_reduced(const ModelSpec& spec, const ScanBudget& budget = {});

}  // namespace srpt::landau
