// critical.cpp — transition location, classification, and phase rasters.
#include "srpt/critical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "srpt/parallel.hpp"
#include "srpt/spinblock.hpp"

namespace srpt::critical {
namespace {

// Classification constants. The discontinuity estimate removes the linear
// growth of a continuous onset exactly, so the threshold separates genuine
// jumps from quadratic residue.
constexpr double kProbeStep = 1e-4;     // h in the Richardson stencil
constexpr double kJumpThreshold = 1e-4; // disc above this is first order
constexpr double kBisectTol = 1e-6;     // |dt| for transition location
constexpr double kOpFloor = 1e-10;      // order parameter considered nonzero
constexpr double kDepthFloor = 1e-12;   // phi(0) - phi_min considered broken

struct Probe {
  bool sr = false;
  double op = 0.0;  // total order parameter (raw, even when not broken)
  landau::Degeneracy degenerate = landau::Degeneracy::None;
  double phi_min = 0.0;
};

Probe probe_spec(const ModelSpec& spec, const landau::ScanBudget& budget) {
  const auto mr = landau::minimize_reduced(spec, budget);
  Probe p;
  p.phi_min = mr.phi_min;
  p.degenerate = mr.degenerate;
  for (double q : mr.order_parameter) p.op += q;
  if (spec.family == Family::Biased) {
    // A nonzero bias breaks the symmetry explicitly: there is no normal
    // phase to flip out of, only a smooth crossover.
    for (double e : spec.params.epsilon_bias_i)
      if (e != 0.0) {
        p.sr = true;
        return p;
      }
  }
  const double phi0 = landau::phi(spec, landau::OrderVector(spec.arity(), 0.0));
  p.sr = p.op > kOpFloor && (phi0 - mr.phi_min) > kDepthFloor;
  return p;
}

double tanh_over_delta(double bD, double ad) {
  // tanh(bD d)/d with the d -> 0 limit bD; diverges at zero temperature.
  if (ad == 0.0) return bD == kInf ? kInf : bD;
  return landau::tanh_term(bD, ad) / ad;
}

}  // namespace

const char* order_name(Order o) {
  switch (o) {
    case Order::None: return "none";
    case Order::Second: return "second";
    case Order::First: return "first";
  }
  return "?";
}

CouplingRay uniform_ray(const ModelSpec& spec) {
  CouplingRay ray;
  ray.direction = spec.params.gamma_i_nu;
  ray.origin.assign(ray.direction.size(),
                    std::vector<double>(ray.direction.empty() ? 0 : ray.direction[0].size(), 0.0));
  return ray;
}

ModelSpec spec_on_ray(const ModelSpec& base, const CouplingRay& ray, double t) {
  ModelSpec s = base;
  auto& g = s.params.gamma_i_nu;
  if (ray.origin.size() != g.size() || ray.direction.size() != g.size())
    throw std::invalid_argument("spec_on_ray: ray shape does not match the spec");
  for (size_t i = 0; i < g.size(); ++i) {
    if (ray.origin[i].size() != g[i].size() || ray.direction[i].size() != g[i].size())
      throw std::invalid_argument("spec_on_ray: ray shape does not match the spec");
    for (size_t nu = 0; nu < g[i].size(); ++nu)
      g[i][nu] = ray.origin[i][nu] + t * ray.direction[i][nu];
  }
  return s;
}

// ---- closed forms ----

double critical_line_dqr(const ModelSpec& spec) {
  if (spec.family != Family::DQR)
    throw std::invalid_argument("critical_line_dqr: spec is not the single-spin dipole family");
  require_valid(spec);
  const double d = std::abs(spec.params.delta_i[0]);
  const double t = landau::tanh_term(spec.params.beta_Delta, d);
  if (!(t > 0.0)) return kInf;  // free spins never order
  return std::sqrt(d / (2.0 * t));
}

double normal_curvature_aniso(const ModelSpec& spec, int branch) {
  if (spec.family != Family::AnisoInhomogeneous && spec.family != Family::TavisCummings)
    throw std::invalid_argument("normal_curvature_aniso: wrong family");
  if (branch != 0 && branch != 1)
    throw std::invalid_argument("normal_curvature_aniso: branch must be 0 or 1");
  require_valid(spec);
  const auto& p = spec.params;
  const int n = p.n_spins();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = p.gamma(i);
    const double weight = branch == 0 ? (1.0 + p.lambda(i)) : (1.0 - p.lambda(i));
    const double coef = tanh_over_delta(p.beta_Delta, std::abs(p.delta_i[i]));
    if (coef == kInf) return -kInf;
    acc += coef * g * g * weight * weight;
  }
  return 2.0 - acc / n;
}

TwoPhotonCritical critical_line_twophoton(const ModelSpec& spec) {
  if (spec.family != Family::TwoPhoton)
    throw std::invalid_argument("critical_line_twophoton: wrong family");
  require_valid(spec);
  const auto& p = spec.params;
  if (p.beta_Delta != kInf)
    throw std::invalid_argument("critical_line_twophoton: closed form holds at zero temperature");
  if (std::abs(std::abs(p.delta_i[0]) - 1.0) > 1e-12)
    throw std::invalid_argument("critical_line_twophoton: closed form assumes |delta| = 1");
  const double gp = p.gamma_prime;
  TwoPhotonCritical r;
  r.gamma_c = std::sqrt((1.0 - 4.0 * gp * gp) / 2.0);
  r.jump = (2.0 * gp / r.gamma_c) * (2.0 * gp / r.gamma_c);
  return r;
}

double critical_line_multimode(const ModelSpec& spec) {
  if (spec.family != Family::Multimode)
    throw std::invalid_argument("critical_line_multimode: wrong family");
  require_valid(spec);
  const auto& p = spec.params;
  const int n = p.n_spins();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double coef = tanh_over_delta(p.beta_Delta, std::abs(p.delta_i[i]));
    if (coef == kInf) return 0.0;
    acc += coef;
  }
  if (acc <= 0.0) return kInf;
  return std::sqrt(n / (2.0 * acc));
}

ModelSpec multimode_reduce(const ModelSpec& spec) {
  if (spec.family != Family::Multimode)
    throw std::invalid_argument("multimode_reduce: wrong family");
  require_valid(spec);
  ModelSpec s = spec;
  auto& p = s.params;
  double g2 = 0.0;
  for (int nu = 0; nu < p.n_modes(); ++nu)
    g2 += p.gamma_mode(nu) * p.gamma_mode(nu);
  const double g = std::sqrt(g2);
  p.gamma_i_nu.assign(p.n_spins(), std::vector<double>{g});
  return s;
}

XyzClosedForm xyz_isotropic_closed_form(double epsilon, double delta) {
  XyzClosedForm r;
  const double half = std::abs(delta) / 2.0;
  if (epsilon > half) {
    r.gamma_c = std::sqrt(epsilon / 2.0);
    r.order = Order::First;
    r.jump = 2.0 * epsilon - delta * delta / 4.0;
  } else {
    r.gamma_c = std::sqrt(std::abs(delta)) / 2.0;
    r.order = Order::Second;
    r.jump = 0.0;
  }
  return r;
}

// ---- scan route ----

ScanResult scan_transitions(const ModelSpec& base, const CouplingRay& ray,
                            double t0, double t1, int n_points,
                            const landau::ScanBudget& budget) {
  if (!(t1 > t0)) throw std::invalid_argument("scan_transitions: need t1 > t0");
  if (n_points < 2) throw std::invalid_argument("scan_transitions: need at least 2 points");

  auto probe_t = [&](double t) { return probe_spec(spec_on_ray(base, ray, t), budget); };
  auto op_at = [&](double t) { return probe_t(t).op; };

  ScanResult res;
  res.t_grid.resize(n_points);
  res.op_grid.resize(n_points);
  std::vector<char> sr(n_points);
  const double step = (t1 - t0) / (n_points - 1);
  for (int k = 0; k < n_points; ++k) {
    res.t_grid[k] = t0 + k * step;
    const Probe p = probe_t(res.t_grid[k]);
    res.op_grid[k] = p.op;
    sr[k] = p.sr ? 1 : 0;
  }

  auto classify = [&](double tc) {
    const double j1 = std::abs(op_at(tc + kProbeStep) - op_at(tc - kProbeStep));
    const double j2 = std::abs(op_at(tc + 2.0 * kProbeStep) - op_at(tc - 2.0 * kProbeStep));
    const double disc = std::max(0.0, 2.0 * j1 - j2);
    TransitionRecord rec;
    rec.t = tc;
    rec.jump = disc;
    rec.order = disc > kJumpThreshold ? Order::First : Order::Second;
    return rec;
  };

  // Phase flips: bisect the broken/normal predicate.
  for (int k = 1; k < n_points; ++k) {
    if (sr[k] == sr[k - 1]) continue;
    double lo = res.t_grid[k - 1], hi = res.t_grid[k];
    const bool sr_lo = sr[k - 1] != 0;
    while (hi - lo > kBisectTol) {
      const double mid = 0.5 * (lo + hi);
      if (probe_t(mid).sr == sr_lo)
        lo = mid;
      else
        hi = mid;
    }
    TransitionRecord rec = classify(0.5 * (lo + hi));
    const double t_sr = sr_lo ? rec.t - 2.0 * kProbeStep : rec.t + 2.0 * kProbeStep;
    rec.degenerate_sr = probe_t(t_sr).degenerate != landau::Degeneracy::None;
    res.transitions.push_back(rec);
  }

  // Interior jumps: a grid step that dwarfs both neighbors inside one phase.
  for (int k = 1; k + 2 < n_points; ++k) {
    if (!(sr[k - 1] && sr[k] && sr[k + 1] && sr[k + 2])) continue;
    const double dk = std::abs(res.op_grid[k + 1] - res.op_grid[k]);
    const double dm = std::abs(res.op_grid[k] - res.op_grid[k - 1]);
    const double dp = std::abs(res.op_grid[k + 2] - res.op_grid[k + 1]);
    if (dk <= 4.0 * std::max(dm, dp) + kJumpThreshold) continue;
    const double level = 0.5 * (res.op_grid[k] + res.op_grid[k + 1]);
    const bool above_lo = res.op_grid[k] > level;
    double lo = res.t_grid[k], hi = res.t_grid[k + 1];
    while (hi - lo > kBisectTol) {
      const double mid = 0.5 * (lo + hi);
      if ((op_at(mid) > level) == above_lo)
        lo = mid;
      else
        hi = mid;
    }
    TransitionRecord rec = classify(0.5 * (lo + hi));
    if (rec.order != Order::First) continue;  // resolved as smooth after all
    rec.degenerate_sr = probe_t(rec.t + 2.0 * kProbeStep).degenerate != landau::Degeneracy::None;
    res.transitions.push_back(rec);
  }

  std::sort(res.transitions.begin(), res.transitions.end(),
            [](const TransitionRecord& a, const TransitionRecord& b) { return a.t < b.t; });
  return res;
}

// ---- algebraic route ----

std::vector<XyzAlgebraicTransition> xyz_discriminant_transitions(
    const ModelSpec& base, const CouplingRay& ray, double t0, double t1, int n_probe) {
  if (base.family != Family::TwoQubitXYZ)
    throw std::invalid_argument("xyz_discriminant_transitions: wrong family");
  if (base.params.beta_Delta != kInf)
    throw std::invalid_argument("xyz_discriminant_transitions: zero temperature only");
  if (!(t1 > t0) || n_probe < 2)
    throw std::invalid_argument("xyz_discriminant_transitions: bad probe range");

  auto cubic_at = [&](double t) {
    return spinblock::criticality_cubic(spec_on_ray(base, ray, t));
  };
  landau::ScanBudget budget;
  auto sr_at = [&](double t) { return probe_spec(spec_on_ray(base, ray, t), budget).sr; };
  auto op_at = [&](double t) { return probe_spec(spec_on_ray(base, ray, t), budget).op; };

  // Sample the constant coefficient P_t(0) and the discriminant along the ray.
  std::vector<double> ts(n_probe + 1), p0(n_probe + 1), disc(n_probe + 1);
  for (int k = 0; k <= n_probe; ++k) {
    ts[k] = t0 + (t1 - t0) * k / n_probe;
    const auto c = cubic_at(ts[k]);
    p0[k] = c.coeffs[3];
    disc[k] = spinblock::cubic_discriminant(c.coeffs).value;
  }

  auto bisect_zero = [&](const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm >= 0.0) == (flo >= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::vector<XyzAlgebraicTransition> out;

  for (int k = 1; k <= n_probe; ++k) {
    // Continuous onsets: the normal-state curvature factor crosses zero.
    if ((p0[k - 1] >= 0.0) != (p0[k] >= 0.0)) {
      const double tc = bisect_zero([&](double t) { return cubic_at(t).coeffs[3]; },
                                    ts[k - 1], ts[k]);
      if (sr_at(tc - kProbeStep) != sr_at(tc + kProbeStep)) {
        XyzAlgebraicTransition rec;
        rec.t = tc;
        rec.order = Order::Second;
        rec.residual = std::abs(cubic_at(tc).coeffs[3]);
        out.push_back(rec);
      }
    }
    // Coexistence: discriminant zero with a positive double root on the
    // lowest branch.
    if ((disc[k - 1] >= 0.0) != (disc[k] >= 0.0)) {
      const double tc = bisect_zero(
          [&](double t) { return spinblock::cubic_discriminant(cubic_at(t).coeffs).value; },
          ts[k - 1], ts[k]);
      const auto c = cubic_at(tc);
      const auto [a, b, cc, d] = c.coeffs;
      const double den = 2.0 * (b * b - 3.0 * a * cc);
      if (den == 0.0) continue;
      const double w = (9.0 * a * d - b * cc) / den;
      if (!(w > 1e-8)) continue;
      // The double root must belong to the lowest eigenvalue branch.
      const auto h = spinblock::build_h_xyz(spec_on_ray(base, ray, tc), std::sqrt(w));
      const double lam = spinblock::smallest_eigenvalue(h);
      const double defect = std::abs(lam - (c.lambda0 - w)) / std::max(1.0, std::abs(c.lambda0));
      if (defect > 1e-6) continue;
      // Confirm the potential actually switches branch here.
      const bool flips = sr_at(tc - kProbeStep) != sr_at(tc + kProbeStep);
      const double measured = std::abs(op_at(tc + kProbeStep) - op_at(tc - kProbeStep));
      if (!flips && measured < kJumpThreshold) continue;
      XyzAlgebraicTransition rec;
      rec.t = tc;
      rec.order = Order::First;
      rec.jump = w;
      rec.residual = defect;
      out.push_back(rec);
    }
  }

  std::sort(out.begin(), out.end(),
            [](const XyzAlgebraicTransition& a, const XyzAlgebraicTransition& b) {
              return a.t < b.t;
            });
  return out;
}

std::optional<CriticalPoint> critical_scan(const ModelSpec& base, const CouplingRay& ray,
                                           double t0, double t1, int n_points,
                                           const landau::ScanBudget& budget) {
  const auto scan = scan_transitions(base, ray, t0, t1, n_points, budget);
  if (scan.transitions.empty()) return std::nullopt;
  const auto& first = scan.transitions.front();

  CriticalPoint cp;
  cp.t_c = first.t;
  cp.order = first.order;
  cp.jump = first.jump;
  cp.method = "scan";

  if (base.family == Family::TwoQubitXYZ && base.params.beta_Delta == kInf) {
    const auto alg = xyz_discriminant_transitions(base, ray, t0, t1);
    for (const auto& a : alg) {
      if (std::abs(a.t - cp.t_c) <= 1e-4 && a.order == cp.order) {
        cp.t_c = a.t;  // algebraic location is sharper than the bisection tolerance
        if (a.order == Order::First) cp.jump = a.jump;
        cp.method = "scan+algebraic";
        cp.cross_validated = true;
        break;
      }
    }
  }
  return cp;
}

// ---- phase-diagram raster ----

ModelSpec apply_axis(const ModelSpec& spec, const std::string& name, double value) {
  ModelSpec s = spec;
  auto& p = s.params;
  auto set_all_gamma = [&](double v) {
    for (auto& row : p.gamma_i_nu)
      for (auto& g : row) g = v;
  };
  if (name == "gamma") {
    set_all_gamma(value);
  } else if (name == "gamma_scale") {
    for (auto& row : p.gamma_i_nu)
      for (auto& g : row) g *= value;
  } else if (name == "gamma1" || name == "gamma2") {
    const size_t i = name == "gamma1" ? 0 : 1;
    if (p.gamma_i_nu.size() <= i || p.gamma_i_nu[i].empty())
      throw std::invalid_argument("apply_axis: spec has no spin for " + name);
    p.gamma_i_nu[i][0] = value;
  } else if (name == "gamma_prime") {
    p.gamma_prime = value;
  } else if (name == "bias") {
    for (auto& e : p.epsilon_bias_i) e = value;
  } else if (name == "epsilon_x") {
    p.epsilon_alpha[0] = value;
  } else if (name == "epsilon_y") {
    p.epsilon_alpha[1] = value;
  } else if (name == "epsilon_z") {
    p.epsilon_alpha[2] = value;
  } else if (name == "beta_Delta") {
    p.beta_Delta = value;
  } else if (name == "lambda") {
    for (auto& l : p.lambda_i) l = value;
  } else {
    throw std::invalid_argument("apply_axis: unknown axis '" + name + "'");
  }
  return s;
}

PhaseGrid phase_diagram(const ModelSpec& base, const AxisSpec& ax1, const AxisSpec& ax2,
                        int workers, const landau::ScanBudget& budget) {
  if (ax1.count < 2 || ax2.count < 2)
    throw std::invalid_argument("phase_diagram: each axis needs at least 2 points");
  // Fail fast on unknown axis names before spawning workers.
  apply_axis(apply_axis(base, ax1.name, ax1.lo), ax2.name, ax2.lo);

  PhaseGrid grid;
  grid.ax1 = ax1;
  grid.ax2 = ax2;
  grid.cells.resize(static_cast<size_t>(ax1.count) * ax2.count);

  auto value_on = [](const AxisSpec& ax, int k) {
    return ax.lo + (ax.hi - ax.lo) * k / (ax.count - 1);
  };

  parallel::parallel_for(0, ax1.count, workers, [&](int i) {
    const double v1 = value_on(ax1, i);
    const ModelSpec row = apply_axis(base, ax1.name, v1);
    for (int j = 0; j < ax2.count; ++j) {
      const double v2 = value_on(ax2, j);
      const ModelSpec spec = apply_axis(row, ax2.name, v2);
      const Probe p = probe_spec(spec, budget);
      PhaseCell& cell = grid.cells[static_cast<size_t>(i) * ax2.count + j];
      cell.p1 = v1;
      cell.p2 = v2;
      cell.phase = p.sr ? 1 : 0;
      cell.order_parameter = p.op;
      cell.phi_min = p.phi_min;
    }
  });

  // Boundary edges with a first/second classification from the local field.
  auto op = [&](int i, int j) { return grid.at(i, j).order_parameter; };
  auto phase = [&](int i, int j) { return grid.at(i, j).phase; };
  auto classify_edge = [&](int i1, int j1, int i2, int j2) {
    BoundaryEdge e{i1, j1, i2, j2, Order::Second, 0.0};
    e.jump = std::abs(op(i1, j1) - op(i2, j2));
    // Drift: the order-parameter step one cell further into the broken side.
    const bool first_is_sr = phase(i1, j1) == 1;
    const int bi = first_is_sr ? i1 : i2, bj = first_is_sr ? j1 : j2;
    const int di = first_is_sr ? i1 - i2 : i2 - i1, dj = first_is_sr ? j1 - j2 : j2 - j1;
    double drift = 0.0;
    const int ni = bi + di, nj = bj + dj;
    if (ni >= 0 && ni < ax1.count && nj >= 0 && nj < ax2.count && phase(ni, nj) == phase(bi, bj))
      drift = std::abs(op(bi, bj) - op(ni, nj));
    e.order = e.jump > std::max(kJumpThreshold, 3.0 * drift) ? Order::First : Order::Second;
    return e;
  };
  for (int i = 0; i < ax1.count; ++i)
    for (int j = 0; j < ax2.count; ++j) {
      if (j + 1 < ax2.count && phase(i, j) != phase(i, j + 1))
        grid.edges.push_back(classify_edge(i, j, i, j + 1));
      if (i + 1 < ax1.count && phase(i, j) != phase(i + 1, j))
        grid.edges.push_back(classify_edge(i, j, i + 1, j));
    }
  return grid;
}

}  // namespace srpt::critical
