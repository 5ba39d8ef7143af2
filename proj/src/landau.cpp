// landau.cpp — potential evaluation and global minimization.
#include "srpt/landau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "srpt/spinblock.hpp"

namespace srpt::landau {

// ---- scalar kernels ----

double ln2cosh(double x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2.0 * x));
}

double free_term(double bD, double s) {
  if (bD == kInf) return std::abs(s);
  return ln2cosh(bD * s) / bD;
}

double tanh_term(double bD, double s) {
  if (bD == kInf) return (s > 0.0) ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
  return std::tanh(bD * s);
}

namespace {

double norm2_of(const OrderVector& u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return s;
}

// ---- 1-D minimization primitives ----

constexpr double kInvGolden = 0.6180339887498949;

// Golden-section search on [lo, hi]; tolerant of kinks (no derivatives used).
double golden_refine(const std::function<double(double)>& f, double lo, double hi,
                     double tol, bool& converged) {
  double a = lo, b = hi;
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int it = 0;
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (++it > 200) {
      converged = false;
      break;
    }
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

struct Scan1D {
  double x = 0.0;
  double f = 0.0;
  bool converged = true;
};

// Dense scan of [-R, R] (0 is always a node) plus golden refinement around
// the grid optimum and around the origin cell.
Scan1D scan_minimize_1d(const std::function<double(double)>& f, double R,
                        const ScanBudget& budget) {
  int n = std::max(3, budget.points_per_axis);
  if (n % 2 == 0) ++n;
  const int mid = n / 2;
  const double step = 2.0 * R / (n - 1);

  Scan1D out;
  out.f = std::numeric_limits<double>::infinity();
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = -R + i * step;
  xs[mid] = 0.0;

  int ibest = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double v = f(xs[i]);
    if (v < fbest) {
      fbest = v;
      ibest = i;
    }
  }
  out.x = xs[ibest];
  out.f = fbest;

  for (int seed : {ibest, mid}) {
    const double lo = xs[std::max(0, seed - 1)];
    const double hi = xs[std::min(n - 1, seed + 1)];
    const double xr = golden_refine(f, lo, hi, budget.refine_tol, out.converged);
    const double fr = f(xr);
    if (fr < out.f) {
      out.f = fr;
      out.x = xr;
    }
  }
  return out;
}

struct Scan2D {
  std::array<double, 2> x{0.0, 0.0};
  double f = 0.0;
  bool converged = true;
};

// Dense grid plus coordinate-descent golden refinement, seeded at the grid
// optimum and at the origin.
Scan2D scan_minimize_2d(const std::function<double(double, double)>& f2, double R,
                        const ScanBudget& budget) {
  int n = std::max(3, budget.points_per_axis);
  if (n % 2 == 0) ++n;
  const int mid = n / 2;
  const double step = 2.0 * R / (n - 1);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = -R + i * step;
  xs[mid] = 0.0;

  std::array<int, 2> best{0, 0};
  double fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = f2(xs[i], xs[j]);
      if (v < fbest) {
        fbest = v;
        best = {i, j};
      }
    }

  auto descend = [&](std::array<double, 2> p, double fp, bool& conv) {
    double w = step;
    for (int sweep = 0; sweep < budget.max_refine_sweeps; ++sweep) {
      double moved = 0.0;
      for (int axis = 0; axis < 2; ++axis) {
        auto line = [&](double t) {
          return axis == 0 ? f2(t, p[1]) : f2(p[0], t);
        };
        const double lo = std::max(-R, p[axis] - w);
        const double hi = std::min(R, p[axis] + w);
        const double t = golden_refine(line, lo, hi, budget.refine_tol, conv);
        const double ft = line(t);
        if (ft < fp) {
          moved = std::max(moved, std::abs(t - p[axis]));
          p[axis] = t;
          fp = ft;
        }
      }
      if (moved < budget.refine_tol * (1.0 + std::abs(p[0]) + std::abs(p[1])))
        return std::pair{p, fp};
      w = std::clamp(4.0 * moved, 16.0 * budget.refine_tol, step);
    }
    conv = false;
    return std::pair{p, fp};
  };

  Scan2D out;
  out.x = {xs[best[0]], xs[best[1]]};
  out.f = fbest;
  for (auto seed : {std::array{xs[best[0]], xs[best[1]]}, std::array{0.0, 0.0}}) {
    bool conv = true;
    auto [p, fp] = descend(seed, f2(seed[0], seed[1]), conv);
    out.converged = out.converged && conv;
    if (fp < out.f) {
      out.f = fp;
      out.x = p;
    }
  }
  return out;
}

// ---- result assembly ----

// Squared amplitude per physical mode (quadrature pairs collapse to one).
std::vector<double> mode_squares(const ModelSpec& spec, const OrderVector& u) {
  if (spec.family == Family::Multimode && !u.empty() &&
      static_cast<int>(u.size()) == spec.params.n_modes()) {
    std::vector<double> out(u.size());
    for (size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i];
    return out;
  }
  return {norm2_of(u)};  // single mode: quadratures add
}

// Filter candidates to the global-minimum set, dedupe, and canonicalize.
MinResult assemble(const ModelSpec& spec, std::vector<OrderVector> candidates,
                   const std::function<double(const OrderVector&)>& f, bool converged) {
  double fmin = std::numeric_limits<double>::infinity();
  std::vector<double> vals(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    vals[i] = f(candidates[i]);
    fmin = std::min(fmin, vals[i]);
  }

  MinResult r;
  r.phi_min = fmin;
  r.converged = converged;
  for (size_t i = 0; i < candidates.size(); ++i)
    if (vals[i] <= fmin + 1e-10) r.minima.push_back(candidates[i]);

  std::sort(r.minima.begin(), r.minima.end(), [](const OrderVector& a, const OrderVector& b) {
    const double na = norm2_of(a), nb = norm2_of(b);
    if (na != nb) return na < nb;
    return a > b;  // nonnegative representative first within a shell
  });
  auto close = [](const OrderVector& a, const OrderVector& b) {
    for (size_t k = 0; k < a.size(); ++k)
      if (std::abs(a[k] - b[k]) > 1e-8) return false;
    return true;
  };
  r.minima.erase(std::unique(r.minima.begin(), r.minima.end(), close), r.minima.end());

  // Sign-pair degeneracy: some nonzero minimum has a sign-flipped image listed.
  for (const auto& m : r.minima) {
    if (norm2_of(m) <= 1e-16) continue;
    for (const auto& o : r.minima) {
      if (&o == &m) continue;
      bool flipped = true;
      for (size_t k = 0; k < m.size(); ++k)
        if (std::abs(m[k] + o[k]) > 1e-8 && std::abs(m[k] - o[k]) > 1e-8) flipped = false;
      bool distinct = false;
      for (size_t k = 0; k < m.size(); ++k)
        if (std::abs(m[k] - o[k]) > 1e-8) distinct = true;
      if (flipped && distinct) r.degenerate = Degeneracy::SignPair;
    }
  }

  r.order_parameter = mode_squares(spec, r.minima.empty() ? OrderVector(spec.arity(), 0.0)
                                                          : r.minima.back());
  return r;
}

// Candidate images under the family's sign symmetries.
std::vector<OrderVector> sign_images(const ModelSpec& spec, const OrderVector& p) {
  std::vector<OrderVector> out{p};
  const OrderVector zero(p.size(), 0.0);
  switch (spec.family) {
    case Family::DQR:
    case Family::TwoQubitXYZ: {
      out.push_back({-p[0]});
      break;
    }
    case Family::Biased:
      break;  // no sign symmetry
    case Family::TwoPhoton: {
      if (spec.two_photon_reduced || p.size() == 1) {
        // The reduced branch keeps only the kept quadrature; no u symmetry.
      } else {
        out.push_back({p[0], -p[1]});
      }
      break;
    }
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings: {
      out.push_back({-p[0], p[1]});
      out.push_back({p[0], -p[1]});
      out.push_back({-p[0], -p[1]});
      break;
    }
    case Family::Multimode: {
      OrderVector neg(p.size());
      for (size_t k = 0; k < p.size(); ++k) neg[k] = -p[k];
      out.push_back(neg);
      break;
    }
  }
  out.push_back(zero);
  return out;
}

MinResult minimize_multimode_collinear(const ModelSpec& spec, const ScanBudget& budget) {
  const auto& p = spec.params;
  const int m = p.n_modes();
  const int n = p.n_spins();
  const double bD = p.beta_Delta;
  double g2 = 0.0;
  for (int nu = 0; nu < m; ++nu) g2 += p.gamma_mode(nu) * p.gamma_mode(nu);
  const double gnorm = std::sqrt(g2);

  auto f_s = [&](double s) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = p.delta_i[i];
      acc += free_term(bD, std::sqrt(d * d + 4.0 * g2 * s * s));
    }
    return s * s - acc / n;
  };

  if (gnorm == 0.0) {
    MinResult r;
    r.minima = {OrderVector(m, 0.0)};
    r.phi_min = f_s(0.0);
    r.order_parameter.assign(m, 0.0);
    r.converged = true;
    return r;
  }

  const double R = budget.box_radius.value_or(1.0 + 2.0 * gnorm);
  const auto scan = scan_minimize_1d(f_s, R, budget);

  auto lift = [&](double s) {
    OrderVector u(m);
    for (int nu = 0; nu < m; ++nu) u[nu] = s * p.gamma_mode(nu) / gnorm;
    return u;
  };
  std::vector<OrderVector> cands{lift(scan.x), lift(-scan.x), lift(0.0)};
  auto f_vec = [&](const OrderVector& u) {
    double s = 0.0;
    for (int nu = 0; nu < m; ++nu) s += u[nu] * p.gamma_mode(nu);
    return f_s(s / gnorm);
  };
  return assemble(spec, std::move(cands), f_vec, scan.converged);
}

}  // namespace

// ---- potential and gradient ----

double phi(const ModelSpec& spec, const OrderVector& u) {
  const auto& p = spec.params;
  if (static_cast<int>(u.size()) != spec.arity())
    throw std::invalid_argument("phi: order vector arity mismatch");
  const double bD = p.beta_Delta;

  switch (spec.family) {
    case Family::DQR: {
      const double g = p.gamma(0), d = p.delta_i[0], x = u[0];
      return x * x - free_term(bD, std::sqrt(d * d + 4.0 * g * g * x * x));
    }
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings: {
      const double a = u[0], b = u[1];
      const int n = p.n_spins();
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double g = p.gamma(i), d = p.delta_i[i], l = p.lambda(i);
        const double su = g * (1.0 + l), sv = g * (1.0 - l);
        acc += free_term(bD, std::sqrt(d * d + su * su * a * a + sv * sv * b * b));
      }
      return a * a + b * b - acc / n;
    }
    case Family::Biased: {
      const double x = u[0];
      const int n = p.n_spins();
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double w = p.bias(i) + 2.0 * p.gamma(i) * x;
        const double d = p.delta_i[i];
        acc += free_term(bD, std::sqrt(d * d + w * w));
      }
      return x * x - acc / n;
    }
    case Family::TwoPhoton: {
      const double g = p.gamma(0), gp = p.gamma_prime, d = p.delta_i[0];
      const double a = u[0];
      const double v2 = spec.two_photon_reduced ? 0.0 : u[1] * u[1];
      const double amp = 2.0 * g * a + 2.0 * gp * (a * a - v2);
      return a * a + v2 - free_term(bD, std::sqrt(d * d + amp * amp));
    }
    case Family::TwoQubitXYZ: {
      const double x = u[0];
      const auto h = spinblock::two_spin_matrix(2.0 * p.gamma(0) * x, 2.0 * p.gamma(1) * x,
                                                p.delta_i[0], p.delta_i[1], p.epsilon_alpha);
      const auto eig = spinblock::jacobi_eigensolve(h);
      if (bD == kInf) return x * x + eig.values[0];
      double z = 0.0;
      for (double e : eig.values) z += std::exp(-bD * (e - eig.values[0]));
      return x * x + eig.values[0] - std::log(z) / bD;
    }
    case Family::Multimode: {
      const int m = p.n_modes();
      const int n = p.n_spins();
      double s = 0.0, q = 0.0;
      for (int nu = 0; nu < m; ++nu) {
        s += p.gamma_mode(nu) * u[nu];
        q += u[nu] * u[nu];
      }
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = p.delta_i[i];
        acc += free_term(bD, std::sqrt(d * d + 4.0 * s * s));
      }
      return q - acc / n;
    }
  }
  throw std::logic_error("phi: unhandled family");
}

OrderVector grad_phi(const ModelSpec& spec, const OrderVector& u) {
  const auto& p = spec.params;
  if (static_cast<int>(u.size()) != spec.arity())
    throw std::invalid_argument("grad_phi: order vector arity mismatch");
  const double bD = p.beta_Delta;
  OrderVector g(u.size(), 0.0);

  switch (spec.family) {
    case Family::DQR: {
      const double ga = p.gamma(0), d = p.delta_i[0], x = u[0];
      const double s = std::sqrt(d * d + 4.0 * ga * ga * x * x);
      g[0] = 2.0 * x - (s > 0.0 ? tanh_term(bD, s) * 4.0 * ga * ga * x / s : 0.0);
      return g;
    }
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings: {
      const double a = u[0], b = u[1];
      const int n = p.n_spins();
      double da = 0.0, db = 0.0;
      for (int i = 0; i < n; ++i) {
        const double gi = p.gamma(i), d = p.delta_i[i], l = p.lambda(i);
        const double su = gi * (1.0 + l), sv = gi * (1.0 - l);
        const double s = std::sqrt(d * d + su * su * a * a + sv * sv * b * b);
        if (s > 0.0) {
          const double t = tanh_term(bD, s) / s;
          da += t * su * su * a;
          db += t * sv * sv * b;
        }
      }
      g[0] = 2.0 * a - da / n;
      g[1] = 2.0 * b - db / n;
      return g;
    }
    case Family::Biased: {
      const double x = u[0];
      const int n = p.n_spins();
      double dx = 0.0;
      for (int i = 0; i < n; ++i) {
        const double gi = p.gamma(i), d = p.delta_i[i];
        const double w = p.bias(i) + 2.0 * gi * x;
        const double s = std::sqrt(d * d + w * w);
        if (s > 0.0) dx += tanh_term(bD, s) * 2.0 * gi * w / s;
      }
      g[0] = 2.0 * x - dx / n;
      return g;
    }
    case Family::TwoPhoton: {
      const double ga = p.gamma(0), gp = p.gamma_prime, d = p.delta_i[0];
      const double a = u[0];
      const double v = spec.two_photon_reduced ? 0.0 : u[1];
      const double amp = 2.0 * ga * a + 2.0 * gp * (a * a - v * v);
      const double s = std::sqrt(d * d + amp * amp);
      const double t = (s > 0.0) ? tanh_term(bD, s) * amp / s : 0.0;
      g[0] = 2.0 * a - t * (2.0 * ga + 4.0 * gp * a);
      if (!spec.two_photon_reduced) g[1] = 2.0 * v + t * 4.0 * gp * v;
      return g;
    }
    case Family::TwoQubitXYZ: {
      // Central difference: the binding term is an eigenvalue, not closed form.
      const double x = u[0];
      const double h = 1e-6 * (1.0 + std::abs(x));
      g[0] = (phi(spec, {x + h}) - phi(spec, {x - h})) / (2.0 * h);
      return g;
    }
    case Family::Multimode: {
      const int m = p.n_modes();
      const int n = p.n_spins();
      double s = 0.0;
      for (int nu = 0; nu < m; ++nu) s += p.gamma_mode(nu) * u[nu];
      double common = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = p.delta_i[i];
        const double si = std::sqrt(d * d + 4.0 * s * s);
        if (si > 0.0) common += tanh_term(bD, si) * 4.0 * s / si;
      }
      for (int nu = 0; nu < m; ++nu)
        g[nu] = 2.0 * u[nu] - common * p.gamma_mode(nu) / n;
      return g;
    }
  }
  throw std::logic_error("grad_phi: unhandled family");
}

double scan_box_radius(const ModelSpec& spec) {
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::DQR:
      return 1.0 + 2.0 * std::abs(p.gamma(0));
    case Family::AnisoInhomogeneous:
    case Family::TavisCummings: {
      double acc = 0.0;
      for (int i = 0; i < p.n_spins(); ++i)
        acc += std::abs(p.gamma(i)) * (1.0 + std::abs(p.lambda(i)));
      return 1.0 + 2.0 * acc / p.n_spins();
    }
    case Family::Biased: {
      double acc = 0.0;
      for (int i = 0; i < p.n_spins(); ++i) acc += std::abs(p.gamma(i));
      return 1.0 + 2.0 * acc / p.n_spins();
    }
    case Family::TwoPhoton:
      // Stationary points obey |u| <= |gamma| / (1 - 2|gamma'|).
      return 1.0 + 2.0 * std::abs(p.gamma(0)) / (1.0 - 2.0 * std::abs(p.gamma_prime));
    case Family::TwoQubitXYZ:
      return 1.0 + 2.0 * (std::abs(p.gamma(0)) + std::abs(p.gamma(1)));
    case Family::Multimode: {
      double g2 = 0.0;
      for (int nu = 0; nu < p.n_modes(); ++nu)
        g2 += p.gamma_mode(nu) * p.gamma_mode(nu);
      return 1.0 + 2.0 * std::sqrt(g2);
    }
  }
  throw std::logic_error("scan_box_radius: unhandled family");
}

// ---- global minimization ----

MinResult minimize_global(const ModelSpec& spec, const ScanBudget& budget) {
  require_valid(spec);

  if (spec.family == Family::Multimode && spec.params.n_modes() > 1 &&
      !budget.force_full_scan)
    return minimize_multimode_collinear(spec, budget);

  const int arity = spec.arity();
  if (arity > 2)
    throw std::invalid_argument("minimize_global: full scans support at most two axes");
  const double R = budget.box_radius.value_or(scan_box_radius(spec));
  auto f_vec = [&](const OrderVector& u) { return phi(spec, u); };

  if (arity == 1) {
    auto f = [&](double x) { return phi(spec, {x}); };
    const auto scan = scan_minimize_1d(f, R, budget);
    return assemble(spec, sign_images(spec, {scan.x}), f_vec, scan.converged);
  }

  auto f2 = [&](double a, double b) { return phi(spec, {a, b}); };
  const auto scan = scan_minimize_2d(f2, R, budget);
  auto result = assemble(spec, sign_images(spec, {scan.x[0], scan.x[1]}), f_vec,
                         scan.converged);

  if (spec.family == Family::TavisCummings) {
    // Canonicalize the broken circle to its (r, 0) representative.
    double r2 = 0.0;
    for (const auto& m : result.minima) r2 = std::max(r2, norm2_of(m));
    const double r = std::sqrt(r2);
    std::vector<OrderVector> cands{{r, 0.0}, {0.0, 0.0}};
    result = assemble(spec, std::move(cands), f_vec, result.converged);
    if (r > 1e-8) result.degenerate = Degeneracy::Rotational;
    // Drop the sign partner the generic pass would report: the representative
    // stands for the whole circle.
    std::erase_if(result.minima, [&](const OrderVector& m) { return m[0] < 0.0; });
  }
  return result;
}

MinResult minimize_reduced(const ModelSpec& spec, const ScanBudget& budget) {
  require_valid(spec);
  const auto& p = spec.params;
  auto f_vec = [&](const OrderVector& u) { return phi(spec, u); };

  switch (spec.family) {
    case Family::TwoPhoton: {
      if (spec.two_photon_reduced) return minimize_global(spec, budget);
      // Extrema sit on the kept quadrature: minimize the reduced section and
      // lift back to (u, 0).
      ModelSpec red = spec;
      red.two_photon_reduced = true;
      auto inner = minimize_global(red, budget);
      MinResult r;
      r.phi_min = inner.phi_min;
      r.converged = inner.converged;
      r.degenerate = inner.degenerate;
      for (const auto& m : inner.minima) r.minima.push_back({m[0], 0.0});
      r.order_parameter = inner.order_parameter;
      return r;
    }
    case Family::TavisCummings: {
      // Radial section through v = 0 is exact under rotational symmetry.
      auto f = [&](double x) { return phi(spec, {x, 0.0}); };
      const double R = budget.box_radius.value_or(scan_box_radius(spec));
      const auto scan = scan_minimize_1d(f, R, budget);
      const double r = std::abs(scan.x);
      std::vector<OrderVector> cands{{r, 0.0}, {0.0, 0.0}};
      auto result = assemble(spec, std::move(cands), f_vec, scan.converged);
      if (r > 1e-8 && norm2_of(result.minima.back()) > 1e-16)
        result.degenerate = Degeneracy::Rotational;
      return result;
    }
    case Family::AnisoInhomogeneous: {
      bool nonneg = true, nonpos = true;
      for (double l : p.lambda_i) {
        nonneg = nonneg && l >= 0.0;
        nonpos = nonpos && l <= 0.0;
      }
      if (!nonneg && !nonpos) return minimize_global(spec, budget);
      // Same-sign counter-rotating weights pin the minima to the axes.
      const double R = budget.box_radius.value_or(scan_box_radius(spec));
      auto fu = [&](double x) { return phi(spec, {x, 0.0}); };
      auto fv = [&](double y) { return phi(spec, {0.0, y}); };
      const auto su = scan_minimize_1d(fu, R, budget);
      const auto sv = scan_minimize_1d(fv, R, budget);
      std::vector<OrderVector> cands{{su.x, 0.0}, {-su.x, 0.0}, {0.0, sv.x},
                                     {0.0, -sv.x}, {0.0, 0.0}};
      return assemble(spec, std::move(cands), f_vec, su.converged && sv.converged);
    }
    case Family::Multimode:
      return minimize_multimode_collinear(spec, budget);
    default:
      return minimize_global(spec, budget);
  }
}

}  // namespace srpt::landau
