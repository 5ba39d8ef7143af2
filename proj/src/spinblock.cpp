// spinblock.cpp — two-spin blocks, secular polynomials, variational cat.
#include "srpt/spinblock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "srpt/landau.hpp"

namespace srpt::spinblock {

namespace {

constexpr int kN = 4;

// ---- small dense helpers ----

double offdiag_frobenius(const SymMatrix4& a) {
  double s = 0.0;
  for (int i = 0; i < kN; ++i)
    for (int j = i + 1; j < kN; ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

double SymMatrix4::frobenius() const {
  double s = 0.0;
  for (int i = 0; i < kN; ++i)
    for (int j = 0; j < kN; ++j) s += m[i][j] * m[i][j];
  return std::sqrt(s);
}

// ---- block construction ----

SymMatrix4 two_spin_matrix(double ax1, double ax2, double dz1, double dz2,
                           const std::array<double, 3>& J) {
  // Basis order |uu>, |ud>, |du>, |dd|. s1y s2y flips both spins with sign
  // -1 on |uu><dd| and +1 on |ud><du| once the i factors cancel.
  SymMatrix4 h;
  h.set(0, 0, dz1 + dz2 + J[2]);
  h.set(1, 1, dz1 - dz2 - J[2]);
  h.set(2, 2, -dz1 + dz2 - J[2]);
  h.set(3, 3, -dz1 - dz2 + J[2]);
  h.add(0, 2, ax1);  // s1x flips spin 1
  h.add(1, 3, ax1);
  h.add(0, 1, ax2);  // s2x flips spin 2
  h.add(2, 3, ax2);
  h.add(0, 3, J[0] - J[1]);  // s1x s2x - s1y s2y on the double flip
  h.add(1, 2, J[0] + J[1]);
  return h;
}

SymMatrix4 build_h_xyz(const ModelSpec& spec, double u) {
  if (spec.family != Family::TwoQubitXYZ)
    throw std::invalid_argument("build_h_xyz: spec is not a two-qubit exchange model");
  require_valid(spec);
  const auto& p = spec.params;
  return two_spin_matrix(2.0 * p.gamma(0) * u, 2.0 * p.gamma(1) * u,
                         p.delta_i[0], p.delta_i[1], p.epsilon_alpha);
}

// ---- Jacobi eigensolve ----

EigResult4 jacobi_eigensolve(const SymMatrix4& m) {
  SymMatrix4 a = m;
  std::array<std::array<double, 4>, 4> v{};
  for (int i = 0; i < kN; ++i) v[i][i] = 1.0;

  const double norm = a.frobenius();
  const double tol = 1e-14 * std::max(norm, 1e-300);
  int sweeps = 0;
  while (offdiag_frobenius(a) > tol) {
    if (++sweeps > 64)
      throw std::runtime_error("jacobi_eigensolve: rotation sweeps failed to converge");
    for (int p = 0; p < kN - 1; ++p) {
      for (int q = p + 1; q < kN; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-2 * tol) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < kN; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a.m[k][p] = c * akp - s * akq;
          a.m[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < kN; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a.m[p][k] = c * apk - s * aqk;
          a.m[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < kN; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });
  EigResult4 r;
  r.sweeps = sweeps;
  for (int c = 0; c < kN; ++c) {
    r.values[c] = a(order[c], order[c]);
    for (int k = 0; k < kN; ++k) r.vectors[k][c] = v[k][order[c]];
    // Fix the overall sign: largest-magnitude component positive.
    int imax = 0;
    for (int k = 1; k < kN; ++k)
      if (std::abs(r.vectors[k][c]) > std::abs(r.vectors[imax][c])) imax = k;
    if (r.vectors[imax][c] < 0.0)
      for (int k = 0; k < kN; ++k) r.vectors[k][c] = -r.vectors[k][c];
  }
  return r;
}

double smallest_eigenvalue(const SymMatrix4& m) {
  return jacobi_eigensolve(m).values[0];
}

// ---- characteristic polynomial over a generic coefficient ring ----

namespace {

// Dense univariate polynomial with double coefficients, ascending powers.
// Only what Faddeev-LeVerrier needs: +, -, *, integer division, trimming.
struct Poly {
  std::vector<double> c;  // c[k] multiplies x^k; empty means zero

  static Poly constant(double v) {
    Poly p;
    if (v != 0.0) p.c = {v};
    return p;
  }
  void trim() {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
  }
  double at(double x) const {
    double r = 0.0;
    for (size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
  }
};

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
  r.trim();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) r.c[k] -= b.c[k];
  r.trim();
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.resize(a.c.size() + b.c.size() - 1, 0.0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

Poly div_int(const Poly& a, int k) {
  Poly r = a;
  for (double& x : r.c) x /= k;
  return r;
}

double div_int(double a, int k) { return a / k; }

// Faddeev-LeVerrier: det(lambda*I - M) coefficients, leading first.
// Ring must support +, -, *, div_int, and a zero default constructor.
template <class Ring>
std::array<Ring, 5> fl_char_poly(const std::array<std::array<Ring, 4>, 4>& a) {
  using Mat = std::array<std::array<Ring, 4>, 4>;
  auto matmul = [](const Mat& x, const Mat& y) {
    Mat r{};
    for (int i = 0; i < kN; ++i)
      for (int j = 0; j < kN; ++j) {
        Ring s{};
        for (int k = 0; k < kN; ++k) s = s + x[i][k] * y[k][j];
        r[i][j] = s;
      }
    return r;
  };
  auto trace = [](const Mat& x) {
    Ring s{};
    for (int i = 0; i < kN; ++i) s = s + x[i][i];
    return s;
  };

  std::array<Ring, 5> coef{};  // coef[k] multiplies lambda^(4-k); coef[0] set by caller
  Mat m = a;
  Mat mk = m;
  std::array<Ring, 4> lower;  // lambda^3..lambda^0 coefficients as computed
  lower[0] = Ring{} - trace(m);
  for (int k = 2; k <= kN; ++k) {
    // mk <- A * (mk + a_{n-k+1} I)
    Mat shifted = mk;
    for (int i = 0; i < kN; ++i) shifted[i][i] = shifted[i][i] + lower[k - 2];
    mk = matmul(m, shifted);
    lower[k - 1] = Ring{} - div_int(trace(mk), k);
  }
  coef[1] = lower[0];
  coef[2] = lower[1];
  coef[3] = lower[2];
  coef[4] = lower[3];
  return coef;
}

}  // namespace

std::array<double, 5> char_poly(const SymMatrix4& m) {
  std::array<std::array<double, 4>, 4> a{};
  for (int i = 0; i < kN; ++i)
    for (int j = 0; j < kN; ++j) a[i][j] = m(i, j);
  auto c = fl_char_poly<double>(a);
  c[0] = 1.0;
  return c;
}

// ---- criticality cubic ----

CriticalityCubic criticality_cubic(const ModelSpec& spec) {
  if (spec.family != Family::TwoQubitXYZ)
    throw std::invalid_argument("criticality_cubic: spec is not a two-qubit exchange model");
  if (spec.params.beta_Delta != kInf)
    throw std::invalid_argument("criticality_cubic: defined at zero temperature only");
  require_valid(spec);

  // Matrix with entries affine in u: h(u) = A + u*B.
  const SymMatrix4 a0 = build_h_xyz(spec, 0.0);
  SymMatrix4 a1 = build_h_xyz(spec, 1.0);
  std::array<std::array<Poly, 4>, 4> pm{};
  for (int i = 0; i < kN; ++i)
    for (int j = 0; j < kN; ++j) {
      Poly e;
      const double lin = a1(i, j) - a0(i, j);
      if (a0(i, j) != 0.0 || lin != 0.0) {
        e.c = {a0(i, j), lin};
        e.trim();
      }
      pm[i][j] = e;
    }

  auto sec = fl_char_poly<Poly>(pm);  // coefficients of lambda^3..lambda^0 in sec[1..4]
  sec[0] = Poly::constant(1.0);

  // The block is even in u (x couplings flip sign with u under a spin-z
  // rotation), so every secular coefficient must be even in u.
  double scale = 0.0;
  for (const auto& p : sec)
    for (double v : p.c) scale = std::max(scale, std::abs(v));
  for (const auto& p : sec)
    for (size_t k = 1; k < p.c.size(); k += 2)
      if (std::abs(p.c[k]) > 1e-10 * scale)
        throw std::runtime_error("criticality_cubic: secular polynomial has odd powers of u");

  // Rewrite in w = u^2 and substitute lambda = lambda0 - w:
  // Q(w) = sum_k c_k(w) (lambda0 - w)^k with c_k even parts of sec.
  const double lambda0 = smallest_eigenvalue(a0);
  Poly q;  // ascending in w
  Poly shift;  // (lambda0 - w)
  shift.c = {lambda0, -1.0};
  Poly power = Poly::constant(1.0);
  // Accumulate from lambda^0 upward: sec[4] + sec[3]*shift + ... + sec[0]*shift^4.
  for (int k = 0; k <= 4; ++k) {
    Poly ck_w;  // even part of sec[4-k], reindexed by w
    const Poly& src = sec[4 - k];
    for (size_t j = 0; j < src.c.size(); j += 2) {
      if (src.c[j] == 0.0) continue;
      if (ck_w.c.size() < j / 2 + 1) ck_w.c.resize(j / 2 + 1, 0.0);
      ck_w.c[j / 2] += src.c[j];
    }
    q = q + ck_w * power;
    power = power * shift;
  }
  q.c.resize(5, 0.0);  // quartic in w

  // lambda0 is a root at u = 0, so Q(0) must vanish; divide out w.
  if (std::abs(q.c[0]) > 1e-8 * std::max(1.0, scale))
    throw std::runtime_error("criticality_cubic: secular quartic misses the trivial root");

  CriticalityCubic out;
  out.lambda0 = lambda0;
  out.coeffs = {q.c[4], q.c[3], q.c[2], q.c[1]};

  // Sampling self-check: w * P(w) must equal det((lambda0 - w) I - h(sqrt(w))).
  std::mt19937_64 rng(0x5eedb10cULL);
  std::uniform_real_distribution<double> dist(1e-3, 1.0);
  const double span = 1.0 + 2.0 * (std::abs(spec.params.gamma(0)) + std::abs(spec.params.gamma(1)));
  const double wmax = span * span;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double w = wmax * dist(rng);
    const SymMatrix4 h = build_h_xyz(spec, std::sqrt(w));
    auto cp = char_poly(h);
    const double lam = lambda0 - w;
    double det = 0.0;
    for (double ck : cp) det = det * lam + ck;
    const double lhs = w * out.eval(w);
    const double rel = std::abs(lhs - det) / std::max({1.0, std::abs(det), std::abs(lhs)});
    worst = std::max(worst, rel);
  }
  out.residual = worst;
  if (worst > 1e-8)
    throw std::runtime_error("criticality_cubic: sampling check failed against determinant form");
  return out;
}

Discriminant cubic_discriminant(const std::array<double, 4>& coeffs) {
  const double a = coeffs[0], b = coeffs[1], c = coeffs[2], d = coeffs[3];
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), 1e-300});
  Discriminant r;
  if (std::abs(a) <= 1e-12 * scale) {
    r.quadratic_fallback = true;
    r.value = c * c - 4.0 * b * d;
    return r;
  }
  r.value = 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
            4.0 * a * c * c * c - 27.0 * a * a * d * d;
  return r;
}

std::vector<double> real_roots_cubic(const std::array<double, 4>& coeffs) {
  const double a = coeffs[0], b = coeffs[1], c = coeffs[2], d = coeffs[3];
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) return {};
  std::vector<double> roots;

  auto polish = [&](double x) {
    for (int it = 0; it < 4; ++it) {
      const double f = ((a * x + b) * x + c) * x + d;
      const double df = (3.0 * a * x + 2.0 * b) * x + c;
      if (df == 0.0) break;
      const double step = f / df;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return x;
  };

  if (std::abs(a) <= 1e-12 * scale) {
    // Quadratic (or linear) degeneration.
    if (std::abs(b) <= 1e-12 * scale) {
      if (std::abs(c) > 1e-12 * scale) roots.push_back(-d / c);
    } else {
      const double disc = c * c - 4.0 * b * d;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (c + (c >= 0.0 ? sq : -sq));
        roots.push_back(q / b);
        if (q != 0.0) roots.push_back(d / q);
        else roots.push_back(0.0);
      }
    }
  } else {
    // Depressed form t^3 + p t + q with x = t - b/(3a).
    const double bn = b / a, cn = c / a, dn = d / a;
    const double p = cn - bn * bn / 3.0;
    const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    const double shift = -bn / 3.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc > 0.0) {
      // Three real roots, trigonometric form (p < 0 here).
      const double m = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k)
        roots.push_back(shift + m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    } else {
      // One real root (Cardano), or a repeated root at disc ~ 0.
      const double half_q = q / 2.0;
      const double rad = std::sqrt(std::max(0.0, half_q * half_q + p * p * p / 27.0));
      const double u1 = std::cbrt(-half_q + rad);
      const double u2 = std::cbrt(-half_q - rad);
      roots.push_back(shift + u1 + u2);
      if (disc > -1e-13 * scale * scale && std::abs(p) > 0.0) {
        // Near-repeated pair at -t/2 where t is the simple root offset.
        roots.push_back(shift - (u1 + u2) / 2.0);
        roots.push_back(shift - (u1 + u2) / 2.0);
      }
    }
  }

  for (double& x : roots) x = polish(x);
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---- variational cat state ----

VariationalState variational_state(const ModelSpec& spec) {
  require_valid(spec);
  const auto& p = spec.params;
  bool dipole = false;
  switch (spec.family) {
    case Family::DQR:
      dipole = true;
      break;
    case Family::AnisoInhomogeneous: {
      dipole = true;
      for (double l : p.lambda_i)
        if (l != 1.0) dipole = false;
      break;
    }
    case Family::Multimode:
      dipole = (p.n_modes() == 1);
      break;
    default:
      break;
  }
  if (!dipole)
    throw std::invalid_argument(
        "variational_state: spec must be a single-mode unbiased dipole model");
  if (!p.C || !(*p.C > 0.0) || !std::isfinite(*p.C))
    throw std::invalid_argument("variational_state: params.C must be set and finite");

  landau::ScanBudget budget;
  const auto mr = landau::minimize_global(spec, budget);
  // Nonnegative representative of the deepest minimum; prefer the displaced
  // branch when the origin ties (coexistence).
  double u = 0.0;
  for (const auto& pt : mr.minima) u = std::max(u, std::abs(pt[0]));

  VariationalState vs;
  vs.u_min = u;
  vs.C = *p.C;
  vs.alpha = std::sqrt(*p.C) * u;
  const int n = p.n_spins();
  vs.theta_i.resize(n);
  double sz = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = p.gamma(i);
    const double del = p.delta_i[i];
    const double hyp = std::sqrt(del * del + 4.0 * u * u * g * g);
    vs.theta_i[i] = std::atan2(2.0 * u * g, del + hyp);
    sz -= (hyp > 0.0) ? del / hyp : 0.0;
  }
  vs.spin_z = sz / n;
  vs.parity_sector = +1;
  return vs;
}

PhotonDist photon_distribution_variational(const VariationalState& vs, int n_cut) {
  if (vs.theta_i.size() != 1)
    throw std::invalid_argument(
        "photon_distribution_variational: defined for a single spin");
  const double a2 = vs.alpha * vs.alpha;
  if (n_cut < 0) n_cut = static_cast<int>(std::ceil(a2 + 12.0 * std::sqrt(a2 + 1.0))) + 4;

  const double theta = vs.theta_i[0];
  const double we = 2.0 * std::sin(theta) * std::sin(theta);
  const double wg = 2.0 * std::cos(theta) * std::cos(theta);

  PhotonDist d;
  d.parity_sector = vs.parity_sector;
  d.p_excited.assign(n_cut + 1, 0.0);
  d.p_ground.assign(n_cut + 1, 0.0);
  for (int n = 0; n <= n_cut; ++n) {
    double pois;
    if (a2 == 0.0) {
      pois = (n == 0) ? 1.0 : 0.0;
    } else {
      pois = std::exp(-a2 + n * std::log(a2) - std::lgamma(n + 1.0));
    }
    const bool odd = (n % 2) != 0;
    // Sector +1 puts the excited spin on odd photon numbers.
    const bool excited_here = (vs.parity_sector > 0) ? odd : !odd;
    if (excited_here)
      d.p_excited[n] = we * pois;
    else
      d.p_ground[n] = wg * pois;
  }
  double tot = 0.0;
  for (int n = 0; n <= n_cut; ++n) tot += d.p_excited[n] + d.p_ground[n];
  d.total = tot;
  return d;
}

}  // namespace srpt::spinblock
