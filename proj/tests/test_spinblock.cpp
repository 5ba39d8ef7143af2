// test_spinblock.cpp — two-spin blocks against independent oracles: complex
// Pauli kron products, Eigen eigensolves, eigenvalue-product polynomials, and
// the displaced-cat closed forms.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "srpt/model.hpp"
#include "srpt/spinblock.hpp"

using namespace srpt;
using spinblock::SymMatrix4;

namespace {

using C2 = Eigen::Matrix2cd;
using C4 = Eigen::Matrix4cd;

C2 pauli(char axis) {
  C2 m = C2::Zero();
  const std::complex<double> i(0.0, 1.0);
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = C2::Identity(); break;
  }
  return m;
}

C4 kron(const C2& a, const C2& b) {
  C4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Independent construction of the two-spin block from Pauli tensor products.
Eigen::Matrix4d kron_oracle(double ax1, double ax2, double dz1, double dz2,
                            const std::array<double, 3>& J) {
  const C2 id = pauli('i');
  C4 h = ax1 * kron(pauli('x'), id) + ax2 * kron(id, pauli('x')) +
         dz1 * kron(pauli('z'), id) + dz2 * kron(id, pauli('z')) +
         J[0] * kron(pauli('x'), pauli('x')) + J[1] * kron(pauli('y'), pauli('y')) +
         J[2] * kron(pauli('z'), pauli('z'));
  REQUIRE(h.imag().cwiseAbs().maxCoeff() < 1e-15);
  return h.real();
}

SymMatrix4 random_symmetric(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymMatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) m.set(i, j, u(rng));
  return m;
}

}  // namespace

TEST_CASE("two_spin_matrix matches the Pauli tensor-product construction") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double ax1 = u(rng), ax2 = u(rng), dz1 = u(rng), dz2 = u(rng);
    const std::array<double, 3> J{u(rng), u(rng), u(rng)};
    const SymMatrix4 m = spinblock::two_spin_matrix(ax1, ax2, dz1, dz2, J);
    const Eigen::Matrix4d oracle = kron_oracle(ax1, ax2, dz1, dz2, J);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(m(i, j) == doctest::Approx(oracle(i, j)).epsilon(1e-14));
  }
}

TEST_CASE("reduced block is independent of the coupling at u = 0") {
  const auto a = spinblock::build_h_xyz(make_xyz(0.3, 0.9, 1.0, 0.8, {0.5, 0.2, 0.1}), 0.0);
  const auto b = spinblock::build_h_xyz(make_xyz(2.7, 0.1, 1.0, 0.8, {0.5, 0.2, 0.1}), 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("jacobi eigensolve agrees with an independent dense solver") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const SymMatrix4 m = random_symmetric(rng, 3.0);
    const auto eig = spinblock::jacobi_eigensolve(m);

    Eigen::Matrix4d em;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) em(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(em);

    double norm = em.norm();
    for (int k = 0; k < 4; ++k) {
      CHECK(eig.values[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-12));
      if (k > 0) CHECK(eig.values[k] >= eig.values[k - 1]);
      // Residual ||M v - lambda v|| per returned column.
      Eigen::Vector4d v;
      for (int r = 0; r < 4; ++r) v(r) = eig.vectors[r][k];
      CHECK((em * v - eig.values[k] * v).norm() <= 1e-12 * std::max(1.0, norm));
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(spinblock::smallest_eigenvalue(m) == eig.values[0]);
  }

  SUBCASE("bit-for-bit deterministic") {
    const SymMatrix4 m = random_symmetric(rng, 3.0);
    const auto a = spinblock::jacobi_eigensolve(m);
    const auto b = spinblock::jacobi_eigensolve(m);
    CHECK(a.values == b.values);
    CHECK(a.vectors == b.vectors);
  }
}

TEST_CASE("characteristic polynomial: identity and eigenvalue products") {
  SymMatrix4 id;
  for (int i = 0; i < 4; ++i) id.set(i, i, 1.0);
  const auto c = spinblock::char_poly(id);
  const std::array<double, 5> expect{1.0, -4.0, 6.0, -4.0, 1.0};
  for (int k = 0; k < 5; ++k) CHECK(c[k] == doctest::Approx(expect[k]));

  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const SymMatrix4 m = random_symmetric(rng, 2.0);
    const auto poly = spinblock::char_poly(m);
    const auto eig = spinblock::jacobi_eigensolve(m);
    // Expand prod_k (lambda - lambda_k) and compare coefficient by coefficient.
    std::array<double, 5> ref{1.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k < 4; ++k)
      for (int d = k + 1; d >= 1; --d) ref[d] -= eig.values[k] * ref[d - 1];
    double scale = 1.0;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));
    for (int k = 0; k < 5; ++k)
      CHECK(poly[k] == doctest::Approx(ref[k]).epsilon(1e-10).scale(std::pow(scale, k)));
  }
}

TEST_CASE("criticality cubic: sampled against the determinant form") {
  const auto spec = make_xyz(1.0, 1.0, 1.0, 1.0, {0.7, 0.4, 0.1});
  const auto cubic = spinblock::criticality_cubic(spec);
  CHECK(cubic.residual <= 1e-8);
  CHECK(cubic.coeffs[0] == doctest::Approx(1.0));  // monic by construction

  // Direct check at a few w: w P(w) must equal det(h(sqrt(w)) - (lambda0 - w)).
  for (double w : {0.3, 1.1, 2.6}) {
    const auto h = spinblock::build_h_xyz(spec, std::sqrt(w));
    Eigen::Matrix4d em;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) em(i, j) = h(i, j);
    const double det =
        (em - (cubic.lambda0 - w) * Eigen::Matrix4d::Identity()).determinant();
    CHECK(w * cubic.eval(w) == doctest::Approx(det).epsilon(1e-8));
  }
}

TEST_CASE("isotropic exchange coexistence: double root at the frozen coupling") {
  // Equal couplings and detunings, exchange 1 on all axes. At the coexistence
  // coupling t the cubic acquires a positive double root w* (the exact
  // order-parameter jump).
  const auto disc_at = [](double t) {
    const auto cubic =
        spinblock::criticality_cubic(make_xyz(t, t, 1.0, 1.0, {1.0, 1.0, 1.0}));
    const auto d = spinblock::cubic_discriminant(cubic.coeffs);
    REQUIRE_FALSE(d.quadratic_fallback);
    return d.value;
  };
  // The discriminant changes sign where the tangency appears; bisect it.
  double lo = 0.95, hi = 0.98;
  REQUIRE(disc_at(lo) * disc_at(hi) < 0.0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (disc_at(lo) * disc_at(mid) <= 0.0 ? hi : lo) = mid;
  }
  const double t_c = 0.5 * (lo + hi);
  // Closed form sqrt((eps + sqrt(eps^2 - delta^2/4))/2) with eps = delta = 1.
  CHECK(t_c == doctest::Approx(std::sqrt((1.0 + std::sqrt(0.75)) / 2.0)).epsilon(1e-10));

  const auto& c =
      spinblock::criticality_cubic(make_xyz(t_c, t_c, 1.0, 1.0, {1.0, 1.0, 1.0})).coeffs;
  const double dbl =
      (9.0 * c[0] * c[3] - c[1] * c[2]) / (2.0 * (c[1] * c[1] - 3.0 * c[0] * c[2]));
  CHECK(dbl == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-7));
}

TEST_CASE("cubic roots: distinct, repeated, and degenerate leading terms") {
  // (w-1)(w-2)(w-3)
  auto roots = spinblock::real_roots_cubic({1.0, -6.0, 11.0, -6.0});
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(spinblock::cubic_discriminant({1.0, -6.0, 11.0, -6.0}).value > 0.0);

  // (w-1)^2(w-2): repeated root, zero discriminant.
  roots = spinblock::real_roots_cubic({1.0, -4.0, 5.0, -2.0});
  REQUIRE(roots.size() >= 2);
  CHECK(roots.front() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(roots.back() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(spinblock::cubic_discriminant({1.0, -4.0, 5.0, -2.0}).value ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // One real root: w^3 + w + 2 has the single real root -1.
  roots = spinblock::real_roots_cubic({1.0, 0.0, 1.0, 2.0});
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(spinblock::cubic_discriminant({1.0, 0.0, 1.0, 2.0}).value < 0.0);

  // Leading coefficient zero: quadratic w^2 - 3w + 2.
  roots = spinblock::real_roots_cubic({0.0, 1.0, -3.0, 2.0});
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(1.0));
  CHECK(roots[1] == doctest::Approx(2.0));
  CHECK(spinblock::cubic_discriminant({0.0, 1.0, -3.0, 2.0}).quadratic_fallback);

  // Linear: 2w - 4.
  roots = spinblock::real_roots_cubic({0.0, 0.0, 2.0, -4.0});
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(2.0));
}

TEST_CASE("variational state of the single-spin dipole family") {
  ModelSpec spec = make_dqr(1.0);
  spec.params.C = 100.0;
  const auto vs = spinblock::variational_state(spec);
  CHECK(vs.u_min == doctest::Approx(std::sqrt(0.75)).epsilon(1e-6));
  CHECK(vs.alpha == doctest::Approx(10.0 * std::sqrt(0.75)).epsilon(1e-6));
  // Tilt angle: tan(theta) = 2 u gamma / (delta + hyp); at gamma = 1 the spin
  // sits at half polarization.
  CHECK(vs.theta_i[0] == doctest::Approx(std::atan2(2.0 * vs.u_min, 3.0)).epsilon(1e-6));
  CHECK(vs.spin_z == doctest::Approx(-0.5).epsilon(1e-6));

  SUBCASE("normal phase collapses to the vacuum product state") {
    ModelSpec normal = make_dqr(0.3);
    normal.params.C = 50.0;
    const auto v0 = spinblock::variational_state(normal);
    CHECK(v0.u_min == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(v0.spin_z == doctest::Approx(-1.0).epsilon(1e-8));
  }

  SUBCASE("requires the macroscopicity") {
    CHECK_THROWS_AS(spinblock::variational_state(make_dqr(1.0)), std::invalid_argument);
  }
}

TEST_CASE("cat photon distribution carries the analytic mass split") {
  ModelSpec spec = make_dqr(1.0);
  spec.params.C = 100.0;
  const auto vs = spinblock::variational_state(spec);
  const auto dist = spinblock::photon_distribution_variational(vs);
  // alpha^2 = 75: the interference term exp(-2 alpha^2) is invisible.
  CHECK(dist.total == doctest::Approx(1.0).epsilon(1e-12));
  double pe = 0.0, pg = 0.0, mean = 0.0;
  for (size_t n = 0; n < dist.p_excited.size(); ++n) {
    pe += dist.p_excited[n];
    pg += dist.p_ground[n];
    mean += n * (dist.p_excited[n] + dist.p_ground[n]);
  }
  const double s2 = std::sin(vs.theta_i[0]) * std::sin(vs.theta_i[0]);
  CHECK(pe == doctest::Approx(s2).epsilon(1e-10));
  CHECK(pg == doctest::Approx(1.0 - s2).epsilon(1e-10));
  CHECK(mean == doctest::Approx(vs.alpha * vs.alpha).epsilon(1e-8));
  // Sector +1 puts the excited-spin weight on odd photon numbers.
  CHECK(dist.p_excited[2] == 0.0);
  CHECK(dist.p_ground[3] == 0.0);

  SUBCASE("vacuum limit keeps the full mass on (0, ground)") {
    ModelSpec normal = make_dqr(0.2);
    normal.params.C = 10.0;
    auto v0 = spinblock::variational_state(normal);
    const auto d0 = spinblock::photon_distribution_variational(v0);
    CHECK(d0.total == doctest::Approx(2.0).epsilon(1e-12));  // cat arms coincide
    CHECK(d0.p_ground[0] / d0.total == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("sector -1 mirrors the parity assignment") {
    auto flipped = vs;
    flipped.parity_sector = -1;
    const auto d1 = spinblock::photon_distribution_variational(flipped);
    CHECK(d1.p_excited[3] == 0.0);
    CHECK(d1.p_ground[2] == 0.0);
  }
}
