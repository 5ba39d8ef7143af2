// test_ed.cpp — exact diagonalization against analytic spectra: the decoupled
// limit, the rotating-wave ladder, exact singlet eigenstates, parity algebra,
// and the variational upper bound from the mean-field surface.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "srpt/ed.hpp"
#include "srpt/landau.hpp"
#include "srpt/model.hpp"

using namespace srpt;

namespace {

PhysicalParams lab(const ModelSpec& spec, double C, double omega = 1.0) {
  auto r = spec.params;
  r.C = C;
  return unreduce(r, spec.family, omega);
}

}  // namespace

TEST_CASE("decoupled limit: exact oscillator-plus-spin spectrum and trace") {
  PhysicalParams p;
  p.omega = {1.3};
  p.Delta_i = {0.7};
  p.g_i_nu = {{0.0}};
  const auto m = ed::build_dense(p, Family::DQR, {{6}});
  REQUIRE(m.dim() == 14);
  CHECK(m.parity_commutes);

  // Eigenvalues must be exactly n*omega +- Delta.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.H);
  std::vector<double> expect;
  for (int n = 0; n <= 6; ++n) {
    expect.push_back(n * 1.3 - 0.7);
    expect.push_back(n * 1.3 + 0.7);
  }
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < 14; ++k)
    CHECK(es.eigenvalues()(k) == doctest::Approx(expect[k]).epsilon(1e-13));

  const auto g = ed::ground_state(m);
  CHECK(g.energy == doctest::Approx(-0.7).epsilon(1e-13));
  CHECK(g.photon_number[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(g.spin_z == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g.residual < 1e-12);

  // log Z against the closed product form at beta = 0.8.
  const double beta = 0.8;
  const auto z = ed::partition_function(m, beta);
  double bos = 0.0;
  for (int n = 0; n <= 6; ++n) bos += std::exp(-beta * 1.3 * n);
  const double ref = std::log(bos) + std::log(2.0 * std::cosh(beta * 0.7));
  CHECK(z.log_Z == doctest::Approx(ref).epsilon(1e-12));
  CHECK(z.ground_energy == doctest::Approx(-0.7).epsilon(1e-12));
}

TEST_CASE("rotating-wave coupling reproduces the dressed-ladder energies") {
  // At lambda = 0 the excitation number is conserved; each sector k >= 1 is the
  // 2x2 block [[(k-1) w + D, g sqrt(k)], [g sqrt(k), k w - D]].
  PhysicalParams p;
  p.omega = {1.0};
  p.Delta_i = {0.5};  // resonant: level spacing 2 Delta = omega
  p.g_i_nu = {{0.35}};
  p.lambda_i = {0.0};
  const auto m = ed::build_dense(p, Family::TavisCummings, {{40}});
  CHECK(m.parity_commutes);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.H);
  std::vector<double> expect{-0.5};  // |0, down>
  for (int k = 1; k <= 30; ++k) {
    const double mid = (2.0 * k - 1.0) * 0.5;   // ((k-1) w + k w)/2
    const double det = 0.5 - 0.5 * 1.0;         // Delta - omega/2 = 0 at resonance
    const double rabi = std::hypot(det, 0.35 * std::sqrt(double(k)));
    expect.push_back(mid - rabi);
    expect.push_back(mid + rabi);
  }
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < 40; ++k)  // away from the truncation edge
    CHECK(es.eigenvalues()(k) == doctest::Approx(expect[k]).epsilon(1e-12));
}

TEST_CASE("parity commutation follows the coupling structure") {
  PhysicalParams dip;
  dip.omega = {1.0};
  dip.Delta_i = {1.0};
  dip.g_i_nu = {{0.8}};
  CHECK(ed::build_dense(dip, Family::DQR, {{8}}).parity_commutes);

  auto biased = dip;
  biased.e_i = {0.05};
  CHECK_FALSE(ed::build_dense(biased, Family::Biased, {{8}}).parity_commutes);

  auto tp = dip;
  tp.g_prime = 0.2;
  CHECK_FALSE(ed::build_dense(tp, Family::TwoPhoton, {{8}}).parity_commutes);
  // Even without the dipole channel the quadratic term flips the spin while
  // preserving photon parity, so the joint grading still fails.
  tp.g_i_nu = {{0.0}};
  CHECK_FALSE(ed::build_dense(tp, Family::TwoPhoton, {{8}}).parity_commutes);

  PhysicalParams xyz;
  xyz.omega = {1.0};
  xyz.Delta_i = {1.0, 1.0};
  xyz.g_i_nu = {{0.5}, {0.5}};
  xyz.J_alpha = {0.3, 0.2, 0.1};
  CHECK(ed::build_dense(xyz, Family::TwoQubitXYZ, {{8}}).parity_commutes);

  SUBCASE("parity operator squares to one and grades the basis") {
    const auto m = ed::build_dense(dip, Family::DQR, {{8}});
    for (double s : m.parity_diag) CHECK(std::abs(s) == 1.0);
    CHECK(m.parity_diag[0] == -1.0);  // |0 photons, spin down>... bit set
    // H leaves each sector invariant: H(i,j) = 0 whenever parities differ.
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j)
        if (m.parity_diag[i] != m.parity_diag[j]) CHECK(m.H(i, j) == 0.0);
  }
}

TEST_CASE("hamiltonians are exactly symmetric") {
  PhysicalParams p;
  p.omega = {1.0, 1.4};
  p.Delta_i = {0.9, 1.1};
  p.g_i_nu = {{0.4, 0.2}, {0.4, 0.2}};
  const auto m = ed::build_dense(p, Family::Multimode, {{5, 4}});
  REQUIRE(m.dim() == 5 * 6 * 4);  // (n_max+1) per mode times 2^N... checked below
  CHECK((m.H - m.H.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("deep superradiant cat: parity-pure ground state at the mean-field load") {
  // Macroscopicity 64 at unit coupling: <n> = C u^2 = 48 photons.
  auto spec = make_dqr(1.0);
  const auto p = lab(spec, 64.0);
  CHECK(p.Delta_i[0] == doctest::Approx(64.0));
  CHECK(p.g_i_nu[0][0] == doctest::Approx(8.0));  // gamma sqrt(omega Delta)

  const int cut = ed::suggest_n_max(48.0);
  const auto m = ed::build_dense(p, Family::DQR, {{cut}, 2000});
  const auto g = ed::ground_state(m);

  CHECK(std::abs(g.parity) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.photon_number[0] == doctest::Approx(48.0).epsilon(2.0 / 48.0));
  CHECK(g.spin_z == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(g.residual < 1e-10);

  // Variational bound: the product-state surface lies above the true ground
  // energy, within O(1) fluctuation corrections.
  const double e_var = 64.0 * landau::minimize_reduced(spec).phi_min;
  CHECK(g.energy <= e_var + 1e-9);
  CHECK(g.energy >= e_var - 3.0);

  SUBCASE("unblocked solve finds the same energy") {
    const auto g2 = ed::ground_state(m, /*use_parity_blocks=*/false);
    CHECK(g2.energy == doctest::Approx(g.energy).epsilon(1e-12));
  }

  SUBCASE("joint distribution is normalized and parity-graded") {
    const auto [pe, pg] = ed::spin_resolved_distribution(m, g.state);
    REQUIRE(pe.size() == static_cast<size_t>(cut) + 1);
    const double mass = std::accumulate(pe.begin(), pe.end(), 0.0) +
                        std::accumulate(pg.begin(), pg.end(), 0.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    // Parity-pure state: each photon number holds only one spin branch.
    for (size_t n = 0; n < pe.size(); ++n) CHECK(pe[n] * pg[n] < 1e-20);
  }
}

TEST_CASE("identical exchange-locked pair holds an exact singlet ground state") {
  // Equal splittings and isotropic exchange: the spin singlet decouples from
  // the mode entirely, E0 = -3 J at any coupling.
  auto spec = make_xyz(0.5, 0.5, 1.0, 1.0, {1.0, 1.0, 1.0});
  const auto p = lab(spec, 12.0);
  CHECK(p.Delta_i[0] == doctest::Approx(12.0));
  const auto m = ed::build_dense(p, Family::TwoQubitXYZ, {{30}});
  const auto g = ed::ground_state(m);
  CHECK(g.energy == doctest::Approx(-36.0).epsilon(1e-12));
  CHECK(g.photon_number[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(g.spin_z == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("truncation study converges from below the suggested cutoff") {
  auto spec = make_dqr(1.0);
  const auto p = lab(spec, 24.0);  // <n> = 18
  const auto study =
      ed::truncation_study(p, Family::DQR, {40, 60, 80, 100}, /*beta=*/2.0);
  REQUIRE(study.ground_energy.size() == 4);
  // Shifts shrink monotonically and end tiny.
  for (size_t k = 2; k < study.cutoffs.size(); ++k) {
    const double prev = std::abs(study.ground_energy[k - 1] - study.ground_energy[k - 2]);
    const double cur = std::abs(study.ground_energy[k] - study.ground_energy[k - 1]);
    CHECK(cur <= prev + 1e-15);
  }
  CHECK(study.ground_shift_last < 1e-8);
  CHECK(study.log_Z.size() == 4);
  CHECK(study.log_Z_shift_last < 1e-6);

  CHECK(ed::suggest_n_max(0.0) == 40);
  CHECK(ed::suggest_n_max(100.0) == 220);
  CHECK(ed::suggest_n_max(48.0) >= 48 + 12 * 6);
}

TEST_CASE("dimension guard refuses oversized assemblies") {
  PhysicalParams p;
  p.omega = {1.0};
  p.Delta_i = {1.0};
  p.g_i_nu = {{0.5}};
  CHECK_THROWS_AS(ed::build_dense(p, Family::DQR, {{4000}, 2000}), std::invalid_argument);
}
