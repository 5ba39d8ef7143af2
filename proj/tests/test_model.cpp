// test_model.cpp — model construction, validation codes, reduction, and JSON.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "srpt/model.hpp"

using namespace srpt;

namespace {

bool has_code(const std::vector<Violation>& v, const std::string& code) {
  for (const auto& x : v)
    if (x.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("factories produce valid specs for every family") {
  CHECK(validate(make_dqr(0.8)).empty());
  CHECK(validate(make_dqr(0.8, 2.0, 5)).empty());
  CHECK(validate(make_aniso({0.5, 0.7}, {1.0, 1.2}, {0.3, -0.4})).empty());
  CHECK(validate(make_tavis_cummings({0.5, 0.7}, {1.0, 1.2})).empty());
  CHECK(validate(make_biased({0.5}, {1.0}, {0.05})).empty());
  CHECK(validate(make_two_photon(0.6, 0.25)).empty());
  CHECK(validate(make_xyz(0.7, 0.9, 1.0, 0.8, {1.0, 0.5, 0.2})).empty());
  CHECK(validate(make_multimode({0.4, 0.3}, {1.0, 1.0})).empty());
}

TEST_CASE("arity: one axis except rotating-mixture and unreduced two-photon") {
  CHECK(make_dqr(0.5).arity() == 1);
  CHECK(make_aniso({0.5}, {1.0}, {0.3}).arity() == 2);
  CHECK(make_tavis_cummings({0.5}, {1.0}).arity() == 2);
  CHECK(make_biased({0.5}, {1.0}, {0.1}).arity() == 1);
  CHECK(make_two_photon(0.5, 0.1).arity() == 2);
  CHECK(make_two_photon(0.5, 0.1, kInf, true).arity() == 1);
  CHECK(make_xyz(0.5, 0.5, 1.0, 1.0, {0.0, 0.0, 0.0}).arity() == 1);
  CHECK(make_multimode({0.4, 0.3, 0.2}, {1.0}).arity() == 3);
}

TEST_CASE("validation flags the documented violation classes") {
  auto spec = make_dqr(0.5, kInf, 2);
  spec.params.gamma_i_nu[1][0] = 0.9;
  CHECK(has_code(validate(spec), "HomogeneityViolation"));

  spec = make_dqr(0.5);
  spec.params.gamma_prime = 0.1;
  CHECK(has_code(validate(spec), "ForeignParameter"));

  spec = make_dqr(0.5);
  spec.params.epsilon_alpha = {0.2, 0.0, 0.0};
  CHECK(has_code(validate(spec), "ForeignParameter"));

  spec = make_two_photon(0.5, 0.5);
  CHECK(has_code(validate(spec), "StabilityViolation"));
  spec = make_two_photon(0.5, 0.499999);
  CHECK(validate(spec).empty());

  spec = make_xyz(0.5, 0.5, 1.0, 1.0, {0.1, 0.0, 0.0});
  spec.params.delta_i.push_back(1.0);
  spec.params.gamma_i_nu.push_back({0.5});
  spec.params.lambda_i.push_back(1.0);
  CHECK(has_code(validate(spec), "FamilyShapeMismatch"));

  spec = make_dqr(0.5);
  spec.params.beta_Delta = -1.0;
  CHECK(has_code(validate(spec), "NonPositiveScale"));

  spec = make_dqr(0.5);
  spec.params.gamma_i_nu[0][0] = std::nan("");
  CHECK(has_code(validate(spec), "NonFiniteParameter"));

  spec = make_tavis_cummings({0.5}, {1.0});
  spec.params.lambda_i[0] = 0.2;
  CHECK(has_code(validate(spec), "FamilyShapeMismatch"));

  CHECK_THROWS_AS(require_valid(make_two_photon(0.5, 0.7)), std::invalid_argument);
}

TEST_CASE("reduce maps lab parameters onto dimensionless couplings") {
  PhysicalParams p;
  p.omega = {2.0};
  p.Delta_i = {3.0, 3.0};
  p.g_i_nu = {{0.9}, {0.9}};
  p.beta = 4.0;
  const ModelSpec spec = reduce(p, Family::DQR);
  CHECK(spec.params.Delta_ref == doctest::Approx(3.0));
  CHECK(spec.params.delta_i[0] == doctest::Approx(1.0));
  CHECK(spec.params.gamma(0) == doctest::Approx(0.9 / std::sqrt(3.0 * 2.0)));
  CHECK(spec.params.beta_Delta == doctest::Approx(12.0));

  SUBCASE("scale invariance: rescaling all lab energies is a no-op") {
    PhysicalParams q = p;
    const double c = 7.3;
    q.omega[0] *= c;
    for (double& d : q.Delta_i) d *= c;
    for (auto& row : q.g_i_nu)
      for (double& g : row) g *= c;
    q.beta /= c;
    const ModelSpec other = reduce(q, Family::DQR);
    CHECK(other.params.gamma(0) == doctest::Approx(spec.params.gamma(0)));
    CHECK(other.params.delta_i[1] == doctest::Approx(spec.params.delta_i[1]));
    CHECK(other.params.beta_Delta == doctest::Approx(spec.params.beta_Delta));
  }
}

TEST_CASE("mean rules pick different references for inhomogeneous splittings") {
  PhysicalParams p;
  p.omega = {1.0};
  p.Delta_i = {1.0, 3.0};
  p.g_i_nu = {{0.5}, {0.5}};
  const auto abs_rule = reduce(p, Family::AnisoInhomogeneous, MeanRule::ArithmeticAbs);
  const auto rms_rule = reduce(p, Family::AnisoInhomogeneous, MeanRule::Rms);
  CHECK(abs_rule.params.Delta_ref == doctest::Approx(2.0));
  CHECK(rms_rule.params.Delta_ref == doctest::Approx(std::sqrt(5.0)));
  CHECK(abs_rule.params.delta_i[1] == doctest::Approx(1.5));
}

TEST_CASE("unreduce inverts reduce at fixed omega") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (int rep = 0; rep < 20; ++rep) {
    // Detunings with |delta| mean 1: reduce() renormalizes the reference
    // splitting, so only normalized reduced specs round-trip exactly.
    const double d1 = 0.5 + 0.8 * (u(rng) - 0.2);
    ModelSpec spec = make_xyz(u(rng), u(rng), d1, 2.0 - d1, {u(rng), u(rng), u(rng)}, 5.0);
    spec.params.C = 12.5;
    const double omega = u(rng);
    const PhysicalParams p = unreduce(spec.params, spec.family, omega);
    const ModelSpec back = reduce(p, spec.family);
    REQUIRE(back.params.n_spins() == spec.params.n_spins());
    for (int i = 0; i < 2; ++i) {
      CHECK(back.params.gamma(i) == doctest::Approx(spec.params.gamma(i)).epsilon(1e-12));
      CHECK(back.params.delta_i[i] == doctest::Approx(spec.params.delta_i[i]).epsilon(1e-12));
    }
    for (int a = 0; a < 3; ++a)
      CHECK(back.params.epsilon_alpha[a] ==
            doctest::Approx(spec.params.epsilon_alpha[a]).epsilon(1e-12));
    CHECK(back.params.beta_Delta == doctest::Approx(spec.params.beta_Delta).epsilon(1e-12));
  }

  SUBCASE("macroscopicity fixes the reference splitting") {
    ModelSpec spec = make_dqr(0.7, kInf, 4);
    spec.params.C = 20.0;
    const PhysicalParams p = unreduce(spec.params, spec.family, 2.0);
    // C = N Delta / omega => Delta = C omega / N.
    CHECK(p.Delta_i[0] == doctest::Approx(20.0 * 2.0 / 4.0));
    CHECK(p.beta == kInf);
  }

  SUBCASE("without C there is no lab frame to reconstruct") {
    const ModelSpec spec = make_dqr(0.7);
    CHECK_THROWS_AS(unreduce(spec.params, spec.family, 1.0), std::invalid_argument);
  }
}

TEST_CASE("JSON round-trip preserves every field including infinite beta") {
  ModelSpec spec = make_aniso({0.5, 0.7}, {1.0, 1.3}, {0.2, -0.6}, kInf);
  spec.params.C = 64.0;
  const ModelSpec back = model_from_json(to_json(spec));
  CHECK(back.family == spec.family);
  CHECK(back.params.gamma_i_nu == spec.params.gamma_i_nu);
  CHECK(back.params.delta_i == spec.params.delta_i);
  CHECK(back.params.lambda_i == spec.params.lambda_i);
  CHECK(back.params.beta_Delta == kInf);
  REQUIRE(back.params.C.has_value());
  CHECK(*back.params.C == 64.0);

  ModelSpec thermal = make_two_photon(0.4, 0.2, 3.5, true);
  const ModelSpec back2 = model_from_json(to_json(thermal, 2));
  CHECK(back2.params.beta_Delta == doctest::Approx(3.5));
  CHECK(back2.params.gamma_prime == doctest::Approx(0.2));
  CHECK(back2.two_photon_reduced);
  CHECK_FALSE(back2.params.C.has_value());
}

TEST_CASE("family names round-trip and reject unknowns") {
  for (Family f : {Family::DQR, Family::AnisoInhomogeneous, Family::TavisCummings,
                   Family::Biased, Family::TwoPhoton, Family::TwoQubitXYZ, Family::Multimode})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("NoSuchFamily"), std::invalid_argument);
}
