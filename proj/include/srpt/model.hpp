// model.hpp — spin-boson model descriptions: physical inputs, reduced couplings,
// family tags, validation, and JSON round-trip.
#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace srpt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Model families. All share one reduced-parameter layout; the family tag selects
// the coupling structure of the Hamiltonian and of the variational potential.
enum class Family {
  DQR,                 // homogeneous dipole coupling, N spins, one mode
  AnisoInhomogeneous,  // per-spin rotating/counter-rotating split, one mode
  TavisCummings,       // rotating terms only (lambda = 0), one mode
  Biased,              // dipole coupling plus static transverse bias, one mode
  TwoPhoton,           // homogeneous dipole plus two-photon coupling, one mode
  TwoQubitXYZ,         // two spins, exchange-coupled, one mode
  Multimode,           // homogeneous dipole coupling to M modes
};

// Rule used to pick the reference splitting from an inhomogeneous set.
enum class MeanRule { ArithmeticAbs, Rms };

// Bare Hamiltonian inputs in laboratory units.
struct PhysicalParams {
  std::vector<double> omega;                // mode frequencies, one per mode
  std::vector<double> Delta_i;              // level splittings, one per spin
  std::vector<std::vector<double>> g_i_nu;  // dipole couplings, N rows x M cols
  std::vector<double> lambda_i;             // anisotropy ratios (empty = all 1)
  std::vector<double> e_i;                  // static biases (empty = all 0)
  double g_prime = 0.0;                     // two-photon coupling
  std::array<double, 3> J_alpha{0.0, 0.0, 0.0};  // two-spin exchange (x, y, z)
  double beta = kInf;                       // inverse temperature

  int n_spins() const { return static_cast<int>(Delta_i.size()); }
  int n_modes() const { return static_cast<int>(omega.size()); }
};

// Dimensionless couplings. Energies are measured against the reference
// splitting Delta_ref; gamma_i_nu = g_i_nu / sqrt(Delta_ref * omega_nu).
struct ReducedParams {
  std::vector<std::vector<double>> gamma_i_nu;  // N rows x M cols
  std::vector<double> delta_i;                  // Delta_i / Delta_ref
  std::vector<double> lambda_i;                 // anisotropy ratios
  std::vector<double> epsilon_bias_i;           // e_i / Delta_ref
  double gamma_prime = 0.0;                     // g_prime / omega
  std::array<double, 3> epsilon_alpha{0.0, 0.0, 0.0};  // J_alpha / Delta_ref
  double beta_Delta = kInf;                     // beta * Delta_ref; kInf = zero temperature
  std::optional<double> C;                      // macroscopicity, set for finite-size runs
  double Delta_ref = 1.0;                       // reference splitting (lab units)
  MeanRule mean_rule = MeanRule::ArithmeticAbs;

  int n_spins() const { return static_cast<int>(delta_i.size()); }
  int n_modes() const {
    return gamma_i_nu.empty() ? 0 : static_cast<int>(gamma_i_nu.front().size());
  }
  // Single-mode accessors; valid by construction after validate().
  double gamma(int i) const { return gamma_i_nu[i][0]; }
  double gamma_mode(int nu) const { return gamma_i_nu[0][nu]; }
  double lambda(int i) const { return lambda_i.empty() ? 1.0 : lambda_i[i]; }
  double bias(int i) const { return epsilon_bias_i.empty() ? 0.0 : epsilon_bias_i[i]; }
};

struct ModelSpec {
  Family family = Family::DQR;
  ReducedParams params;
  bool two_photon_reduced = false;  // TwoPhoton only: use the one-variable reduced potential

  // Number of order-parameter components the variational potential takes.
  int arity() const;
};

struct Violation {
  std::string code;     // stable machine-readable identifier
  std::string message;  // human-readable detail
};

// Dimensionless form of a physical model. Throws std::invalid_argument on
// malformed shapes (empty modes, ragged coupling matrix, zero reference).
ModelSpec reduce(const PhysicalParams& p, Family family,
                 MeanRule rule = MeanRule::ArithmeticAbs);

// Inverse of reduce for a uniform mode frequency omega. Requires r.C set:
// the reference splitting follows from Delta_ref = C * omega / N (per-pair
// macroscopicity for the two-qubit family). reduce() maps the result back to
// r up to rounding.
PhysicalParams unreduce(const ReducedParams& r, Family family, double omega);

// Family-shape and stability checks. Empty result means the spec is usable.
std::vector<Violation> validate(const ModelSpec& spec);

// Throws std::invalid_argument listing every violation code.
void require_valid(const ModelSpec& spec);

std::string family_name(Family f);
Family family_from_name(const std::string& name);
std::string mean_rule_name(MeanRule r);

// JSON round-trip. Infinite beta_Delta is encoded as the string "inf".
std::string to_json(const ModelSpec& spec, int indent = -1);
ModelSpec model_from_json(const std::string& text);

// ---- convenience constructors (reduced units) ----

ModelSpec make_dqr(double gamma, double beta_Delta = kInf, int n_spins = 1);
ModelSpec make_aniso(const std::vector<double>& gamma_i, const std::vector<double>& delta_i,
                     const std::vector<double>& lambda_i, double beta_Delta = kInf);
ModelSpec make_tavis_cummings(const std::vector<double>& gamma_i,
                              const std::vector<double>& delta_i, double beta_Delta = kInf);
ModelSpec make_biased(const std::vector<double>& gamma_i, const std::vector<double>& delta_i,
                      const std::vector<double>& epsilon_i, double beta_Delta = kInf);
ModelSpec make_two_photon(double gamma, double gamma_prime, double beta_Delta = kInf,
                          bool reduced = false);
ModelSpec make_xyz(double gamma_1, double gamma_2, double delta_1, double delta_2,
                   const std::array<double, 3>& epsilon_alpha, double beta_Delta = kInf);
ModelSpec make_multimode(const std::vector<double>& gamma_nu, const std::vector<double>& delta_i,
                         double beta_Delta = kInf);

}  // namespace srpt
