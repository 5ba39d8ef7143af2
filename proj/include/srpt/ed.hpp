// ed.hpp — truncated-Fock exact diagonalization of the physical spin-boson
// Hamiltonians. Dense, deterministic, and parity-aware; the independent check
// on everything the mean-field layer predicts.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "srpt/model.hpp"

namespace srpt::ed {

struct HilbertSpec {
  std::vector<int> n_max;  // per-mode photon cutoff (inclusive); one entry per mode
  int max_dim = 2000;      // refuse to assemble above this dimension
};

// Basis layout: index = b * 2^N + s. The boson multi-index b runs with mode 0
// slowest; spin bit i of s is 0 for sigma_z = +1 (up), 1 for down. All
// Hamiltonians below are real symmetric in this basis.
struct DenseModel {
  Eigen::MatrixXd H;
  std::vector<double> parity_diag;  // (-1)^(photons + excited spins) per state
  HilbertSpec hilbert;
  int n_spins = 0;
  int n_modes = 0;
  bool parity_commutes = false;  // true iff H has no entries across parity sectors
  Eigen::Index dim() const { return H.rows(); }
};

// Assembles H = sum_nu omega_nu n_nu + sum_i Delta_i sigma_z^i + couplings:
// dipole (g/sqrt(N)) (a+a+)sigma_x with the counter-rotating weight lambda,
// static bias e_i sigma_x, two-photon g'(a^2+a+^2)sigma_x, pairwise exchange
// J_alpha (no 1/sqrt(N) for the exchange-coupled pair), or several modes.
// Throws when the dimension exceeds hilbert.max_dim.
DenseModel build_dense(const PhysicalParams& p, Family family, const HilbertSpec& hilbert);

struct GroundResult {
  double energy = 0.0;
  Eigen::VectorXd state;
  double parity = 0.0;  // +-1 when parity-pure, expectation value otherwise
  std::vector<double> photon_number;  // <n_nu> per mode
  double spin_z = 0.0;                // (1/N) sum_i <sigma_z^i>
  double residual = 0.0;              // ||H v - E v||_2 / ||H||_F
};

// Lowest eigenstate. When the Hamiltonian commutes with the joint parity and
// blocks are requested, each sector is solved separately, so the returned
// state is parity-pure even when the two sectors are degenerate to rounding.
GroundResult ground_state(const DenseModel& m, bool use_parity_blocks = true);

// Joint photon-spin distribution of a state for a single spin and mode:
// (P(n, excited), P(n, ground)) for n = 0..n_max.
std::pair<std::vector<double>, std::vector<double>> spin_resolved_distribution(
    const DenseModel& m, const Eigen::VectorXd& psi);

struct PartitionResult {
  double log_Z = 0.0;
  double ground_energy = 0.0;
  int dim = 0;
};

// Full-spectrum trace of exp(-beta H) within the truncation, evaluated in log
// space. beta must be finite and positive.
PartitionResult partition_function(const DenseModel& m, double beta);

struct TruncationStudy {
  std::vector<int> cutoffs;           // applied to every mode
  std::vector<double> ground_energy;  // per cutoff
  std::vector<double> log_Z;          // per cutoff; empty when beta is infinite
  double ground_shift_last = 0.0;     // |E0(last) - E0(previous)|
  double log_Z_shift_last = 0.0;
};

// Convergence-in-cutoff probe; the last-step shifts are the truncation error
// estimates the bounds checks consume.
TruncationStudy truncation_study(const PhysicalParams& p, Family family,
                                 const std::vector<int>& cutoffs, double beta,
                                 int max_dim = 4000);

// Cutoff heuristic for a coherent-state load of x photons: a 12-sigma
// Poisson tail, floored at 40.
int suggest_n_max(double expected_photons);

}  // namespace srpt::ed
