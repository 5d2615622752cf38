#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgt1d/model.hpp"
#include "lgt1d/sector.hpp"

namespace lgt1d {

// Symmetric matrix of H plus the color penalty over an orthonormal basis.
struct ProjectedHamiltonian {
  Eigen::MatrixXd h;
  int dim() const { return static_cast<int>(h.rows()); }
};

ProjectedHamiltonian projected_from_matrix(Eigen::MatrixXd h);
// Over the computational states of a sector.
ProjectedHamiltonian project_hamiltonian(const ModelParams& p, const SectorBasis& basis);
// Over explicit real vectors (columns in the sector basis); throws unless orthonormal.
ProjectedHamiltonian project_hamiltonian(const ModelParams& p, const SectorBasis& basis, const Eigen::MatrixXd& vectors);

double rayleigh_quotient(const ProjectedHamiltonian& hp, const Eigen::VectorXd& a);

struct ZoomState {
  Eigen::VectorXd a;  // current coefficients
  int z = 0;
  double eta = 0;
  int K = 2;
};

// Step a_alpha by sum_i w_i q_i with w_i = 2^(i-K-z), the top bit negative.
std::vector<double> bit_weights(int K, int z);

// Binary variable alpha*K + (i-1).
struct QuboMatrix {
  Eigen::MatrixXd Q;  // symmetric; F(x) = x^T Q x + constant
  double constant = 0;
  int n_coeffs = 0;
  int K = 0;
  int size() const { return static_cast<int>(Q.rows()); }
};

using BitVector = std::vector<std::uint8_t>;

QuboMatrix build_qubo(const ProjectedHamiltonian& hp, const ZoomState& zs);
double qubo_value(const QuboMatrix& q, const BitVector& x);
Eigen::VectorXd decode(const ZoomState& zs, const BitVector& x);

enum class SamplerKind { Exhaustive, Annealing };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::Exhaustive;
  int max_exhaustive_bits = 24;  // exact enumeration up to this size
  int block_bits = 12;           // block coordinate minimization above it
  std::uint64_t seed = 1;
  int reads = 1000;
  int sweeps = 20;
  double t_hot = 1.0;    // temperatures relative to the largest |Q_ij|
  double t_cold = 1e-3;
  int workers = 1;       // annealing chains run concurrently
};

struct Sample {
  BitVector x;
  double value = 0;
  bool degenerate = false;  // Q is identically zero
};

// Exhaustive: global minimum up to max_exhaustive_bits, block coordinate minimization above.
// Annealing: best of `reads` Metropolis chains on a geometric temperature ladder.
Sample sample_qubo(const QuboMatrix& q, const SamplerConfig& cfg);

// When eta follows the best energy: only at restarts, or after every zoom step.
enum class EtaSchedule { PerIteration, PerStep };

struct ZoomConfig {
  int K = 2;
  double eta0 = 0;
  EtaSchedule eta_schedule = EtaSchedule::PerIteration;
  int zoom_steps = 14;
  std::vector<int> start_z{0, 4, 8};  // one entry per restart iteration
  SamplerConfig sampler;
  int divergence_patience = 10;
};

struct ZoomRecord {
  int iteration = 0;
  int z = 0;
  double eta = 0;
  double energy = 0;
};

struct ZoomResult {
  double energy = 0;
  Eigen::VectorXd coefficients;  // normalized
  std::vector<ZoomRecord> trajectory;
  std::vector<double> iteration_energy;  // best energy after each restart iteration
  std::vector<Eigen::VectorXd> iteration_coefficients;
  bool diverged = false;
};

ZoomResult zoom_iterate(const ProjectedHamiltonian& hp, const ZoomConfig& cfg);

// P H P + shift (1 - P) with P projecting off the found vectors.
ProjectedHamiltonian deflate(const ProjectedHamiltonian& hp, const Eigen::MatrixXd& found,
                             std::optional<double> shift = std::nullopt);
double default_deflation_shift(const ProjectedHamiltonian& hp);

std::string qubo_triplets(const QuboMatrix& q);
std::string trajectory_csv(const ZoomResult& r);

}  // namespace lgt1d
