#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <string>
#include <vector>

#include "lgt1d/model.hpp"
#include "lgt1d/pauli.hpp"

namespace lgt1d {

struct SectorKey {
  std::vector<int> color_charge;  // net quark minus antiquark number per color
  std::optional<int> two_i3;      // 2*I3 from flavors 0 and 1, unconstrained if empty

  static SectorKey baryon(int nc, int B, std::optional<int> two_i3 = 0);
  std::string label() const;
  friend bool operator==(const SectorKey&, const SectorKey&) = default;
};

SectorKey sector_of(const ModelParams& p, Bits ket);
Bits trivial_vacuum(const ModelParams& p);

struct SectorBasis {
  SectorKey key;
  int nqubits = 0;
  std::vector<Bits> states;  // ascending

  std::size_t dim() const { return states.size(); }
  // Position of ket in the basis, or -1.
  long index_of(Bits ket) const;
};

SectorBasis enumerate_sector(const ModelParams& p, const SectorKey& key);
// Every sector with a nonempty basis (small models only).
std::vector<SectorBasis> all_sectors(const ModelParams& p, bool with_isospin = true);

using SpMatC = Eigen::SparseMatrix<cplx, Eigen::ColMajor, long>;
using SpMatR = Eigen::SparseMatrix<double, Eigen::ColMajor, long>;

SpMatC assemble_sparse(const PauliOperator& op, const SectorBasis& basis);
// Real part of a matrix that is known to be real; throws otherwise.
SpMatR assemble_sparse_real(const PauliOperator& op, const SectorBasis& basis);

struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns over the sector basis
  Eigen::VectorXd residuals;
  int iterations = 0;
};

struct EigenOptions {
  int k = 6;
  double tol = 1e-10;
  int dense_limit = 512;
  int max_restarts = 400;
  unsigned seed = 20230718u;
};

EigenResult lowest_eigenpairs(const SpMatR& H, const EigenOptions& opt);
// Flips each eigenvector so its largest amplitude (first in basis order on ties) is positive.
void fix_signs(Eigen::MatrixXd& vectors);

// <v|op|v> for a real or complex amplitude vector over a sector basis.
cplx expectation(const PauliOperator& op, const SectorBasis& basis, const Eigen::VectorXcd& v);
double expectation(const PauliOperator& op, const SectorBasis& basis, const Eigen::VectorXd& v);
// diag(V^T op V) for real columns V in one pass over the operator.
Eigen::VectorXd expectations(const PauliOperator& op, const SectorBasis& basis, const Eigen::MatrixXd& V);

struct EnergyParts {
  double mass = 0, kin = 0, el = 0, mu_b = 0, mu_i = 0, penalty = 0;
  double total() const { return mass + kin + el + mu_b + mu_i + penalty; }
  EnergyParts operator-(const EnergyParts& o) const;
  EnergyParts operator*(double s) const;
};

EnergyParts decompose_energy(const Hamiltonian& H, const PauliOperator& penalty, const SectorBasis& basis,
                             const Eigen::VectorXd& v);

double linear_entropy(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXcd& v);
double linear_entropy(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXd& v);
double occupation(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXd& v);
std::vector<double> electric_field_profile(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXd& v);

struct SectorState {
  double energy = 0;
  double isospin2 = 0;       // <I^2>
  double color_casimir = 0;  // 0 for singlets
  double entropy = 0;
  double occupation = 0;
  EnergyParts parts;
  Eigen::VectorXd vector;
};

struct SectorSpectrum {
  SectorBasis basis;
  std::vector<SectorState> states;
};

struct SpectrumOptions {
  int k = 8;
  double tol = 1e-10;
  double singlet_tol = 1e-6;
  int dense_limit = 512;
};

SectorSpectrum sector_spectrum(const ModelParams& p, const SectorKey& key, const SpectrumOptions& opt);

struct HadronTable {
  double E_vac = 0;
  double M_sigma = 0, M_pi = 0;
  double M_Delta = 0, M_DeltaDelta = 0, B_DeltaDelta = 0;
  bool has_isospin = false;
  bool has_deltadelta = false;
  SectorState vacuum, sigma, pi, delta, deltadelta;
};

struct HadronOptions {
  bool baryons = true;
  SpectrumOptions spectrum;
  int max_k = 64;
};

// Nf >= 2: sigma, the I3 = +1 pion, Delta (I = 3/2) and the I = 0 dibaryon.
// Nf = 1: sigma/pi slots hold the lowest excited singlet meson, Delta the lowest baryon.
HadronTable hadron_spectrum(const ModelParams& p, const HadronOptions& opt = {});

std::string hadron_table_json(const ModelParams& p, const HadronTable& t);
std::string sector_spectrum_csv(const SectorSpectrum& s);

}  // namespace lgt1d
