#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lgt1d/pauli.hpp"

namespace lgt1d {

struct ModelParams {
  int nc = 3;
  int nf = 1;
  int L = 1;
  std::vector<double> masses{1.0};  // one per flavor
  double g = 1.0;
  double mu_b = 0.0;
  double mu_i = 0.0;
  double h = 0.0;
  bool mass_shift = true;  // include the +1 that makes every mass term nonnegative

  int nqubits() const { return 2 * L * nc * nf; }
  int block() const { return nc * nf; }  // qubits per staggered site
  int qubit(int n, int f, int c) const { return FermionIndex{n, f, c}.flat(nc, nf); }
  double mass(int f) const { return masses.at(f); }
  void validate() const;
};

// Uniform-mass convenience constructor.
ModelParams make_params(int nc, int nf, int L, double m, double g, double h = 0.0);

// Generalized Gell-Mann generators T^a = lambda^a / 2 in the order
// (for j = 1..nc-1: symmetric(i,j), antisymmetric(i,j) for i < j, then diagonal j),
// which reproduces lambda_1..lambda_8 for nc = 3.
std::vector<Eigen::MatrixXcd> su_n_generators(int nc);
// Indices a whose generator is diagonal.
std::vector<int> cartan_indices(int nc);

PauliOperator charge_operator(const ModelParams& p, int n, int f, int a);
// sum_a Q^(a)_{n,f} Q^(a)_{m,f'} in closed form.
PauliOperator charge_product(const ModelParams& p, int n, int f, int m, int f2);
// sum_{n,f} Q^(a)_{n,f} over the whole lattice.
PauliOperator total_charge(const ModelParams& p, int a);

struct Hamiltonian {
  PauliOperator kin, mass, el, mu_b, mu_i;
  PauliOperator total() const;
};

Hamiltonian build_hamiltonian(const ModelParams& p);
// (h^2/2) (sum over every site and flavor of Q)^2.
PauliOperator build_penalty(const ModelParams& p);
// Total color Casimir sum_a (sum Q^a)^2.
PauliOperator color_casimir(const ModelParams& p);
// Chromo-electric energy density (sum_{m<=n} Q_m)^2 on link n.
PauliOperator link_casimir(const ModelParams& p, int link);
// Total isospin Casimir I^2 built from the first two flavors.
PauliOperator isospin_casimir(const ModelParams& p);
PauliOperator occupation_operator(const ModelParams& p);

// Parses a JSON config with keys nc, nf, l, masses, g, mu_b, mu_i, h.
ModelParams parse_config(const std::string& json_text);
std::string config_to_json(const ModelParams& p);

}  // namespace lgt1d
