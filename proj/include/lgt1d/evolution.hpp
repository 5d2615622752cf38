#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "lgt1d/circuit.hpp"
#include "lgt1d/model.hpp"
#include "lgt1d/sector.hpp"

namespace lgt1d {

struct StateVector {
  int nqubits = 0;
  Eigen::VectorXcd amp;

  static StateVector basis(int n, Bits ket);
  double norm() const { return amp.norm(); }
  double probability(Bits ket) const { return std::norm(amp(static_cast<Eigen::Index>(ket))); }
};

void apply_gate(Eigen::VectorXcd& amp, const Gate& g);
// Runs the circuit gate by gate. An ancilla is attached in |0> and must return to |0>.
StateVector apply_circuit(const StateVector& s, const Circuit& c);
// System unitary (ancilla prepared and projected on |0>); small circuits only.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

Eigen::MatrixXcd dense_operator(const PauliOperator& op);
// exp(-i t op) for Hermitian op.
Eigen::MatrixXcd dense_exponential(const PauliOperator& op, double t);

// Exact and Trotterized propagation restricted to one symmetry sector.
class SectorPropagator {
 public:
  SectorPropagator(const ModelParams& p, SectorBasis basis, const TrotterOptions& opt = {});

  const SectorBasis& basis() const { return basis_; }
  const Eigen::MatrixXcd& hamiltonian() const { return h_; }
  Eigen::VectorXcd exact(const Eigen::VectorXcd& v, double t) const;
  Eigen::MatrixXcd trotter_step(double dt) const;
  Eigen::VectorXcd trotter(const Eigen::VectorXcd& v, double t, int steps) const;
  Eigen::VectorXcd unit(Bits ket) const;

 private:
  struct Spectral {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
  };
  static Spectral diagonalize(const Eigen::MatrixXcd& m);
  static Eigen::MatrixXcd exponential(const Spectral& s, double t);

  SectorBasis basis_;
  Eigen::MatrixXcd h_;
  Spectral h_spec_;
  std::vector<Spectral> blocks_;
};

// exp(-iHt) applied sector by sector.
StateVector exact_evolve(const ModelParams& p, const StateVector& s, double t);
// Full circuit simulation of `steps` Trotter steps.
StateVector trotter_evolve(const ModelParams& p, const StateVector& s, double t, int steps,
                           const TrotterOptions& opt = {});

struct Method {
  enum Kind { Exact, Trotter } kind = Exact;
  int steps = 1;
  static Method exact() { return {Exact, 1}; }
  static Method trotter(int n) { return {Trotter, n}; }
};

// |<target|U(t)|source>|^2, summed over the targets.
double transition_probability(const ModelParams& p, Bits source, const std::vector<Bits>& targets, double t,
                              Method m, const TrotterOptions& opt = {});
double transition_probability(const ModelParams& p, Bits source, Bits target, double t, Method m,
                              const TrotterOptions& opt = {});

EnergyParts energy_parts(const Hamiltonian& H, const SectorBasis& basis, const Eigen::VectorXcd& v);

// ---------------------------------------------------------------- step-count scaling

// N(t) is the smallest step count, no smaller than N at the previous grid time,
// whose fractional error |P_N - P| / max(P, floor) at t is within epsilon.
struct TrotterCriterion {
  double epsilon = 0.1;
  double grid = 0.5;
  double abs_floor = 1e-6;
  int max_steps = 100000;
};

// Probability curves of one transition evaluated on demand.
class TransitionCurve {
 public:
  TransitionCurve(const SectorPropagator& prop, Bits source, Bits target);
  double exact(double t) const;
  double trotter(double t, int steps) const;
  double fractional_error(double t, int steps, const TrotterCriterion& c) const;

 private:
  const SectorPropagator& prop_;
  Eigen::VectorXcd src_;
  Eigen::Index tgt_;
};

struct TrotterReport {
  std::vector<double> t;
  std::vector<int> steps;
};
// times must ascend from zero.
TrotterReport trotter_scaling(const TransitionCurve& curve, const std::vector<double>& times,
                              const TrotterCriterion& c = {});
// Scans the grid up to t.
int required_trotter_steps(const TransitionCurve& curve, double t, const TrotterCriterion& c = {});

struct QuadraticFit {
  double a = 0, b = 0, c = 0;
  double a_half = 0, b_half = 0, c_half = 0;  // 95% interval half-widths
  int points = 0;
};
// Least-squares N = a t^2 + b t + c over the points with t >= t_min.
QuadraticFit fit_quadratic(const std::vector<std::pair<double, double>>& pts, double t_min = 1.0);

// ---------------------------------------------------------------- noise and mitigation

struct NoiseSpec {
  double p = 0;        // two-qubit depolarizing probability after each CNOT
  std::uint64_t seed = 1;
  int ensemble = 64;   // twirled variants
  int workers = 1;
};

using Histogram = std::map<Bits, std::int64_t>;

// Shots spread evenly over twirled variants; each shot is one stochastic error trajectory.
Histogram simulate_noisy_twirled(const Circuit& c, Bits input, const NoiseSpec& noise, std::int64_t shots);

struct PostSelection {
  Histogram kept;
  std::int64_t total = 0;
  std::int64_t retained = 0;
  double retention = 0;
  bool empty = true;
};
PostSelection post_select(const Histogram& h, const ModelParams& p, const SectorKey& key);

// Linear depolarizing correction toward the decohered floor.
double mitigate_depolarizing(double p_phys, double p_mit, double floor = 1.0 / 8.0);

}  // namespace lgt1d
