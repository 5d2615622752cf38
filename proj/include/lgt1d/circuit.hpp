#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgt1d/model.hpp"
#include "lgt1d/pauli.hpp"

namespace lgt1d {

enum class GateKind { RZ, RY, H, X, Y, Z, CNOT, CRY };

struct Control {
  int qubit = 0;
  bool on_one = true;  // false: fires when the control reads 0
  friend bool operator==(const Control&, const Control&) = default;
};

struct Gate {
  GateKind kind = GateKind::X;
  int target = 0;
  int control = -1;  // CNOT only
  double angle = 0;  // RZ, RY, CRY
  std::vector<Control> controls;  // CRY only

  static Gate rz(int q, double a) { return {GateKind::RZ, q, -1, a, {}}; }
  static Gate ry(int q, double a) { return {GateKind::RY, q, -1, a, {}}; }
  static Gate h(int q) { return {GateKind::H, q, -1, 0, {}}; }
  static Gate x(int q) { return {GateKind::X, q, -1, 0, {}}; }
  static Gate y(int q) { return {GateKind::Y, q, -1, 0, {}}; }
  static Gate z(int q) { return {GateKind::Z, q, -1, 0, {}}; }
  static Gate cnot(int c, int t) { return {GateKind::CNOT, t, c, 0, {}}; }
  static Gate cry(std::vector<Control> ctrl, int t, double a) { return {GateKind::CRY, t, -1, a, std::move(ctrl)}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

// Receives gates as a constructor produces them.
class GateSink {
 public:
  virtual ~GateSink() = default;
  virtual void emit(const Gate& g) = 0;
  virtual void add_phase(double phi) { (void)phi; }
};

// Unitary = exp(i global_phase) * (product of gates in list order).
struct Circuit : GateSink {
  int nqubits = 0;
  bool ancilla = false;  // one extra qubit at index nqubits, starts and ends in |0>
  double global_phase = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n, bool anc = false) : nqubits(n), ancilla(anc) {}
  int width() const { return nqubits + (ancilla ? 1 : 0); }
  void emit(const Gate& g) override;
  void add_phase(double phi) override { global_phase += phi; }
  void append(const Circuit& o);
  Circuit inverse() const;
  void validate() const;
};

struct ResourceCount {
  std::int64_t rz = 0, ry = 0, hadamard = 0, cnot = 0, pauli = 0, cry = 0;
  ResourceCount& operator+=(const ResourceCount& o);
  friend ResourceCount operator+(ResourceCount a, const ResourceCount& b) { return a += b; }
  friend bool operator==(const ResourceCount&, const ResourceCount&) = default;
};

// Tallies gates without storing them. CRY is tallied after expansion.
class GateCounter : public GateSink {
 public:
  void emit(const Gate& g) override;
  const ResourceCount& counts() const { return c_; }

 private:
  ResourceCount c_;
};

enum class TermKind { Mass, MuB, MuI, Kinetic, Electric };
std::string term_name(TermKind k);
TermKind parse_term(const std::string& s);

struct TrotterOptions {
  std::vector<TermKind> order{TermKind::Mass, TermKind::MuB, TermKind::MuI, TermKind::Electric, TermKind::Kinetic};
  std::optional<bool> kinetic_ancilla;  // unset: ancilla iff nc*nf >= 4
  bool cancel_cnots = false;
  bool skip_zero_chemical = true;  // omit mu circuits when the potential is zero
};

bool default_kinetic_ancilla(const ModelParams& p);

// Term circuits. Every emitted rotation angle is exact; for L = 1 the kinetic
// circuit equals exp(-i H_kin t), for larger L it is exact per link.
void emit_mass(const ModelParams& p, double t, GateSink& out);
void emit_mu_b(const ModelParams& p, double t, GateSink& out);
void emit_mu_i(const ModelParams& p, double t, GateSink& out);
void emit_kinetic(const ModelParams& p, double t, bool use_ancilla, GateSink& out);
void emit_electric(const ModelParams& p, double t, GateSink& out);
void emit_term(const ModelParams& p, TermKind k, double t, const TrotterOptions& opt, GateSink& out);

Circuit trotter_mass_circuit(const ModelParams& p, double t);
Circuit trotter_mu_b_circuit(const ModelParams& p, double t);
Circuit trotter_mu_i_circuit(const ModelParams& p, double t);
Circuit trotter_kinetic_circuit(const ModelParams& p, double t, std::optional<bool> use_ancilla = std::nullopt);
Circuit trotter_electric_circuit(const ModelParams& p, double t);
// One first-order step: terms applied in opt.order.
Circuit trotter_step_circuit(const ModelParams& p, double t, const TrotterOptions& opt = {});
// n repetitions of the step with size t/n.
Circuit trotter_circuit(const ModelParams& p, double t, int steps, const TrotterOptions& opt = {});

// The operators whose exponentials the term circuits realize one after another,
// in emission order. Summing the blocks of a term reproduces that term of H.
struct TermBlock {
  TermKind kind;
  PauliOperator op;
};
std::vector<TermBlock> term_blocks(const ModelParams& p, TermKind k);
std::vector<TermBlock> trotter_blocks(const ModelParams& p, const TrotterOptions& opt = {});

// Removes pairs of identical CNOTs with no gate touching either qubit in between.
// Returns the number of gates removed.
int cancel_adjacent_cnots(Circuit& c);

// State preparation for the Nc = 3, Nf = 1, L = 1 color-singlet space.
struct VqeAngles {
  double theta = 0, theta0 = 0, theta1 = 0, theta00 = 0, theta01 = 0, theta10 = 0, theta11 = 0;
};
// Dependent angles from the three free ones; throws if the singlet constraint has no solution.
VqeAngles vqe_angles(double theta, double theta1, double theta11);
Circuit vqe_singlet_prep(double theta, double theta1, double theta11);

// Clifford conjugation g^dagger P g for H, X, Y, Z and CNOT.
PauliString conjugate(const PauliString& p, const Gate& g);
PauliOperator conjugate(const PauliOperator& op, const Gate& g);
PauliOperator conjugate_by_cnot(const PauliOperator& op, int control, int target);

// CRY gates expanded into RY and CNOT; consecutive CRYs on one target with the
// same control qubits merge into a single uniformly controlled rotation.
Circuit decompose(const Circuit& c);
ResourceCount count_gates(const Circuit& c);
ResourceCount count_gates_raw(const Circuit& c);

struct ResourceReport {
  ResourceCount mass, mu_b, mu_i, kin, el;
  bool kinetic_ancilla = false;
  ResourceCount total() const { return mass + mu_b + mu_i + kin + el; }
  friend bool operator==(const ResourceReport&, const ResourceReport&) = default;
};
ResourceReport resource_count_closed_form(int nc, int nf, int L);
// Streams every term circuit of one step through a counter.
ResourceReport resource_count_constructed(int nc, int nf, int L);
std::string resource_report_json(int nc, int nf, int L, const ResourceReport& closed, const ResourceReport& built);

// Each CNOT wrapped by a random Pauli pair that leaves the ideal unitary unchanged.
Circuit pauli_twirl(const Circuit& c, std::uint64_t seed);

std::string circuit_to_text(const Circuit& c);
Circuit circuit_from_text(const std::string& text);

}  // namespace lgt1d
