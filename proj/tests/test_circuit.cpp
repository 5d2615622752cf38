#include <gtest/gtest.h>

#include <random>

#include "lgt1d/circuit.hpp"
#include "lgt1d/evolution.hpp"
#include "lgt1d/sector.hpp"
#include "oracle.hpp"

using namespace lgt1d;

namespace {

double max_diff(const oracle::Mat& a, const oracle::Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

oracle::Vec apply_blocks(const std::vector<TermBlock>& blocks, double t, oracle::Vec v) {
  for (const auto& b : blocks) v = oracle::orbit_exponential(b.op, t, v);
  return v;
}

// Exact unitary of the ordered block product, column by column.
oracle::Mat block_unitary(const std::vector<TermBlock>& blocks, int n, double t) {
  oracle::Mat U(1 << n, 1 << n);
  for (int j = 0; j < (1 << n); ++j) {
    oracle::Vec e = oracle::Vec::Zero(1 << n);
    e(j) = 1;
    U.col(j) = apply_blocks(blocks, t, e);
  }
  return U;
}

oracle::Vec run(const Circuit& c, const oracle::Vec& v) {
  StateVector s{c.nqubits, v};
  return apply_circuit(s, c).amp;
}

oracle::Mat gate_matrix(const Gate& g, int n) {
  Circuit c(n);
  c.emit(g);
  return circuit_unitary(c);
}

PauliOperator sum_blocks(const std::vector<TermBlock>& blocks, int n) {
  PauliOperator s(n);
  for (const auto& b : blocks) s += b.op;
  return s.prune();
}

const std::vector<TermKind> kAllTerms{TermKind::Mass, TermKind::MuB, TermKind::MuI, TermKind::Kinetic,
                                      TermKind::Electric};

Circuit term_circuit(const ModelParams& p, TermKind k, double t) {
  Circuit c(p.nqubits(), k == TermKind::Kinetic && default_kinetic_ancilla(p));
  emit_term(p, k, t, TrotterOptions{}, c);
  return c;
}

ModelParams with_potentials(ModelParams p) {
  p.mu_b = 0.37;
  p.mu_i = -0.21;
  return p;
}

}  // namespace

TEST(TermBlocks, SumToTheHamiltonianTerms) {
  for (auto p : {make_params(3, 1, 1, 0.8, 1.1), make_params(3, 2, 1, 1.0, 1.0), make_params(2, 3, 2, 1.3, 0.7),
                 make_params(2, 1, 3, 1.0, 1.0)}) {
    p = with_potentials(p);
    const Hamiltonian H = build_hamiltonian(p);
    const int n = p.nqubits();
    EXPECT_TRUE((sum_blocks(term_blocks(p, TermKind::Mass), n) - H.mass).prune(1e-12).empty());
    EXPECT_TRUE((sum_blocks(term_blocks(p, TermKind::MuB), n) - H.mu_b).prune(1e-12).empty());
    EXPECT_TRUE((sum_blocks(term_blocks(p, TermKind::MuI), n) - H.mu_i).prune(1e-12).empty());
    EXPECT_TRUE((sum_blocks(term_blocks(p, TermKind::Kinetic), n) - H.kin).prune(1e-12).empty());
    EXPECT_TRUE((sum_blocks(term_blocks(p, TermKind::Electric), n) - H.el).prune(1e-12).empty());
  }
}

// Full unitaries for six qubits; every term circuit equals its ordered block exponentials.
TEST(TermCircuits, DenseUnitaryMatchesBlockExponentials) {
  const ModelParams p = with_potentials(make_params(3, 1, 1, 0.9, 1.2));
  for (double t : {0.3, 1.7}) {
    for (TermKind k : kAllTerms) {
      const oracle::Mat U = circuit_unitary(term_circuit(p, k, t));
      EXPECT_LT(max_diff(U, block_unitary(term_blocks(p, k), p.nqubits(), t)), 1e-12) << term_name(k);
    }
  }
}

TEST(TermCircuits, SingleLinkTermsAreExactExponentials) {
  const ModelParams p = make_params(3, 1, 1, 0.9, 1.2);
  oracle::Model M;
  M.m = {0.9};
  M.g = 1.2;
  const oracle::Parts O = oracle::hamiltonian(M);
  const double t = 0.8;
  EXPECT_LT(max_diff(circuit_unitary(trotter_kinetic_circuit(p, t)), oracle::expm_hermitian(O.kin, t)), 1e-12);
  EXPECT_LT(max_diff(circuit_unitary(trotter_mass_circuit(p, t)), oracle::expm_hermitian(O.mass, t)), 1e-12);
  EXPECT_LT(max_diff(circuit_unitary(trotter_electric_circuit(p, t)), oracle::expm_hermitian(O.el, t)), 1e-12);
}

// Twelve qubits with an ancilla: compare on random states.
TEST(TermCircuits, ProbesMatchBlockExponentialsForTwoFlavors) {
  const ModelParams p = with_potentials(make_params(3, 2, 1, 1.0, 1.0));
  for (TermKind k : kAllTerms) {
    const Circuit c = term_circuit(p, k, 0.6);
    for (unsigned seed : {1u, 2u}) {
      const oracle::Vec v = oracle::random_state(p.nqubits(), seed);
      EXPECT_LT((run(c, v) - apply_blocks(term_blocks(p, k), 0.6, v)).cwiseAbs().maxCoeff(), 1e-12) << term_name(k);
    }
  }
}

TEST(TermCircuits, KineticWithAndWithoutAncillaAgree) {
  for (auto p : {make_params(2, 1, 2, 1.0, 1.0), make_params(2, 2, 1, 1.0, 1.0)}) {
    const oracle::Mat a = circuit_unitary(trotter_kinetic_circuit(p, 0.9, true));
    const oracle::Mat b = circuit_unitary(trotter_kinetic_circuit(p, 0.9, false));
    EXPECT_LT(max_diff(a, b), 1e-12);
  }
}

TEST(TrotterStep, EqualsOrderedProductOfBlocks) {
  for (auto p : {make_params(2, 1, 2, 0.6, 1.4), make_params(2, 2, 1, 1.0, 0.8)}) {
    p = with_potentials(p);
    for (const auto& order : {std::vector<TermKind>{TermKind::Mass, TermKind::Kinetic, TermKind::Electric},
                              TrotterOptions{}.order}) {
      TrotterOptions o;
      o.order = order;
      const oracle::Mat U = circuit_unitary(trotter_step_circuit(p, 0.4, o));
      EXPECT_LT(max_diff(U, block_unitary(trotter_blocks(p, o), p.nqubits(), 0.4)), 1e-12);
    }
  }
}

TEST(TrotterStep, RepeatedStepsAndCancellationPreserveTheUnitary) {
  const ModelParams p = make_params(3, 1, 1, 1.0, 1.0);
  TrotterOptions plain, cancel;
  cancel.cancel_cnots = true;
  const Circuit a = trotter_circuit(p, 1.3, 3, plain);
  const Circuit b = trotter_circuit(p, 1.3, 3, cancel);
  EXPECT_LT(max_diff(circuit_unitary(a), circuit_unitary(b)), 1e-12);
  EXPECT_LT(count_gates(b).cnot, count_gates(a).cnot);
  oracle::Mat step = circuit_unitary(trotter_step_circuit(p, 1.3 / 3, plain));
  EXPECT_LT(max_diff(circuit_unitary(a), step * step * step), 1e-12);
}

TEST(Clifford, ConjugationMatchesDense) {
  std::mt19937 rng(5);
  static const char L[] = "IXYZ";
  const std::vector<Gate> gates{Gate::h(0), Gate::h(2), Gate::x(1), Gate::y(1), Gate::z(2), Gate::cnot(0, 2),
                                Gate::cnot(2, 1)};
  for (int trial = 0; trial < 40; ++trial) {
    std::string s;
    for (int q = 0; q < 3; ++q) s += L[rng() % 4];
    const PauliString P = PauliString::from_letters(s);
    for (const Gate& g : gates) {
      const oracle::Mat G = gate_matrix(g, 3);
      const PauliString Q = conjugate(P, g);
      EXPECT_LT(max_diff(Q.phase_value() * oracle::pauli(Q.letters()), G.adjoint() * oracle::pauli(s) * G), 1e-14);
    }
  }
}

TEST(Clifford, CnotCancellationRule) {
  Circuit c(3);
  c.emit(Gate::cnot(0, 1));
  c.emit(Gate::rz(2, 0.3));
  c.emit(Gate::cnot(0, 1));
  c.emit(Gate::cnot(1, 2));
  c.emit(Gate::rz(2, 0.1));
  c.emit(Gate::cnot(1, 2));
  const oracle::Mat before = circuit_unitary(c);
  EXPECT_EQ(cancel_adjacent_cnots(c), 2);
  EXPECT_EQ(count_gates(c).cnot, 2);
  EXPECT_LT(max_diff(before, circuit_unitary(c)), 1e-14);
}

TEST(Decompose, MultiplexedRotationsKeepTheUnitary) {
  Circuit c(4);
  c.emit(Gate::h(0));
  c.emit(Gate::cry({{0, true}}, 3, 0.7));
  c.emit(Gate::cry({{0, false}, {1, true}}, 2, -1.1));
  c.emit(Gate::cry({{0, true}, {1, true}, {2, false}}, 3, 0.4));
  c.emit(Gate::cry({{0, false}, {1, true}, {2, false}}, 3, 0.9));
  const Circuit d = decompose(c);
  for (const auto& g : d.gates) EXPECT_NE(g.kind, GateKind::CRY);
  EXPECT_LT(max_diff(circuit_unitary(c), circuit_unitary(d)), 1e-12);
  EXPECT_EQ(count_gates_raw(c).cry, 4);
}

TEST(Vqe, PreparesColorSingletsInTheVacuumSector) {
  const ModelParams p = make_params(3, 1, 1, 1.0, 1.0, 2.0);
  const oracle::Mat C = oracle::dense(color_casimir(p));
  const Bits vac = trivial_vacuum(p);
  const SectorKey key = sector_of(p, vac);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  int tried = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Circuit c;
    try {
      c = vqe_singlet_prep(u(rng), u(rng), u(rng));
    } catch (const std::domain_error&) {
      continue;
    }
    ++tried;
    const oracle::Vec psi = run(decompose(c), oracle::Vec::Unit(64, 0));
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    EXPECT_NEAR(psi.dot(C * psi).real(), 0.0, 1e-12);
    for (Bits k = 0; k < 64; ++k)
      if (std::abs(psi(k)) > 1e-12) EXPECT_EQ(sector_of(p, k), key);
  }
  EXPECT_GT(tried, 10);
  EXPECT_EQ(count_gates(vqe_singlet_prep(0.3, 0.2, 0.1)).cnot, 9);
  EXPECT_THROW(vqe_angles(3.0, 0.0, 0.0), std::domain_error);
}

TEST(Vqe, ReachesTheExactGroundState) {
  const ModelParams p = make_params(3, 1, 1, 1.0, 1.0, 2.0);
  const PauliOperator Hop = (build_hamiltonian(p).total() + build_penalty(p)).prune();
  const oracle::Mat H = oracle::dense(Hop);
  const SectorBasis b = enumerate_sector(p, sector_of(p, trivial_vacuum(p)));
  const double E0 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(assemble_sparse_real(Hop, b)))
                        .eigenvalues()(0);
  auto energy = [&](const std::array<double, 3>& a) {
    try {
      const oracle::Vec psi = run(decompose(vqe_singlet_prep(a[0], a[1], a[2])), oracle::Vec::Unit(64, 0));
      return psi.dot(H * psi).real();
    } catch (const std::domain_error&) {
      return 1e9;
    }
  };
  std::array<double, 3> best{0, 0, 0};
  double e = energy(best);
  for (double step = 0.5; step > 1e-7; step *= 0.5)
    for (bool moved = true; moved;) {
      moved = false;
      for (int i = 0; i < 3; ++i)
        for (double s : {step, -step}) {
          auto trial = best;
          trial[i] += s;
          const double et = energy(trial);
          if (et < e - 1e-15) e = et, best = trial, moved = true;
        }
    }
  EXPECT_GE(e, E0 - 1e-12);
  EXPECT_NEAR(e, E0, 1e-8);
}

TEST(Twirl, PreservesTheUnitary) {
  const ModelParams p = make_params(2, 1, 2, 1.0, 1.0);
  const Circuit c = trotter_step_circuit(p, 0.7);
  const oracle::Mat U = circuit_unitary(c);
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const Circuit t = pauli_twirl(c, seed);
    EXPECT_EQ(count_gates(t).cnot, count_gates(c).cnot);
    EXPECT_LT(max_diff(circuit_unitary(t), U), 1e-12);
  }
  EXPECT_EQ(circuit_to_text(pauli_twirl(c, 4)), circuit_to_text(pauli_twirl(c, 4)));
}

TEST(TextFormat, RoundTrip) {
  const ModelParams p = make_params(2, 2, 1, 1.0, 1.0);
  Circuit c = trotter_step_circuit(p, 0.7);
  c.emit(Gate::cry({{0, false}, {1, true}}, 2, 0.25));
  const Circuit back = circuit_from_text(circuit_to_text(c));
  EXPECT_EQ(back.nqubits, c.nqubits);
  EXPECT_EQ(back.ancilla, c.ancilla);
  ASSERT_EQ(back.gates.size(), c.gates.size());
  EXPECT_LT(max_diff(circuit_unitary(back), circuit_unitary(c)), 1e-14);
  EXPECT_THROW(circuit_from_text("circuit 2 0 0\nfoo 1\n"), std::invalid_argument);
}

TEST(CircuitBasics, InverseAndValidation) {
  const ModelParams p = make_params(2, 1, 2, 1.0, 1.0);
  Circuit c = trotter_step_circuit(p, 0.5);
  c.append(c.inverse());
  EXPECT_LT(max_diff(circuit_unitary(c), oracle::Mat::Identity(256, 256)), 1e-12);
  Circuit bad(2);
  bad.emit(Gate::cnot(1, 1));
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  Circuit out(2);
  out.emit(Gate::x(2));
  EXPECT_THROW(out.validate(), std::out_of_range);
}

TEST(Resources, ClosedFormAgreesWithConstruction) {
  for (int nc : {2, 3})
    for (int nf : {1, 2, 3})
      for (int L : {1, 2, 5}) EXPECT_EQ(resource_count_closed_form(nc, nf, L), resource_count_constructed(nc, nf, L));
}

TEST(Resources, ConstructedTallyMatchesBuiltStep) {
  for (auto p : {make_params(3, 1, 1, 1.0, 1.0), make_params(2, 2, 2, 1.0, 1.0), make_params(3, 2, 1, 1.0, 1.0)}) {
    const ResourceReport r = resource_count_constructed(p.nc, p.nf, p.L);
    EXPECT_EQ(count_gates(trotter_step_circuit(p, 1.0)).cnot, r.total().cnot);
  }
}
