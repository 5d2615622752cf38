#include <gtest/gtest.h>

#include <set>

#include "lgt1d/sector.hpp"
#include "oracle.hpp"

using namespace lgt1d;

namespace {

oracle::Model oracle_model(const ModelParams& p) {
  oracle::Model M;
  M.nc = p.nc;
  M.nf = p.nf;
  M.L = p.L;
  M.m = p.masses;
  M.g = p.g;
  M.h = p.h;
  M.mu_b = p.mu_b;
  M.mu_i = p.mu_i;
  return M;
}

// Full-space vector from sector amplitudes.
oracle::Vec embed(const SectorBasis& b, const Eigen::VectorXd& v) {
  oracle::Vec out = oracle::Vec::Zero(std::size_t{1} << b.nqubits);
  for (std::size_t j = 0; j < b.dim(); ++j) out(b.states[j]) = v(j);
  return out;
}

// 1 - Tr rho_A^2 with A the qubits in mask.
double dense_linear_entropy(const oracle::Vec& psi, int n, Bits mask) {
  std::map<Bits, std::map<Bits, oracle::cplx>> m;  // [A bits][B bits]
  for (Bits k = 0; k < (Bits{1} << n); ++k)
    if (std::abs(psi(k)) > 0) m[k & mask][k & ~mask] = psi(k);
  double tr2 = 0;
  for (const auto& [a1, r1] : m)
    for (const auto& [a2, r2] : m) {
      oracle::cplx rho = 0;
      for (const auto& [b, x] : r1) {
        auto it = r2.find(b);
        if (it != r2.end()) rho += x * std::conj(it->second);
      }
      tr2 += std::norm(rho);
    }
  return 1.0 - tr2;
}

Bits quark_qubits(const ModelParams& p) {
  Bits m = 0;
  for (int n = 0; n < 2 * p.L; n += 2)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) m |= Bits{1} << p.qubit(n, f, c);
  return m;
}

}  // namespace

TEST(Sectors, PartitionTheHilbertSpace) {
  const ModelParams p = make_params(2, 2, 1, 1.0, 1.0);
  std::set<Bits> seen;
  for (const auto& s : all_sectors(p)) {
    for (Bits b : s.states) {
      EXPECT_TRUE(seen.insert(b).second);
      EXPECT_EQ(sector_of(p, b), s.key);
    }
    EXPECT_TRUE(std::is_sorted(s.states.begin(), s.states.end()));
  }
  EXPECT_EQ(seen.size(), std::size_t{1} << p.nqubits());
}

TEST(Sectors, KnownDimensions) {
  const ModelParams p = make_params(3, 2, 1, 1.0, 1.0, 2.0);
  EXPECT_EQ(enumerate_sector(p, SectorKey::baryon(3, 0, 0)).dim(), 88u);
  const ModelParams q = make_params(3, 1, 1, 1.0, 1.0);
  const SectorBasis v = enumerate_sector(q, sector_of(q, trivial_vacuum(q)));
  EXPECT_EQ(v.dim(), 8u);  // per color: bare or one quark-antiquark pair
  EXPECT_GE(v.index_of(trivial_vacuum(q)), 0);
  EXPECT_EQ(v.index_of(Bits{0}), -1);
}

TEST(Sectors, TrivialVacuumLayout) {
  const ModelParams p = make_params(3, 1, 1, 1.0, 1.0);
  EXPECT_EQ(trivial_vacuum(p), Bits{0b000111});
  EXPECT_EQ(sector_of(p, trivial_vacuum(p)), SectorKey::baryon(3, 0, std::nullopt));
}

TEST(Assembly, SectorMatrixMatchesDenseRestriction) {
  ModelParams p = make_params(2, 2, 1, 0.7, 1.2, 1.5);
  p.mu_b = 0.2;
  p.mu_i = 0.1;
  const oracle::Parts O = oracle::hamiltonian(oracle_model(p));
  const oracle::Mat H = O.total() + O.penalty;
  const PauliOperator op = (build_hamiltonian(p).total() + build_penalty(p)).prune();
  for (const auto& s : all_sectors(p)) {
    const SpMatC m = assemble_sparse(op, s);
    const oracle::Mat dm(m);
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t j = 0; j < s.dim(); ++j) ASSERT_LT(std::abs(dm(i, j) - H(s.states[i], s.states[j])), 1e-12);
  }
}

TEST(Assembly, RealAssemblyRejectsComplexMatrix) {
  PauliOperator op(2);
  op.add(PauliString::from_letters("IY"), 1.0);
  SectorBasis b;
  b.nqubits = 2;
  b.states = {0, 1, 2, 3};
  EXPECT_THROW(assemble_sparse_real(op, b), std::runtime_error);
}

TEST(Eigensolver, IterativePathMatchesDense) {
  const ModelParams p = make_params(3, 2, 1, 1.0, 1.0, 2.0);
  const SectorBasis b = enumerate_sector(p, SectorKey::baryon(3, 0, 0));
  const SpMatR H = assemble_sparse_real((build_hamiltonian(p).total() + build_penalty(p)).prune(), b);
  const Eigen::VectorXd exact = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(H)).eigenvalues();
  EigenOptions opt;
  opt.k = 5;
  opt.dense_limit = 10;
  const EigenResult r = lowest_eigenpairs(H, opt);
  ASSERT_EQ(r.values.size(), 5);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.values(i), exact(i), 1e-9);
    EXPECT_LT(r.residuals(i), 1e-8);
  }
  EXPECT_NEAR(exact(0), -0.5491067, 5e-8);
}

TEST(Eigensolver, SignConvention) {
  Eigen::MatrixXd v(3, 2);
  v << -0.1, 0.5, -0.9, -0.5, 0.3, 0.0;
  fix_signs(v);
  EXPECT_GT(v(1, 0), 0);
  EXPECT_GT(v(0, 1), 0);
}

TEST(Observables, DecompositionEntropyAndOccupationMatchDense) {
  const ModelParams p = make_params(2, 2, 1, 0.9, 1.4, 2.0);
  const Hamiltonian H = build_hamiltonian(p);
  const PauliOperator pen = build_penalty(p);
  const oracle::Parts O = oracle::hamiltonian(oracle_model(p));
  const SectorBasis b = enumerate_sector(p, SectorKey::baryon(2, 0, 0));
  const SpMatR M = assemble_sparse_real((H.total() + pen).prune(), b);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(M)};
  oracle::Mat occ = oracle::Mat::Zero(1 << p.nqubits(), 1 << p.nqubits());
  for (int n = 0; n < 2; ++n)
    for (int f = 0; f < 2; ++f)
      for (int c = 0; c < 2; ++c) {
        const oracle::Mat N = oracle::number(p.qubit(n, f, c), p.nqubits());
        occ += n % 2 == 0 ? N : oracle::Mat(oracle::Mat::Identity(N.rows(), N.cols()) - N);
      }
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXd v = es.eigenvectors().col(k);
    const oracle::Vec psi = embed(b, v);
    const EnergyParts e = decompose_energy(H, pen, b, v);
    EXPECT_NEAR(e.total(), es.eigenvalues()(k), 1e-10);
    EXPECT_NEAR(e.kin, psi.dot(O.kin * psi).real(), 1e-10);
    EXPECT_NEAR(e.mass, psi.dot(O.mass * psi).real(), 1e-10);
    EXPECT_NEAR(e.el, psi.dot(O.el * psi).real(), 1e-10);
    EXPECT_NEAR(linear_entropy(p, b, v), dense_linear_entropy(psi, p.nqubits(), quark_qubits(p)), 1e-12);
    EXPECT_NEAR(occupation(p, b, v), psi.dot(occ * psi).real(), 1e-12);
    EXPECT_NEAR(occupation(p, b, v), expectation(occupation_operator(p), b, v), 1e-12);
  }
}

TEST(Observables, FieldProfileRequiresNormalizedState) {
  const ModelParams p = make_params(2, 1, 2, 1.0, 1.0);
  const SectorBasis b = enumerate_sector(p, sector_of(p, trivial_vacuum(p)));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(b.dim());
  v(b.index_of(trivial_vacuum(p))) = 1;
  const auto f = electric_field_profile(p, b, v);
  ASSERT_EQ(f.size(), 3u);
  for (double x : f) EXPECT_NEAR(x, 0.0, 1e-14);
  EXPECT_THROW(electric_field_profile(p, b, 2 * v), std::invalid_argument);
}

TEST(Hadrons, ZeroCouplingMesonsAreFreePairs) {
  for (double m : {0.0, 1.0}) {
    const ModelParams p = make_params(3, 2, 1, m, 0.0, 2.0);
    HadronOptions o;
    o.baryons = false;
    const HadronTable t = hadron_spectrum(p, o);
    EXPECT_NEAR(t.M_sigma, t.M_pi, 1e-9);
    EXPECT_NEAR(t.M_sigma, std::sqrt(1 + 4 * m * m), 1e-9);
  }
}

TEST(Hadrons, SingletStatesCarryNoColor) {
  const ModelParams p = make_params(3, 2, 1, 1.0, 1.0, 2.0);
  const HadronTable t = hadron_spectrum(p);
  for (const SectorState* s : {&t.vacuum, &t.sigma, &t.pi, &t.delta, &t.deltadelta}) EXPECT_LT(s->color_casimir, 1e-6);
  EXPECT_NEAR(t.pi.isospin2, 2.0, 1e-6);
  EXPECT_NEAR(t.sigma.isospin2, 0.0, 1e-6);
  EXPECT_NEAR(t.delta.isospin2, 15.0 / 4.0, 1e-6);
  const auto j = hadron_table_json(p, t);
  EXPECT_NE(j.find("M_sigma"), std::string::npos);
}
