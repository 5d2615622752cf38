#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lgt1d/anneal.hpp"

using namespace lgt1d;

namespace {

Eigen::MatrixXd random_symmetric(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = nd(rng);
  return m;
}

BitVector bits_of(std::uint64_t k, int n) {
  BitVector x(n);
  for (int i = 0; i < n; ++i) x[i] = (k >> i) & 1;
  return x;
}

double brute_minimum(const QuboMatrix& q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << q.size()); ++k) {
    const BitVector x = bits_of(k, q.size());
    double v = q.constant;
    for (int i = 0; i < q.size(); ++i)
      for (int j = 0; j < q.size(); ++j) v += q.Q(i, j) * x[i] * x[j];
    best = std::min(best, v);
  }
  return best;
}

QuboMatrix random_qubo(int n, unsigned seed) {
  QuboMatrix q;
  q.Q = random_symmetric(n, seed);
  q.n_coeffs = n;
  q.K = 1;
  return q;
}

double lowest(const Eigen::MatrixXd& m) { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0); }

}  // namespace

TEST(Qubo, BitWeights) {
  for (int K : {1, 2, 4})
    for (int z : {0, 3}) {
      const auto w = bit_weights(K, z);
      ASSERT_EQ(static_cast<int>(w.size()), K);
      for (int i = 1; i <= K; ++i) {
        const double mag = std::ldexp(1.0, i - K - z);
        EXPECT_DOUBLE_EQ(w[i - 1], i == K ? -mag : mag);
      }
    }
}

// F(x) equals (a + d(x))^T (H - eta) (a + d(x)) for every bit string.
TEST(Qubo, ObjectiveIsTheShiftedQuadraticForm) {
  const int d = 4;
  for (int K : {2, 3, 5}) {
    const ProjectedHamiltonian hp = projected_from_matrix(random_symmetric(d, 10 + K));
    ZoomState zs;
    zs.K = K;
    zs.z = K - 1;
    zs.eta = 0.37;
    zs.a = Eigen::VectorXd::Random(d);
    const QuboMatrix q = build_qubo(hp, zs);
    ASSERT_EQ(q.size(), d * K);
    const Eigen::MatrixXd shifted = hp.h - zs.eta * Eigen::MatrixXd::Identity(d, d);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << q.size()); ++k) {
      const BitVector x = bits_of(k, q.size());
      Eigen::VectorXd v = zs.a;
      for (int alpha = 0; alpha < d; ++alpha)
        for (int i = 1; i <= K; ++i)
          if (x[alpha * K + i - 1]) v(alpha) += (i == K ? -1.0 : 1.0) * std::ldexp(1.0, i - K - zs.z);
      ASSERT_NEAR(qubo_value(q, x), v.dot(shifted * v), 1e-10);
      ASSERT_LT((decode(zs, x) - v).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(Sampler, ExhaustiveFindsTheGlobalMinimumForAnySeed) {
  for (unsigned s = 0; s < 5; ++s) {
    const QuboMatrix q = random_qubo(14, 100 + s);
    const double want = brute_minimum(q);
    for (std::uint64_t seed : {1ull, 77ull}) {
      SamplerConfig c;
      c.seed = seed;
      const Sample r = sample_qubo(q, c);
      EXPECT_NEAR(r.value, want, 1e-10);
      EXPECT_NEAR(qubo_value(q, r.x), r.value, 1e-10);
    }
  }
}

TEST(Sampler, AnnealingAgreesWithExhaustive) {
  int agree = 0;
  const int n_inst = 20;
  for (int s = 0; s < n_inst; ++s) {
    const QuboMatrix q = random_qubo(16, 200 + s);
    SamplerConfig ex;
    SamplerConfig sa;
    sa.kind = SamplerKind::Annealing;
    sa.reads = 200;
    sa.sweeps = 50;
    sa.seed = s + 1;
    if (std::abs(sample_qubo(q, sa).value - sample_qubo(q, ex).value) < 1e-9) ++agree;
  }
  EXPECT_GE(agree, 19);
}

TEST(Sampler, BlockModeReturnsASingleFlipLocalMinimum) {
  const QuboMatrix q = random_qubo(40, 7);
  SamplerConfig c;
  c.max_exhaustive_bits = 10;
  c.block_bits = 6;
  const Sample r = sample_qubo(q, c);
  for (int i = 0; i < q.size(); ++i) {
    BitVector y = r.x;
    y[i] ^= 1;
    EXPECT_GE(qubo_value(q, y), r.value - 1e-9);
  }
}

TEST(Sampler, DegenerateAndInvalidInput) {
  QuboMatrix q;
  q.Q = Eigen::MatrixXd::Zero(3, 3);
  q.constant = 2;
  const Sample r = sample_qubo(q, SamplerConfig{});
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.value, 2);
  SamplerConfig bad;
  bad.max_exhaustive_bits = 31;
  EXPECT_THROW(sample_qubo(random_qubo(4, 1), bad), std::invalid_argument);
}

TEST(Zoom, ConvergesToTheLowestEigenvalue) {
  const Eigen::MatrixXd h = random_symmetric(6, 31);
  const double e0 = lowest(h);
  ZoomConfig c;
  c.K = 3;
  c.eta0 = e0 + 0.5;
  const ZoomResult r = zoom_iterate(projected_from_matrix(h), c);
  EXPECT_NEAR(r.energy, e0, 1e-8);
  EXPECT_NEAR(r.coefficients.norm(), 1.0, 1e-12);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  EXPECT_GT(std::abs(es.eigenvectors().col(0).dot(r.coefficients)), 1 - 1e-6);
  ASSERT_EQ(r.iteration_energy.size(), c.start_z.size());
  for (std::size_t i = 1; i < r.iteration_energy.size(); ++i)
    EXPECT_LE(r.iteration_energy[i], r.iteration_energy[i - 1] + 1e-12);
}

TEST(Zoom, OneDimensionalProblem) {
  Eigen::MatrixXd h(1, 1);
  h << 3.0;
  ZoomConfig c;
  c.eta0 = 4.0;
  EXPECT_NEAR(zoom_iterate(projected_from_matrix(h), c).energy, 3.0, 1e-12);
}

TEST(Zoom, ReportsWhenNothingLiesBelowEta) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3) * 2.0;
  ZoomConfig c;
  c.eta0 = 0.0;
  c.zoom_steps = 4;
  EXPECT_THROW(zoom_iterate(projected_from_matrix(h), c), std::runtime_error);
}

TEST(Deflation, RemovesFoundVectors) {
  const Eigen::MatrixXd h = random_symmetric(8, 5);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const ProjectedHamiltonian hp = projected_from_matrix(h);
  const ProjectedHamiltonian d1 = deflate(hp, es.eigenvectors().leftCols(1));
  EXPECT_NEAR(lowest(d1.h), es.eigenvalues()(1), 1e-10);
  const ProjectedHamiltonian d2 = deflate(hp, es.eigenvectors().leftCols(2));
  EXPECT_NEAR(lowest(d2.h), es.eigenvalues()(2), 1e-10);
  const double shift = default_deflation_shift(hp);
  EXPECT_GT(shift, es.eigenvalues().cwiseAbs().maxCoeff());
  const ProjectedHamiltonian all = deflate(hp, es.eigenvectors());
  EXPECT_NEAR(lowest(all.h), shift, 1e-9);
}

TEST(Projection, TwoFlavorBaryonSector) {
  const ModelParams p = make_params(3, 2, 1, 1.0, 1.0, 2.0);
  const SectorBasis b = enumerate_sector(p, SectorKey::baryon(3, 0, 0));
  const ProjectedHamiltonian hp = project_hamiltonian(p, b);
  ASSERT_EQ(hp.dim(), 88);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hp.h);
  EXPECT_NEAR(es.eigenvalues()(0), -0.54910667, 5e-8);
  EXPECT_NEAR(lowest(deflate(hp, es.eigenvectors().leftCols(1)).h), 2.17774863, 5e-8);
  const Eigen::MatrixXd V = es.eigenvectors().leftCols(3);
  const ProjectedHamiltonian sub = project_hamiltonian(p, b, V);
  EXPECT_LT((sub.h - es.eigenvalues().head(3).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-9);
  Eigen::MatrixXd skew = V;
  skew.col(1) += 0.1 * V.col(0);
  EXPECT_THROW(project_hamiltonian(p, b, skew), std::invalid_argument);
  EXPECT_NEAR(rayleigh_quotient(hp, 3.0 * es.eigenvectors().col(0)), es.eigenvalues()(0), 1e-10);
}

TEST(Export, TripletsAndTrajectory) {
  QuboMatrix q;
  q.Q = Eigen::MatrixXd::Zero(2, 2);
  q.Q << 1.0, 0.5, 0.5, -2.0;
  q.constant = 0.25;
  std::istringstream in(qubo_triplets(q));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("#", 0), 0u);
  double total = 0;
  int i, j;
  double v;
  int rows = 0;
  while (in >> i >> j >> v) {
    EXPECT_LE(i, j);
    total += v;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_NEAR(total, 1.0 + 1.0 - 2.0, 1e-15);  // off-diagonal entry carries both halves
  ZoomResult r;
  r.trajectory.push_back({0, 1, 0.5, -0.25});
  const std::string csv = trajectory_csv(r);
  EXPECT_EQ(csv.rfind("iteration,z,eta,energy\n", 0), 0u);
}
