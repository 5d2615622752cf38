#include "lgt1d/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lgt1d/rng.hpp"

namespace lgt1d {

ProjectedHamiltonian projected_from_matrix(Eigen::MatrixXd h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("projected Hamiltonian must be square");
  if (!h.allFinite()) throw std::invalid_argument("projected Hamiltonian has non-finite entries");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("projected Hamiltonian is not symmetric");
  h = 0.5 * (h + h.transpose());
  return {std::move(h)};
}

namespace {

Eigen::MatrixXd sector_matrix(const ModelParams& p, const SectorBasis& basis) {
  const PauliOperator op = (build_hamiltonian(p).total() + build_penalty(p)).prune();
  return Eigen::MatrixXd(assemble_sparse_real(op, basis));
}

}  // namespace

ProjectedHamiltonian project_hamiltonian(const ModelParams& p, const SectorBasis& basis) {
  return projected_from_matrix(sector_matrix(p, basis));
}

ProjectedHamiltonian project_hamiltonian(const ModelParams& p, const SectorBasis& basis,
                                         const Eigen::MatrixXd& vectors) {
  if (vectors.rows() != static_cast<Eigen::Index>(basis.dim()) || vectors.cols() == 0)
    throw std::invalid_argument("vectors do not match the basis");
  const Eigen::MatrixXd gram = vectors.transpose() * vectors;
  if ((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("basis vectors are not orthonormal");
  const Eigen::MatrixXd h = vectors.transpose() * sector_matrix(p, basis) * vectors;
  return projected_from_matrix(0.5 * (h + h.transpose()));
}

double rayleigh_quotient(const ProjectedHamiltonian& hp, const Eigen::VectorXd& a) {
  const double n2 = a.squaredNorm();
  if (n2 == 0) return std::numeric_limits<double>::quiet_NaN();
  return a.dot(hp.h * a) / n2;
}

std::vector<double> bit_weights(int K, int z) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (z < 0) throw std::invalid_argument("zoom level must be nonnegative");
  std::vector<double> w(K);
  for (int i = 1; i <= K; ++i) w[i - 1] = std::ldexp(i == K ? -1.0 : 1.0, i - K - z);
  return w;
}

QuboMatrix build_qubo(const ProjectedHamiltonian& hp, const ZoomState& zs) {
  const int n = hp.dim();
  if (zs.a.size() != n) throw std::invalid_argument("coefficient vector does not match the Hamiltonian");
  const std::vector<double> w = bit_weights(zs.K, zs.z);
  const Eigen::MatrixXd h = hp.h - zs.eta * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd ha = h * zs.a;
  QuboMatrix q;
  q.n_coeffs = n;
  q.K = zs.K;
  q.Q.resize(n * zs.K, n * zs.K);
  for (int al = 0; al < n; ++al)
    for (int i = 0; i < zs.K; ++i)
      for (int be = 0; be < n; ++be)
        for (int j = 0; j < zs.K; ++j) q.Q(al * zs.K + i, be * zs.K + j) = w[i] * w[j] * h(al, be);
  for (int al = 0; al < n; ++al)
    for (int i = 0; i < zs.K; ++i) q.Q(al * zs.K + i, al * zs.K + i) += 2.0 * w[i] * ha(al);
  q.constant = zs.a.dot(ha);
  return q;
}

double qubo_value(const QuboMatrix& q, const BitVector& x) {
  if (static_cast<int>(x.size()) != q.size()) throw std::invalid_argument("assignment length mismatch");
  Eigen::VectorXd v(q.size());
  for (int i = 0; i < q.size(); ++i) v(i) = x[i];
  return v.dot(q.Q * v) + q.constant;
}

Eigen::VectorXd decode(const ZoomState& zs, const BitVector& x) {
  const std::vector<double> w = bit_weights(zs.K, zs.z);
  if (static_cast<Eigen::Index>(x.size()) != zs.a.size() * zs.K) throw std::invalid_argument("assignment length mismatch");
  Eigen::VectorXd a = zs.a;
  for (Eigen::Index al = 0; al < a.size(); ++al)
    for (int i = 0; i < zs.K; ++i) a(al) += w[i] * x[al * zs.K + i];
  return a;
}

// ---------------------------------------------------------------- samplers

namespace {

// Tracks F(x) and the couplings g_k = sum_{j != k} 2 Q_kj x_j for single-bit flips.
class FlipState {
 public:
  FlipState(const QuboMatrix& q, BitVector x) : q_(q), x_(std::move(x)), g_(q.size()) {
    const int n = q.size();
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = x_[i];
    g_ = 2.0 * (q.Q * v) - 2.0 * q.Q.diagonal().cwiseProduct(v);
    value_ = v.dot(q.Q * v) + q.constant;
  }
  double delta(int k) const { return (x_[k] ? -1.0 : 1.0) * (q_.Q(k, k) + g_(k)); }
  void flip(int k) {
    value_ += delta(k);
    const double s = x_[k] ? -2.0 : 2.0;
    x_[k] ^= 1;
    g_ += s * q_.Q.col(k);
    g_(k) -= s * q_.Q(k, k);
  }
  double value() const { return value_; }
  const BitVector& bits() const { return x_; }

 private:
  const QuboMatrix& q_;
  BitVector x_;
  Eigen::VectorXd g_;
  double value_ = 0;
};

// Minimizes over the listed bits with the others held fixed; Gray-code walk.
bool minimize_block(FlipState& st, const std::vector<int>& bits, double tol) {
  const int m = static_cast<int>(bits.size());
  const std::uint64_t count = std::uint64_t{1} << m;
  const double start = st.value();
  double best = start;
  std::uint64_t best_code = 0, code = 0;
  for (std::uint64_t j = 1; j < count; ++j) {
    const int bit = __builtin_ctzll(j);
    st.flip(bits[bit]);
    code ^= std::uint64_t{1} << bit;
    if (st.value() < best - tol) {
      best = st.value();
      best_code = code;
    }
  }
  for (int b = 0; b < m; ++b)
    if (((code ^ best_code) >> b) & 1) st.flip(bits[b]);
  return best < start;
}

// Coefficient alpha together with the coefficients most strongly coupled to it.
std::vector<std::vector<int>> neighbourhoods(const QuboMatrix& q, int block_coeffs) {
  const int n = q.n_coeffs, K = q.K;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) c(a, b) = q.Q.block(a * K, b * K, K, K).cwiseAbs().sum();
  std::vector<std::vector<int>> out;
  std::vector<int> order(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) order[b] = b;
    std::swap(order[0], order[a]);
    const int take = std::min(n, block_coeffs);
    std::partial_sort(order.begin() + 1, order.begin() + take, order.end(),
                      [&](int x, int y) { return c(a, x) > c(a, y); });
    std::vector<int> bits;
    for (int k = 0; k < take; ++k)
      for (int i = 0; i < K; ++i) bits.push_back(order[k] * K + i);
    out.push_back(std::move(bits));
  }
  return out;
}

Sample exhaustive(const QuboMatrix& q, const SamplerConfig& cfg) {
  const int n = q.size();
  FlipState st(q, BitVector(n, 0));
  if (n <= cfg.max_exhaustive_bits) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    minimize_block(st, all, 0.0);
  } else {
    const auto blocks = neighbourhoods(q, std::max(1, std::min(cfg.block_bits, cfg.max_exhaustive_bits) / q.K));
    const double tol = 1e-12 * q.Q.cwiseAbs().sum();
    for (int sweep = 0; sweep < 1000; ++sweep) {
      bool improved = false;
      for (const auto& b : blocks) improved |= minimize_block(st, b, tol);
      if (!improved) break;
    }
  }
  return {st.bits(), st.value(), false};
}

Sample anneal_chain(const QuboMatrix& q, const SamplerConfig& cfg, int read) {
  const int n = q.size();
  const double scale = q.Q.cwiseAbs().maxCoeff();
  const int sweeps = std::max(1, cfg.sweeps);
  const double hot = cfg.t_hot * scale, cold = cfg.t_cold * scale;
  CounterRng rng(cfg.seed, static_cast<std::uint64_t>(read));
  BitVector x(n);
  for (auto& b : x) b = static_cast<std::uint8_t>(rng.next() & 1);
  FlipState st(q, x);
  for (int s = 0; s < sweeps; ++s) {
    const double T = sweeps == 1 ? cold : hot * std::pow(cold / hot, static_cast<double>(s) / (sweeps - 1));
    for (int k = 0; k < n; ++k) {
      const double d = st.delta(k);
      if (d <= 0 || rng.uniform() < std::exp(-d / T)) st.flip(k);
    }
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (int k = 0; k < n; ++k)
      if (st.delta(k) < 0) {
        st.flip(k);
        moved = true;
      }
  }
  return {st.bits(), st.value(), false};
}

Sample anneal(const QuboMatrix& q, const SamplerConfig& cfg) {
  const int reads = std::max(1, cfg.reads);
  const int workers = std::clamp(cfg.workers, 1, reads);
  auto run = [&](int w) {
    Sample best{BitVector(q.size(), 0), std::numeric_limits<double>::infinity(), false};
    for (int r = w; r < reads; r += workers) {
      Sample s = anneal_chain(q, cfg, r);
      if (s.value < best.value) best = std::move(s);
    }
    return best;
  };
  std::vector<std::future<Sample>> jobs;
  for (int w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, run, w));
  Sample best = run(0);
  for (auto& j : jobs) {
    Sample s = j.get();
    if (s.value < best.value || (s.value == best.value && s.x < best.x)) best = std::move(s);
  }
  return best;
}

}  // namespace

Sample sample_qubo(const QuboMatrix& q, const SamplerConfig& cfg) {
  if (q.size() == 0) throw std::invalid_argument("empty QUBO");
  if (cfg.max_exhaustive_bits < 1 || cfg.max_exhaustive_bits > 30)
    throw std::invalid_argument("exhaustive block size must lie in [1, 30]");
  if (q.Q.cwiseAbs().maxCoeff() == 0) return {BitVector(q.size(), 0), q.constant, true};
  return cfg.kind == SamplerKind::Exhaustive ? exhaustive(q, cfg) : anneal(q, cfg);
}

// ---------------------------------------------------------------- zooming

ZoomResult zoom_iterate(const ProjectedHamiltonian& hp, const ZoomConfig& cfg) {
  if (cfg.K < 1 || cfg.zoom_steps < 1 || cfg.start_z.empty()) throw std::invalid_argument("invalid zoom configuration");
  ZoomResult res;
  res.energy = std::numeric_limits<double>::infinity();
  ZoomState zs{Eigen::VectorXd::Zero(hp.dim()), 0, cfg.eta0, cfg.K};
  Eigen::VectorXd best_a = zs.a;
  for (std::size_t it = 0; it < cfg.start_z.size(); ++it) {
    if (it > 0) {
      zs.a = best_a;
      zs.eta = res.energy;
    }
    double prev = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (int s = 0; s < cfg.zoom_steps; ++s) {
      zs.z = cfg.start_z[it] + s;
      SamplerConfig sc = cfg.sampler;
      sc.seed = splitmix64(cfg.sampler.seed ^ (static_cast<std::uint64_t>(it) << 32) ^ static_cast<std::uint64_t>(s));
      Sample smp = sample_qubo(build_qubo(hp, zs), sc);
      if (decode(zs, smp.x).squaredNorm() == 0) {
        // The empty state ties with every zero-energy state at eta = 0; lift the tie.
        ZoomState nudged = zs;
        nudged.eta += 1e-6 * std::max(1.0, hp.h.cwiseAbs().maxCoeff());
        smp = sample_qubo(build_qubo(hp, nudged), sc);
      }
      zs.a = decode(zs, smp.x);
      const double e = rayleigh_quotient(hp, zs.a);
      res.trajectory.push_back({static_cast<int>(it), zs.z, zs.eta, e});
      if (std::isnan(e)) continue;
      if (e < res.energy) {
        res.energy = e;
        best_a = zs.a.normalized();
        if (cfg.eta_schedule == EtaSchedule::PerStep) zs.eta = e;
      }
      rising = e > prev ? rising + 1 : 0;
      prev = e;
      if (rising >= cfg.divergence_patience) {
        res.diverged = true;
        break;
      }
    }
    if (!std::isfinite(res.energy))
      throw std::runtime_error("zooming found no state with F < 0; raise eta above the target energy");
    res.iteration_energy.push_back(res.energy);
    res.iteration_coefficients.push_back(best_a);
    if (res.diverged) break;
  }
  res.coefficients = best_a;
  return res;
}

double default_deflation_shift(const ProjectedHamiltonian& hp) {
  return 2.0 * hp.h.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
}

ProjectedHamiltonian deflate(const ProjectedHamiltonian& hp, const Eigen::MatrixXd& found, std::optional<double> shift) {
  const int n = hp.dim();
  if (found.rows() != n) throw std::invalid_argument("found vectors do not match the Hamiltonian");
  const Eigen::MatrixXd gram = found.transpose() * found;
  if ((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("found vectors are not orthonormal");
  const Eigen::MatrixXd F = found * found.transpose();
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - F;
  const Eigen::MatrixXd h = P * hp.h * P + shift.value_or(default_deflation_shift(hp)) * F;
  return projected_from_matrix(0.5 * (h + h.transpose()));
}

std::string qubo_triplets(const QuboMatrix& q) {
  std::ostringstream os;
  os.precision(17);
  os << "# n " << q.size() << " constant " << q.constant << '\n';
  for (int i = 0; i < q.size(); ++i)
    for (int j = i; j < q.size(); ++j) {
      const double v = i == j ? q.Q(i, i) : 2.0 * q.Q(i, j);
      if (v != 0) os << i << ' ' << j << ' ' << v << '\n';
    }
  return os.str();
}

std::string trajectory_csv(const ZoomResult& r) {
  std::ostringstream os;
  os.precision(7);
  os << "iteration,z,eta,energy\n";
  for (const auto& t : r.trajectory) os << t.iteration << ',' << t.z << ',' << t.eta << ',' << t.energy << '\n';
  return os.str();
}

}  // namespace lgt1d
