#include "lgt1d/evolution.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <future>
#include <stdexcept>

#include "lgt1d/rng.hpp"

namespace lgt1d {

namespace {

constexpr cplx kI{0, 1};

Eigen::Index dim_of(int n) { return Eigen::Index{1} << n; }

}  // namespace

StateVector StateVector::basis(int n, Bits ket) {
  if (n < 0 || n > 30) throw std::invalid_argument("state vector supports up to 30 qubits");
  if (n < 64 && (ket >> n) != 0) throw std::invalid_argument("basis state outside the register");
  StateVector s{n, Eigen::VectorXcd::Zero(dim_of(n))};
  s.amp(static_cast<Eigen::Index>(ket)) = 1.0;
  return s;
}

void apply_gate(Eigen::VectorXcd& amp, const Gate& g) {
  const Eigen::Index n = amp.size();
  const Eigen::Index tb = Eigen::Index{1} << g.target;
  if (tb >= n) throw std::out_of_range("gate target outside the state");
  auto pairs = [&](auto&& fn) {
    for (Eigen::Index k = 0; k < n; ++k)
      if (!(k & tb)) fn(k, k | tb);
  };
  switch (g.kind) {
    case GateKind::RZ: {
      const cplx a = std::exp(-0.5 * kI * g.angle), b = std::exp(0.5 * kI * g.angle);
      pairs([&](Eigen::Index i, Eigen::Index j) {
        amp(i) *= a;
        amp(j) *= b;
      });
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      pairs([&](Eigen::Index i, Eigen::Index j) {
        const cplx a0 = amp(i), a1 = amp(j);
        amp(i) = c * a0 - s * a1;
        amp(j) = s * a0 + c * a1;
      });
      break;
    }
    case GateKind::H: {
      const double r = M_SQRT1_2;
      pairs([&](Eigen::Index i, Eigen::Index j) {
        const cplx a0 = amp(i), a1 = amp(j);
        amp(i) = r * (a0 + a1);
        amp(j) = r * (a0 - a1);
      });
      break;
    }
    case GateKind::X:
      pairs([&](Eigen::Index i, Eigen::Index j) { std::swap(amp(i), amp(j)); });
      break;
    case GateKind::Y:
      pairs([&](Eigen::Index i, Eigen::Index j) {
        const cplx a0 = amp(i), a1 = amp(j);
        amp(i) = -kI * a1;
        amp(j) = kI * a0;
      });
      break;
    case GateKind::Z:
      pairs([&](Eigen::Index, Eigen::Index j) { amp(j) = -amp(j); });
      break;
    case GateKind::CNOT: {
      const Eigen::Index cb = Eigen::Index{1} << g.control;
      if (cb >= n) throw std::out_of_range("gate control outside the state");
      pairs([&](Eigen::Index i, Eigen::Index j) {
        if (i & cb) std::swap(amp(i), amp(j));
      });
      break;
    }
    case GateKind::CRY: {
      Eigen::Index mask = 0, want = 0;
      for (const auto& c : g.controls) {
        const Eigen::Index b = Eigen::Index{1} << c.qubit;
        if (b >= n) throw std::out_of_range("gate control outside the state");
        mask |= b;
        if (c.on_one) want |= b;
      }
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      pairs([&](Eigen::Index i, Eigen::Index j) {
        if ((i & mask) != want) return;
        const cplx a0 = amp(i), a1 = amp(j);
        amp(i) = c * a0 - s * a1;
        amp(j) = s * a0 + c * a1;
      });
      break;
    }
  }
}

StateVector apply_circuit(const StateVector& s, const Circuit& c) {
  if (s.nqubits != c.nqubits) throw std::invalid_argument("state and circuit sizes differ");
  if (s.amp.size() != dim_of(s.nqubits)) throw std::invalid_argument("state vector has the wrong length");
  const Eigen::Index d = dim_of(s.nqubits);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(dim_of(c.width()));
  amp.head(d) = s.amp;
  for (const Gate& g : c.gates) apply_gate(amp, g);
  if (c.ancilla && amp.tail(d).norm() > 1e-9) throw std::logic_error("ancilla not returned to |0>");
  StateVector out{s.nqubits, std::exp(kI * c.global_phase) * amp.head(d)};
  return out;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  if (c.width() > 14) throw std::invalid_argument("circuit too wide for a dense unitary");
  const Eigen::Index d = dim_of(c.nqubits);
  Eigen::MatrixXcd U(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    U.col(k) = apply_circuit(StateVector::basis(c.nqubits, static_cast<Bits>(k)), c).amp;
  return U;
}

Eigen::MatrixXcd dense_operator(const PauliOperator& op) {
  const int n = op.nqubits();
  if (n > 14) throw std::invalid_argument("operator too wide for a dense matrix");
  const Eigen::Index d = dim_of(n);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index r = 0; r < d; ++r) M(r, k) = matrix_element(op, static_cast<Bits>(r), static_cast<Bits>(k));
  return M;
}

Eigen::MatrixXcd dense_exponential(const PauliOperator& op, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_operator(op));
  const Eigen::VectorXcd ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------- sector propagation

SectorPropagator::Spectral SectorPropagator::diagonalize(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("sector diagonalization failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXcd SectorPropagator::exponential(const Spectral& s, double t) {
  const Eigen::VectorXcd ph = (-kI * t * s.values.cast<cplx>()).array().exp();
  return s.vectors * ph.asDiagonal() * s.vectors.adjoint();
}

SectorPropagator::SectorPropagator(const ModelParams& p, SectorBasis basis, const TrotterOptions& opt)
    : basis_(std::move(basis)) {
  if (basis_.dim() == 0) throw std::invalid_argument("empty sector");
  if (basis_.dim() > 6000) throw std::invalid_argument("sector too large for dense propagation");
  h_ = Eigen::MatrixXcd(assemble_sparse(build_hamiltonian(p).total(), basis_));
  h_spec_ = diagonalize(h_);
  for (const auto& b : trotter_blocks(p, opt)) blocks_.push_back(diagonalize(Eigen::MatrixXcd(assemble_sparse(b.op, basis_))));
}

Eigen::VectorXcd SectorPropagator::unit(Bits ket) const {
  const long i = basis_.index_of(ket);
  if (i < 0) throw std::invalid_argument("state not in the sector");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_.dim()));
  v(i) = 1.0;
  return v;
}

Eigen::VectorXcd SectorPropagator::exact(const Eigen::VectorXcd& v, double t) const {
  const Eigen::VectorXcd ph = (-kI * t * h_spec_.values.cast<cplx>()).array().exp();
  return h_spec_.vectors * ph.cwiseProduct(h_spec_.vectors.adjoint() * v);
}

Eigen::MatrixXcd SectorPropagator::trotter_step(double dt) const {
  const Eigen::Index d = static_cast<Eigen::Index>(basis_.dim());
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(d, d);
  for (const auto& b : blocks_) U = exponential(b, dt) * U;
  return U;
}

Eigen::VectorXcd SectorPropagator::trotter(const Eigen::VectorXcd& v, double t, int steps) const {
  if (steps < 1) throw std::invalid_argument("need at least one Trotter step");
  const double dt = t / steps;
  std::vector<Eigen::VectorXcd> phases;
  phases.reserve(blocks_.size());
  for (const auto& b : blocks_) phases.push_back((-kI * dt * b.values.cast<cplx>()).array().exp());
  Eigen::VectorXcd w = v;
  for (int s = 0; s < steps; ++s)
    for (std::size_t k = 0; k < blocks_.size(); ++k)
      w = blocks_[k].vectors * phases[k].cwiseProduct(blocks_[k].vectors.adjoint() * w);
  return w;
}

StateVector exact_evolve(const ModelParams& p, const StateVector& s, double t) {
  if (s.nqubits != p.nqubits()) throw std::invalid_argument("state and model sizes differ");
  std::map<std::string, SectorBasis> sectors;
  for (Eigen::Index k = 0; k < s.amp.size(); ++k) {
    if (s.amp(k) == 0.0) continue;
    const SectorKey key = sector_of(p, static_cast<Bits>(k));
    if (!sectors.count(key.label())) sectors.emplace(key.label(), enumerate_sector(p, key));
  }
  StateVector out{s.nqubits, Eigen::VectorXcd::Zero(s.amp.size())};
  const PauliOperator H = build_hamiltonian(p).total();
  for (const auto& [label, basis] : sectors) {
    const Eigen::Index d = static_cast<Eigen::Index>(basis.dim());
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = s.amp(static_cast<Eigen::Index>(basis.states[i]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(assemble_sparse(H, basis)));
    const Eigen::VectorXcd ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
    const Eigen::VectorXcd w = es.eigenvectors() * ph.cwiseProduct(es.eigenvectors().adjoint() * v);
    for (Eigen::Index i = 0; i < d; ++i) out.amp(static_cast<Eigen::Index>(basis.states[i])) = w(i);
  }
  return out;
}

StateVector trotter_evolve(const ModelParams& p, const StateVector& s, double t, int steps,
                           const TrotterOptions& opt) {
  return apply_circuit(s, trotter_circuit(p, t, steps, opt));
}

double transition_probability(const ModelParams& p, Bits source, const std::vector<Bits>& targets, double t,
                              Method m, const TrotterOptions& opt) {
  const SectorPropagator prop(p, enumerate_sector(p, sector_of(p, source)), opt);
  const Eigen::VectorXcd v = prop.unit(source);
  const Eigen::VectorXcd w = m.kind == Method::Exact ? prop.exact(v, t) : prop.trotter(v, t, m.steps);
  double sum = 0;
  for (Bits b : targets) {
    const long i = prop.basis().index_of(b);
    if (i >= 0) sum += std::norm(w(i));
  }
  return sum;
}

double transition_probability(const ModelParams& p, Bits source, Bits target, double t, Method m,
                              const TrotterOptions& opt) {
  return transition_probability(p, source, std::vector<Bits>{target}, t, m, opt);
}

EnergyParts energy_parts(const Hamiltonian& H, const SectorBasis& basis, const Eigen::VectorXcd& v) {
  EnergyParts e;
  e.mass = expectation(H.mass, basis, v).real();
  e.kin = expectation(H.kin, basis, v).real();
  e.el = expectation(H.el, basis, v).real();
  e.mu_b = expectation(H.mu_b, basis, v).real();
  e.mu_i = expectation(H.mu_i, basis, v).real();
  return e;
}

// ---------------------------------------------------------------- step-count scaling

TransitionCurve::TransitionCurve(const SectorPropagator& prop, Bits source, Bits target)
    : prop_(prop), src_(prop.unit(source)), tgt_(prop.basis().index_of(target)) {
  if (tgt_ < 0) throw std::invalid_argument("target not in the source sector");
}

double TransitionCurve::exact(double t) const { return std::norm(prop_.exact(src_, t)(tgt_)); }

double TransitionCurve::trotter(double t, int steps) const { return std::norm(prop_.trotter(src_, t, steps)(tgt_)); }

double TransitionCurve::fractional_error(double t, int steps, const TrotterCriterion& c) const {
  const double e = exact(t);
  return std::abs(trotter(t, steps) - e) / std::max(e, c.abs_floor);
}

namespace {

int first_passing(const TransitionCurve& curve, double t, int from, const TrotterCriterion& c) {
  for (int n = std::max(1, from); n <= c.max_steps; ++n)
    if (curve.fractional_error(t, n, c) <= c.epsilon) return n;
  throw std::runtime_error("Trotter step search exceeded the cap");
}

}  // namespace

TrotterReport trotter_scaling(const TransitionCurve& curve, const std::vector<double>& times,
                              const TrotterCriterion& c) {
  if (c.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  TrotterReport r;
  int n = 1;
  double last = 0;
  for (double t : times) {
    if (t < last) throw std::invalid_argument("times must ascend from zero");
    last = t;
    if (t > 0) n = first_passing(curve, t, n, c);
    r.t.push_back(t);
    r.steps.push_back(n);
  }
  return r;
}

int required_trotter_steps(const TransitionCurve& curve, double t, const TrotterCriterion& c) {
  if (c.grid <= 0) throw std::invalid_argument("grid spacing must be positive");
  std::vector<double> times;
  const int k = static_cast<int>(std::floor(t / c.grid + 1e-9));
  for (int i = 1; i <= k; ++i) times.push_back(i * c.grid);
  if (times.empty() || times.back() < t - 1e-9) times.push_back(t);
  return times.empty() ? 1 : trotter_scaling(curve, times, c).steps.back();
}

QuadraticFit fit_quadratic(const std::vector<std::pair<double, double>>& pts, double t_min) {
  std::vector<std::pair<double, double>> use;
  for (const auto& pt : pts)
    if (pt.first >= t_min) use.push_back(pt);
  const int n = static_cast<int>(use.size());
  if (n < 4) throw std::invalid_argument("quadratic fit needs at least four points");
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = use[i].first * use[i].first;
    X(i, 1) = use[i].first;
    X(i, 2) = 1.0;
    y(i) = use[i].second;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < 3) throw std::invalid_argument("quadratic fit is rank deficient");
  const Eigen::Vector3d beta = qr.solve(y);
  const double rss = (y - X * beta).squaredNorm();
  const int dof = n - 3;
  const Eigen::Matrix3d cov = (X.transpose() * X).inverse() * (rss / dof);
  const double q = boost::math::quantile(boost::math::students_t(dof), 0.975);
  QuadraticFit f;
  f.a = beta(0);
  f.b = beta(1);
  f.c = beta(2);
  f.a_half = q * std::sqrt(std::max(0.0, cov(0, 0)));
  f.b_half = q * std::sqrt(std::max(0.0, cov(1, 1)));
  f.c_half = q * std::sqrt(std::max(0.0, cov(2, 2)));
  f.points = n;
  return f;
}

// ---------------------------------------------------------------- noise and mitigation

namespace {

Gate letter_gate(int letter, int q) {
  switch (letter) {
    case 1: return Gate::x(q);
    case 2: return Gate::y(q);
    default: return Gate::z(q);
  }
}

Bits sample_outcome(const Eigen::VectorXd& prob, double u) {
  double acc = 0;
  for (Eigen::Index k = 0; k < prob.size(); ++k) {
    acc += prob(k);
    if (u < acc) return static_cast<Bits>(k);
  }
  for (Eigen::Index k = prob.size(); k-- > 0;)
    if (prob(k) > 0) return static_cast<Bits>(k);
  return 0;
}

Eigen::VectorXd outcome_distribution(const Eigen::VectorXcd& amp, Eigen::Index d, bool ancilla) {
  // An ancilla left excited by errors is traced out.
  Eigen::VectorXd prob = amp.head(d).cwiseAbs2();
  if (ancilla) prob += amp.tail(d).cwiseAbs2();
  return prob;
}

Histogram run_variants(const Circuit& c, Bits input, const NoiseSpec& noise, std::int64_t shots, int v_begin,
                       int v_end, int ensemble) {
  Histogram h;
  const Eigen::Index d = dim_of(c.nqubits);
  Eigen::VectorXcd start = Eigen::VectorXcd::Zero(dim_of(c.width()));
  start(static_cast<Eigen::Index>(input)) = 1.0;
  for (int v = v_begin; v < v_end; ++v) {
    const Circuit tw = pauli_twirl(c, splitmix64(noise.seed) ^ static_cast<std::uint64_t>(v));
    std::vector<std::size_t> cnots;
    for (std::size_t k = 0; k < tw.gates.size(); ++k)
      if (tw.gates[k].kind == GateKind::CNOT) cnots.push_back(k);
    Eigen::VectorXcd clean = start;
    for (const Gate& g : tw.gates) apply_gate(clean, g);
    const Eigen::VectorXd clean_prob = outcome_distribution(clean, d, c.ancilla);
    const std::int64_t n = shots / ensemble + (v < shots % ensemble ? 1 : 0);
    std::vector<std::pair<std::size_t, int>> faults;
    for (std::int64_t s = 0; s < n; ++s) {
      CounterRng rng(noise.seed, (static_cast<std::uint64_t>(v) << 40) ^ static_cast<std::uint64_t>(s));
      faults.clear();
      if (noise.p > 0)
        for (std::size_t k : cnots)
          if (rng.uniform() < noise.p) faults.push_back({k, static_cast<int>(rng.below(16))});
      if (faults.empty()) {
        ++h[sample_outcome(clean_prob, rng.uniform())];
        continue;
      }
      Eigen::VectorXcd amp = start;
      std::size_t f = 0;
      for (std::size_t k = 0; k < tw.gates.size(); ++k) {
        const Gate& g = tw.gates[k];
        apply_gate(amp, g);
        for (; f < faults.size() && faults[f].first == k; ++f) {
          const int r = faults[f].second;
          if (r & 3) apply_gate(amp, letter_gate(r & 3, g.control));
          if (r >> 2) apply_gate(amp, letter_gate(r >> 2, g.target));
        }
      }
      ++h[sample_outcome(outcome_distribution(amp, d, c.ancilla), rng.uniform())];
    }
  }
  return h;
}

}  // namespace

Histogram simulate_noisy_twirled(const Circuit& c, Bits input, const NoiseSpec& noise, std::int64_t shots) {
  if (noise.p < 0 || noise.p > 1) throw std::invalid_argument("noise strength must lie in [0, 1]");
  if (shots < 0) throw std::invalid_argument("shot count must be nonnegative");
  if (c.width() > 24) throw std::invalid_argument("circuit too wide for shot simulation");
  const int ensemble = std::max(1, noise.ensemble);
  const int workers = std::clamp(noise.workers, 1, ensemble);
  std::vector<std::future<Histogram>> jobs;
  for (int w = 0; w < workers; ++w) {
    const int b = ensemble * w / workers, e = ensemble * (w + 1) / workers;
    jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_variants, std::cref(c),
                              input, std::cref(noise), shots, b, e, ensemble));
  }
  Histogram out;
  for (auto& j : jobs)
    for (const auto& [k, n] : j.get()) out[k] += n;
  return out;
}

PostSelection post_select(const Histogram& h, const ModelParams& p, const SectorKey& key) {
  PostSelection r;
  for (const auto& [k, n] : h) {
    r.total += n;
    if (sector_of(p, k) == key) {
      r.kept[k] += n;
      r.retained += n;
    }
  }
  r.empty = r.retained == 0;
  r.retention = r.total ? static_cast<double>(r.retained) / r.total : 0.0;
  return r;
}

double mitigate_depolarizing(double p_phys, double p_mit, double floor) {
  if (std::abs(p_mit - floor) < 1e-12) throw std::domain_error("mitigation probability sits at the decohered floor");
  return (p_phys - floor) * (1.0 - floor) / (p_mit - floor) + floor;
}

}  // namespace lgt1d
