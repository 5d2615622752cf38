#include "lgt1d/sector.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lgt1d {

SectorKey SectorKey::baryon(int nc, int B, std::optional<int> two_i3) {
  return SectorKey{std::vector<int>(nc, B), two_i3};
}

std::string SectorKey::label() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t c = 0; c < color_charge.size(); ++c) os << (c ? "," : "") << color_charge[c];
  if (two_i3) {
    os << ";I3=";
    if (*two_i3 % 2 == 0) {
      os << *two_i3 / 2;
    } else {
      os << *two_i3 << "/2";
    }
  }
  os << ')';
  return os.str();
}

SectorKey sector_of(const ModelParams& p, Bits ket) {
  SectorKey k;
  k.color_charge.assign(p.nc, -p.L * p.nf);
  int two_i3 = 0;
  for (int n = 0; n < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) {
        const bool occupied = ((ket >> p.qubit(n, f, c)) & 1) == 0;
        if (!occupied) continue;
        ++k.color_charge[c];
        if (f == 0) ++two_i3;
        if (f == 1) --two_i3;
      }
  if (p.nf >= 2) k.two_i3 = two_i3;
  return k;
}

Bits trivial_vacuum(const ModelParams& p) {
  Bits b = 0;
  for (int n = 0; n < 2 * p.L; n += 2)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) b |= Bits{1} << p.qubit(n, f, c);
  return b;
}

long SectorBasis::index_of(Bits ket) const {
  auto it = std::lower_bound(states.begin(), states.end(), ket);
  if (it == states.end() || *it != ket) return -1;
  return static_cast<long>(it - states.begin());
}

namespace {

struct ColorChoice {
  Bits bits;
  int two_i3;
};

// All bit patterns on one color's modes with the requested fermion number.
std::vector<ColorChoice> color_choices(const ModelParams& p, int c, int fermions) {
  std::vector<int> modes;
  std::vector<int> flavor;
  for (int n = 0; n < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f) {
      modes.push_back(p.qubit(n, f, c));
      flavor.push_back(f);
    }
  const int M = static_cast<int>(modes.size());
  std::vector<ColorChoice> out;
  if (fermions < 0 || fermions > M) return out;
  for (std::uint32_t occ = 0; occ < (1u << M); ++occ) {
    if (__builtin_popcount(occ) != fermions) continue;
    Bits bits = 0;
    int t = 0;
    for (int k = 0; k < M; ++k) {
      if ((occ >> k) & 1) {
        if (flavor[k] == 0) ++t;
        if (flavor[k] == 1) --t;
      } else {
        bits |= Bits{1} << modes[k];
      }
    }
    out.push_back({bits, t});
  }
  return out;
}

}  // namespace

SectorBasis enumerate_sector(const ModelParams& p, const SectorKey& key) {
  p.validate();
  if (static_cast<int>(key.color_charge.size()) != p.nc) throw std::invalid_argument("sector key has wrong color count");
  if (key.two_i3 && p.nf < 2) throw std::invalid_argument("I3 needs at least two flavors");
  SectorBasis basis{key, p.nqubits(), {}};
  std::vector<std::vector<ColorChoice>> per_color;
  for (int c = 0; c < p.nc; ++c) {
    const int q = key.color_charge[c];
    if (std::abs(q) > p.L * p.nf) return basis;
    per_color.push_back(color_choices(p, c, q + p.L * p.nf));
  }
  // Remaining I3 reachable by the colors not yet chosen.
  std::vector<int> max_t(p.nc + 1, 0), min_t(p.nc + 1, 0);
  for (int c = p.nc - 1; c >= 0; --c) {
    int lo = 1 << 20, hi = -(1 << 20);
    for (const auto& ch : per_color[c]) {
      lo = std::min(lo, ch.two_i3);
      hi = std::max(hi, ch.two_i3);
    }
    min_t[c] = min_t[c + 1] + lo;
    max_t[c] = max_t[c + 1] + hi;
  }
  std::vector<std::size_t> pick(p.nc, 0);
  auto recurse = [&](auto&& self, int c, Bits acc, int t) -> void {
    if (c == p.nc) {
      if (!key.two_i3 || *key.two_i3 == t) basis.states.push_back(acc);
      return;
    }
    if (key.two_i3 && (*key.two_i3 - t < min_t[c] || *key.two_i3 - t > max_t[c])) return;
    for (const auto& ch : per_color[c]) self(self, c + 1, acc | ch.bits, t + ch.two_i3);
  };
  recurse(recurse, 0, 0, 0);
  std::sort(basis.states.begin(), basis.states.end());
  return basis;
}

std::vector<SectorBasis> all_sectors(const ModelParams& p, bool with_isospin) {
  const int nq = p.nqubits();
  if (nq > 24) throw std::invalid_argument("all_sectors is limited to 24 qubits");
  std::map<std::pair<std::vector<int>, int>, SectorBasis> groups;
  for (Bits b = 0; b < (Bits{1} << nq); ++b) {
    SectorKey k = sector_of(p, b);
    if (!with_isospin) k.two_i3.reset();
    const auto id = std::make_pair(k.color_charge, k.two_i3.value_or(0));
    auto [it, inserted] = groups.try_emplace(id, SectorBasis{k, nq, {}});
    it->second.states.push_back(b);
  }
  std::vector<SectorBasis> out;
  for (auto& [id, s] : groups) out.push_back(std::move(s));
  return out;
}

namespace {

// Terms grouped by their flip pattern, with the letter phase folded in.
struct GroupedOperator {
  struct Group {
    Bits x;
    std::vector<std::pair<Bits, cplx>> zs;
  };
  std::vector<Group> groups;

  explicit GroupedOperator(const PauliOperator& op) {
    std::map<Bits, std::size_t> where;
    for (const auto& [k, c] : op.terms()) {
      const auto [x, z] = k;
      const int y = __builtin_popcountll(x & z);
      static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      auto [it, inserted] = where.try_emplace(x, groups.size());
      if (inserted) groups.push_back({x, {}});
      groups[it->second].zs.emplace_back(z, c * ipow[y & 3]);
    }
  }

  cplx value(const Group& g, Bits ket) const {
    cplx s = 0;
    for (const auto& [z, c] : g.zs) s += c * z_sign(z, ket);
    return s;
  }
};

}  // namespace

SpMatC assemble_sparse(const PauliOperator& op, const SectorBasis& basis) {
  if (op.nqubits() != basis.nqubits) throw std::invalid_argument("operator and basis qubit counts differ");
  const GroupedOperator g(op);
  const long n = static_cast<long>(basis.dim());
  std::vector<Eigen::Triplet<cplx, long>> trip;
  trip.reserve(static_cast<std::size_t>(n) * std::min<std::size_t>(g.groups.size(), 64));
  for (long j = 0; j < n; ++j) {
    const Bits b = basis.states[j];
    for (const auto& grp : g.groups) {
      const long i = basis.index_of(b ^ grp.x);
      if (i < 0) continue;
      const cplx v = g.value(grp, b);
      if (std::abs(v) > kPruneTol) trip.emplace_back(i, j, v);
    }
  }
  SpMatC M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  return M;
}

SpMatR assemble_sparse_real(const PauliOperator& op, const SectorBasis& basis) {
  const SpMatC C = assemble_sparse(op, basis);
  double worst = 0;
  for (long k = 0; k < C.outerSize(); ++k)
    for (SpMatC::InnerIterator it(C, k); it; ++it) worst = std::max(worst, std::abs(it.value().imag()));
  if (worst > 1e-12) throw std::runtime_error("sector matrix is not real");
  SpMatR R = C.real();
  R.makeCompressed();
  return R;
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double amp = -1;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > amp + 1e-12) {
        amp = a;
        best = r;
      }
    }
    if (vectors(best, c) < 0) vectors.col(c) *= -1.0;
  }
}

namespace {

EigenResult dense_eigenpairs(const SpMatR& H, int k) {
  const Eigen::MatrixXd D = Eigen::MatrixXd(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (D + D.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  EigenResult r;
  r.values = es.eigenvalues().head(k);
  r.vectors = es.eigenvectors().leftCols(k);
  r.residuals.resize(k);
  for (int i = 0; i < k; ++i) r.residuals(i) = (H * r.vectors.col(i) - r.values(i) * r.vectors.col(i)).norm();
  return r;
}

// Thick-restart Lanczos with full reorthogonalization.
EigenResult lanczos_eigenpairs(const SpMatR& H, const EigenOptions& opt) {
  const Eigen::Index n = H.rows();
  const int k = opt.k;
  const int m = static_cast<int>(std::min<Eigen::Index>(n, std::max(2 * k + 40, 100)));
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  };
  V.col(0) = random_vector().normalized();
  int start = 0;
  double hnorm = 0;
  Eigen::VectorXd w(n), h;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    double beta = 0;
    for (int j = start; j < m; ++j) {
      w.noalias() = H * V.col(j);
      h = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h2;
      h += h2;
      T.col(j).head(j + 1) = h;
      T.row(j).head(j + 1) = h.transpose();
      beta = w.norm();
      if (j + 1 < m) {
        if (beta < 1e-12 * std::max(1.0, hnorm)) {
          // Invariant subspace: continue with a fresh orthogonal direction.
          Eigen::VectorXd r = random_vector();
          for (int pass = 0; pass < 2; ++pass) r -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * r);
          V.col(j + 1) = r.normalized();
        } else {
          V.col(j + 1) = w / beta;
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& S = es.eigenvectors();
    hnorm = std::max({hnorm, std::abs(theta(0)), std::abs(theta(m - 1))});
    Eigen::VectorXd res(k);
    bool done = true;
    for (int i = 0; i < k; ++i) {
      res(i) = beta * std::abs(S(m - 1, i));
      if (res(i) > opt.tol * std::max(1.0, hnorm)) done = false;
    }
    if (m == n) {
      done = true;
      res.setZero();
    }
    if (done || restart == opt.max_restarts) {
      EigenResult r;
      r.values = theta.head(k);
      r.vectors = V.leftCols(m) * S.leftCols(k);
      r.residuals.resize(k);
      for (int i = 0; i < k; ++i) r.residuals(i) = (H * r.vectors.col(i) - theta(i) * r.vectors.col(i)).norm();
      r.iterations = restart + 1;
      if (!done || r.residuals.maxCoeff() > 10 * opt.tol * std::max(1.0, hnorm)) {
        std::ostringstream os;
        os << "Lanczos did not converge: worst residual " << r.residuals.maxCoeff() << " after " << r.iterations
           << " restarts";
        throw std::runtime_error(os.str());
      }
      return r;
    }
    const int keep = std::min(m - 1, k + (m - k) / 2);
    const Eigen::MatrixXd ritz = V.leftCols(m) * S.leftCols(keep);
    V.leftCols(keep) = ritz;
    V.col(keep) = w / beta;
    T.setZero();
    for (int i = 0; i < keep; ++i) T(i, i) = theta(i);
    start = keep;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

EigenResult lowest_eigenpairs(const SpMatR& H, const EigenOptions& opt) {
  if (H.rows() != H.cols()) throw std::invalid_argument("matrix must be square");
  const int n = static_cast<int>(H.rows());
  if (opt.k < 1 || opt.k > n) throw std::invalid_argument("k must be in [1, dim]");
  EigenResult r = n <= opt.dense_limit ? dense_eigenpairs(H, opt.k) : lanczos_eigenpairs(H, opt);
  fix_signs(r.vectors);
  return r;
}

namespace {

template <class Vec>
cplx expectation_impl(const PauliOperator& op, const SectorBasis& basis, const Vec& v) {
  if (op.nqubits() != basis.nqubits) throw std::invalid_argument("operator and basis qubit counts differ");
  if (static_cast<std::size_t>(v.size()) != basis.dim()) throw std::invalid_argument("vector length differs from basis");
  const GroupedOperator g(op);
  cplx s = 0;
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    if (v(j) == 0.0) continue;
    const Bits b = basis.states[j];
    for (const auto& grp : g.groups) {
      const long i = basis.index_of(b ^ grp.x);
      if (i < 0) continue;
      s += std::conj(cplx(v(i))) * g.value(grp, b) * cplx(v(j));
    }
  }
  return s;
}

}  // namespace

Eigen::VectorXd expectations(const PauliOperator& op, const SectorBasis& basis, const Eigen::MatrixXd& V) {
  if (op.nqubits() != basis.nqubits) throw std::invalid_argument("operator and basis qubit counts differ");
  if (static_cast<std::size_t>(V.rows()) != basis.dim()) throw std::invalid_argument("vector length differs from basis");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(V.cols());
  if (op.empty()) return out;
  const GroupedOperator g(op);
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const Bits b = basis.states[j];
    for (const auto& grp : g.groups) {
      const long i = basis.index_of(b ^ grp.x);
      if (i < 0) continue;
      const double val = g.value(grp, b).real();
      if (val == 0.0) continue;
      out.noalias() += val * V.row(i).cwiseProduct(V.row(j)).transpose();
    }
  }
  return out;
}

cplx expectation(const PauliOperator& op, const SectorBasis& basis, const Eigen::VectorXcd& v) {
  return expectation_impl(op, basis, v);
}

double expectation(const PauliOperator& op, const SectorBasis& basis, const Eigen::VectorXd& v) {
  return expectation_impl(op, basis, v).real();
}

EnergyParts EnergyParts::operator-(const EnergyParts& o) const {
  return {mass - o.mass, kin - o.kin, el - o.el, mu_b - o.mu_b, mu_i - o.mu_i, penalty - o.penalty};
}

EnergyParts EnergyParts::operator*(double s) const {
  return {mass * s, kin * s, el * s, mu_b * s, mu_i * s, penalty * s};
}

EnergyParts decompose_energy(const Hamiltonian& H, const PauliOperator& penalty, const SectorBasis& basis,
                             const Eigen::VectorXd& v) {
  EnergyParts e;
  e.mass = expectation(H.mass, basis, v);
  e.kin = expectation(H.kin, basis, v);
  e.el = expectation(H.el, basis, v);
  e.mu_b = expectation(H.mu_b, basis, v);
  e.mu_i = expectation(H.mu_i, basis, v);
  e.penalty = expectation(penalty, basis, v);
  return e;
}

namespace {

Bits quark_mask(const ModelParams& p) {
  Bits m = 0;
  for (int n = 0; n < 2 * p.L; n += 2)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) m |= Bits{1} << p.qubit(n, f, c);
  return m;
}

Bits all_mask(const ModelParams& p) {
  const int nq = p.nqubits();
  return nq >= 64 ? ~Bits{0} : (Bits{1} << nq) - 1;
}

}  // namespace

double linear_entropy(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXcd& v) {
  const Bits qm = quark_mask(p), am = all_mask(p) & ~qm;
  std::map<Bits, long> rows, cols;
  for (Bits b : basis.states) {
    rows.try_emplace(b & qm, static_cast<long>(rows.size()));
    cols.try_emplace(b & am, static_cast<long>(cols.size()));
  }
  std::vector<Eigen::Triplet<cplx, long>> trip;
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const Bits b = basis.states[j];
    trip.emplace_back(rows[b & qm], cols[b & am], v(j));
  }
  SpMatC M(static_cast<long>(rows.size()), static_cast<long>(cols.size()));
  M.setFromTriplets(trip.begin(), trip.end());
  const double norm2 = v.squaredNorm();
  const SpMatC rho = (M.rows() <= M.cols()) ? SpMatC(M * M.adjoint()) : SpMatC(M.adjoint() * M);
  return 1.0 - rho.squaredNorm() / (norm2 * norm2);
}

double linear_entropy(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXd& v) {
  return linear_entropy(p, basis, Eigen::VectorXcd(v.cast<cplx>()));
}

double occupation(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXd& v) {
  const Bits qm = quark_mask(p), am = all_mask(p) & ~qm;
  double s = 0;
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const Bits b = basis.states[j];
    const int occ = __builtin_popcountll(~b & qm) + __builtin_popcountll(b & am);
    s += v(j) * v(j) * occ;
  }
  return s / v.squaredNorm();
}

std::vector<double> electric_field_profile(const ModelParams& p, const SectorBasis& basis, const Eigen::VectorXd& v) {
  if (std::abs(v.norm() - 1.0) > 1e-8) throw std::invalid_argument("state must be normalized");
  std::vector<double> out;
  for (int link = 0; link + 1 < 2 * p.L; ++link) out.push_back(expectation(link_casimir(p, link), basis, v));
  return out;
}

SectorSpectrum sector_spectrum(const ModelParams& p, const SectorKey& key, const SpectrumOptions& opt) {
  SectorSpectrum out{enumerate_sector(p, key), {}};
  const auto& basis = out.basis;
  if (basis.dim() == 0) return out;
  const Hamiltonian H = build_hamiltonian(p);
  const PauliOperator pen = build_penalty(p);
  const SpMatR M = assemble_sparse_real((H.total() + pen).prune(), basis);
  EigenOptions eo;
  eo.k = std::min<int>(opt.k, static_cast<int>(basis.dim()));
  eo.tol = opt.tol;
  eo.dense_limit = opt.dense_limit;
  const EigenResult er = lowest_eigenpairs(M, eo);
  const Eigen::MatrixXd& V = er.vectors;
  const Eigen::VectorXd casimir = expectations(color_casimir(p), basis, V);
  const Eigen::VectorXd iso = p.nf >= 2 ? expectations(isospin_casimir(p), basis, V) : Eigen::VectorXd::Zero(V.cols());
  const Eigen::VectorXd mass = expectations(H.mass, basis, V);
  const Eigen::VectorXd kin = expectations(H.kin, basis, V);
  const Eigen::VectorXd el = expectations(H.el, basis, V);
  const Eigen::VectorXd mub = expectations(H.mu_b, basis, V);
  const Eigen::VectorXd mui = expectations(H.mu_i, basis, V);
  for (int i = 0; i < er.values.size(); ++i) {
    SectorState s;
    s.vector = V.col(i);
    s.energy = er.values(i);
    s.color_casimir = casimir(i);
    s.isospin2 = iso(i);
    s.entropy = linear_entropy(p, basis, s.vector);
    s.occupation = occupation(p, basis, s.vector);
    s.parts = EnergyParts{mass(i), kin(i), el(i), mub(i), mui(i), 0.5 * p.h * p.h * casimir(i)};
    out.states.push_back(std::move(s));
  }
  return out;
}

namespace {

// Lowest singlets of a sector, growing k until `want` returns true.
template <class Want>
SectorSpectrum search_sector(const ModelParams& p, const SectorKey& key, const HadronOptions& opt, Want want) {
  SpectrumOptions so = opt.spectrum;
  for (;;) {
    SectorSpectrum s = sector_spectrum(p, key, so);
    if (s.basis.dim() == 0) throw std::runtime_error("sector " + key.label() + " is empty");
    if (want(s) || so.k >= static_cast<int>(s.basis.dim()) || so.k >= opt.max_k) return s;
    so.k = std::min({2 * so.k, opt.max_k, static_cast<int>(s.basis.dim())});
  }
}

bool is_singlet(const SectorState& s, double tol) { return std::abs(s.color_casimir) < tol; }

const SectorState* nth_singlet(const SectorSpectrum& s, double tol, int skip, std::optional<double> isospin2) {
  int seen = 0;
  for (const auto& st : s.states) {
    if (!is_singlet(st, tol)) continue;
    if (isospin2 && std::abs(st.isospin2 - *isospin2) > 1e-6) continue;
    if (seen++ == skip) return &st;
  }
  return nullptr;
}

}  // namespace

HadronTable hadron_spectrum(const ModelParams& p, const HadronOptions& opt) {
  p.validate();
  HadronTable t;
  t.has_isospin = p.nf >= 2;
  const double tol = opt.spectrum.singlet_tol;
  const std::optional<int> zero_i3 = t.has_isospin ? std::optional<int>(0) : std::nullopt;

  const SectorKey vac_key = SectorKey::baryon(p.nc, 0, zero_i3);
  auto meson_found = [&](const SectorSpectrum& s) {
    if (!t.has_isospin) return nth_singlet(s, tol, 1, std::nullopt) != nullptr;
    return nth_singlet(s, tol, 1, 0.0) && nth_singlet(s, tol, 0, 2.0);
  };
  const SectorSpectrum vac = search_sector(p, vac_key, opt, meson_found);
  const SectorState* v0 = nth_singlet(vac, tol, 0, t.has_isospin ? std::optional<double>(0.0) : std::nullopt);
  if (!v0) throw std::runtime_error("no singlet vacuum found");
  t.vacuum = *v0;
  t.E_vac = v0->energy;
  const SectorState* sig = t.has_isospin ? nth_singlet(vac, tol, 1, 0.0) : nth_singlet(vac, tol, 1, std::nullopt);
  const SectorState* pi = t.has_isospin ? nth_singlet(vac, tol, 0, 2.0) : sig;
  if (!sig || !pi) throw std::runtime_error("meson states not found in sector " + vac_key.label());
  t.sigma = *sig;
  t.pi = *pi;
  if (t.has_isospin) {
    const SectorSpectrum charged = search_sector(p, SectorKey::baryon(p.nc, 0, 2), opt, [&](const SectorSpectrum& s) {
      return nth_singlet(s, tol, 0, 2.0) != nullptr;
    });
    if (const SectorState* pp = nth_singlet(charged, tol, 0, 2.0)) t.pi = *pp;
  }
  t.M_sigma = sig->energy - t.E_vac;
  t.M_pi = t.pi.energy - t.E_vac;
  if (!opt.baryons) return t;

  const std::optional<int> delta_i3 = t.has_isospin ? std::optional<int>(p.nc) : std::nullopt;
  const SectorKey dkey = SectorKey::baryon(p.nc, 1, delta_i3);
  const SectorSpectrum ds =
      search_sector(p, dkey, opt, [&](const SectorSpectrum& s) { return nth_singlet(s, tol, 0, std::nullopt) != nullptr; });
  const SectorState* d = nth_singlet(ds, tol, 0, std::nullopt);
  if (!d) throw std::runtime_error("no singlet baryon in sector " + dkey.label());
  t.delta = *d;
  t.M_Delta = d->energy - t.E_vac;

  if (p.L * p.nf >= 2) {
    const SectorKey ddkey = SectorKey::baryon(p.nc, 2, zero_i3);
    const std::optional<double> iso0 = t.has_isospin ? std::optional<double>(0.0) : std::nullopt;
    const SectorSpectrum dd =
        search_sector(p, ddkey, opt, [&](const SectorSpectrum& s) { return nth_singlet(s, tol, 0, iso0) != nullptr; });
    const SectorState* x = nth_singlet(dd, tol, 0, iso0);
    if (!x) throw std::runtime_error("no singlet dibaryon in sector " + ddkey.label());
    t.deltadelta = *x;
    t.has_deltadelta = true;
    t.M_DeltaDelta = x->energy - t.E_vac;
    t.B_DeltaDelta = 2 * t.M_Delta - t.M_DeltaDelta;
  }
  return t;
}

std::string hadron_table_json(const ModelParams& p, const HadronTable& t) {
  nlohmann::json j;
  j["params"] = nlohmann::json::parse(config_to_json(p));
  j["E_vac"] = t.E_vac;
  j["M_sigma"] = t.M_sigma;
  j["M_pi"] = t.M_pi;
  j["M_Delta"] = t.M_Delta;
  if (t.has_deltadelta) {
    j["M_DeltaDelta"] = t.M_DeltaDelta;
    j["B_DeltaDelta"] = t.B_DeltaDelta;
  }
  auto parts = [](const EnergyParts& e) {
    return nlohmann::json{{"mass", e.mass}, {"kin", e.kin}, {"el", e.el}, {"total", e.total()}};
  };
  j["vacuum_parts"] = parts(t.vacuum.parts);
  j["sigma_parts"] = parts(t.sigma.parts - t.vacuum.parts);
  j["pi_parts"] = parts(t.pi.parts - t.vacuum.parts);
  j["Delta_parts"] = parts(t.delta.parts - t.vacuum.parts);
  if (t.has_deltadelta)
    j["B_DeltaDelta_parts"] =
        parts((t.delta.parts - t.vacuum.parts) * 2.0 - (t.deltadelta.parts - t.vacuum.parts));
  return j.dump(2);
}

std::string sector_spectrum_csv(const SectorSpectrum& s) {
  std::ostringstream os;
  os.precision(7);
  os << "sector,index,energy,isospin2,color_casimir,linear_entropy,occupation\n";
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    const auto& st = s.states[i];
    os << '"' << s.basis.key.label() << "\"," << i << ',' << st.energy << ',' << st.isospin2 << ','
       << st.color_casimir << ',' << st.entropy << ',' << st.occupation << '\n';
  }
  return os.str();
}

}  // namespace lgt1d
