#include "lgt1d/model.hpp"

#include <cmath>
#include <json.hpp>
#include <stdexcept>

namespace lgt1d {

void ModelParams::validate() const {
  if (nc < 2) throw std::invalid_argument("nc must be >= 2");
  if (nf < 1) throw std::invalid_argument("nf must be >= 1");
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  if (static_cast<int>(masses.size()) != nf) throw std::invalid_argument("need one mass per flavor");
  if (g < 0 || h < 0) throw std::invalid_argument("g and h must be nonnegative");
}

ModelParams make_params(int nc, int nf, int L, double m, double g, double h) {
  ModelParams p;
  p.nc = nc;
  p.nf = nf;
  p.L = L;
  p.masses.assign(nf, m);
  p.g = g;
  p.h = h;
  p.validate();
  return p;
}

std::vector<Eigen::MatrixXcd> su_n_generators(int nc) {
  if (nc < 2) throw std::invalid_argument("su_n_generators needs nc >= 2");
  std::vector<Eigen::MatrixXcd> out;
  const cplx I{0, 1};
  for (int j = 1; j < nc; ++j) {
    for (int i = 0; i < j; ++i) {
      Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(nc, nc);
      s(i, j) = s(j, i) = 0.5;
      out.push_back(s);
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nc, nc);
      a(i, j) = -0.5 * I;
      a(j, i) = 0.5 * I;
      out.push_back(a);
    }
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(nc, nc);
    const double norm = 1.0 / std::sqrt(2.0 * j * (j + 1));
    for (int k = 0; k < j; ++k) d(k, k) = norm;
    d(j, j) = -j * norm;
    out.push_back(d);
  }
  return out;
}

std::vector<int> cartan_indices(int nc) {
  std::vector<int> out;
  int a = 0;
  for (int j = 1; j < nc; ++j) {
    a += 2 * j;
    out.push_back(a);
    ++a;
  }
  return out;
}

namespace {

void check_site(const ModelParams& p, int n, int f) {
  if (n < 0 || n >= 2 * p.L || f < 0 || f >= p.nf) throw std::out_of_range("site or flavor out of range");
}

PauliOperator z_op(int nq, int q, cplx c = 1.0) {
  return PauliOperator::from_string(PauliString::single(nq, q, 'Z'), c);
}

PauliOperator zz_op(int nq, int q1, int q2, cplx c) {
  return PauliOperator::from_string(multiply(PauliString::single(nq, q1, 'Z'), PauliString::single(nq, q2, 'Z')), c);
}

PauliOperator hermitian_part(const PauliOperator& op) { return (0.5 * (op + op.adjoint())).prune(); }

}  // namespace

PauliOperator charge_operator(const ModelParams& p, int n, int f, int a) {
  check_site(p, n, f);
  const auto gens = su_n_generators(p.nc);
  if (a < 0 || a >= static_cast<int>(gens.size())) throw std::out_of_range("adjoint index out of range");
  const int nq = p.nqubits();
  PauliOperator q(nq);
  for (int c = 0; c < p.nc; ++c)
    for (int d = 0; d < p.nc; ++d) {
      const cplx t = gens[a](c, d);
      if (std::abs(t) < 1e-15) continue;
      q += t * jw_bilinear(p.qubit(n, f, c), p.qubit(n, f, d), nq);
    }
  return hermitian_part(q);
}

PauliOperator charge_product(const ModelParams& p, int n, int f, int m, int f2) {
  check_site(p, n, f);
  check_site(p, m, f2);
  const int nq = p.nqubits();
  const double nc = p.nc;
  PauliOperator r(nq);
  if (n == m && f == f2) {
    r += PauliOperator::identity(nq, (nc * nc - 1) / 8.0);
    for (int c = 0; c < p.nc; ++c)
      for (int d = c + 1; d < p.nc; ++d)
        r += zz_op(nq, p.qubit(n, f, c), p.qubit(n, f, d), -(1.0 + 1.0 / nc) / 4.0);
    return r.prune();
  }
  for (int c = 0; c < p.nc; ++c)
    for (int d = 0; d < p.nc; ++d) {
      if (c != d)
        r += 0.5 * (jw_bilinear(p.qubit(n, f, c), p.qubit(n, f, d), nq) *
                    jw_bilinear(p.qubit(m, f2, d), p.qubit(m, f2, c), nq));
      r += zz_op(nq, p.qubit(n, f, c), p.qubit(m, f2, d), ((c == d ? 1.0 : 0.0) - 1.0 / nc) / 8.0);
    }
  return hermitian_part(r);
}

PauliOperator total_charge(const ModelParams& p, int a) {
  PauliOperator q(p.nqubits());
  for (int n = 0; n < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f) q += charge_operator(p, n, f, a);
  return q.prune();
}

PauliOperator Hamiltonian::total() const {
  return (kin + mass + el + mu_b + mu_i).prune();
}

namespace {

// sum_a (sum_{n <= last, f} Q^a_{n,f})^2 via the charge-product closed forms.
PauliOperator cumulative_casimir(const ModelParams& p, int last) {
  PauliOperator r(p.nqubits());
  for (int n = 0; n <= last; ++n)
    for (int f = 0; f < p.nf; ++f)
      for (int m = 0; m <= last; ++m)
        for (int f2 = 0; f2 < p.nf; ++f2) {
          if (m < n || (m == n && f2 < f)) continue;
          const double w = (m == n && f2 == f) ? 1.0 : 2.0;
          r += w * charge_product(p, n, f, m, f2);
        }
  return r.prune();
}

}  // namespace

PauliOperator link_casimir(const ModelParams& p, int link) {
  if (link < 0 || link >= 2 * p.L) throw std::out_of_range("link out of range");
  return cumulative_casimir(p, link);
}

PauliOperator color_casimir(const ModelParams& p) { return cumulative_casimir(p, 2 * p.L - 1); }

Hamiltonian build_hamiltonian(const ModelParams& p) {
  p.validate();
  const int nq = p.nqubits();
  const int K = p.block();
  Hamiltonian H{PauliOperator(nq), PauliOperator(nq), PauliOperator(nq), PauliOperator(nq), PauliOperator(nq)};
  for (int n = 0; n + 1 < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) {
        const int i = p.qubit(n, f, c);
        const PauliOperator hop = jw_bilinear(i, i + K, nq);
        H.kin += 0.5 * (hop + hop.adjoint());
      }
  H.kin.prune();
  for (int n = 0; n < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) {
        const int q = p.qubit(n, f, c);
        const double m = p.mass(f);
        H.mass += z_op(nq, q, 0.5 * m * ((n % 2) ? -1.0 : 1.0));
        if (p.mass_shift) H.mass += PauliOperator::identity(nq, 0.5 * m);
        H.mu_b += z_op(nq, q, -p.mu_b / (2.0 * p.nc));
        H.mu_i += z_op(nq, q, -p.mu_i / 4.0 * ((f % 2) ? -1.0 : 1.0));
      }
  H.mass.prune();
  H.mu_b.prune();
  H.mu_i.prune();
  const double g2 = p.g * p.g;
  if (g2 > 0) {
    for (int link = 0; link + 1 < 2 * p.L; ++link) H.el += (0.5 * g2) * link_casimir(p, link);
  }
  H.el.prune();
  return H;
}

PauliOperator build_penalty(const ModelParams& p) {
  if (p.h == 0) return PauliOperator(p.nqubits());
  return (0.5 * p.h * p.h) * color_casimir(p);
}

PauliOperator isospin_casimir(const ModelParams& p) {
  const int nq = p.nqubits();
  if (p.nf < 2) return PauliOperator(nq);
  PauliOperator up(nq), iz(nq);
  for (int n = 0; n < 2 * p.L; ++n)
    for (int c = 0; c < p.nc; ++c) {
      const int u = p.qubit(n, 0, c), d = p.qubit(n, 1, c);
      up += jw_bilinear(u, d, nq);
      iz += z_op(nq, u, 0.25);
      iz += z_op(nq, d, -0.25);
    }
  const PauliOperator down = up.adjoint();
  return (iz * iz + 0.5 * (up * down + down * up)).prune();
}

PauliOperator occupation_operator(const ModelParams& p) {
  const int nq = p.nqubits();
  PauliOperator r(nq);
  for (int n = 0; n < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) {
        r += PauliOperator::identity(nq, 0.5);
        r += z_op(nq, p.qubit(n, f, c), (n % 2) ? -0.5 : 0.5);
      }
  return r.prune();
}

ModelParams parse_config(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  ModelParams p;
  p.nc = j.value("nc", 3);
  p.nf = j.value("nf", 1);
  p.L = j.value("l", 1);
  if (j.contains("masses")) {
    p.masses = j.at("masses").get<std::vector<double>>();
  } else {
    p.masses.assign(p.nf, 1.0);
  }
  p.g = j.value("g", 1.0);
  p.mu_b = j.value("mu_b", 0.0);
  p.mu_i = j.value("mu_i", 0.0);
  p.h = j.value("h", 0.0);
  for (const auto& [key, value] : j.items()) {
    static const char* known[] = {"nc", "nf", "l", "masses", "g", "mu_b", "mu_i", "h"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown config key: " + key);
  }
  p.validate();
  return p;
}

std::string config_to_json(const ModelParams& p) {
  nlohmann::json j;
  j["nc"] = p.nc;
  j["nf"] = p.nf;
  j["l"] = p.L;
  j["masses"] = p.masses;
  j["g"] = p.g;
  j["mu_b"] = p.mu_b;
  j["mu_i"] = p.mu_i;
  j["h"] = p.h;
  return j.dump(2);
}

}  // namespace lgt1d
