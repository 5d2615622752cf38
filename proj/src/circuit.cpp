#include "lgt1d/circuit.hpp"

#include "lgt1d/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace lgt1d {

// ---------------------------------------------------------------- circuit basics

void Circuit::emit(const Gate& g) { gates.push_back(g); }

void Circuit::append(const Circuit& o) {
  if (o.nqubits != nqubits) throw std::invalid_argument("circuit widths differ");
  ancilla = ancilla || o.ancilla;
  global_phase += o.global_phase;
  gates.insert(gates.end(), o.gates.begin(), o.gates.end());
}

Circuit Circuit::inverse() const {
  Circuit r(nqubits, ancilla);
  r.global_phase = -global_phase;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    g.angle = -g.angle;
    r.gates.push_back(g);
  }
  return r;
}

namespace {

std::vector<int> operands(const Gate& g) {
  std::vector<int> q{g.target};
  if (g.kind == GateKind::CNOT) q.push_back(g.control);
  for (const auto& c : g.controls) q.push_back(c.qubit);
  return q;
}

}  // namespace

void Circuit::validate() const {
  for (const auto& g : gates) {
    auto q = operands(g);
    for (int v : q)
      if (v < 0 || v >= width()) throw std::out_of_range("gate operand outside the register");
    std::sort(q.begin(), q.end());
    if (std::adjacent_find(q.begin(), q.end()) != q.end()) throw std::invalid_argument("repeated gate operand");
    if (!std::isfinite(g.angle)) throw std::invalid_argument("non-finite gate angle");
    if (g.kind == GateKind::CRY && g.controls.empty()) throw std::invalid_argument("CRY without controls");
  }
}

ResourceCount& ResourceCount::operator+=(const ResourceCount& o) {
  rz += o.rz;
  ry += o.ry;
  hadamard += o.hadamard;
  cnot += o.cnot;
  pauli += o.pauli;
  cry += o.cry;
  return *this;
}

namespace {

void tally(ResourceCount& c, const Gate& g, bool expand_cry) {
  switch (g.kind) {
    case GateKind::RZ: ++c.rz; break;
    case GateKind::RY: ++c.ry; break;
    case GateKind::H: ++c.hadamard; break;
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z: ++c.pauli; break;
    case GateKind::CNOT: ++c.cnot; break;
    case GateKind::CRY:
      if (expand_cry) {
        const std::int64_t n = std::int64_t{1} << g.controls.size();
        c.cnot += n;
        c.ry += n;
      } else {
        ++c.cry;
      }
      break;
  }
}

}  // namespace

void GateCounter::emit(const Gate& g) { tally(c_, g, true); }

std::string term_name(TermKind k) {
  switch (k) {
    case TermKind::Mass: return "mass";
    case TermKind::MuB: return "mu_b";
    case TermKind::MuI: return "mu_i";
    case TermKind::Kinetic: return "kin";
    case TermKind::Electric: return "el";
  }
  return "?";
}

TermKind parse_term(const std::string& s) {
  for (TermKind k : {TermKind::Mass, TermKind::MuB, TermKind::MuI, TermKind::Kinetic, TermKind::Electric})
    if (term_name(k) == s) return k;
  throw std::invalid_argument("unknown term '" + s + "'");
}

bool default_kinetic_ancilla(const ModelParams& p) { return p.nc * p.nf >= 4; }

// ---------------------------------------------------------------- Clifford conjugation

namespace {

PauliString image_of(int n, int q, char letter, const Gate& g) {
  const PauliString p = PauliString::single(n, q, letter);
  auto neg = [](PauliString s) {
    s.phase = (s.phase + 2) & 3;
    return s;
  };
  switch (g.kind) {
    case GateKind::H:
      if (q != g.target) return p;
      return PauliString::single(n, q, letter == 'X' ? 'Z' : 'X');
    case GateKind::X:
      return (q == g.target && letter == 'Z') ? neg(p) : p;
    case GateKind::Z:
      return (q == g.target && letter == 'X') ? neg(p) : p;
    case GateKind::Y:
      return q == g.target ? neg(p) : p;
    case GateKind::CNOT:
      if (letter == 'X' && q == g.control) return multiply(p, PauliString::single(n, g.target, 'X'));
      if (letter == 'Z' && q == g.target) return multiply(PauliString::single(n, g.control, 'Z'), p);
      return p;
    default:
      throw std::invalid_argument("conjugation needs a Clifford gate");
  }
}

}  // namespace

PauliString conjugate(const PauliString& p, const Gate& g) {
  for (int q : operands(g))
    if (q >= p.nqubits) throw std::out_of_range("gate outside the string");
  const int n = p.nqubits;
  // p = i^phase * i^{|x&z|} X^x Z^z
  PauliString r = PauliString::identity(n);
  r.phase = (p.phase + __builtin_popcountll(p.x & p.z)) & 3;
  for (int q = 0; q < n; ++q)
    if ((p.x >> q) & 1) r = multiply(r, image_of(n, q, 'X', g));
  for (int q = 0; q < n; ++q)
    if ((p.z >> q) & 1) r = multiply(r, image_of(n, q, 'Z', g));
  return r;
}

PauliOperator conjugate(const PauliOperator& op, const Gate& g) {
  PauliOperator r(op.nqubits());
  for (const auto& [k, c] : op.terms()) r.add(conjugate(key_string(op.nqubits(), k), g), c);
  return r.prune();
}

PauliOperator conjugate_by_cnot(const PauliOperator& op, int control, int target) {
  return conjugate(op, Gate::cnot(control, target));
}

namespace {

// F^dagger op F for F = product of frame gates applied in list order.
PauliOperator through_frame(PauliOperator op, const std::vector<Gate>& frame) {
  for (auto it = frame.rbegin(); it != frame.rend(); ++it) op = conjugate(op, *it);
  return op;
}

Gate remap(Gate g, const std::vector<int>& m) {
  g.target = m.at(g.target);
  if (g.control >= 0) g.control = m.at(g.control);
  for (auto& c : g.controls) c.qubit = m.at(c.qubit);
  return g;
}

double real_coefficient(const PauliOperator& op, Bits x, Bits z) {
  auto it = op.terms().find({x, z});
  if (it == op.terms().end()) return 0.0;
  if (std::abs(it->second.imag()) > 1e-12) throw std::logic_error("unexpected complex coefficient");
  return it->second.real();
}

// ---------------------------------------------------------------- one-body terms

void emit_z_layer(const ModelParams& p, double t, GateSink& out, const std::function<double(int, int)>& coef,
                  double constant) {
  for (int n = 0; n < 2 * p.L; ++n)
    for (int f = 0; f < p.nf; ++f)
      for (int c = 0; c < p.nc; ++c) {
        const double k = coef(n, f);
        out.emit(Gate::rz(p.qubit(n, f, c), 2.0 * t * k));
      }
  if (constant != 0) out.add_phase(-t * constant);
}

}  // namespace

void emit_mass(const ModelParams& p, double t, GateSink& out) {
  double constant = 0;
  if (p.mass_shift)
    for (int f = 0; f < p.nf; ++f) constant += 0.5 * p.mass(f) * 2 * p.L * p.nc;
  emit_z_layer(
      p, t, out, [&](int n, int f) { return 0.5 * p.mass(f) * ((n % 2) ? -1.0 : 1.0); }, constant);
}

void emit_mu_b(const ModelParams& p, double t, GateSink& out) {
  emit_z_layer(
      p, t, out, [&](int, int) { return -p.mu_b / (2.0 * p.nc); }, 0.0);
}

void emit_mu_i(const ModelParams& p, double t, GateSink& out) {
  emit_z_layer(
      p, t, out, [&](int, int f) { return -p.mu_i / 4.0 * ((f % 2) ? -1.0 : 1.0); }, 0.0);
}

// ---------------------------------------------------------------- kinetic

namespace {

// Coefficients (of Z_i, Z_i Z_j) of one hop after the frame [H(i), CNOT(i->j)].
struct HopAngles {
  double zi = 0, zij = 0;
};

HopAngles hop_angles(int K) {
  const PauliOperator hop = 0.5 * (jw_bilinear(0, K, K + 1) + jw_creation(K, K + 1) * jw_annihilation(0, K + 1));
  const Bits ends = Bits{1} | (Bits{1} << K);
  const Bits mid = ((Bits{1} << K) - 1) & ~Bits{1};
  if (hop.size() != 2) throw std::logic_error("hop has unexpected structure");
  PauliOperator local(2);
  local.add(PauliOperator::Key{3, 0}, real_coefficient(hop, ends, mid));
  local.add(PauliOperator::Key{3, 3}, real_coefficient(hop, ends, mid | ends));
  const PauliOperator d = through_frame(local, {Gate::h(0), Gate::cnot(0, 1)});
  HopAngles a{real_coefficient(d, 0, 1), real_coefficient(d, 0, 3)};
  if (d.size() != 2) throw std::logic_error("hop frame does not diagonalize");
  return a;
}

}  // namespace

void emit_kinetic(const ModelParams& p, double t, bool use_ancilla, GateSink& out) {
  const int K = p.block();
  const int nq = p.nqubits();
  const int nhops = nq - K;
  if (nhops <= 0) return;
  const HopAngles a = hop_angles(K);
  const int anc = nq;
  if (use_ancilla)
    for (int e = 1; e < K; ++e) out.emit(Gate::cnot(e, anc));
  for (int i = 0; i < nhops; ++i) {
    const int j = i + K;
    if (use_ancilla) {
      out.emit(Gate::cnot(i, j));
      out.emit(Gate::h(i));
      out.emit(Gate::cnot(i, anc));
      out.emit(Gate::rz(anc, 2.0 * t * a.zi));
      out.emit(Gate::cnot(j, anc));
      out.emit(Gate::rz(anc, 2.0 * t * a.zij));
      out.emit(Gate::cnot(j, anc));
      out.emit(Gate::cnot(i, anc));
      out.emit(Gate::h(i));
      out.emit(Gate::cnot(i, j));
      if (i + 1 < nhops) {
        out.emit(Gate::cnot(i + 1, anc));
        out.emit(Gate::cnot(j, anc));
      } else {
        for (int e = i + 1; e < j; ++e) out.emit(Gate::cnot(e, anc));
      }
    } else {
      // Parity of the string qubits i+1..j-1 collects on j-1.
      for (int e = i + 1; e + 1 < j; ++e) out.emit(Gate::cnot(e, e + 1));
      out.emit(Gate::cnot(i, j));
      out.emit(Gate::h(i));
      if (K > 1) out.emit(Gate::cnot(j - 1, i));
      out.emit(Gate::rz(i, 2.0 * t * a.zi));
      out.emit(Gate::cnot(j, i));
      out.emit(Gate::rz(i, 2.0 * t * a.zij));
      out.emit(Gate::cnot(j, i));
      if (K > 1) out.emit(Gate::cnot(j - 1, i));
      out.emit(Gate::h(i));
      out.emit(Gate::cnot(i, j));
      for (int e = j - 2; e > i; --e) out.emit(Gate::cnot(e, e + 1));
    }
  }
}

// ---------------------------------------------------------------- electric

namespace {

// Staggered sites 0..2L-2 carry charge that reaches a link; block b = n*nf + f.
int charged_blocks(const ModelParams& p) { return (2 * p.L - 1) * p.nf; }
int block_site(const ModelParams& p, int b) { return b / p.nf; }
int block_qubit(const ModelParams& p, int b, int c) { return p.nc * b + c; }

struct GhzFrame {
  std::vector<Gate> gates;  // local qubits 0..3 = (b1,c), (b1,d), (b2,c), (b2,d)
  int pivot = 0;            // Hadamard qubit; every hop-hop string has Z here
  std::array<int, 3> others{};
  std::array<double, 8> diag{};  // coefficient of Z_pivot * prod_{k in s} Z_others[k]
};

const PauliOperator& local_hophop() {
  static const PauliOperator op = [] {
    const PauliOperator A = jw_bilinear(0, 1, 4) * jw_bilinear(3, 2, 4);
    return (0.5 * (A + A.adjoint())).prune();
  }();
  return op;
}

GhzFrame make_frame(bool tilde) {
  GhzFrame f;
  if (!tilde) {
    f.gates = {Gate::h(1), Gate::cnot(1, 2), Gate::cnot(2, 0), Gate::cnot(0, 3)};
    f.pivot = 1;
    f.others = {0, 2, 3};
  } else {
    f.gates = {Gate::h(0), Gate::cnot(0, 3), Gate::cnot(3, 1), Gate::cnot(1, 2)};
    f.pivot = 0;
    f.others = {1, 2, 3};
  }
  const PauliOperator d = through_frame(local_hophop(), f.gates);
  for (const auto& [k, c] : d.terms()) {
    if (k.first != 0 || !((k.second >> f.pivot) & 1)) throw std::logic_error("GHZ frame does not diagonalize");
    int s = 0;
    for (int m = 0; m < 3; ++m)
      if ((k.second >> f.others[m]) & 1) s |= 1 << m;
    f.diag[s] = c.real();
  }
  return f;
}

const GhzFrame& frame(bool tilde) {
  static const GhzFrame g = make_frame(false), gt = make_frame(true);
  return tilde ? gt : g;
}

// Image of Z_u Z_v (local qubits) under the frame: sign and z mask.
std::pair<double, Bits> zz_image(const GhzFrame& f, int u, int v) {
  PauliOperator zz(4);
  zz.add(PauliOperator::Key{0, (Bits{1} << u) | (Bits{1} << v)}, 1.0);
  const PauliOperator d = through_frame(zz, f.gates);
  const auto& [k, c] = *d.terms().begin();
  if (d.size() != 1 || k.first != 0) throw std::logic_error("ZZ image not diagonal");
  return {c.real(), k.second};
}

struct PairPlan {
  bool tilde = false;
  std::vector<std::pair<int, int>> absorbed;  // local (u,v) with u in block 1, v in block 2
  std::optional<std::pair<int, int>> leftover;
};

PairPlan pair_plan(int nc, int c, int d) {
  PairPlan pl;
  pl.tilde = nc >= 3 && c == 0 && d == nc - 1;
  pl.absorbed = {{0, 3}, {1, 2}};
  if (pl.tilde) {
    pl.absorbed.push_back({1, 3});
  } else if (d == c + 1) {
    pl.absorbed.push_back({0, 2});
    if (nc == 2) pl.leftover = std::pair<int, int>{1, 3};
  }
  return pl;
}

double zz_cross_coef(int nc, bool same_color) { return ((same_color ? 1.0 : 0.0) - 1.0 / nc) / 8.0; }

// Neighbouring pairs (c, c+1) first, then the wrap-around pair, then the rest.
std::vector<std::pair<int, int>> color_pairs(int nc) {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c + 1 < nc; ++c) out.push_back({c, c + 1});
  if (nc >= 3) out.push_back({0, nc - 1});
  for (int c = 0; c < nc; ++c)
    for (int d = c + 2; d < nc; ++d)
      if (!(c == 0 && d == nc - 1)) out.push_back({c, d});
  return out;
}

// Visits the electric blocks in emission order.
struct ElectricItem {
  bool same_site;
  int b1, b2, c, d;
  double scale;  // multiplies the charge-product operator
};

void for_each_electric_item(const ModelParams& p, const std::function<void(const ElectricItem&)>& fn) {
  const int S = charged_blocks(p);
  const double g2 = p.g * p.g;
  if (g2 == 0) return;
  for (int b = 0; b < S; ++b) fn({true, b, b, 0, 0, 0.5 * g2 * (2 * p.L - 1 - block_site(p, b))});
  for (int b1 = 0; b1 < S; ++b1)
    for (int b2 = b1 + 1; b2 < S; ++b2) {
      const double scale = g2 * (2 * p.L - 1 - block_site(p, b2));
      for (const auto& [c, d] : color_pairs(p.nc)) fn({false, b1, b2, c, d, scale});
    }
}

void emit_electric_item(const ModelParams& p, const ElectricItem& it, double t, GateSink& out) {
  const int nc = p.nc;
  if (it.same_site) {
    const double zz = -(1.0 + 1.0 / nc) / 4.0 * it.scale;
    out.add_phase(-t * it.scale * (nc * nc - 1) / 8.0);
    for (int c = 0; c < nc; ++c)
      for (int d = c + 1; d < nc; ++d) {
        const int qc = block_qubit(p, it.b1, c), qd = block_qubit(p, it.b1, d);
        out.emit(Gate::cnot(qc, qd));
        out.emit(Gate::rz(qd, 2.0 * t * zz));
        out.emit(Gate::cnot(qc, qd));
      }
    return;
  }
  const PairPlan pl = pair_plan(nc, it.c, it.d);
  const GhzFrame& f = frame(pl.tilde);
  const std::vector<int> m{block_qubit(p, it.b1, it.c), block_qubit(p, it.b1, it.d), block_qubit(p, it.b2, it.c),
                           block_qubit(p, it.b2, it.d)};
  const int T = m[f.pivot];
  for (auto g = f.gates.rbegin(); g != f.gates.rend(); ++g) out.emit(remap(*g, m));
  for (const auto& [u, v] : pl.absorbed) {
    const auto [sign, z] = zz_image(f, u, v);
    if (__builtin_popcountll(z) != 1) throw std::logic_error("absorbed ZZ is not a single Z");
    const double k = it.scale * zz_cross_coef(nc, (u % 2) == (v % 2));
    out.emit(Gate::rz(m[__builtin_ctzll(z)], 2.0 * t * sign * k));
  }
  if (pl.leftover) {
    const auto [sign, z] = zz_image(f, pl.leftover->first, pl.leftover->second);
    std::vector<int> qs;
    for (int q = 0; q < 4; ++q)
      if ((z >> q) & 1) qs.push_back(m[q]);
    const int tgt = qs.back();
    for (std::size_t k = 0; k + 1 < qs.size(); ++k) out.emit(Gate::cnot(qs[k], tgt));
    out.emit(Gate::rz(tgt, 2.0 * t * sign * it.scale * zz_cross_coef(nc, true)));
    for (std::size_t k = qs.size() - 1; k-- > 0;) out.emit(Gate::cnot(qs[k], tgt));
  }
  for (int e = it.c + 1; e < it.d; ++e) {
    out.emit(Gate::cnot(block_qubit(p, it.b1, e), T));
    out.emit(Gate::cnot(block_qubit(p, it.b2, e), T));
  }
  // Gray-code walk over the eight subsets of the three non-pivot qubits.
  int gray = 0;
  for (int j = 0; j < 8; ++j) {
    out.emit(Gate::rz(T, 2.0 * t * it.scale * f.diag[gray]));
    const int bit = j < 7 ? __builtin_ctz(j + 1) : 2;
    out.emit(Gate::cnot(m[f.others[bit]], T));
    gray ^= 1 << bit;
  }
  for (int e = it.d - 1; e > it.c; --e) {
    out.emit(Gate::cnot(block_qubit(p, it.b2, e), T));
    out.emit(Gate::cnot(block_qubit(p, it.b1, e), T));
  }
  for (const auto& g : f.gates) out.emit(remap(g, m));
}

PauliOperator electric_item_operator(const ModelParams& p, const ElectricItem& it) {
  const int nq = p.nqubits();
  if (it.same_site) return it.scale * charge_product(p, block_site(p, it.b1), it.b1 % p.nf, block_site(p, it.b1),
                                                     it.b1 % p.nf);
  const int q[4] = {block_qubit(p, it.b1, it.c), block_qubit(p, it.b1, it.d), block_qubit(p, it.b2, it.c),
                    block_qubit(p, it.b2, it.d)};
  const PauliOperator A = jw_bilinear(q[0], q[1], nq) * jw_bilinear(q[3], q[2], nq);
  PauliOperator r = 0.5 * (A + A.adjoint());
  const PairPlan pl = pair_plan(p.nc, it.c, it.d);
  auto add_zz = [&](int u, int v) {
    const double k = zz_cross_coef(p.nc, (u % 2) == (v % 2));
    r.add(PauliOperator::Key{0, (Bits{1} << q[u]) | (Bits{1} << q[v])}, k);
  };
  for (const auto& [u, v] : pl.absorbed) add_zz(u, v);
  if (pl.leftover) add_zz(pl.leftover->first, pl.leftover->second);
  return (it.scale * r).prune();
}

}  // namespace

void emit_electric(const ModelParams& p, double t, GateSink& out) {
  for_each_electric_item(p, [&](const ElectricItem& it) { emit_electric_item(p, it, t, out); });
}

void emit_term(const ModelParams& p, TermKind k, double t, const TrotterOptions& opt, GateSink& out) {
  switch (k) {
    case TermKind::Mass: emit_mass(p, t, out); break;
    case TermKind::MuB:
      if (!(opt.skip_zero_chemical && p.mu_b == 0)) emit_mu_b(p, t, out);
      break;
    case TermKind::MuI:
      if (!(opt.skip_zero_chemical && p.mu_i == 0)) emit_mu_i(p, t, out);
      break;
    case TermKind::Kinetic: emit_kinetic(p, t, opt.kinetic_ancilla.value_or(default_kinetic_ancilla(p)), out); break;
    case TermKind::Electric: emit_electric(p, t, out); break;
  }
}

Circuit trotter_mass_circuit(const ModelParams& p, double t) {
  Circuit c(p.nqubits());
  emit_mass(p, t, c);
  return c;
}

Circuit trotter_mu_b_circuit(const ModelParams& p, double t) {
  Circuit c(p.nqubits());
  emit_mu_b(p, t, c);
  return c;
}

Circuit trotter_mu_i_circuit(const ModelParams& p, double t) {
  Circuit c(p.nqubits());
  emit_mu_i(p, t, c);
  return c;
}

Circuit trotter_kinetic_circuit(const ModelParams& p, double t, std::optional<bool> use_ancilla) {
  const bool anc = use_ancilla.value_or(default_kinetic_ancilla(p));
  Circuit c(p.nqubits(), anc);
  emit_kinetic(p, t, anc, c);
  return c;
}

Circuit trotter_electric_circuit(const ModelParams& p, double t) {
  Circuit c(p.nqubits());
  emit_electric(p, t, c);
  return c;
}

Circuit trotter_step_circuit(const ModelParams& p, double t, const TrotterOptions& opt) {
  return trotter_circuit(p, t, 1, opt);
}

Circuit trotter_circuit(const ModelParams& p, double t, int steps, const TrotterOptions& opt) {
  if (steps < 1) throw std::invalid_argument("need at least one Trotter step");
  const bool anc = opt.kinetic_ancilla.value_or(default_kinetic_ancilla(p)) &&
                   std::find(opt.order.begin(), opt.order.end(), TermKind::Kinetic) != opt.order.end();
  Circuit c(p.nqubits(), anc);
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s)
    for (TermKind k : opt.order) emit_term(p, k, dt, opt, c);
  if (opt.cancel_cnots) cancel_adjacent_cnots(c);
  return c;
}

// ---------------------------------------------------------------- generating blocks

std::vector<TermBlock> term_blocks(const ModelParams& p, TermKind k) {
  const Hamiltonian H = build_hamiltonian(p);
  std::vector<TermBlock> out;
  switch (k) {
    case TermKind::Mass: out.push_back({k, H.mass}); break;
    case TermKind::MuB: out.push_back({k, H.mu_b}); break;
    case TermKind::MuI: out.push_back({k, H.mu_i}); break;
    case TermKind::Kinetic: {
      const int K = p.block(), nq = p.nqubits();
      for (int i = 0; i + K < nq; ++i) {
        const PauliOperator hop = jw_bilinear(i, i + K, nq);
        out.push_back({k, (0.5 * (hop + hop.adjoint())).prune()});
      }
      break;
    }
    case TermKind::Electric:
      for_each_electric_item(p, [&](const ElectricItem& it) { out.push_back({k, electric_item_operator(p, it)}); });
      break;
  }
  return out;
}

std::vector<TermBlock> trotter_blocks(const ModelParams& p, const TrotterOptions& opt) {
  std::vector<TermBlock> out;
  for (TermKind k : opt.order) {
    if (opt.skip_zero_chemical && ((k == TermKind::MuB && p.mu_b == 0) || (k == TermKind::MuI && p.mu_i == 0)))
      continue;
    auto b = term_blocks(p, k);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

// ---------------------------------------------------------------- cancellation

int cancel_adjacent_cnots(Circuit& c) {
  std::vector<std::vector<int>> last(c.width());
  std::vector<char> alive;
  std::vector<Gate> kept;
  int removed = 0;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::CNOT) {
      auto& sc = last[g.control];
      auto& st = last[g.target];
      if (!sc.empty() && !st.empty() && sc.back() == st.back() && kept[sc.back()] == g) {
        alive[sc.back()] = 0;
        sc.pop_back();
        st.pop_back();
        removed += 2;
        continue;
      }
    }
    const int idx = static_cast<int>(kept.size());
    kept.push_back(g);
    alive.push_back(1);
    for (int q : operands(g)) last[q].push_back(idx);
  }
  std::vector<Gate> out;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (alive[i]) out.push_back(kept[i]);
  c.gates = std::move(out);
  return removed;
}

// ---------------------------------------------------------------- VQE

VqeAngles vqe_angles(double theta, double theta1, double theta11) {
  auto as = [](double v) {
    if (std::abs(v) > 1.0 + 1e-12) throw std::domain_error("angles outside the singlet-reachable region");
    return -2.0 * std::asin(std::clamp(v, -1.0, 1.0));
  };
  VqeAngles a;
  a.theta = theta;
  a.theta1 = theta1;
  a.theta11 = theta11;
  a.theta01 = as(std::cos(theta11 / 2) * std::tan(theta1 / 2));
  a.theta10 = a.theta01;
  a.theta0 = as(std::tan(theta / 2) * std::cos(theta1 / 2));
  a.theta00 = as(std::tan(a.theta0 / 2) * std::cos(a.theta01 / 2));
  return a;
}

Circuit vqe_singlet_prep(double theta, double theta1, double theta11) {
  const VqeAngles a = vqe_angles(theta, theta1, theta11);
  // Antiquark register r, g, b on qubits 3, 4, 5; quarks on 0, 1, 2.
  Circuit c(6);
  c.emit(Gate::ry(3, a.theta));
  c.emit(Gate::cry({{3, false}}, 4, a.theta0));
  c.emit(Gate::cry({{3, true}}, 4, a.theta1));
  c.emit(Gate::cry({{3, false}, {4, false}}, 5, a.theta00));
  c.emit(Gate::cry({{3, false}, {4, true}}, 5, a.theta01));
  c.emit(Gate::cry({{3, true}, {4, false}}, 5, a.theta10));
  c.emit(Gate::cry({{3, true}, {4, true}}, 5, a.theta11));
  for (int k = 0; k < 3; ++k) c.emit(Gate::cnot(3 + k, k));
  for (int k = 0; k < 3; ++k) c.emit(Gate::x(k));
  return c;
}

// ---------------------------------------------------------------- decomposition and counting

namespace {

std::vector<int> control_qubits(const Gate& g) {
  std::vector<int> q;
  for (const auto& c : g.controls) q.push_back(c.qubit);
  return q;
}

void emit_mux(const std::vector<int>& ctrl, int target, const std::vector<double>& alpha, Circuit& out) {
  const int k = static_cast<int>(ctrl.size());
  const int n = 1 << k;
  for (int j = 0; j < n; ++j) {
    const int g = j ^ (j >> 1);
    double phi = 0;
    for (int s = 0; s < n; ++s) phi += ((__builtin_popcount(s & g) & 1) ? -1.0 : 1.0) * alpha[s];
    out.emit(Gate::ry(target, phi / n));
    const int bit = j + 1 < n ? __builtin_ctz(j + 1) : k - 1;
    out.emit(Gate::cnot(ctrl[bit], target));
  }
}

}  // namespace

Circuit decompose(const Circuit& c) {
  Circuit out(c.nqubits, c.ancilla);
  out.global_phase = c.global_phase;
  std::size_t i = 0;
  while (i < c.gates.size()) {
    const Gate& g = c.gates[i];
    if (g.kind != GateKind::CRY) {
      out.emit(g);
      ++i;
      continue;
    }
    const std::vector<int> ctrl = control_qubits(g);
    std::vector<double> alpha(std::size_t{1} << ctrl.size(), 0.0);
    std::size_t j = i;
    while (j < c.gates.size() && c.gates[j].kind == GateKind::CRY && c.gates[j].target == g.target &&
           control_qubits(c.gates[j]) == ctrl) {
      int s = 0;
      for (std::size_t k = 0; k < ctrl.size(); ++k)
        if (c.gates[j].controls[k].on_one) s |= 1 << k;
      alpha[s] += c.gates[j].angle;
      ++j;
    }
    emit_mux(ctrl, g.target, alpha, out);
    i = j;
  }
  return out;
}

ResourceCount count_gates_raw(const Circuit& c) {
  ResourceCount r;
  for (const auto& g : c.gates) tally(r, g, false);
  return r;
}

ResourceCount count_gates(const Circuit& c) { return count_gates_raw(decompose(c)); }

ResourceReport resource_count_closed_form(int nc, int nf, int L) {
  if (nc < 2 || nf < 1 || L < 1) throw std::invalid_argument("need nc >= 2, nf >= 1, L >= 1");
  using I = std::int64_t;
  const I Nc = nc, Nf = nf, l = L, s = 2 * l - 1;
  ResourceReport r;
  r.mass.rz = r.mu_b.rz = r.mu_i.rz = 2 * Nc * Nf * l;
  r.kinetic_ancilla = Nc * Nf >= 4;
  r.kin.rz = r.kin.hadamard = 2 * Nc * Nf * s;
  r.kin.cnot = r.kinetic_ancilla ? 2 * Nc * Nf * (8 * l - 3) - 4 : 2 * s * Nc * Nf * (Nc * Nf + 1);
  r.el.rz = s * Nc * Nf * (3 - 4 * Nc + Nf * s * (5 * Nc - 4)) / 2;
  r.el.hadamard = s * (Nc - 1) * Nc * Nf * (Nf * s - 1) / 2;
  if (nc == 2) {
    r.el.cnot = s * Nf * (9 * s * Nf - 7);
  } else {
    r.el.cnot = s * (Nc - 1) * Nc * Nf * (s * (2 * Nc + 17) * Nf - 2 * Nc - 11) / 6;
  }
  return r;
}

ResourceReport resource_count_constructed(int nc, int nf, int L) {
  ModelParams p;
  p.nc = nc;
  p.nf = nf;
  p.L = L;
  p.masses.assign(nf, 1.0);
  p.validate();
  ResourceReport r;
  r.kinetic_ancilla = default_kinetic_ancilla(p);
  auto run = [&](auto&& fn) {
    GateCounter c;
    fn(c);
    return c.counts();
  };
  r.mass = run([&](GateCounter& c) { emit_mass(p, 1.0, c); });
  r.mu_b = run([&](GateCounter& c) { emit_mu_b(p, 1.0, c); });
  r.mu_i = run([&](GateCounter& c) { emit_mu_i(p, 1.0, c); });
  r.kin = run([&](GateCounter& c) { emit_kinetic(p, 1.0, r.kinetic_ancilla, c); });
  r.el = run([&](GateCounter& c) { emit_electric(p, 1.0, c); });
  return r;
}

namespace {

nlohmann::json count_json(const ResourceCount& c) {
  return {{"rz", c.rz}, {"ry", c.ry}, {"hadamard", c.hadamard}, {"cnot", c.cnot}, {"pauli", c.pauli}};
}

nlohmann::json report_json(const ResourceReport& r) {
  return {{"U_m", count_json(r.mass)},   {"U_muB", count_json(r.mu_b)}, {"U_muI", count_json(r.mu_i)},
          {"U_kin", count_json(r.kin)},  {"U_el", count_json(r.el)},    {"total", count_json(r.total())},
          {"kinetic_ancilla", r.kinetic_ancilla}};
}

}  // namespace

std::string resource_report_json(int nc, int nf, int L, const ResourceReport& closed, const ResourceReport& built) {
  nlohmann::json j;
  j["nc"] = nc;
  j["nf"] = nf;
  j["l"] = L;
  j["qubits"] = 2 * L * nc * nf + (closed.kinetic_ancilla ? 1 : 0);
  j["closed_form"] = report_json(closed);
  j["constructed"] = report_json(built);
  j["agree"] = closed == built;
  return j.dump(2);
}

// ---------------------------------------------------------------- twirling

namespace {


void emit_letter(Circuit& c, char l, int q) {
  if (l == 'X') c.emit(Gate::x(q));
  if (l == 'Y') c.emit(Gate::y(q));
  if (l == 'Z') c.emit(Gate::z(q));
}

}  // namespace

Circuit pauli_twirl(const Circuit& c, std::uint64_t seed) {
  static const char kL[4] = {'I', 'X', 'Y', 'Z'};
  Circuit out(c.nqubits, c.ancilla);
  out.global_phase = c.global_phase;
  std::uint64_t counter = 0;
  for (const Gate& g : c.gates) {
    if (g.kind != GateKind::CNOT) {
      out.emit(g);
      continue;
    }
    const std::uint64_t r = splitmix64(seed ^ splitmix64(++counter)) & 15;
    const char lc = kL[r & 3], lt = kL[r >> 2];
    // Two-qubit string on local qubits: 0 = control, 1 = target.
    std::string letters{lt, lc};
    const PauliString pre = PauliString::from_letters(letters);
    const PauliString post = conjugate(pre, Gate::cnot(0, 1));
    emit_letter(out, lc, g.control);
    emit_letter(out, lt, g.target);
    out.emit(g);
    emit_letter(out, post.letter(0), g.control);
    emit_letter(out, post.letter(1), g.target);
    out.global_phase += post.phase * M_PI / 2;
  }
  return out;
}

// ---------------------------------------------------------------- text format

std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  os.precision(17);
  os << "circuit " << c.nqubits << ' ' << (c.ancilla ? 1 : 0) << ' ' << c.global_phase << '\n';
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::RZ: os << "rz " << g.angle << ' ' << g.target; break;
      case GateKind::RY: os << "ry " << g.angle << ' ' << g.target; break;
      case GateKind::H: os << "h " << g.target; break;
      case GateKind::X: os << "x " << g.target; break;
      case GateKind::Y: os << "y " << g.target; break;
      case GateKind::Z: os << "z " << g.target; break;
      case GateKind::CNOT: os << "cx " << g.control << ' ' << g.target; break;
      case GateKind::CRY:
        os << "cry " << g.angle << ' ' << g.target;
        for (const auto& k : g.controls) os << ' ' << (k.on_one ? "" : "!") << k.qubit;
        break;
    }
    os << '\n';
  }
  return os.str();
}

Circuit circuit_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Circuit c;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    auto fail = [&] { throw std::invalid_argument("malformed circuit line: " + line); };
    if (kind == "circuit") {
      int anc = 0;
      if (!(ls >> c.nqubits >> anc >> c.global_phase)) fail();
      c.ancilla = anc != 0;
      header = true;
      continue;
    }
    if (!header) throw std::invalid_argument("circuit text lacks a header line");
    Gate g;
    if (kind == "rz" || kind == "ry") {
      g.kind = kind == "rz" ? GateKind::RZ : GateKind::RY;
      if (!(ls >> g.angle >> g.target)) fail();
    } else if (kind == "h" || kind == "x" || kind == "y" || kind == "z") {
      g.kind = kind == "h" ? GateKind::H : kind == "x" ? GateKind::X : kind == "y" ? GateKind::Y : GateKind::Z;
      if (!(ls >> g.target)) fail();
    } else if (kind == "cx") {
      g.kind = GateKind::CNOT;
      if (!(ls >> g.control >> g.target)) fail();
    } else if (kind == "cry") {
      g.kind = GateKind::CRY;
      if (!(ls >> g.angle >> g.target)) fail();
      std::string tok;
      while (ls >> tok) {
        const bool neg = tok[0] == '!';
        g.controls.push_back({std::stoi(neg ? tok.substr(1) : tok), !neg});
      }
      if (g.controls.empty()) fail();
    } else {
      fail();
    }
    c.gates.push_back(g);
  }
  c.validate();
  return c;
}

}  // namespace lgt1d
