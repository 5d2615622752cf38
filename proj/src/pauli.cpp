#include "lgt1d/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lgt1d {

namespace {

int popcount(Bits b) { return __builtin_popcountll(b); }

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

Bits mask(int n) { return n >= 64 ? ~Bits{0} : ((Bits{1} << n) - 1); }

void check_qubits(int n) {
  if (n < 0 || n > kMaxQubits) throw std::invalid_argument("qubit count out of range");
}

}  // namespace

PauliString PauliString::identity(int n) {
  check_qubits(n);
  return PauliString{n, 0, 0, 0};
}

PauliString PauliString::single(int n, int q, char letter) {
  check_qubits(n);
  if (q < 0 || q >= n) throw std::out_of_range("qubit index out of range");
  PauliString p = identity(n);
  const Bits b = Bits{1} << q;
  switch (letter) {
    case 'I': break;
    case 'X': p.x = b; break;
    case 'Y': p.x = b; p.z = b; break;
    case 'Z': p.z = b; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return p;
}

PauliString PauliString::from_letters(const std::string& letters, int phase) {
  const int n = static_cast<int>(letters.size());
  PauliString p = identity(n);
  p.phase = ((phase % 4) + 4) % 4;
  for (int k = 0; k < n; ++k) {
    const int q = n - 1 - k;
    const Bits b = Bits{1} << q;
    switch (letters[k]) {
      case 'I': break;
      case 'X': p.x |= b; break;
      case 'Y': p.x |= b; p.z |= b; break;
      case 'Z': p.z |= b; break;
      default: throw std::invalid_argument("bad Pauli letter in '" + letters + "'");
    }
  }
  return p;
}

char PauliString::letter(int q) const {
  const bool bx = (x >> q) & 1, bz = (z >> q) & 1;
  if (bx && bz) return 'Y';
  if (bx) return 'X';
  if (bz) return 'Z';
  return 'I';
}

std::string PauliString::letters() const {
  std::string s(nqubits, 'I');
  for (int q = 0; q < nqubits; ++q) s[nqubits - 1 - q] = letter(q);
  return s;
}

cplx PauliString::phase_value() const { return kIPow[phase & 3]; }

int PauliString::weight() const { return popcount(x | z); }

bool PauliString::commutes_with(const PauliString& o) const {
  return ((popcount(x & o.z) + popcount(z & o.x)) & 1) == 0;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.nqubits != b.nqubits) throw std::invalid_argument("qubit count mismatch in multiply");
  // letters(x,z) = i^{|x&z|} X^x Z^z, and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
  PauliString r{a.nqubits, a.x ^ b.x, a.z ^ b.z, 0};
  const int k = a.phase + b.phase + popcount(a.x & a.z) + popcount(b.x & b.z) +
                2 * popcount(a.z & b.x) - popcount(r.x & r.z);
  r.phase = ((k % 4) + 4) % 4;
  return r;
}

BasisImage apply_to_bitstring(const PauliString& p, Bits ket) {
  const int k = p.phase + popcount(p.x & p.z) + 2 * (popcount(p.z & ket) & 1);
  return {ket ^ p.x, kIPow[k & 3]};
}

PauliOperator::PauliOperator(int nqubits) : n_(nqubits) { check_qubits(nqubits); }

PauliOperator PauliOperator::identity(int n, cplx c) {
  PauliOperator op(n);
  op.add(Key{0, 0}, c);
  return op;
}

PauliOperator PauliOperator::from_string(const PauliString& p, cplx c) {
  PauliOperator op(p.nqubits);
  op.add(p, c);
  return op;
}

void PauliOperator::add(const PauliString& p, cplx c) {
  if (p.nqubits != n_) throw std::invalid_argument("qubit count mismatch in add");
  add(Key{p.x, p.z}, c * p.phase_value());
}

void PauliOperator::add(Key k, cplx c) {
  if (c == cplx{0, 0}) return;
  if ((k.first | k.second) & ~mask(n_)) throw std::out_of_range("string exceeds qubit count");
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{0, 0}) terms_.erase(it);
  }
}

cplx PauliOperator::coefficient(const PauliString& p) const {
  auto it = terms_.find(Key{p.x, p.z});
  return it == terms_.end() ? cplx{0, 0} : it->second / p.phase_value();
}

PauliOperator& PauliOperator::operator+=(const PauliOperator& o) {
  if (o.n_ != n_) throw std::invalid_argument("qubit count mismatch in +=");
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

PauliOperator& PauliOperator::operator-=(const PauliOperator& o) {
  if (o.n_ != n_) throw std::invalid_argument("qubit count mismatch in -=");
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

PauliOperator& PauliOperator::operator*=(cplx c) {
  if (c == cplx{0, 0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

PauliOperator PauliOperator::adjoint() const {
  // Letter strings are hermitian, so only coefficients conjugate.
  PauliOperator r(n_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, std::conj(c));
  return r;
}

PauliOperator& PauliOperator::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

bool PauliOperator::is_hermitian(double tol) const {
  for (const auto& [k, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

double PauliOperator::norm1() const {
  double s = 0;
  for (const auto& [k, c] : terms_) s += std::abs(c);
  return s;
}

cplx PauliOperator::trace_part() const {
  auto it = terms_.find(Key{0, 0});
  return it == terms_.end() ? cplx{0, 0} : it->second;
}

PauliOperator operator+(PauliOperator a, const PauliOperator& b) { return a += b; }
PauliOperator operator-(PauliOperator a, const PauliOperator& b) { return a -= b; }
PauliOperator operator*(cplx c, PauliOperator a) { return a *= c; }

PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
  if (a.nqubits() != b.nqubits()) throw std::invalid_argument("qubit count mismatch in product");
  const int n = a.nqubits();
  PauliOperator r(n);
  for (const auto& [ka, ca] : a.terms()) {
    const PauliString pa{n, ka.first, ka.second, 0};
    for (const auto& [kb, cb] : b.terms()) {
      const PauliString p = multiply(pa, PauliString{n, kb.first, kb.second, 0});
      r.add(p, ca * cb);
    }
  }
  return r.prune();
}

PauliOperator commutator(const PauliOperator& a, const PauliOperator& b) {
  return (a * b - b * a).prune();
}

PauliString key_string(int nqubits, PauliOperator::Key k) {
  return PauliString{nqubits, k.first, k.second, 0};
}

cplx matrix_element(const PauliOperator& op, Bits bra, Bits ket) {
  const Bits flip = bra ^ ket;
  cplx s = 0;
  for (const auto& [k, c] : op.terms()) {
    if (k.first != flip) continue;
    s += c * apply_to_bitstring(key_string(op.nqubits(), k), ket).amplitude;
  }
  return s;
}

std::string to_text(const PauliOperator& op) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [k, c] : op.terms())
    os << c.real() << ' ' << c.imag() << ' ' << key_string(op.nqubits(), k).letters() << '\n';
  return os.str();
}

PauliOperator from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  PauliOperator op;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    std::string letters;
    if (!(ls >> re >> im >> letters)) throw std::invalid_argument("malformed operator line: " + line);
    const PauliString p = PauliString::from_letters(letters);
    if (first) {
      op = PauliOperator(p.nqubits);
      first = false;
    }
    op.add(p, cplx{re, im});
  }
  return op;
}

PauliOperator jw_annihilation(int idx, int nqubits) {
  if (idx < 0 || idx >= nqubits) throw std::out_of_range("fermion index out of range");
  Bits tail = (Bits{1} << idx) - 1;
  const cplx sign = (idx % 2) ? -1.0 : 1.0;
  const Bits b = Bits{1} << idx;
  PauliOperator op(nqubits);
  op.add(PauliOperator::Key{b, tail}, 0.5 * sign);
  op.add(PauliOperator::Key{b, tail | b}, cplx{0, -0.5} * sign);
  return op;
}

PauliOperator jw_creation(int idx, int nqubits) { return jw_annihilation(idx, nqubits).adjoint(); }

PauliOperator jw_bilinear(int i, int j, int nqubits) {
  return jw_creation(i, nqubits) * jw_annihilation(j, nqubits);
}

std::string ket_string(Bits ket, int nqubits) {
  std::string s(nqubits, '0');
  for (int q = 0; q < nqubits; ++q)
    if ((ket >> q) & 1) s[nqubits - 1 - q] = '1';
  return s;
}

Bits ket_from_string(const std::string& s) {
  Bits b = 0;
  const int n = static_cast<int>(s.size());
  if (n > kMaxQubits) throw std::invalid_argument("ket too long");
  for (int k = 0; k < n; ++k) {
    if (s[k] == '1') {
      b |= Bits{1} << (n - 1 - k);
    } else if (s[k] != '0') {
      throw std::invalid_argument("bad ket character in '" + s + "'");
    }
  }
  return b;
}

}  // namespace lgt1d
