#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lgt1d {

using cplx = std::complex<double>;
using Bits = std::uint64_t;

inline constexpr int kMaxQubits = 64;
inline constexpr double kPruneTol = 1e-14;

// i^phase times a tensor product of letters. Letter q is stored as the bit
// pair (x_q, z_q): I=(0,0), X=(1,0), Z=(0,1), Y=(1,1).
struct PauliString {
  int nqubits = 0;
  Bits x = 0;
  Bits z = 0;
  int phase = 0;

  static PauliString identity(int n);
  static PauliString single(int n, int q, char letter);
  // Letters with qubit 0 rightmost, e.g. "XIZ" puts Z on qubit 0.
  static PauliString from_letters(const std::string& letters, int phase = 0);

  char letter(int q) const;
  std::string letters() const;
  cplx phase_value() const;
  int weight() const;
  bool is_diagonal() const { return x == 0; }
  bool commutes_with(const PauliString& o) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

PauliString multiply(const PauliString& a, const PauliString& b);

struct BasisImage {
  Bits ket;
  cplx amplitude;
};

// P|ket> = amplitude |image>. Qubit q of the ket is bit q; 0 is spin up.
BasisImage apply_to_bitstring(const PauliString& p, Bits ket);

// Amplitude of the letters (phase 0) acting on |ket>, without the flip.
inline double z_sign(Bits z, Bits ket) {
  return (__builtin_popcountll(z & ket) & 1) ? -1.0 : 1.0;
}

class PauliOperator {
 public:
  using Key = std::pair<Bits, Bits>;  // (x, z) of a phase-free letter string
  using Terms = std::map<Key, cplx>;

  explicit PauliOperator(int nqubits = 0);
  static PauliOperator identity(int n, cplx c = 1.0);
  static PauliOperator from_string(const PauliString& p, cplx c = 1.0);

  int nqubits() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliString& p, cplx c);
  void add(Key k, cplx c);
  cplx coefficient(const PauliString& p) const;

  PauliOperator& operator+=(const PauliOperator& o);
  PauliOperator& operator-=(const PauliOperator& o);
  PauliOperator& operator*=(cplx c);

  PauliOperator adjoint() const;
  PauliOperator& prune(double tol = kPruneTol);
  bool is_hermitian(double tol = 1e-12) const;
  double norm1() const;
  // Coefficient of the identity string.
  cplx trace_part() const;

 private:
  int n_ = 0;
  Terms terms_;
};

PauliOperator operator+(PauliOperator a, const PauliOperator& b);
PauliOperator operator-(PauliOperator a, const PauliOperator& b);
PauliOperator operator*(cplx c, PauliOperator a);
PauliOperator operator*(const PauliOperator& a, const PauliOperator& b);
PauliOperator commutator(const PauliOperator& a, const PauliOperator& b);

// Letters-string with the coefficient folded into phase-free form.
PauliString key_string(int nqubits, PauliOperator::Key k);

cplx matrix_element(const PauliOperator& op, Bits bra, Bits ket);

// Text form: one term per line, "re im letters".
std::string to_text(const PauliOperator& op);
PauliOperator from_text(const std::string& text);

struct FermionIndex {
  int n = 0;  // staggered site, even = quark, odd = antiquark
  int f = 0;
  int c = 0;
  int flat(int nc, int nf) const { return nc * nf * n + nc * f + c; }
};

// psi_i = prod_{l<i} (-Z_l) sigma^-_i, with sigma^- = |1><0| = (X - iY)/2.
PauliOperator jw_annihilation(int idx, int nqubits);
PauliOperator jw_creation(int idx, int nqubits);
// psi^dag_i psi_j built directly from the two Jordan-Wigner strings.
PauliOperator jw_bilinear(int i, int j, int nqubits);

std::string ket_string(Bits ket, int nqubits);
Bits ket_from_string(const std::string& s);

}  // namespace lgt1d
