#include "zerofree/monomial.hpp"

#include <bit>
#include <sstream>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

void check_size(int size) {
  if (size < 0 || size > kMaxSystemSize) {
    throw PreconditionError("system size " + std::to_string(size) + " outside [0, 64]");
  }
}

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

}  // namespace

Monomial Monomial::identity(Basis basis, int size) {
  check_size(size);
  if (basis == Basis::majorana && size % 2 != 0) {
    throw PreconditionError("majorana system needs an even number of modes, got " +
                            std::to_string(size));
  }
  return Monomial(basis, size, 0, 0, 0);
}

Monomial Monomial::pauli(std::string_view letters) {
  const int n = static_cast<int>(letters.size());
  check_size(n);
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (letters[q]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw PreconditionError(std::string("invalid Pauli letter '") + letters[q] + "'");
    }
  }
  return Monomial(Basis::pauli, n, x, z, 0);
}

Monomial Monomial::pauli(int n_qubits, int qubit, char letter) {
  check_size(n_qubits);
  if (qubit < 0 || qubit >= n_qubits) {
    throw PreconditionError("qubit index " + std::to_string(qubit) + " out of range");
  }
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  s[static_cast<std::size_t>(qubit)] = letter;
  return pauli(s);
}

Monomial Monomial::majorana(int n_modes, std::span<const int> indices) {
  Monomial out = identity(Basis::majorana, n_modes);
  for (int a : indices) {
    if (a < 0 || a >= n_modes) {
      throw PreconditionError("majorana index " + std::to_string(a) + " out of range");
    }
    out = monomial_product(out, Monomial(Basis::majorana, n_modes, std::uint64_t{1} << a, 0, 0));
  }
  return out;
}

std::complex<double> Monomial::phase_value() const {
  switch (phase_) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Monomial Monomial::with_phase(int k) const {
  Monomial m = *this;
  m.phase_ = static_cast<std::uint8_t>(((k % 4) + 4) % 4);
  return m;
}

int Monomial::weight() const {
  if (basis_ == Basis::pauli) return std::popcount(x_ | z_);
  return std::popcount(x_);
}

char Monomial::letter(int qubit) const {
  const bool xb = (x_ >> qubit) & 1U;
  const bool zb = (z_ >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::vector<int> Monomial::mode_indices() const {
  std::vector<int> out;
  for (std::uint64_t m = x_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::vector<int> Monomial::support() const {
  const Monomial p = jordan_wigner(*this);
  std::vector<int> out;
  for (std::uint64_t m = p.x_ | p.z_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

bool Monomial::is_hermitian() const {
  // Pauli letters are Hermitian; a majorana product of degree d reverses to
  // (-1)^{d(d-1)/2} times itself. i^k conjugates to i^{-k}.
  int sign_exp = 0;
  if (basis_ == Basis::majorana) {
    const int d = weight();
    sign_exp = ((d * (d - 1) / 2) % 2) * 2;
  }
  // (i^k M)^dag = i^{-k} i^{sign_exp} M must equal i^k M.
  return ((-phase_ + sign_exp - phase_) % 4 + 8) % 4 == 0;
}

bool Monomial::commutes_with(const Monomial& other) const {
  const Monomial ab = monomial_product(*this, other);
  const Monomial ba = monomial_product(other, *this);
  return ab.phase_ == ba.phase_;
}

std::string Monomial::label() const {
  std::ostringstream os;
  if (basis_ == Basis::pauli) {
    for (int q = 0; q < size_; ++q) os << letter(q);
  } else {
    os << '[';
    bool first = true;
    for (int a : mode_indices()) {
      if (!first) os << ',';
      os << a + 1;
      first = false;
    }
    os << ']';
  }
  return os.str();
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  if (a.basis_ != b.basis_) throw PreconditionError("monomial basis mismatch");
  if (a.size_ != b.size_) throw PreconditionError("monomial system size mismatch");
  if (a.basis_ == Basis::pauli) {
    // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
    const std::uint64_t x = a.x_ ^ b.x_;
    const std::uint64_t z = a.z_ ^ b.z_;
    const int k = a.phase_ + b.phase_ + std::popcount(a.x_ & a.z_) + std::popcount(b.x_ & b.z_) +
                  2 * std::popcount(a.z_ & b.x_) - std::popcount(x & z);
    return Monomial(Basis::pauli, a.size_, x, z, ((k % 4) + 4) % 4);
  }
  // Sorting gamma_A gamma_B: each pair (i in A, j in B) with i > j costs one swap.
  int swaps = 0;
  for (std::uint64_t m = b.x_; m != 0; m &= m - 1) {
    const int j = std::countr_zero(m);
    swaps += std::popcount(a.x_ & ~low_mask(j + 1));
  }
  const int k = a.phase_ + b.phase_ + 2 * (swaps & 1);
  return Monomial(Basis::majorana, a.size_, a.x_ ^ b.x_, 0, k % 4);
}

Monomial jordan_wigner(const Monomial& m) {
  if (m.basis() == Basis::pauli) return m;
  const int n_qubits = m.size() / 2;
  Monomial out = Monomial::identity(Basis::pauli, n_qubits).with_phase(m.phase());
  for (int a : m.mode_indices()) {
    const int j = a / 2;
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    for (int l = 0; l < j; ++l) s[static_cast<std::size_t>(l)] = 'Z';
    s[static_cast<std::size_t>(j)] = (a % 2 == 0) ? 'X' : 'Y';
    out = monomial_product(out, Monomial::pauli(s));
  }
  return out;
}

}  // namespace zerofree
