#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zerofree {

enum class Basis : std::uint8_t { pauli, majorana };

constexpr int kMaxSystemSize = 64;

/// Basis element of every operator in the library: a Pauli string on n
/// qubits or a product of Majorana generators on N modes, times a phase i^k.
///
/// Pauli strings use the (x, z) bit-pair encoding: bit q of `x` / `z` says
/// whether qubit q carries an X / Z component, with Y = (1, 1) standing for
/// the letter Y itself (not XZ). Majorana monomials keep the strictly sorted
/// index set as a bitmask in `x`; `z` is unused and zero. Majorana generators
/// are gamma-normalised (gamma_a^2 = 1).
class Monomial {
 public:
  Monomial() = default;

  static Monomial identity(Basis basis, int size);
  /// Letter string such as "XIZY"; character q is qubit q.
  static Monomial pauli(std::string_view letters);
  /// Single-qubit Pauli `letter` on `qubit` of an n-qubit register.
  static Monomial pauli(int n_qubits, int qubit, char letter);
  /// gamma_{i_1} gamma_{i_2} ... in the given (0-based) order; the result is
  /// brought to canonical sorted form with the accumulated sign.
  static Monomial majorana(int n_modes, std::span<const int> indices);

  Basis basis() const { return basis_; }
  int size() const { return size_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t mode_mask() const { return x_; }
  /// Exponent k of the phase i^k, in {0,1,2,3}.
  int phase() const { return phase_; }
  std::complex<double> phase_value() const;

  Monomial with_phase(int k) const;
  Monomial without_phase() const { return with_phase(0); }

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  /// Number of qubits acted on (Pauli) or number of generators (Majorana).
  int weight() const;
  /// Pauli letter ('I','X','Y','Z') on qubit q.
  char letter(int qubit) const;
  std::vector<int> mode_indices() const;
  /// Qubits touched after Jordan-Wigner for Majorana monomials.
  std::vector<int> support() const;

  /// Whether the monomial (including its phase) is a Hermitian operator.
  bool is_hermitian() const;
  bool commutes_with(const Monomial& other) const;

  /// Canonical text: "XIZY" or "[1,4,6,7]" (1-based mode labels), phase omitted.
  std::string label() const;

  std::pair<std::uint64_t, std::uint64_t> key() const { return {x_, z_}; }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  Monomial(Basis b, int size, std::uint64_t x, std::uint64_t z, int phase)
      : basis_(b), size_(size), x_(x), z_(z), phase_(static_cast<std::uint8_t>(phase & 3)) {}

  friend Monomial monomial_product(const Monomial& a, const Monomial& b);

  Basis basis_ = Basis::pauli;
  int size_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  std::uint8_t phase_ = 0;
};

/// Canonical product a*b with the phase accumulated exactly.
/// Throws PreconditionError on basis or size mismatch.
Monomial monomial_product(const Monomial& a, const Monomial& b);

/// Jordan-Wigner image of a Majorana monomial on N modes as a Pauli string on
/// N/2 qubits: gamma_{2j} = Z^{(x)j} X_j, gamma_{2j+1} = Z^{(x)j} Y_j (0-based),
/// i.e. gamma_{2j-1} = Z..Z X, gamma_{2j} = Z..Z Y in 1-based labels.
/// Pauli monomials are returned unchanged.
Monomial jordan_wigner(const Monomial& m);

}  // namespace zerofree
