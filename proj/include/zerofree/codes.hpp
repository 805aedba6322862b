#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zerofree/monomial.hpp"
#include "zerofree/operator_sum.hpp"
#include "zerofree/spectrum.hpp"

namespace zerofree {

/// [[n,k,d]] stabilizer code. `checks` are the m = n - k independent
/// generators entering H = sum_i (-1)^{b_i} C_i; `redundant` holds extra
/// dependent checks of the lattice (toric code), used by the separability
/// bound where each qubit sees its full set of incident checks.
struct StabilizerCode {
  std::string name;
  int n = 0;
  int k = 0;
  int d = 0;  // 0 = unknown
  std::vector<Monomial> checks;
  std::vector<int> signs;
  std::vector<Monomial> redundant;
  std::vector<int> redundant_signs;

  int m() const { return static_cast<int>(checks.size()); }
  /// Generators followed by redundant checks.
  std::vector<Monomial> all_checks() const;
  std::vector<int> all_signs() const;

  /// Throws PreconditionError unless the checks pairwise commute, are
  /// independent over GF(2), and m = n - k.
  void validate() const;

  OperatorSum hamiltonian() const;
  /// Hamiltonian over all_checks() (generators plus redundant).
  OperatorSum full_hamiltonian() const;
};

StabilizerCode repetition_code(int n);
/// Kitaev toric code on an L x L torus (n = 2L^2, k = 2); the last vertex
/// and last plaquette operator are kept as redundant checks.
StabilizerCode toric_code(int L);
StabilizerCode steane_code();

/// {"checks": ["ZZI","IZZ"], "signs": [0,0], "redundant": [...], "k": .., "d": ..}
StabilizerCode code_from_json(const nlohmann::json& j);
nlohmann::json code_to_json(const StabilizerCode& c);
/// "repetition:3", "toric:2", "steane".
StabilizerCode code_by_name(const std::string& name);

/// log Z for Z(z) = 2^{m+k} cosh(z)^m (principal log; -inf real part at zeros).
LogValue stabilizer_partition(const StabilizerCode& code, std::complex<double> z);

/// Indices i of generators with {C_i, A} = 0.
std::vector<int> anticommuting_set(const StabilizerCode& code, const Monomial& a);

/// Z for H + delta*A via 2^{|R|} cosh(z)^{|R|} 2^k S_r(z, delta).
/// Requires 1 <= r <= 20.
LogValue perturbed_stabilizer_partition(const StabilizerCode& code, const Monomial& a, double delta,
                                        std::complex<double> z);

/// S_r(z, delta) = sum_{s in {+-1}^r} cosh(z sqrt(lambda(s)^2 + delta^2)).
std::complex<double> perturbed_block_sum(int r, double delta, std::complex<double> z);

/// The 2^r block frequencies +-sqrt(lambda(s)^2 + delta^2), as a spectrum
/// whose partition function is S_r (used for zero counting).
Spectrum perturbed_block_spectrum(int r, double delta);

struct SeparabilityReport {
  std::vector<std::array<double, 3>> v;  // per-qubit (X, Y, Z)
  double bound = 0.0;
  int m_total = 0;
  /// artanh(bound / m_total); empty when bound >= m_total.
  std::optional<double> threshold_beta;
};

/// Uses every check (generators and redundant).
SeparabilityReport separability_bound(const StabilizerCode& code);

/// m * w* with w* = 1 - ((2 - sqrt 2)/w_max)(1 + k/m), over the generators.
double separability_corollary(const StabilizerCode& code);

/// Energy of the full Hamiltonian in the product state with Bloch vectors r_a.
double product_state_energy(const StabilizerCode& code, const std::vector<std::array<double, 3>>& bloch);

}  // namespace zerofree
