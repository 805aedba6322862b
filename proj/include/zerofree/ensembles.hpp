#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "zerofree/operator_sum.hpp"

namespace zerofree {

enum class EnsembleKind { syk, klocal_pauli, ising_pspin, heisenberg_sk, stabilizer, fermi_hubbard };

std::string to_string(EnsembleKind k);
EnsembleKind ensemble_from_string(std::string_view s);

/// Parameters for every ensemble; fields that do not apply are ignored.
struct InstanceSpec {
  EnsembleKind kind = EnsembleKind::syk;
  int size = 8;        // Majorana modes (syk) or qubits/spins
  int order = 4;       // q (syk), p (ising_pspin), k (klocal_pauli)
  int max_degree = 4;  // klocal_pauli: terms touching any qubit
  int max_terms = 0;   // klocal_pauli: 0 = fill up to the degree cap
  int lx = 2, ly = 2;  // fermi_hubbard lattice, periodic
  double J = 1.0;      // coupling scale
  double U = 8.0, t = 1.0, mu = 2.0;
  std::string code = "repetition:3";  // stabilizer: repetition:n | toric:L | steane
  std::uint64_t seed = 0;
};

/// Hubbard lattices up to 6 sites (12 spin-orbitals) fit the dense cap.
constexpr int kMaxHubbardSites = 6;

OperatorSum generate(const InstanceSpec& spec);

OperatorSum syk(int n_majoranas, int q, double J, std::uint64_t seed);
OperatorSum klocal_pauli(int n_qubits, int k, int max_degree, int max_terms, double J, std::uint64_t seed);
OperatorSum ising_pspin(int n_spins, int p, double J, std::uint64_t seed);
OperatorSum heisenberg_sk(int n_spins, double J, std::uint64_t seed);
OperatorSum fermi_hubbard(int lx, int ly, double t, double U, double mu);

/// SYK rescaled coupling: script_J^2 = q J^2 / 2^{q-1}.
double syk_script_j(int q, double J);

/// i^{w/2} psi_{a_1} ... psi_{a_w} with psi = gamma / sqrt(2), the Hermitian
/// normalisation used for SYK couplings; `indices` are 0-based, w even.
OperatorSum rescaled_majorana(int n_modes, std::span<const int> indices);

struct CouplingStats {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t count = 0;
};

/// Sample mean and (unbiased) variance of the raw couplings, with the
/// construction-time factor recorded in meta["rescale"] divided out.
/// Requires at least 30 non-identity terms in total.
CouplingStats coupling_stats(const OperatorSum& o);
CouplingStats coupling_stats(std::span<const OperatorSum> pool);

InstanceSpec spec_from_json(const nlohmann::json& j);
InstanceSpec spec_from_toml(std::string_view text);
nlohmann::json spec_to_json(const InstanceSpec& s);

}  // namespace zerofree
