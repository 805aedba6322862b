#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "zerofree/operator_sum.hpp"

namespace zerofree {

/// log Z as (log|Z|, arg Z). A vanishing value is flagged, with
/// log_modulus = -inf and phase 0; never NaN.
struct LogValue {
  double log_modulus = 0.0;
  double phase = 0.0;
  bool is_zero = false;

  static LogValue zero() { return {-std::numeric_limits<double>::infinity(), 0.0, true}; }
  static LogValue from_log(cplx log_z) { return {log_z.real(), log_z.imag(), false}; }
  /// Principal-branch log; only meaningful when !is_zero.
  cplx log() const { return {log_modulus, phase}; }
  cplx value() const { return is_zero ? cplx{} : std::exp(log()); }
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  std::size_t dim = 0;
  /// Column j is the eigenvector of eigenvalues(j).
  std::optional<Eigen::MatrixXcd> eigenvectors;
  std::uint64_t instance_hash = 0;
};

/// Diagonal operators are handled without a dense matrix up to this dimension.
constexpr std::size_t kDiagonalCap = std::size_t{1} << 24;

struct DiagonalizeOptions {
  bool eigenvectors = false;
  std::size_t cap = kDefaultDenseCap;
  /// Max |c - conj(c) s| over terms (s the adjoint sign) before rejecting.
  double hermiticity_tol = 1e-10;
};

/// Eigendecomposition; real symmetric solver when the matrix is real.
/// When vectors are requested, each pair is checked for ||Hv - lv|| < 1e-9 ||H||.
Spectrum diagonalize(const OperatorSum& o, const DiagonalizeOptions& opt = {});

Spectrum spectrum_from_values(std::vector<double> values);

/// max_a |c_a - adjoint coefficient| over the term list.
double term_hermiticity_residual(const OperatorSum& o);

/// Z, Z', Z'' scaled by exp(-shift), shift = max_k Re(-beta E_k).
struct ScaledPartition {
  cplx z;
  cplx dz;
  cplx d2z;
  double shift = 0.0;
  /// sum_k |e^{-beta E_k}| * exp(-shift), the cancellation scale of z.
  double abs_sum = 0.0;
};

ScaledPartition scaled_partition(const Spectrum& s, cplx beta);

/// log Z(beta) by shifted summation; zero sentinel when |Z| is below
/// rounding of the summands.
LogValue partition_exact(const Spectrum& s, cplx beta);

/// d/dbeta log Z = -sum E e^{-beta E} / Z.
cplx log_partition_derivative(const Spectrum& s, cplx beta);

/// Tr(O e^{-beta H}) / Z in the eigenbasis; `s` must carry eigenvectors.
double observable_exact(const Spectrum& s, const OperatorSum& o, double beta);
double observable_exact(const OperatorSum& h, const OperatorSum& o, double beta);

/// Initial state for OTOCs.
struct StateSpec {
  enum class Kind { maximally_mixed, basis_product } kind = Kind::maximally_mixed;
  /// For basis_product: bit q is the Z-basis state of qubit q.
  std::uint64_t bits = 0;
};

/// Single-qubit Pauli on one site.
struct SitePauli {
  int site = 0;
  char letter = 'Z';
};

/// f_{2L}(t) = Tr[rho (B(t) M)^{2L}] with B(t) = e^{iHt} B e^{-iHt}; t may be
/// complex. `s` must carry eigenvectors of h.
cplx otoc_exact(const Spectrum& s, const OperatorSum& h, SitePauli b, SitePauli m, int L, cplx t,
                const StateSpec& rho = {});
cplx otoc_exact(const OperatorSum& h, SitePauli b, SitePauli m, int L, cplx t, const StateSpec& rho = {});

/// Dense density matrix of rho on n qubits.
Eigen::MatrixXcd state_matrix(const StateSpec& rho, int n_qubits);

/// Cache of eigenvalues keyed by instance hash (JSON files in `dir`).
Spectrum cached_diagonalize(const OperatorSum& o, const std::filesystem::path& dir,
                            const DiagonalizeOptions& opt = {});
void save_spectrum(const Spectrum& s, const std::filesystem::path& path);
Spectrum load_spectrum(const std::filesystem::path& path);

}  // namespace zerofree
