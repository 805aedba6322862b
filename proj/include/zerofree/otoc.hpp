#pragma once

#include <optional>

#include "json.hpp"
#include "zerofree/operator_sum.hpp"
#include "zerofree/power_series.hpp"
#include "zerofree/spectrum.hpp"

namespace zerofree {

struct OtocTask {
  OperatorSum h;  // Pauli basis
  SitePauli b{0, 'Z'};
  SitePauli m{1, 'Z'};
  int L = 1;
  StateSpec rho;
  double t = 0.0;
  /// k, J, D of the commutator bound; read off h when absent.
  std::optional<int> k, D;
  std::optional<double> J;

  int locality() const { return k.value_or(h.locality()); }
  int degree() const { return D.value_or(h.degree()); }
  double coupling() const { return J.value_or(h.max_term_norm()); }
  /// c_0 = 2 k J D.
  double growth_constant() const { return 2.0 * locality() * coupling() * degree(); }
  /// Throws PreconditionError on b == m, sites out of range or L < 1.
  void validate() const;
};

/// Largest series order accepted by otoc_series unless raised explicitly.
constexpr int kOtocMaxOrder = 40;
constexpr std::size_t kOtocDenseCap = std::size_t{1} << 10;

/// (1 - (2 - eta)^{-1/(2L)}) / (2 k J D).
double sigma_eta(double eta, int L, int k, double J, int D);

/// Maclaurin series of f_{2L}(s) through order K from the matrix series
/// B(s) = sum_r (is)^r ad_H^r(B) / r!. For L = 1 the coefficients are the
/// pair traces sum_{a+b=r} Tr(rho Y_a Y_b) with Y_r = C_r M; larger L
/// multiplies matrix series.
PowerSeries otoc_series(const OtocTask& task, int K, int max_order = kOtocMaxOrder,
                        std::size_t cap = kOtocDenseCap);

struct OtocOptions {
  double eta = 0.5;
  std::optional<int> K;
  int max_order = kOtocMaxOrder;
  /// Smallest strip half-height sigma_eta / t accepted.
  double gate = 0.05;
  /// Interpolate f itself instead of log(2 - f).
  bool direct = false;
};

struct OtocEstimate {
  double value = 0.0;
  cplx raw;  // complex value before taking the real part
  int K = 0;
  int K_bound = 0;
  bool K_capped = false;
  double sigma = 0.0;    // sigma_eta / t
  double map_rho = 0.0;  // strip parameter, image half-height 2 rho = sigma
  double tail_indicator = 0.0;
};

/// K with C_eta / (varrho^{K+1} (1 - 1/varrho)) <= eps, C_eta = log 2 +
/// (2 - eta)/eta, varrho = (1 + beta(rho))/2.
int otoc_truncation_order(double map_rho, double eta, double eps);

/// 2 - exp(T_K(1)) for F(z) = log(2 - f_{2L}(t phi(z))), phi the strip map
/// whose image stays within |Im| <= sigma_eta / t. Throws PreconditionError
/// when sigma_eta / t < gate.
OtocEstimate estimate_otoc(const OtocTask& task, double eps, const OtocOptions& opt = {});

/// Exact value from a dense eigendecomposition of the task Hamiltonian.
double otoc_reference(const OtocTask& task);

struct LrConstants {
  std::optional<double> v;  // default 2 k J D e
  double mu = 1.0;
  double c0 = 4.0;
};

struct LrResult {
  double estimate = 0.0;
  int radius = 0;
  int ball_size = 0;
  bool low_radius = false;
};

/// ED on the terms supported inside the interaction-graph ball of radius R
/// around b (plus the site of M).
LrResult lr_baseline(const OtocTask& task, int R, std::size_t cap = std::size_t{1} << 12);
/// R = ceil(v|t| + log(C_0/eps)/mu).
LrResult lr_baseline_eps(const OtocTask& task, double eps, const LrConstants& c = {},
                         std::size_t cap = std::size_t{1} << 12);

struct AdNormBound {
  int r = 0;
  double computed = 0.0;
  double bound = 0.0;  // (2kJD)^r r!
  bool holds = true;
};

/// k, J, D come from h's meta when present, else from its term list.
AdNormBound ad_norm_bound(const OperatorSum& h, SitePauli b, int r, std::size_t cap = kOtocDenseCap);

/// Open chain of n qubits whose bond term h_e is a random combination of the
/// nine two-qubit Pauli products (or of XX, YY, ZZ only), rescaled to operator
/// norm J. Meta records k = 2, D = 2 and J for the bound c_0 = 2kJD.
OperatorSum random_bond_chain(int n, double J, std::uint64_t seed, bool xyz_only = false);

/// Task on `h` with k, D, J taken from its meta when present.
OtocTask make_otoc_task(const OperatorSum& h, SitePauli b, SitePauli m, double t, int L = 1, StateSpec rho = {});

nlohmann::json to_json(const OtocEstimate& e);

}  // namespace zerofree
