#pragma once

#include <complex>
#include <optional>
#include <string>

#include "json.hpp"
#include "zerofree/conformal_map.hpp"
#include "zerofree/moments.hpp"
#include "zerofree/operator_sum.hpp"

namespace zerofree {

/// Smallest K with M_rho q^{K+1}/(1-q) <= log(1+eps) for the disk |t| < R:
/// rho = (R+|beta|)/2, q = |beta|/rho, and the Borel-Caratheodory bound
/// M_rho <= 2rho/(R-rho) (n log2 + R ||H||) + (R+rho)/(R-rho) n log2.
/// Returns 1 at beta = 0. Throws when |beta| >= R or eps outside (0,1).
int choose_truncation_order(double R, std::complex<double> beta, int n_qubits, double h_norm, double eps);

/// Same bound for F(z) = log Z(beta phi(z)) on the disk |z| < R_eff =
/// (1 + valid_radius)/2 with target |z| = 1, where
/// sup Re F <= n log2 + |beta| sup|phi| ||H||.
int choose_truncation_order(const ConformalMap& map, std::complex<double> beta, int n_qubits, double h_norm,
                            double eps);

struct InterpolationOptions {
  double eps = 1e-3;
  MomentBackend backend = MomentBackend::automatic;
  double work_cap = kDefaultWorkCap;
  /// Fixed truncation order instead of the a-priori choice.
  std::optional<int> K;
  /// Largest K used when the a-priori choice is larger (flagged in the report).
  int max_K = 160;
  /// Disk path radius; defaults to zero_free_radius(k, D) / max |c_a|.
  std::optional<double> disk_radius;
  /// ||H|| for the K bound; defaults to sum |c_a|.
  std::optional<double> h_norm;
  /// Also diagonalize and fill oracle_delta (small systems only).
  bool with_oracle = false;
};

struct InterpolationReport {
  int K = 0;
  /// K from the a-priori bound (before any cap or override).
  int K_bound = 0;
  bool K_capped = false;
  std::complex<double> estimate_logZ;
  std::string map_kind;  // "disk", "strip" or "wedge"
  /// Largest |term| among the last three retained terms of the evaluated sum.
  double tail_indicator = 0.0;
  bool tail_warning = false;
  std::optional<std::complex<double>> oracle_delta;
  nlohmann::json map_params;
};

nlohmann::json to_json(const InterpolationReport& r);

/// Barvinok estimate of log Z(beta) = T_K: at beta on the disk path (map
/// empty), or T_K(1) of the composed series of log Z(beta phi(z)).
InterpolationReport estimate_log_partition(const OperatorSum& h, std::complex<double> beta,
                                           const std::optional<ConformalMap>& map = std::nullopt,
                                           const InterpolationOptions& opt = {});

/// Same, from precomputed moments Tr(H^r)/dim (mu.size() - 1 >= K needed).
InterpolationReport estimate_log_partition_from_moments(const std::vector<double>& mu, int n_qubits,
                                                        std::complex<double> beta,
                                                        const std::optional<ConformalMap>& map, int K);

/// Map description; the series is built once K is known.
struct MapSpec {
  MapKind kind = MapKind::wedge;
  double rho = 0.5;
  double delta_theta = 0.0;
};

/// Chooses K for the map, builds its series to order K, and estimates.
InterpolationReport estimate_log_partition(const OperatorSum& h, std::complex<double> beta, const MapSpec& spec,
                                           const InterpolationOptions& opt = {});

struct ObservableEstimate {
  double value = 0.0;
  InterpolationReport base;
  InterpolationReport perturbed;
  double lambda = 0.0;
  double eps = 0.0;
};

/// -(log Z(beta, lambda) - log Z(beta, 0)) / (beta lambda) for H + lambda O,
/// lambda = delta, each log Z to precision eps = delta^2 / 8.
ObservableEstimate estimate_observable(const OperatorSum& h, const OperatorSum& obs, double beta, double delta,
                                       const std::optional<MapSpec>& map = std::nullopt,
                                       InterpolationOptions opt = {});

struct ZeroFreeRadius {
  double radius = 0.0;      // C_max / (k(D-1) + 1), C_max = 1/(2e)
  double simplified = 0.0;  // 1 / (2 e k D)
};

ZeroFreeRadius zero_free_radius(int k, int D);

/// SYK wedge parameter rho = b / (beta script_J) with b = 1.3 by default.
double syk_wedge_rho(double beta, double script_j, double half_height = 1.3);

}  // namespace zerofree
