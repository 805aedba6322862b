#include "zerofree/interpolator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zerofree/errors.hpp"
#include "zerofree/spectrum.hpp"

namespace zerofree {

namespace {

constexpr double kLog2 = std::numbers::ln2;

// K for |target| < R given sup Re f on |t| <= R and |f(0)| = n log 2.
int order_from_bound(double R, double target, double sup_re, double f0, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("eps must lie in (0,1)");
  if (target == 0.0 || std::isinf(R)) return 1;
  if (!(target < R)) throw PreconditionError("target |beta| must be smaller than the zero-free radius");
  const double rho = 0.5 * (R + target);
  const double q = target / rho;
  const double m_rho = 2.0 * rho / (R - rho) * sup_re + (R + rho) / (R - rho) * f0;
  const double k = (std::log(m_rho / std::log1p(eps)) - std::log1p(-q)) / std::log(rho / target);
  return std::max(1, static_cast<int>(std::ceil(k)));
}

double tail_of(const std::vector<cplx>& terms) {
  double t = 0.0;
  const auto n = std::ssize(terms);
  for (auto i = std::max<std::ptrdiff_t>(0, n - 3); i < n; ++i) t = std::max(t, std::abs(terms[static_cast<std::size_t>(i)]));
  return t;
}

double default_disk_radius(const OperatorSum& h) {
  const double j = h.max_term_norm();
  if (j == 0.0) return std::numeric_limits<double>::infinity();
  return zero_free_radius(std::max(h.locality(), 1), std::max(h.degree(), 1)).radius / j;
}

InterpolationReport finish(InterpolationReport r, const OperatorSum& h, std::complex<double> beta,
                           const InterpolationOptions& opt) {
  r.tail_warning = r.tail_indicator > opt.eps / 10.0;
  if (opt.with_oracle) {
    const LogValue exact = partition_exact(diagonalize(h), beta);
    if (!exact.is_zero) {
      cplx d = r.estimate_logZ - exact.log();
      // Compare imaginary parts modulo 2 pi.
      d.imag(std::remainder(d.imag(), 2.0 * std::numbers::pi));
      r.oracle_delta = d;
    }
  }
  return r;
}

}  // namespace

int choose_truncation_order(double R, std::complex<double> beta, int n_qubits, double h_norm, double eps) {
  const double f0 = n_qubits * kLog2;
  return order_from_bound(R, std::abs(beta), f0 + R * h_norm, f0, eps);
}

int choose_truncation_order(const ConformalMap& map, std::complex<double> beta, int n_qubits, double h_norm,
                            double eps) {
  if (!(map.valid_radius > 1.0)) throw PreconditionError("map valid radius must exceed 1");
  const double r_eff = 0.5 * (1.0 + map.valid_radius);
  const double f0 = n_qubits * kLog2;
  const double sup_re = f0 + std::abs(beta) * map.sup_abs_bound(r_eff) * h_norm;
  return order_from_bound(r_eff, 1.0, sup_re, f0, eps);
}

nlohmann::json to_json(const InterpolationReport& r) {
  nlohmann::json j = {{"K", r.K},
                      {"K_bound", r.K_bound},
                      {"K_capped", r.K_capped},
                      {"logZ", {{"re", r.estimate_logZ.real()}, {"im", r.estimate_logZ.imag()}}},
                      {"map", r.map_kind},
                      {"tail_indicator", r.tail_indicator},
                      {"tail_warning", r.tail_warning},
                      {"map_params", r.map_params}};
  if (r.oracle_delta) j["oracle_delta"] = {{"re", r.oracle_delta->real()}, {"im", r.oracle_delta->imag()}};
  return j;
}

InterpolationReport estimate_log_partition_from_moments(const std::vector<double>& mu, int n_qubits,
                                                        std::complex<double> beta,
                                                        const std::optional<ConformalMap>& map, int K) {
  if (K < 1) throw PreconditionError("truncation order must be >= 1");
  if (std::ssize(mu) < K + 1) throw PreconditionError("not enough moments for the truncation order");
  const PowerSeries a = moments_to_cumulants(mu, K, n_qubits * kLog2);
  InterpolationReport r;
  r.K = K;
  r.K_bound = K;
  std::vector<cplx> terms;
  if (!map) {
    r.map_kind = "disk";
    cplx bp = 1.0;
    for (int i = 0; i <= K; ++i, bp *= beta) terms.push_back(a[i] * bp);
  } else {
    if (!(map->valid_radius > 1.0)) throw PreconditionError("map valid radius must exceed 1");
    if (map->series.order() < K) throw PreconditionError("map series shorter than the truncation order");
    r.map_kind = to_string(map->kind);
    r.map_params = map->params_json();
    const PowerSeries f = series_compose(a, map->series.truncated(K) * beta);
    terms = f.coeffs();
  }
  cplx s = 0.0;
  for (const cplx& t : terms) s += t;
  r.estimate_logZ = s;
  r.tail_indicator = tail_of(terms);
  return r;
}

InterpolationReport estimate_log_partition(const OperatorSum& h, std::complex<double> beta,
                                           const std::optional<ConformalMap>& map, const InterpolationOptions& opt) {
  const int n = h.num_qubits();
  const double norm = opt.h_norm.value_or(h.norm_bound());
  int k_bound = 0;
  if (map) {
    k_bound = choose_truncation_order(*map, beta, n, norm, opt.eps);
  } else {
    k_bound = choose_truncation_order(opt.disk_radius.value_or(default_disk_radius(h)), beta, n, norm, opt.eps);
  }
  int K = opt.K.value_or(k_bound);
  bool capped = false;
  if (!opt.K && K > opt.max_K) {
    K = opt.max_K;
    capped = true;
  }
  if (map) K = std::min(K, map->series.order());
  const auto mu = moments(h, K, opt.backend, opt.work_cap);
  InterpolationReport r = estimate_log_partition_from_moments(mu, n, beta, map, K);
  r.K_bound = k_bound;
  r.K_capped = capped;
  return finish(std::move(r), h, beta, opt);
}

InterpolationReport estimate_log_partition(const OperatorSum& h, std::complex<double> beta, const MapSpec& spec,
                                           const InterpolationOptions& opt) {
  auto build = [&](int order) {
    return spec.kind == MapKind::strip ? build_strip_map(spec.rho, order)
                                       : build_wedge_map(spec.rho, spec.delta_theta, order);
  };
  int K = opt.K.value_or(0);
  int k_bound = 0;
  if (!opt.K) {
    k_bound = choose_truncation_order(build(1), beta, h.num_qubits(), opt.h_norm.value_or(h.norm_bound()), opt.eps);
    K = std::min(k_bound, opt.max_K);
  }
  InterpolationOptions fixed = opt;
  fixed.K = K;
  InterpolationReport r = estimate_log_partition(h, beta, std::optional<ConformalMap>(build(K)), fixed);
  if (!opt.K) {
    r.K_bound = k_bound;
    r.K_capped = k_bound > opt.max_K;
  }
  return r;
}

ObservableEstimate estimate_observable(const OperatorSum& h, const OperatorSum& obs, double beta, double delta,
                                       const std::optional<MapSpec>& map, InterpolationOptions opt) {
  if (beta == 0.0) throw PreconditionError("observable estimate needs beta != 0");
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  ObservableEstimate out;
  out.lambda = delta;
  out.eps = delta * delta / 8.0;
  opt.eps = out.eps;
  const OperatorSum perturbed = h + obs.scaled(out.lambda);
  auto run = [&](const OperatorSum& op) {
    return map ? estimate_log_partition(op, beta, *map, opt) : estimate_log_partition(op, beta, std::nullopt, opt);
  };
  out.base = run(h);
  out.perturbed = run(perturbed);
  out.value = -(out.perturbed.estimate_logZ - out.base.estimate_logZ).real() / (beta * out.lambda);
  return out;
}

ZeroFreeRadius zero_free_radius(int k, int D) {
  if (k < 1 || D < 1) throw PreconditionError("zero_free_radius needs k >= 1 and D >= 1");
  const double c_max = 1.0 / (2.0 * std::numbers::e);
  return {c_max / (k * (D - 1) + 1), 1.0 / (2.0 * std::numbers::e * k * D)};
}

double syk_wedge_rho(double beta, double script_j, double half_height) {
  if (!(beta > 0.0 && script_j > 0.0)) throw PreconditionError("wedge rho needs beta > 0 and J > 0");
  return half_height / (beta * script_j);
}

}  // namespace zerofree
