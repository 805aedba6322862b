#include "zerofree/conformal_map.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this degree the strip polynomial is not summed term by term.
constexpr double kMaxDirectDegree = 2e8;

// sum_{m=1}^N alpha^m / m, with the tail beyond N approximated by E1 when N is huge.
double strip_sigma(double alpha, double n_degree) {
  if (n_degree <= kMaxDirectDegree) {
    const auto n = static_cast<long long>(n_degree);
    double s = 0.0, c = 0.0, p = 1.0;
    for (long long m = 1; m <= n; ++m) {
      p *= alpha;
      const double y = p / static_cast<double>(m) - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  }
  const double lambda = -std::log(alpha);
  const double tail = -std::expint(-lambda * (n_degree + 0.5));  // E1
  return -std::log1p(-alpha) - tail;
}

// Continuity-tracked sqrt of h along the ray from 0 to z.
cplx tracked_sqrt_h(const WedgeParams& w, cplx z) {
  auto h_at = [&](cplx u) -> cplx {
    const cplx t = u * u / (w.R * w.R);
    if (std::abs(t) < 1e-4) {
      // G^2 - 1 = expm1(x), x = 4p atanh(t); expand to avoid cancellation.
      const cplx t2 = t * t;
      const cplx x = 4.0 * w.p * t * (1.0 + t2 / 3.0 + t2 * t2 / 5.0);
      const cplx x_over_t = 4.0 * w.p * (1.0 + t2 / 3.0 + t2 * t2 / 5.0);
      return x_over_t * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0) / (w.R * w.R);
    }
    const cplx g = std::pow((1.0 + t) / (1.0 - t), w.p);
    return (g * g - 1.0) / (u * u);
  };
  cplx prev = std::sqrt(cplx{4.0 * w.p / (w.R * w.R)});
  constexpr int kSteps = 256;
  for (int j = 1; j <= kSteps; ++j) {
    const cplx u = z * (static_cast<double>(j) / kSteps);
    cplx s = std::sqrt(h_at(u));
    if (std::abs(s - prev) > std::abs(s + prev)) s = -s;
    prev = s;
  }
  return prev;
}

// Coefficients alpha^m / (m sigma) for m = 1..min(order, N).
PowerSeries strip_series(const StripParams& sp, int order) {
  std::vector<cplx> c(static_cast<std::size_t>(order + 1), cplx{});
  double p = 1.0;
  for (int m = 1; m <= order && m <= sp.degree; ++m) {
    p *= sp.alpha;
    c[static_cast<std::size_t>(m)] = p / (static_cast<double>(m) * sp.sigma);
  }
  return PowerSeries(std::move(c));
}

// phi at M equally spaced points of |z| = r via aliasing the coefficients and one FFT.
std::vector<cplx> strip_on_circle(const StripParams& sp, double r, int samples) {
  if (sp.degree > kMaxDirectDegree) {
    throw PreconditionError("strip map degree too large to sample (rho too small)");
  }
  const auto n = static_cast<long long>(sp.degree);
  std::vector<cplx> folded(static_cast<std::size_t>(samples), cplx{});
  const double ar = sp.alpha * r;
  double p = 1.0;
  for (long long m = 1; m <= n; ++m) {
    p *= ar;
    folded[static_cast<std::size_t>(m % samples)] += p / (static_cast<double>(m) * sp.sigma);
    if (p < 1e-300) break;
  }
  std::vector<cplx> out(static_cast<std::size_t>(samples));
  // FFTW_BACKWARD computes sum_m a_m e^{+2 pi i j m / M}, i.e. phi(r e^{2 pi i j / M}).
  fftw_plan plan = fftw_plan_dft_1d(samples, reinterpret_cast<fftw_complex*>(folded.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::string to_string(MapKind k) { return k == MapKind::strip ? "strip" : "wedge"; }

ConformalMap build_strip_map(double rho, int K) {
  if (!(rho > 0.0 && rho < 1.0)) throw PreconditionError("strip map needs 0 < rho < 1");
  if (K < 1) throw PreconditionError("map series order must be >= 1");
  ConformalMap m;
  m.kind = MapKind::strip;
  StripParams& sp = m.strip;
  sp.rho = rho;
  sp.alpha = -std::expm1(-1.0 / rho);
  sp.beta_radius = -std::expm1(-1.0 - 1.0 / rho) / sp.alpha;
  sp.degree = std::floor((1.0 + 1.0 / rho) * std::exp(1.0 + 1.0 / rho));
  sp.sigma = strip_sigma(sp.alpha, sp.degree);
  m.series = strip_series(sp, K);
  m.valid_radius = sp.beta_radius;
  return m;
}

ConformalMap build_wedge_map(double rho, double delta_theta, int K) {
  if (!(rho > 0.0)) throw PreconditionError("wedge map needs rho > 0");
  if (!(delta_theta >= 0.0 && delta_theta < kPi / 2)) {
    throw PreconditionError("wedge map needs delta_theta in [0, pi/2)");
  }
  if (K < 1) throw PreconditionError("map series order must be >= 1");
  ConformalMap m;
  m.kind = MapKind::wedge;
  WedgeParams& w = m.wedge;
  w.rho = rho;
  w.delta_theta = delta_theta;
  w.p = 1.0 - 2.0 * delta_theta / kPi;
  w.M = std::pow(1.0 + 1.0 / (rho * rho), 1.0 / (2.0 * w.p));
  w.R = std::sqrt((w.M + 1.0) / (w.M - 1.0));
  m.valid_radius = w.R;

  const int order = K + 2;
  PowerSeries t(std::vector<cplx>(static_cast<std::size_t>(order + 1), cplx{}));
  if (order >= 2) t[2] = 1.0 / (w.R * w.R);
  const PowerSeries one = PowerSeries::constant(1.0, order);
  const PowerSeries q = series_div(one + t, one - t);
  const PowerSeries g = series_pow(q, w.p);
  const PowerSeries h = series_divide_by_power(g * g - one, 2);
  const PowerSeries sh = series_sqrt(h);  // principal branch: positive constant term 2 sqrt(p)/R
  std::vector<cplx> c(static_cast<std::size_t>(K + 1), cplx{});
  for (int r = 1; r <= K; ++r) c[static_cast<std::size_t>(r)] = rho * sh[r - 1];
  m.series = PowerSeries(std::move(c));
  return m;
}

cplx ConformalMap::eval(cplx z) const {
  if (kind == MapKind::wedge) {
    if (std::abs(z) >= wedge.R) throw PreconditionError("wedge map evaluated outside |z| < R");
    if (z == cplx{}) return 0.0;
    return wedge.rho * z * tracked_sqrt_h(wedge, z);
  }
  if (strip.degree > kMaxDirectDegree) throw PreconditionError("strip map degree too large for direct evaluation");
  const auto n = static_cast<long long>(strip.degree);
  const cplx w = strip.alpha * z;
  cplx acc = 0.0;
  for (long long j = n; j >= 1; --j) acc = acc * w + 1.0 / static_cast<double>(j);
  return acc * w / strip.sigma;
}

double ConformalMap::sup_abs_bound(double r) const {
  if (kind == MapKind::wedge) {
    const double u = (r / wedge.R) * (r / wedge.R);
    if (u >= 1.0) throw PreconditionError("wedge sup bound needs r < R");
    return wedge.rho * std::sqrt(std::pow((1.0 + u) / (1.0 - u), 2.0 * wedge.p) + 1.0);
  }
  const double ar = strip.alpha * r;
  if (strip.degree > kMaxDirectDegree) {
    if (ar >= 1.0) throw PreconditionError("strip sup bound needs alpha r < 1 for huge degree");
    return -std::log1p(-ar) / strip.sigma;
  }
  const auto n = static_cast<long long>(strip.degree);
  double s = 0.0, p = 1.0;
  for (long long m = 1; m <= n; ++m) {
    p *= ar;
    s += p / static_cast<double>(m);
  }
  return s / strip.sigma;
}

nlohmann::json ConformalMap::params_json() const {
  if (kind == MapKind::strip) {
    return {{"kind", "strip"},          {"rho", strip.rho},       {"alpha", strip.alpha},
            {"beta_radius", strip.beta_radius}, {"degree", strip.degree}, {"sigma", strip.sigma},
            {"series_order", series.order()}};
  }
  return {{"kind", "wedge"}, {"rho", wedge.rho}, {"delta_theta", wedge.delta_theta},
          {"p", wedge.p},    {"M", wedge.M},     {"R", wedge.R},
          {"series_order", series.order()}};
}

double wedge_distance(cplx w, double rho, double delta_theta) {
  auto dist_upper = [&](cplx v) {
    // v relative to the apex i rho; wedge = directions within delta_theta of +i.
    const cplx d = v - cplx{0.0, rho};
    const double ang = std::atan2(d.real(), d.imag());  // angle from +i axis
    if (std::abs(ang) <= delta_theta) return 0.0;
    if (std::abs(ang) >= delta_theta + kPi / 2) return std::abs(d);
    return std::abs(d) * std::sin(std::abs(ang) - delta_theta);
  };
  return std::min(dist_upper(w), dist_upper(-w));
}

MapCertificate certify_map(const ConformalMap& m, int samples) {
  MapCertificate c;
  c.samples = std::max(samples, 0);
  if (samples <= 0) return c;
  if (m.kind == MapKind::strip) {
    const StripParams& sp = m.strip;
    c.radius = sp.beta_radius;
    const auto vals = strip_on_circle(sp, c.radius, samples);
    c.min_re = vals.front().real();
    c.max_re = vals.front().real();
    for (const cplx& v : vals) {
      const double excess =
          std::max({std::abs(v.imag()) - 2.0 * sp.rho, -sp.rho - v.real(), v.real() - 1.0 - 2.0 * sp.rho, 0.0});
      if (excess > 0.0) ++c.violations;
      c.max_violation = std::max(c.max_violation, excess);
      c.max_abs_phi = std::max(c.max_abs_phi, std::abs(v));
      c.min_re = std::min(c.min_re, v.real());
      c.max_re = std::max(c.max_re, v.real());
      c.max_abs_im = std::max(c.max_abs_im, std::abs(v.imag()));
    }
    return c;
  }
  const WedgeParams& w = m.wedge;
  c.radius = 0.5 * (1.0 + w.R);
  c.reference_bound = std::pow(2.0, w.p);
  c.min_wedge_distance = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const cplx z = std::polar(c.radius, 2.0 * kPi * j / samples);
    const cplx v = m.eval(z);
    const double d = wedge_distance(v, w.rho, w.delta_theta);
    if (d <= 0.0) ++c.violations;
    c.min_wedge_distance = std::min(c.min_wedge_distance, d);
    c.max_abs_phi = std::max(c.max_abs_phi, std::abs(v));
  }
  return c;
}

nlohmann::json to_json(const MapCertificate& c) {
  nlohmann::json j = {{"samples", c.samples},         {"radius", c.radius},
                      {"violations", c.violations},   {"max_violation", c.max_violation},
                      {"max_abs_phi", c.max_abs_phi}};
  if (c.reference_bound > 0.0) {
    j["min_wedge_distance"] = c.min_wedge_distance;
    j["reference_bound"] = c.reference_bound;
  } else {
    j["min_re"] = c.min_re;
    j["max_re"] = c.max_re;
    j["max_abs_im"] = c.max_abs_im;
  }
  return j;
}

}  // namespace zerofree
