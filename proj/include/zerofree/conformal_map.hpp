#pragma once

#include <complex>
#include <string>

#include "json.hpp"
#include "zerofree/power_series.hpp"

namespace zerofree {

enum class MapKind { strip, wedge };

std::string to_string(MapKind k);

/// Polynomial disk-to-strip map phi(z) = (1/sigma) sum_{m=1}^N (alpha z)^m / m.
/// N can be astronomically large, so it is kept as a double.
struct StripParams {
  double rho = 0.0;
  double alpha = 0.0;
  double beta_radius = 0.0;  // image bounds hold for |z| <= beta_radius
  double degree = 0.0;       // N
  double sigma = 0.0;
};

/// phi(z) = rho z sqrt((G(z)^2 - 1)/z^2), G(z) = Q(z^2/R^2)^p, Q(s) = (1+s)/(1-s).
struct WedgeParams {
  double rho = 0.0;
  double delta_theta = 0.0;
  double p = 1.0;
  double M = 0.0;
  double R = 0.0;
};

class ConformalMap {
 public:
  MapKind kind = MapKind::strip;
  StripParams strip;
  WedgeParams wedge;
  /// Maclaurin series of phi through the requested order.
  PowerSeries series;
  /// Radius on which the image constraints are certified (beta(rho) or R).
  double valid_radius = 0.0;

  /// Direct evaluation: the full polynomial for the strip map, the analytic
  /// formula with a continuity-tracked square root for the wedge map.
  cplx eval(cplx z) const;
  cplx eval_series(cplx z) const { return series.eval(z); }

  /// Upper bound on max |phi| over |z| <= r (r < valid_radius for the wedge).
  double sup_abs_bound(double r) const;

  nlohmann::json params_json() const;
};

/// Requires 0 < rho < 1.
ConformalMap build_strip_map(double rho, int K);
/// Requires rho > 0 and delta_theta in [0, pi/2).
ConformalMap build_wedge_map(double rho, double delta_theta, int K);

/// Distance from w to W+ u W- (0 inside or on a wedge).
double wedge_distance(cplx w, double rho, double delta_theta);

struct MapCertificate {
  int samples = 0;
  double radius = 0.0;
  int violations = 0;
  /// Strip: largest excess over the image bounds. Wedge: 0 unless inside.
  double max_violation = 0.0;
  /// Wedge only: smallest distance from a sampled image point to the wedges.
  double min_wedge_distance = 0.0;
  double max_abs_phi = 0.0;
  /// Strip: ranges seen on the boundary; compare with [-rho, 1+2rho] and 2rho.
  double min_re = 0.0, max_re = 0.0, max_abs_im = 0.0;
  /// Wedge: reference 2^p of the rho -> 0 asymptotics.
  double reference_bound = 0.0;
};

/// Samples `samples` equally spaced points on the boundary circle (beta(rho)
/// for the strip map, (1+R)/2 for the wedge map). Boundary sampling suffices:
/// the excluded sets are unbounded and connected, so an image point inside
/// them forces a boundary image point inside them too.
MapCertificate certify_map(const ConformalMap& m, int samples);

nlohmann::json to_json(const MapCertificate& c);

}  // namespace zerofree
