#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "zerofree/spectrum.hpp"

namespace zerofree {

struct Rectangle {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  bool contains(cplx b, double slack = 0.0) const;
  cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  double diameter() const;
  /// Same center, sides scaled by `factor`.
  Rectangle dilated(double factor) const;
};

struct CountOptions {
  /// |Z| must exceed boundary_floor * sum_k |e^{-beta E_k}| along the contour.
  double boundary_floor = 1e-8;
  int max_dilations = 5;
  double dilation = 0.01;
  double integrality_tol = 1e-2;
};

struct ZeroCount {
  double value = 0.0;  // (1/2 pi i) contour integral of d log Z
  int rounded = 0;
  Rectangle used;      // after any dilations
  int dilations = 0;
  long long evaluations = 0;
};

/// Argument-principle count of zeros of Z inside r. Each edge is split so the
/// phase of Z changes by less than pi/4 per piece, and d log Z / d beta is
/// integrated by Gauss-Legendre on each piece. A boundary that comes too close
/// to a zero triggers a 1% dilation (up to 5 times) before failing.
ZeroCount count_zeros_rectangle(const Spectrum& s, const Rectangle& r, const CountOptions& opt = {});

/// (log(R/r))^{-1} (1/2 pi) int log|Z(R e^{i theta}) / Z(0)| d theta, floored
/// at 0: an upper bound on the number of zeros in |beta| <= r.
double jensen_zero_bound(const Spectrum& s, double R_outer, double r_inner, int quadrature = 4096);

struct Zero {
  cplx beta;
  int multiplicity = 1;
  /// |g| / (|g'| (1 + |beta|)) at the refined point, g = Z^{(m-1)}.
  double residual = 0.0;
  bool converged = true;
};

struct ZeroAtlas {
  Rectangle rect;
  int count = 0;
  std::vector<Zero> zeros;
  int unresolved = 0;
};

/// Quadrisection until a cell holds one zero (or a degenerate cluster in a
/// tiny cell), then Newton on Z^{(m-1)} from the cell center, which is plain
/// Newton on Z for simple zeros.
ZeroAtlas locate_zeros(const Spectrum& s, const Rectangle& r, const CountOptions& opt = {});

/// Greedy nearest-pair matching of two zero sets; returns the largest
/// displacement among matched pairs (infinity if the sets differ in size).
double max_matched_displacement(const std::vector<Zero>& a, const std::vector<Zero>& b);

struct GridSample {
  cplx beta;
  LogValue log_z;
};

/// Pixel-center grid: column j, row i (row 0 at im_max).
std::vector<GridSample> evaluate_grid(const Spectrum& s, const Rectangle& r, int width, int height, int threads = 1);

/// Binary PPM: hue from arg Z, value (|Z| / max grid |Z|)^gamma, saturation 1.
std::string render_map(const Spectrum& s, const Rectangle& r, int width, int height, double gamma = 0.15,
                       int threads = 1);
std::string render_ppm(const std::vector<GridSample>& grid, int width, int height, double gamma);

/// beta_re,beta_im,log_abs_z,arg_z rows.
std::string grid_csv(const std::vector<GridSample>& grid);
nlohmann::json zeros_json(const ZeroAtlas& atlas);

}  // namespace zerofree
