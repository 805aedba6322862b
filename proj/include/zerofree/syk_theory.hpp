#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "json.hpp"

namespace zerofree {

using cplx = std::complex<double>;

/// Large-q saddle c = b cos(c/2) with b = beta J_script.
struct SaddleSolution {
  cplx b;
  cplx c_star;
  /// Re(c^2/2 - 2c tan(c/2)).
  double action_re = 0.0;
  /// |1 + (b/2) sin(c/2)|.
  double derivative = 0.0;
  double residual = 0.0;
};

/// The branch with c(b) = b + O(b^3), continued along the segment [0, b]
/// with steps of at most 0.05 (1 + |b|). Throws PreconditionError on the
/// excluded rays (Re b = 0, |Im b| >= |b_0|) and NumericalFailure if the
/// path meets a critical point.
SaddleSolution solve_cstar(cplx b);

cplx saddle_action(cplx c);

struct CriticalPoint {
  double y = 0.0;  // root of y tanh y = 1
  cplx c0;         // 2 i y
  cplx b0;         // c0 / cos(c0/2)
};

CriticalPoint critical_point();

struct ZeroFreeRegion {
  double script_j = 0.0;
  /// |b_0| / J_script: the imaginary axis is zero-free below this height.
  double half_height = 0.0;
  bool contains(cplx beta) const { return beta.real() != 0.0 || std::abs(beta.imag()) < half_height; }
};

ZeroFreeRegion zero_free_prediction(double script_j);

struct HarmonicityGrid {
  double re_min = 0.2, re_max = 1.0, im_min = -1.0, im_max = 1.0;
  double h = 0.01;
};

/// Max |5-point Laplacian| of Re(action)(beta J_script) over the interior of
/// the beta grid. Requires h <= 0.02 and a grid (stencils included) that stays
/// off the excluded rays.
double harmonicity_check(double script_j, const HarmonicityGrid& grid);
/// Same stencil applied to an arbitrary function of beta (calibration).
double harmonicity_check(const std::function<double(cplx)>& f, const HarmonicityGrid& grid);

/// g(tau) = log[(cos(c/2) / cos(c (1/2 - tau/|beta|)))^2], principal log.
cplx large_q_green(cplx c, double beta_abs, double tau);

/// Principal branch k = 0 and the other integer branches of Lambert W.
cplx lambert_w(cplx z, int k = 0);

struct SaddleCandidate {
  cplx c;
  double action_re = 0.0;
  bool is_c_star = false;
};

/// Diagnostic: solutions of c = b cos(c/2) seeded from the Lambert-W
/// asymptotics c = -2i W_k(i b/4) and c = 2i W_k(-i b/4), |k| <= branches,
/// polished by Newton and deduplicated, together with c_star.
std::vector<SaddleCandidate> dominance_scan(cplx b, int branches = 3);

nlohmann::json to_json(const SaddleSolution& s);

}  // namespace zerofree
