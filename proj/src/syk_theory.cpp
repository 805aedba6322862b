#include "zerofree/syk_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

cplx residual_f(cplx c, cplx b) { return c - b * std::cos(c / 2.0); }
cplx deriv_f(cplx c, cplx b) { return 1.0 + 0.5 * b * std::sin(c / 2.0); }

// Newton on c - b cos(c/2) = 0; returns false if it does not settle.
bool newton_polish(cplx& c, cplx b, int max_iter = 60) {
  for (int it = 0; it < max_iter; ++it) {
    const cplx d = deriv_f(c, b);
    if (d == cplx{}) return false;
    const cplx step = residual_f(c, b) / d;
    c -= step;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(c))) return true;
  }
  return std::abs(residual_f(c, b)) < 1e-12 * (1.0 + std::abs(c));
}

const CriticalPoint& cached_critical() {
  static const CriticalPoint cp = critical_point();
  return cp;
}

}  // namespace

cplx saddle_action(cplx c) { return 0.5 * c * c - 2.0 * c * std::tan(c / 2.0); }

SaddleSolution solve_cstar(cplx b) {
  const double b0 = std::abs(cached_critical().b0);
  if (b.real() == 0.0 && std::abs(b.imag()) >= b0) {
    throw PreconditionError("b lies on the excluded imaginary rays |Im b| >= |b_0|");
  }
  SaddleSolution s;
  s.b = b;
  const double len = std::abs(b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / (0.05 * (1.0 + len)))));
  cplx c = 0.0;
  cplx prev_b = 0.0;
  for (int j = 1; j <= steps; ++j) {
    const cplx bj = b * (static_cast<double>(j) / steps);
    // Euler predictor along dc/db = cos(c/2) / F_c.
    const cplx fc = deriv_f(c, prev_b);
    if (std::abs(fc) < 1e-8) throw NumericalFailure("saddle continuation met a critical point");
    c += (bj - prev_b) * std::cos(c / 2.0) / fc;
    if (!newton_polish(c, bj)) throw NumericalFailure("saddle Newton step failed to converge");
    if (std::abs(deriv_f(c, bj)) < 1e-8) throw NumericalFailure("saddle continuation met a critical point");
    prev_b = bj;
  }
  s.c_star = c;
  s.action_re = b == cplx{} ? 0.0 : saddle_action(c).real();
  s.derivative = std::abs(deriv_f(c, b));
  s.residual = std::abs(residual_f(c, b));
  return s;
}

CriticalPoint critical_point() {
  double lo = 0.5, hi = 2.0;  // y tanh y - 1 changes sign here
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::tanh(mid) - 1.0 < 0.0 ? lo : hi) = mid;
  }
  CriticalPoint cp;
  cp.y = 0.5 * (lo + hi);
  cp.c0 = 2.0 * kI * cp.y;
  cp.b0 = cp.c0 / std::cos(cp.c0 / 2.0);
  return cp;
}

ZeroFreeRegion zero_free_prediction(double script_j) {
  if (!(script_j > 0.0)) throw PreconditionError("J_script must be positive");
  return {script_j, std::abs(cached_critical().b0) / script_j};
}

double harmonicity_check(const std::function<double(cplx)>& f, const HarmonicityGrid& g) {
  if (!(g.h > 0.0 && g.h <= 0.02)) throw PreconditionError("harmonicity grid needs 0 < h <= 0.02");
  const int nx = static_cast<int>(std::lround((g.re_max - g.re_min) / g.h));
  const int ny = static_cast<int>(std::lround((g.im_max - g.im_min) / g.h));
  if (nx < 2 || ny < 2) throw PreconditionError("harmonicity grid needs at least 3 points per side");
  std::vector<double> v(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(j * (nx + 1) + i)]; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) at(i, j) = f({g.re_min + i * g.h, g.im_min + j * g.h});
  }
  double worst = 0.0;
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double lap = (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / (g.h * g.h);
      worst = std::max(worst, std::abs(lap));
    }
  }
  return worst;
}

double harmonicity_check(double script_j, const HarmonicityGrid& g) {
  const ZeroFreeRegion region = zero_free_prediction(script_j);
  const bool crosses_axis = g.re_min <= 0.0 && g.re_max >= 0.0;
  const bool reaches_ray = std::max(std::abs(g.im_min), std::abs(g.im_max)) >= region.half_height;
  if (crosses_axis && reaches_ray) throw PreconditionError("harmonicity grid touches the excluded rays");
  return harmonicity_check([&](cplx beta) { return solve_cstar(beta * script_j).action_re; }, g);
}

cplx large_q_green(cplx c, double beta_abs, double tau) {
  if (!(beta_abs > 0.0 && tau >= 0.0 && tau <= beta_abs)) throw PreconditionError("need 0 <= tau <= |beta|");
  const cplx den = std::cos(c * (0.5 - tau / beta_abs));
  if (std::abs(den) < 1e-14) throw PreconditionError("large-q Green function at a pole of cos");
  const cplx ratio = std::cos(c / 2.0) / den;
  return std::log(ratio * ratio);
}

cplx lambert_w(cplx z, int k) {
  if (z == cplx{}) {
    if (k == 0) return 0.0;
    throw PreconditionError("W_k(0) is singular for k != 0");
  }
  const cplx two_pi_ik{0.0, 2.0 * kPi * k};
  cplx w;
  if (k == 0 && std::abs(z) < 1.0) {
    w = z * (1.0 - z);
  } else if (k == 0 && std::abs(z) < 3.0) {
    w = std::log(1.0 + z);
  } else {
    const cplx l1 = std::log(z) + two_pi_ik;
    w = l1 - std::log(l1);
  }
  // Halley iteration on w e^w - z.
  for (int it = 0; it < 100; ++it) {
    const cplx ew = std::exp(w);
    const cplx f = w * ew - z;
    const cplx wp1 = w + 1.0;
    const cplx step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

std::vector<SaddleCandidate> dominance_scan(cplx b, int branches) {
  std::vector<SaddleCandidate> out;
  const SaddleSolution star = solve_cstar(b);
  out.push_back({star.c_star, star.action_re, true});
  auto add = [&](cplx seed) {
    cplx c = seed;
    if (!newton_polish(c, b)) return;
    for (const auto& e : out) {
      if (std::abs(e.c - c) < 1e-8 * (1.0 + std::abs(c))) return;
    }
    out.push_back({c, saddle_action(c).real(), false});
  };
  for (int k = -branches; k <= branches; ++k) {
    if (b == cplx{}) break;
    add(-2.0 * kI * lambert_w(kI * b / 4.0, k));
    add(2.0 * kI * lambert_w(-kI * b / 4.0, k));
  }
  return out;
}

nlohmann::json to_json(const SaddleSolution& s) {
  return {{"b", {{"re", s.b.real()}, {"im", s.b.imag()}}},
          {"c_star", {{"re", s.c_star.real()}, {"im", s.c_star.imag()}}},
          {"action_re", s.action_re},
          {"derivative", s.derivative},
          {"residual", s.residual}};
}

}  // namespace zerofree
