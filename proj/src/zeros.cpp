#include "zerofree/zeros.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "zerofree/errors.hpp"
#include "zerofree/instance_io.hpp"

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussNodes = 20;
using Gauss = boost::math::quadrature::gauss<double, kGaussNodes>;

// j-th beta-derivative of Z, scaled by exp(-shift) with the usual shift.
struct Derivs {
  cplx g;   // Z^{(j)}
  cplx dg;  // Z^{(j+1)}
  double abs_sum = 0.0;
};

Derivs derivatives(const Spectrum& s, cplx beta, int j) {
  Derivs d;
  const auto& e = s.eigenvalues;
  const double br = beta.real();
  const double shift = std::max(-br * e(0), -br * e(e.size() - 1));
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double ek = e(k);
    const cplx w = std::exp(-beta * ek - shift);
    const double pj = std::pow(-ek, j);
    d.g += pj * w;
    d.dg += -ek * pj * w;
    d.abs_sum += std::abs(w);
  }
  return d;
}

struct ContourFailure {};

class EdgeIntegrator {
 public:
  EdgeIntegrator(const Spectrum& s, double floor) : s_(s), floor_(floor) {}

  cplx edge(cplx a, cplx b) {
    const ScaledPartition pa = eval(a);
    const ScaledPartition pb = eval(b);
    return piece(a, b, pa, pb, 0);
  }
  long long evaluations() const { return evals_; }

 private:
  ScaledPartition eval(cplx beta) {
    ++evals_;
    ScaledPartition p = scaled_partition(s_, beta);
    if (!(std::abs(p.z) > floor_ * p.abs_sum)) throw ContourFailure{};
    return p;
  }

  cplx piece(cplx a, cplx b, const ScaledPartition& pa, const ScaledPartition& pb, int depth) {
    if (depth > 48) throw ContourFailure{};
    const double dphi = std::arg(pb.z / pa.z);
    const double dlog = std::log(std::abs(pb.z) / std::abs(pa.z)) + (pb.shift - pa.shift);
    bool accept = std::abs(dphi) < kPi / 4;
    cplx integral = 0.0;
    if (accept) {
      const cplx half = 0.5 * (b - a), mid = 0.5 * (a + b);
      const auto& x = Gauss::abscissa();
      const auto& w = Gauss::weights();
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sgn : {-1.0, 1.0}) {
          const ScaledPartition p = eval(mid + sgn * x[i] * half);
          integral += w[i] * (p.dz / p.z);
        }
      }
      integral *= half;
      const double tol = 1e-7;
      accept = std::abs(integral.imag() - dphi) < tol && std::abs(integral.real() - dlog) < tol * (1.0 + std::abs(dlog));
    }
    if (accept) return integral;
    const cplx m = 0.5 * (a + b);
    const ScaledPartition pm = eval(m);
    return piece(a, m, pa, pm, depth + 1) + piece(m, b, pm, pb, depth + 1);
  }

  const Spectrum& s_;
  double floor_;
  long long evals_ = 0;
};

// Count without dilation; nullopt if the contour is too close to a zero or the
// result is not near an integer.
std::optional<ZeroCount> try_count(const Spectrum& s, const Rectangle& r, const CountOptions& opt) {
  EdgeIntegrator it(s, opt.boundary_floor);
  const cplx c00{r.re_min, r.im_min}, c10{r.re_max, r.im_min}, c11{r.re_max, r.im_max}, c01{r.re_min, r.im_max};
  try {
    const cplx total = it.edge(c00, c10) + it.edge(c10, c11) + it.edge(c11, c01) + it.edge(c01, c00);
    ZeroCount out;
    out.value = total.imag() / (2.0 * kPi);
    out.rounded = static_cast<int>(std::lround(out.value));
    out.used = r;
    out.evaluations = it.evaluations();
    if (std::abs(out.value - out.rounded) >= opt.integrality_tol) return std::nullopt;
    return out;
  } catch (const ContourFailure&) {
    return std::nullopt;
  }
}

void check_rect(const Rectangle& r) {
  if (!(r.re_max > r.re_min && r.im_max > r.im_min)) throw PreconditionError("rectangle must be nonempty");
}

Zero refine_from(const Spectrum& s, const Rectangle& cell, int m, cplx beta) {
  // Newton on Z^{(m-1)}, which has a simple zero where Z has an m-fold one;
  // for m = 1 this is beta <- beta - Z/Z'.
  Zero z;
  z.multiplicity = m;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const Derivs d = derivatives(s, beta, m - 1);
    if (d.dg == cplx{}) break;
    const cplx step = d.g / d.dg;
    beta -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(beta))) {
      converged = true;
      break;
    }
  }
  const Derivs d = derivatives(s, beta, m - 1);
  z.beta = beta;
  z.residual = d.dg == cplx{} ? (d.g == cplx{} ? 0.0 : std::numeric_limits<double>::infinity())
                              : std::abs(d.g) / (std::abs(d.dg) * (1.0 + std::abs(beta)));
  if (!converged && z.residual < 1e-12) converged = true;
  // Z^{(m-1)} also vanishes away from the zeros of Z, so check Z itself.
  const ScaledPartition p = scaled_partition(s, beta);
  z.converged = converged && z.residual < 1e-9 && cell.contains(beta, 1e-6 * cell.diameter()) &&
                std::abs(p.z) <= 1e-6 * p.abs_sum;
  return z;
}

Zero refine(const Spectrum& s, const Rectangle& cell, int m) {
  Zero z = refine_from(s, cell, m, cell.center());
  if (z.converged) return z;
  // Restart from the grid point where Z is smallest relative to its scale.
  constexpr int kGrid = 48;
  cplx best = cell.center();
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const cplx b{cell.re_min + (i + 0.5) / kGrid * (cell.re_max - cell.re_min),
                   cell.im_min + (j + 0.5) / kGrid * (cell.im_max - cell.im_min)};
      const ScaledPartition p = scaled_partition(s, b);
      const double v = std::abs(p.z) / p.abs_sum;
      if (v < best_v) {
        best_v = v;
        best = b;
      }
    }
  }
  const Zero retry = refine_from(s, cell, m, best);
  return retry.converged || !std::isfinite(z.residual) ? retry : z;
}

void subdivide(const Spectrum& s, const Rectangle& r, int m, const CountOptions& opt, ZeroAtlas& atlas) {
  if (m == 0) return;
  if (m == 1 || r.diameter() < 1e-9 * (1.0 + std::abs(r.center()))) {
    atlas.zeros.push_back(refine(s, r, m));
    if (!atlas.zeros.back().converged) ++atlas.unresolved;
    return;
  }
  // Split lines slightly off center so symmetric zeros (e.g. on the imaginary
  // axis) do not land on them.
  static constexpr double kOffsets[][2] = {
      {0.0123, -0.0171}, {-0.0297, 0.0233}, {0.0419, 0.0361}, {-0.0563, -0.0447}, {0.0731, -0.0619}};
  for (const auto& off : kOffsets) {
    const double xs = r.re_min + (0.5 + off[0]) * (r.re_max - r.re_min);
    const double ys = r.im_min + (0.5 + off[1]) * (r.im_max - r.im_min);
    const Rectangle cells[4] = {{r.re_min, xs, r.im_min, ys},
                                {xs, r.re_max, r.im_min, ys},
                                {r.re_min, xs, ys, r.im_max},
                                {xs, r.re_max, ys, r.im_max}};
    int counts[4];
    bool ok = true;
    int total = 0;
    for (int i = 0; i < 4 && ok; ++i) {
      const auto c = try_count(s, cells[i], opt);
      if (!c || c->rounded < 0) {
        ok = false;
      } else {
        counts[i] = c->rounded;
        total += c->rounded;
      }
    }
    if (!ok || total != m) continue;
    for (int i = 0; i < 4; ++i) subdivide(s, cells[i], counts[i], opt, atlas);
    return;
  }
  // No clean split: a degenerate zero (or tight cluster) whose neighborhood
  // falls below the boundary floor. Refine it as one m-fold zero.
  atlas.zeros.push_back(refine(s, r, m));
  if (!atlas.zeros.back().converged) ++atlas.unresolved;
}

void hsv_to_rgb(double h, double v, unsigned char* rgb) {
  // saturation 1
  const double hh = 6.0 * (h - std::floor(h));
  const int sector = std::min(static_cast<int>(hh), 5);
  const double f = hh - sector;
  const double p = 0.0, q = v * (1.0 - f), t = v * f;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  rgb[0] = static_cast<unsigned char>(std::lround(255.0 * r));
  rgb[1] = static_cast<unsigned char>(std::lround(255.0 * g));
  rgb[2] = static_cast<unsigned char>(std::lround(255.0 * b));
}

}  // namespace

bool Rectangle::contains(cplx b, double slack) const {
  return b.real() >= re_min - slack && b.real() <= re_max + slack && b.imag() >= im_min - slack &&
         b.imag() <= im_max + slack;
}

double Rectangle::diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }

Rectangle Rectangle::dilated(double factor) const {
  const cplx c = center();
  const double hw = 0.5 * factor * (re_max - re_min), hh = 0.5 * factor * (im_max - im_min);
  return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

ZeroCount count_zeros_rectangle(const Spectrum& s, const Rectangle& r, const CountOptions& opt) {
  check_rect(r);
  if (s.eigenvalues.size() == 0) throw PreconditionError("empty spectrum");
  Rectangle cur = r;
  for (int attempt = 0; attempt <= opt.max_dilations; ++attempt) {
    if (auto c = try_count(s, cur, opt)) {
      c->dilations = attempt;
      return *c;
    }
    cur = cur.dilated(1.0 + opt.dilation);
  }
  throw NumericalFailure(
      "zero count failed: the contour passes too close to a zero or the count is not near an integer; "
      "perturb the rectangle");
}

double jensen_zero_bound(const Spectrum& s, double R_outer, double r_inner, int quadrature) {
  if (!(r_inner > 0.0 && r_inner < R_outer)) throw PreconditionError("Jensen bound needs 0 < r < R");
  if (quadrature < 1) throw PreconditionError("quadrature must be positive");
  if (s.eigenvalues.size() == 0) throw PreconditionError("empty spectrum");
  const double log_z0 = std::log(static_cast<double>(s.eigenvalues.size()));
  double mean = 0.0;
  for (int j = 0; j < quadrature; ++j) {
    const cplx beta = std::polar(R_outer, 2.0 * kPi * j / quadrature);
    const ScaledPartition p = scaled_partition(s, beta);
    if (!(std::abs(p.z) > 4.0 * std::numeric_limits<double>::epsilon() * p.abs_sum)) {
      throw NumericalFailure("Z vanishes at a Jensen quadrature node; change R");
    }
    mean += std::log(std::abs(p.z)) + p.shift - log_z0;
  }
  mean /= quadrature;
  return std::max(0.0, mean / std::log(R_outer / r_inner));
}

ZeroAtlas locate_zeros(const Spectrum& s, const Rectangle& r, const CountOptions& opt) {
  const ZeroCount top = count_zeros_rectangle(s, r, opt);
  ZeroAtlas atlas;
  atlas.rect = top.used;
  atlas.count = top.rounded;
  subdivide(s, top.used, top.rounded, opt, atlas);
  std::sort(atlas.zeros.begin(), atlas.zeros.end(), [](const Zero& a, const Zero& b) {
    return a.beta.imag() != b.beta.imag() ? a.beta.imag() < b.beta.imag() : a.beta.real() < b.beta.real();
  });
  return atlas;
}

double max_matched_displacement(const std::vector<Zero>& a, const std::vector<Zero>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  struct Pair {
    double d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a[i].beta - b[j].beta), i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
  std::vector<bool> used_a(a.size()), used_b(b.size());
  double worst = 0.0;
  for (const Pair& p : pairs) {
    if (used_a[p.i] || used_b[p.j]) continue;
    used_a[p.i] = used_b[p.j] = true;
    worst = std::max(worst, p.d);
  }
  return worst;
}

std::vector<GridSample> evaluate_grid(const Spectrum& s, const Rectangle& r, int width, int height, int threads) {
  check_rect(r);
  if (width < 1 || height < 1 || width > 4096 || height > 4096) {
    throw PreconditionError("grid resolution must be within 1..4096 per side");
  }
  std::vector<GridSample> grid(static_cast<std::size_t>(width) * height);
  const double dx = (r.re_max - r.re_min) / width, dy = (r.im_max - r.im_min) / height;
  auto rows = [&](int first, int step) {
    for (int i = first; i < height; i += step) {
      for (int j = 0; j < width; ++j) {
        const cplx beta{r.re_min + (j + 0.5) * dx, r.im_max - (i + 0.5) * dy};
        grid[static_cast<std::size_t>(i) * width + j] = {beta, partition_exact(s, beta)};
      }
    }
  };
  const int nt = std::max(1, std::min(threads, height));
  if (nt == 1) {
    rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(rows, t, nt);
  }
  return grid;
}

std::string render_ppm(const std::vector<GridSample>& grid, int width, int height, double gamma) {
  if (std::ssize(grid) != static_cast<std::ptrdiff_t>(width) * height) {
    throw PreconditionError("grid size does not match the image size");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& g : grid) {
    if (!g.log_z.is_zero) top = std::max(top, g.log_z.log_modulus);
  }
  std::string out = "P6 " + std::to_string(width) + " " + std::to_string(height) + " 255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const LogValue& v = grid[k].log_z;
    const double value = v.is_zero ? 0.0 : std::exp(gamma * (v.log_modulus - top));
    const double hue = v.is_zero ? 0.0 : v.phase / (2.0 * kPi);
    hsv_to_rgb(hue, value, reinterpret_cast<unsigned char*>(&out[header + 3 * k]));
  }
  return out;
}

std::string render_map(const Spectrum& s, const Rectangle& r, int width, int height, double gamma, int threads) {
  return render_ppm(evaluate_grid(s, r, width, height, threads), width, height, gamma);
}

std::string grid_csv(const std::vector<GridSample>& grid) {
  std::string out = "beta_re,beta_im,log_abs_z,arg_z\n";
  for (const auto& g : grid) {
    out += format_double(g.beta.real()) + ',' + format_double(g.beta.imag()) + ',' +
           (g.log_z.is_zero ? std::string("-inf") : format_double(g.log_z.log_modulus)) + ',' +
           format_double(g.log_z.phase) + '\n';
  }
  return out;
}

nlohmann::json zeros_json(const ZeroAtlas& atlas) {
  nlohmann::json zs = nlohmann::json::array();
  for (const Zero& z : atlas.zeros) {
    zs.push_back({{"re", z.beta.real()},
                  {"im", z.beta.imag()},
                  {"multiplicity", z.multiplicity},
                  {"residual", z.residual},
                  {"converged", z.converged}});
  }
  return {{"rectangle",
           {{"re_min", atlas.rect.re_min}, {"re_max", atlas.rect.re_max}, {"im_min", atlas.rect.im_min},
            {"im_max", atlas.rect.im_max}}},
          {"count", atlas.count},
          {"unresolved", atlas.unresolved},
          {"zeros", zs}};
}

}  // namespace zerofree
