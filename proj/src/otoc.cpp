#include "zerofree/otoc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "zerofree/conformal_map.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/rng.hpp"

namespace zerofree {

namespace {

using Matrix = Eigen::MatrixXcd;
constexpr cplx kI{0.0, 1.0};

const OperatorSum& require_pauli(const OperatorSum& h) {
  if (h.basis() != Basis::pauli) throw PreconditionError("OTOC Hamiltonians must be Pauli sums");
  return h;
}

Matrix site_matrix(int n, SitePauli p, std::size_t cap) { return monomial_dense(Monomial::pauli(n, p.site, p.letter), cap); }

// Series of matrices truncated at order K.
std::vector<Matrix> series_product(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  const std::size_t k = std::min(a.size(), b.size());
  std::vector<Matrix> out(k, Matrix::Zero(a[0].rows(), a[0].cols()));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t i = 0; i <= r; ++i) out[r] += a[i] * b[r - i];
  }
  return out;
}

}  // namespace

void OtocTask::validate() const {
  require_pauli(h);
  const int n = h.num_qubits();
  if (b.site == m.site) throw PreconditionError("OTOC operators must act on distinct qubits (b != m)");
  if (b.site < 0 || b.site >= n || m.site < 0 || m.site >= n) throw PreconditionError("OTOC site out of range");
  if (L < 1) throw PreconditionError("OTOC needs L >= 1");
}

double sigma_eta(double eta, int L, int k, double J, int D) {
  if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("eta must lie in (0,1)");
  if (L < 1 || k < 1 || D < 1 || !(J > 0.0)) throw PreconditionError("sigma_eta needs L, k, D >= 1 and J > 0");
  return -std::expm1(-std::log(2.0 - eta) / (2.0 * L)) / (2.0 * k * J * D);
}

PowerSeries otoc_series(const OtocTask& task, int K, int max_order, std::size_t cap) {
  task.validate();
  if (K < 0) throw PreconditionError("series order must be >= 0");
  if (K > max_order) throw PreconditionError("OTOC series order above the limit " + std::to_string(max_order));
  const int n = task.h.num_qubits();
  if (task.h.dim() > cap) throw PreconditionError("OTOC system exceeds the dense cap");
  const Matrix hd = task.h.to_dense(cap);
  const Matrix md = site_matrix(n, task.m, cap);
  const Matrix rho = state_matrix(task.rho, n);

  // C_r = i^r ad_H^r(B) / r!, Y_r = C_r M.
  std::vector<Matrix> y;
  y.reserve(static_cast<std::size_t>(K + 1));
  Matrix c = site_matrix(n, task.b, cap);
  for (int r = 0; r <= K; ++r) {
    if (r > 0) c = (kI / static_cast<double>(r)) * (hd * c - c * hd);
    y.push_back(c * md);
  }
  std::vector<cplx> coef(static_cast<std::size_t>(K + 1), cplx{});
  if (task.L == 1) {
    std::vector<Matrix> ry;
    ry.reserve(y.size());
    for (const auto& m : y) ry.push_back(rho * m);
    for (int a = 0; a <= K; ++a) {
      for (int b = 0; a + b <= K; ++b) {
        coef[static_cast<std::size_t>(a + b)] += ry[static_cast<std::size_t>(a)].cwiseProduct(y[static_cast<std::size_t>(b)].transpose()).sum();
      }
    }
    return PowerSeries(std::move(coef));
  }
  std::vector<Matrix> x = y;
  for (int j = 1; j < 2 * task.L; ++j) x = series_product(x, y);
  for (int r = 0; r <= K; ++r) coef[static_cast<std::size_t>(r)] = (rho * x[static_cast<std::size_t>(r)]).trace();
  return PowerSeries(std::move(coef));
}

int otoc_truncation_order(double map_rho, double eta, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("eps must lie in (0,1)");
  if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("eta must lie in (0,1)");
  const ConformalMap phi = build_strip_map(map_rho, 1);
  const double varrho = 0.5 * (1.0 + phi.strip.beta_radius);
  const double c_eta = std::numbers::ln2 + (2.0 - eta) / eta;
  const double k = std::log(c_eta / (eps * (1.0 - 1.0 / varrho))) / std::log(varrho) - 1.0;
  return std::max(1, static_cast<int>(std::ceil(k)));
}

OtocEstimate estimate_otoc(const OtocTask& task, double eps, const OtocOptions& opt) {
  task.validate();
  OtocEstimate e;
  if (task.t == 0.0) {
    e.value = 1.0;
    e.raw = 1.0;
    return e;
  }
  const double t = std::abs(task.t);
  const double s_eta = sigma_eta(opt.eta, task.L, task.locality(), task.coupling(), task.degree());
  e.sigma = s_eta / t;
  if (e.sigma < opt.gate) {
    throw PreconditionError("strip half-height sigma_eta/t = " + std::to_string(e.sigma) + " is below the gate " +
                            std::to_string(opt.gate) + "; the time is too large for a tractable map degree");
  }
  // The strip map confines |Im phi| to 2 rho, so rho = sigma/2 keeps t phi in the zero-free strip.
  e.map_rho = std::min(0.5 * e.sigma, 0.9);
  e.K_bound = otoc_truncation_order(e.map_rho, opt.eta, eps);
  e.K = opt.K.value_or(std::min(e.K_bound, opt.max_order));
  e.K_capped = !opt.K && e.K_bound > opt.max_order;

  const PowerSeries f = otoc_series(task, e.K, std::max(opt.max_order, e.K));
  // f(t s) as a series in s.
  std::vector<cplx> ft(f.coeffs());
  cplx tp = 1.0;
  for (auto& c : ft) {
    c *= tp;
    tp *= task.t;
  }
  const PowerSeries ft_series(std::move(ft));
  const ConformalMap phi = build_strip_map(e.map_rho, e.K);
  const PowerSeries g = opt.direct ? ft_series : series_log(ft_series * cplx{-1.0} + 2.0);
  const PowerSeries composed = series_compose(g, phi.series);
  cplx sum = 0.0;
  for (const cplx& c : composed.coeffs()) sum += c;
  const auto& cs = composed.coeffs();
  for (std::size_t i = cs.size() >= 3 ? cs.size() - 3 : 0; i < cs.size(); ++i) {
    e.tail_indicator = std::max(e.tail_indicator, std::abs(cs[i]));
  }
  e.raw = opt.direct ? sum : 2.0 - std::exp(sum);
  e.value = e.raw.real();
  return e;
}

double otoc_reference(const OtocTask& task) {
  task.validate();
  return otoc_exact(task.h, task.b, task.m, task.L, task.t, task.rho).real();
}

LrResult lr_baseline(const OtocTask& task, int R, std::size_t cap) {
  task.validate();
  if (R < 0) throw PreconditionError("LR radius must be >= 0");
  const int n = task.h.num_qubits();
  // Interaction graph: qubits sharing a term are adjacent.
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (const auto& term : task.h.terms()) {
    const std::uint64_t s = term.mono.x_mask() | term.mono.z_mask();
    for (int q = 0; q < n; ++q) {
      if ((s >> q) & 1U) adj[static_cast<std::size_t>(q)] |= s & ~(std::uint64_t{1} << q);
    }
  }
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{task.b.site};
  dist[static_cast<std::size_t>(task.b.site)] = 0;
  std::uint64_t ball = 0;
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    if (dist[static_cast<std::size_t>(q)] > R) continue;
    ball |= std::uint64_t{1} << q;
    for (int p = 0; p < n; ++p) {
      if (((adj[static_cast<std::size_t>(q)] >> p) & 1U) && dist[static_cast<std::size_t>(p)] < 0) {
        dist[static_cast<std::size_t>(p)] = dist[static_cast<std::size_t>(q)] + 1;
        queue.push_back(p);
      }
    }
  }
  const std::uint64_t keep = ball | (std::uint64_t{1} << task.m.site);
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  int sub_n = 0;
  for (int q = 0; q < n; ++q) {
    if ((keep >> q) & 1U) index[static_cast<std::size_t>(q)] = sub_n++;
  }
  if ((std::size_t{1} << sub_n) > cap) throw PreconditionError("LR ball exceeds the dense cap");

  OperatorSum sub(Basis::pauli, sub_n);
  for (const auto& term : task.h.terms()) {
    const std::uint64_t s = term.mono.x_mask() | term.mono.z_mask();
    if ((s & ~ball) != 0) continue;  // term leaves the ball
    std::string letters(static_cast<std::size_t>(sub_n), 'I');
    for (int q = 0; q < n; ++q) {
      if (index[static_cast<std::size_t>(q)] >= 0) letters[static_cast<std::size_t>(index[static_cast<std::size_t>(q)])] = term.mono.letter(q);
    }
    sub.add(term.coef, Monomial::pauli(letters));
  }
  StateSpec rho = task.rho;
  if (rho.kind == StateSpec::Kind::basis_product) {
    std::uint64_t bits = 0;
    for (int q = 0; q < n; ++q) {
      if (index[static_cast<std::size_t>(q)] >= 0 && ((task.rho.bits >> q) & 1U)) bits |= std::uint64_t{1} << index[static_cast<std::size_t>(q)];
    }
    rho.bits = bits;
  }
  LrResult out;
  out.radius = R;
  out.ball_size = std::popcount(ball);
  out.low_radius = R == 0;
  const SitePauli b{index[static_cast<std::size_t>(task.b.site)], task.b.letter};
  const SitePauli m{index[static_cast<std::size_t>(task.m.site)], task.m.letter};
  out.estimate = otoc_exact(sub, b, m, task.L, task.t, rho).real();
  return out;
}

LrResult lr_baseline_eps(const OtocTask& task, double eps, const LrConstants& c, std::size_t cap) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const double v = c.v.value_or(task.growth_constant() * std::numbers::e);
  const int R = static_cast<int>(std::ceil(v * std::abs(task.t) + std::log(c.c0 / eps) / c.mu));
  return lr_baseline(task, std::max(R, 0), cap);
}

AdNormBound ad_norm_bound(const OperatorSum& h, SitePauli b, int r, std::size_t cap) {
  require_pauli(h);
  if (r < 0 || r > 8) throw PreconditionError("ad_norm_bound needs 0 <= r <= 8");
  const int n = h.num_qubits();
  if (b.site < 0 || b.site >= n) throw PreconditionError("site out of range");
  const Matrix hd = h.to_dense(cap);
  Matrix c = site_matrix(n, b, cap);
  for (int j = 0; j < r; ++j) c = kI * (hd * c - c * hd);  // i^r ad^r(B) stays Hermitian
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  AdNormBound out;
  out.r = r;
  out.computed = es.eigenvalues().cwiseAbs().maxCoeff();
  const auto& meta = h.meta();
  const double k = meta.contains("k") ? meta.at("k").get<double>() : h.locality();
  const double d = meta.contains("D") ? meta.at("D").get<double>() : h.degree();
  const double j = meta.contains("J") ? meta.at("J").get<double>() : h.max_term_norm();
  out.bound = std::pow(2.0 * k * j * d, r) * std::tgamma(r + 1.0);
  out.holds = out.computed <= out.bound * (1.0 + 1e-12);
  return out;
}

OperatorSum random_bond_chain(int n, double J, std::uint64_t seed, bool xyz_only) {
  if (n < 2 || n > 16) throw PreconditionError("bond chain needs 2 <= n <= 16");
  if (!(J > 0.0)) throw PreconditionError("bond chain needs J > 0");
  const Philox4x32 rng(seed);
  OperatorSum h(Basis::pauli, n);
  static constexpr char kLetters[] = "XYZ";
  for (int i = 0; i + 1 < n; ++i) {
    OperatorSum bond(Basis::pauli, 2);
    for (int a = 0; a < 9; ++a) {
      if (xyz_only && a % 4 != 0) continue;  // XX, YY, ZZ
      const std::string w{kLetters[a / 3], kLetters[a % 3]};
      bond.add(2.0 * rng.uniform(static_cast<std::uint64_t>(9 * i + a)) - 1.0, Monomial::pauli(w));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(bond.to_dense(), Eigen::EigenvaluesOnly);
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    for (const auto& term : bond.terms()) {
      std::string w(static_cast<std::size_t>(n), 'I');
      w[static_cast<std::size_t>(i)] = term.mono.letter(0);
      w[static_cast<std::size_t>(i + 1)] = term.mono.letter(1);
      h.add(J * term.coef / norm, Monomial::pauli(w));
    }
  }
  h.meta() = {{"ensemble", "bond_chain"}, {"k", 2}, {"D", 2}, {"J", J}, {"seed", seed}};
  return h;
}

OtocTask make_otoc_task(const OperatorSum& h, SitePauli b, SitePauli m, double t, int L, StateSpec rho) {
  OtocTask task;
  task.h = h;
  task.b = b;
  task.m = m;
  task.t = t;
  task.L = L;
  task.rho = rho;
  const auto& meta = h.meta();
  if (meta.contains("k")) task.k = meta.at("k").get<int>();
  if (meta.contains("D")) task.D = meta.at("D").get<int>();
  if (meta.contains("J")) task.J = meta.at("J").get<double>();
  task.validate();
  return task;
}

nlohmann::json to_json(const OtocEstimate& e) {
  return {{"value", e.value},         {"K", e.K},          {"K_bound", e.K_bound},
          {"K_capped", e.K_capped},   {"sigma", e.sigma},  {"map_rho", e.map_rho},
          {"tail_indicator", e.tail_indicator}};
}

}  // namespace zerofree
