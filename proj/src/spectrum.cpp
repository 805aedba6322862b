#include "zerofree/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/instance_io.hpp"

namespace zerofree {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_residuals(const Eigen::MatrixXcd& h, const Eigen::VectorXd& evals, const Eigen::MatrixXcd& v,
                     double h_norm) {
  const Eigen::MatrixXcd r = h * v - v * evals.cast<cplx>().asDiagonal();
  const double worst = r.colwise().norm().maxCoeff();
  if (worst >= 1e-9 * std::max(h_norm, 1.0)) {
    std::ostringstream os;
    os << "eigenpair residual " << worst << " exceeds 1e-9 ||H||";
    throw NumericalFailure(os.str());
  }
}

// Rows of P a for a single-site Pauli P; qubit q is bit (n-1-q) of the index.
Eigen::MatrixXcd apply_site_pauli(const Eigen::MatrixXcd& a, SitePauli p, int n) {
  if (p.letter != 'X' && p.letter != 'Y' && p.letter != 'Z') {
    throw PreconditionError(std::string("site operator must be X, Y or Z, got '") + p.letter + "'");
  }
  const Eigen::Index bit = Eigen::Index{1} << (n - 1 - p.site);
  Eigen::MatrixXcd out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const bool one = (r & bit) != 0;
    switch (p.letter) {
      case 'X': out.row(r) = a.row(r ^ bit); break;
      case 'Y': out.row(r) = (one ? cplx(0, 1) : cplx(0, -1)) * a.row(r ^ bit); break;
      default: out.row(r) = (one ? -1.0 : 1.0) * a.row(r); break;
    }
  }
  return out;
}

}  // namespace

double term_hermiticity_residual(const OperatorSum& o) {
  double worst = 0.0;
  for (const auto& t : o.terms()) {
    double sign = 1.0;
    if (o.basis() == Basis::majorana) {
      const int d = t.mono.weight();
      if ((d * (d - 1) / 2) % 2) sign = -1.0;
    }
    worst = std::max(worst, std::abs(t.coef - sign * std::conj(t.coef)));
  }
  return worst;
}

Spectrum diagonalize(const OperatorSum& o, const DiagonalizeOptions& opt) {
  const double herm = term_hermiticity_residual(o);
  if (herm > opt.hermiticity_tol * std::max(1.0, o.norm_bound())) {
    std::ostringstream os;
    os << "operator is not Hermitian (coefficient residual " << herm << ")";
    throw PreconditionError(os.str());
  }
  Spectrum s;
  s.dim = o.dim();
  s.instance_hash = instance_hash(o);

  if (!opt.eigenvectors && o.is_diagonal()) {
    if (s.dim > kDiagonalCap) {
      throw PreconditionError("Hilbert dimension " + std::to_string(s.dim) + " exceeds diagonal cap");
    }
    Eigen::VectorXd d = o.diagonal_real();
    std::sort(d.data(), d.data() + d.size());
    s.eigenvalues = std::move(d);
    return s;
  }

  Eigen::MatrixXcd h = o.to_dense(opt.cap);
  const double h_norm = o.norm_bound();
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::MatrixXd hr = h.real();
    if (!opt.eigenvectors) h.resize(0, 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        hr, opt.eigenvectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("real eigensolver did not converge");
    s.eigenvalues = es.eigenvalues();
    if (opt.eigenvectors) {
      s.eigenvectors = es.eigenvectors().cast<cplx>();
      check_residuals(h, s.eigenvalues, *s.eigenvectors, h_norm);
    }
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      h, opt.eigenvectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("complex eigensolver did not converge");
  s.eigenvalues = es.eigenvalues();
  if (opt.eigenvectors) {
    s.eigenvectors = es.eigenvectors();
    check_residuals(h, s.eigenvalues, *s.eigenvectors, h_norm);
  }
  return s;
}

Spectrum spectrum_from_values(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  s.dim = values.size();
  s.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return s;
}

ScaledPartition scaled_partition(const Spectrum& s, cplx beta) {
  ScaledPartition out{};
  const auto& e = s.eigenvalues;
  if (e.size() == 0) return out;
  const double br = beta.real();
  out.shift = std::max(-br * e(0), -br * e(e.size() - 1));
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double ek = e(k);
    const cplx w = std::exp(-beta * ek - out.shift);
    out.z += w;
    out.dz += -ek * w;
    out.d2z += ek * ek * w;
    out.abs_sum += std::abs(w);
  }
  return out;
}

LogValue partition_exact(const Spectrum& s, cplx beta) {
  if (s.eigenvalues.size() == 0) return LogValue::zero();
  const ScaledPartition p = scaled_partition(s, beta);
  if (std::abs(p.z) <= 4.0 * kEps * p.abs_sum) return LogValue::zero();
  return {std::log(std::abs(p.z)) + p.shift, std::arg(p.z), false};
}

cplx log_partition_derivative(const Spectrum& s, cplx beta) {
  const ScaledPartition p = scaled_partition(s, beta);
  return p.dz / p.z;
}

double observable_exact(const Spectrum& s, const OperatorSum& o, double beta) {
  if (!s.eigenvectors) throw PreconditionError("observable_exact needs eigenvectors");
  if (o.dim() != s.dim) throw PreconditionError("observable and Hamiltonian act on different systems");
  const Eigen::MatrixXcd& v = *s.eigenvectors;
  const Eigen::MatrixXcd ov = o.to_dense(std::max(kDefaultDenseCap, s.dim)) * v;
  const auto& e = s.eigenvalues;
  const double shift = std::max(-beta * e(0), -beta * e(e.size() - 1));
  double num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double w = std::exp(-beta * e(k) - shift);
    num += w * v.col(k).dot(ov.col(k)).real();
    den += w;
  }
  return num / den;
}

double observable_exact(const OperatorSum& h, const OperatorSum& o, double beta) {
  if (h.dim() != o.dim()) throw PreconditionError("observable and Hamiltonian act on different systems");
  DiagonalizeOptions opt;
  opt.eigenvectors = true;
  return observable_exact(diagonalize(h, opt), o, beta);
}

Eigen::MatrixXcd state_matrix(const StateSpec& rho, int n_qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (rho.kind == StateSpec::Kind::maximally_mixed) {
    return Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  }
  // qubit q is bit (n-1-q) of the basis index
  Eigen::Index idx = 0;
  for (int q = 0; q < n_qubits; ++q) {
    if ((rho.bits >> q) & 1U) idx |= Eigen::Index{1} << (n_qubits - 1 - q);
  }
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
  r(idx, idx) = 1.0;
  return r;
}

cplx otoc_exact(const Spectrum& s, const OperatorSum& h, SitePauli b, SitePauli m, int L, cplx t,
                const StateSpec& rho) {
  if (!s.eigenvectors) throw PreconditionError("otoc_exact needs eigenvectors");
  const int n = h.num_qubits();
  if (b.site == m.site) throw PreconditionError("OTOC operators must act on distinct qubits (b != m)");
  if (b.site < 0 || b.site >= n || m.site < 0 || m.site >= n) throw PreconditionError("OTOC site out of range");
  if (L < 1) throw PreconditionError("OTOC needs L >= 1");
  const Eigen::MatrixXcd& v = *s.eigenvectors;
  const cplx i{0.0, 1.0};
  Eigen::VectorXcd phase(s.eigenvalues.size());
  Eigen::VectorXcd phase_inv(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    phase(k) = std::exp(i * t * s.eigenvalues(k));
    phase_inv(k) = std::exp(-i * t * s.eigenvalues(k));
  }
  // Work in the eigenbasis: Y = B(t) M becomes (e^{iEt} B' e^{-iEt}) M'.
  const Eigen::MatrixXcd b_eig = v.adjoint() * apply_site_pauli(v, b, n);
  const Eigen::MatrixXcd m_eig = v.adjoint() * apply_site_pauli(v, m, n);
  const Eigen::MatrixXcd y = phase.asDiagonal() * b_eig * phase_inv.asDiagonal() * m_eig;
  if (rho.kind == StateSpec::Kind::maximally_mixed) {
    Eigen::MatrixXcd half = y;
    for (int j = 1; j < L; ++j) half = half * y;
    return half.cwiseProduct(half.transpose()).sum() / static_cast<double>(s.dim);
  }
  Eigen::Index idx = 0;
  for (int q = 0; q < n; ++q) {
    if ((rho.bits >> q) & 1U) idx |= Eigen::Index{1} << (n - 1 - q);
  }
  const Eigen::VectorXcd w = v.row(idx).adjoint();
  Eigen::VectorXcd z = w;
  for (int j = 0; j < 2 * L; ++j) z = y * z;
  return w.dot(z);
}

cplx otoc_exact(const OperatorSum& h, SitePauli b, SitePauli m, int L, cplx t, const StateSpec& rho) {
  DiagonalizeOptions opt;
  opt.eigenvectors = true;
  return otoc_exact(diagonalize(h, opt), h, b, m, L, t, rho);
}

void save_spectrum(const Spectrum& s, const std::filesystem::path& path) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << s.instance_hash;
  nlohmann::json j = {{"hash", hash.str()},
                      {"dim", s.dim},
                      {"eigenvalues", std::vector<double>(s.eigenvalues.data(),
                                                          s.eigenvalues.data() + s.eigenvalues.size())}};
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write spectrum cache " + path.string());
  out << j.dump() << '\n';
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open spectrum cache " + path.string());
  nlohmann::json j;
  in >> j;
  Spectrum s = spectrum_from_values(j.at("eigenvalues").get<std::vector<double>>());
  s.instance_hash = std::stoull(j.at("hash").get<std::string>(), nullptr, 16);
  return s;
}

Spectrum cached_diagonalize(const OperatorSum& o, const std::filesystem::path& dir,
                            const DiagonalizeOptions& opt) {
  if (opt.eigenvectors) return diagonalize(o, opt);
  std::ostringstream name;
  name << std::hex << std::setw(16) << std::setfill('0') << instance_hash(o) << ".spectrum.json";
  const auto path = dir / name.str();
  if (std::filesystem::exists(path)) {
    Spectrum s = load_spectrum(path);
    if (s.instance_hash == instance_hash(o) && s.dim == o.dim()) return s;
  }
  Spectrum s = diagonalize(o, opt);
  std::filesystem::create_directories(dir);
  save_spectrum(s, path);
  return s;
}

}  // namespace zerofree
