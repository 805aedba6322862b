#include "zerofree/operator_sum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

std::uint64_t reverse_bits(std::uint64_t mask, int n) {
  std::uint64_t out = 0;
  for (int q = 0; q < n; ++q) {
    if ((mask >> q) & 1U) out |= std::uint64_t{1} << (n - 1 - q);
  }
  return out;
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap) {
    throw PreconditionError("Hilbert dimension " + std::to_string(dim) + " exceeds dense cap " +
                            std::to_string(cap));
  }
}

// Adds coef * P (a Pauli monomial with phase) into `out`.
void accumulate_pauli(Eigen::MatrixXcd& out, const Monomial& p, cplx coef) {
  const int n = p.size();
  const std::uint64_t xm = reverse_bits(p.x_mask(), n);
  const std::uint64_t zm = reverse_bits(p.z_mask(), n);
  const cplx c = coef * i_power(p.phase() + std::popcount(p.x_mask() & p.z_mask()));
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) += sign * c;
  }
}

}  // namespace

OperatorSum::OperatorSum(Basis basis, int size) : basis_(basis), size_(size) {
  (void)Monomial::identity(basis, size);  // validates size / parity
}

OperatorSum OperatorSum::identity(Basis basis, int size, cplx coef) {
  OperatorSum o(basis, size);
  o.add(coef, Monomial::identity(basis, size));
  return o;
}

OperatorSum OperatorSum::from_monomial(const Monomial& m, cplx coef) {
  OperatorSum o(m.basis(), m.size());
  o.add(coef, m);
  return o;
}

void OperatorSum::add(cplx coef, const Monomial& m) {
  if (m.basis() != basis_ || m.size() != size_) {
    throw PreconditionError("term does not match the operator's system");
  }
  const cplx c = coef * m.phase_value();
  const auto key = m.key();
  if (auto it = index_.find(key); it != index_.end()) {
    terms_[it->second].coef += c;
    return;
  }
  index_.emplace(key, terms_.size());
  terms_.push_back(Term{c, m.without_phase()});
}

void OperatorSum::add(const OperatorSum& other, cplx scale) {
  for (const auto& t : other.terms_) add(scale * t.coef, t.mono);
}

OperatorSum OperatorSum::operator+(const OperatorSum& other) const {
  OperatorSum out = *this;
  out.add(other);
  return out;
}

OperatorSum OperatorSum::operator*(const OperatorSum& other) const {
  if (other.basis_ != basis_ || other.size_ != size_) {
    throw PreconditionError("operator product across different systems");
  }
  OperatorSum out(basis_, size_);
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      out.add(a.coef * b.coef, monomial_product(a.mono, b.mono));
    }
  }
  return out;
}

OperatorSum OperatorSum::scaled(cplx s) const {
  OperatorSum out = *this;
  for (auto& t : out.terms_) t.coef *= s;
  return out;
}

OperatorSum OperatorSum::adjoint() const {
  OperatorSum out(basis_, size_);
  for (const auto& t : terms_) {
    // m^dag = m for Pauli strings, (-1)^{d(d-1)/2} m for majorana products.
    double sign = 1.0;
    if (basis_ == Basis::majorana) {
      const int d = t.mono.weight();
      if ((d * (d - 1) / 2) % 2) sign = -1.0;
    }
    out.add(std::conj(t.coef) * sign, t.mono);
  }
  out.meta_ = meta_;
  return out;
}

OperatorSum OperatorSum::pruned(double tol) const {
  OperatorSum out(basis_, size_);
  for (const auto& t : terms_) {
    if (std::abs(t.coef) > tol) out.add(t.coef, t.mono);
  }
  out.meta_ = meta_;
  return out;
}

cplx OperatorSum::normalized_trace() const {
  const auto it = index_.find({0, 0});
  return it == index_.end() ? cplx{0.0, 0.0} : terms_[it->second].coef;
}

OperatorSum OperatorSum::to_pauli() const {
  if (basis_ == Basis::pauli) return *this;
  OperatorSum out(Basis::pauli, num_qubits());
  for (const auto& t : terms_) out.add(t.coef, jordan_wigner(t.mono));
  out.meta_ = meta_;
  return out;
}

int OperatorSum::locality() const {
  int k = 0;
  for (const auto& t : terms_) k = std::max(k, t.mono.weight());
  return k;
}

int OperatorSum::degree() const {
  std::vector<int> count(static_cast<std::size_t>(size_), 0);
  for (const auto& t : terms_) {
    const std::uint64_t mask = t.mono.x_mask() | t.mono.z_mask();
    for (std::uint64_t m = mask; m != 0; m &= m - 1) ++count[static_cast<std::size_t>(std::countr_zero(m))];
  }
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

double OperatorSum::max_term_norm() const {
  double j = 0.0;
  for (const auto& t : terms_) {
    if (!t.mono.is_identity()) j = std::max(j, std::abs(t.coef));
  }
  return j;
}

double OperatorSum::norm_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coef);
  return s;
}

bool OperatorSum::is_diagonal() const {
  const OperatorSum p = to_pauli();
  return std::all_of(p.terms_.begin(), p.terms_.end(),
                     [](const Term& t) { return t.mono.x_mask() == 0; });
}

Eigen::VectorXd OperatorSum::diagonal_real() const {
  const OperatorSum p = to_pauli();
  const int n = p.size_;
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& t : p.terms_) {
    if (t.mono.x_mask() != 0) throw PreconditionError("operator is not diagonal");
    const std::uint64_t zm = reverse_bits(t.mono.z_mask(), n);
    const double c = t.coef.real();
    for (std::uint64_t b = 0; b < dim; ++b) {
      d(static_cast<Eigen::Index>(b)) += (std::popcount(b & zm) & 1) ? -c : c;
    }
  }
  return d;
}

Eigen::MatrixXcd OperatorSum::to_dense(std::size_t cap) const {
  check_cap(dim(), cap);
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : terms_) accumulate_pauli(out, jordan_wigner(t.mono), t.coef);
  return out;
}

cplx normalized_trace(const OperatorSum& o) { return o.normalized_trace(); }

Eigen::MatrixXcd to_dense(const OperatorSum& o, std::size_t cap) { return o.to_dense(cap); }

Eigen::MatrixXcd monomial_dense(const Monomial& m, std::size_t cap) {
  return OperatorSum::from_monomial(m).to_dense(cap);
}

double hermiticity_residual(const Eigen::MatrixXcd& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace zerofree
