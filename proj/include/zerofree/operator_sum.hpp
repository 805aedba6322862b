#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "zerofree/monomial.hpp"

namespace zerofree {

using cplx = std::complex<double>;

/// Default dimension cap for dense realisation (2^13).
constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 13;

struct Term {
  cplx coef;
  Monomial mono;  // phase always folded into coef, so mono.phase() == 0
};

/// Sparse operator as a merged list of (coefficient, monomial) pairs over a
/// fixed system: n qubits (Pauli basis) or N Majorana modes.
///
/// Terms keep insertion order; adding a monomial already present merges the
/// coefficients. Zero coefficients are kept unless `pruned()` is called.
class OperatorSum {
 public:
  OperatorSum() = default;
  OperatorSum(Basis basis, int size);

  static OperatorSum identity(Basis basis, int size, cplx coef = 1.0);
  static OperatorSum from_monomial(const Monomial& m, cplx coef = 1.0);

  Basis basis() const { return basis_; }
  int size() const { return size_; }
  /// Qubit count of the Hilbert space (N/2 for Majorana systems).
  int num_qubits() const { return basis_ == Basis::pauli ? size_ : size_ / 2; }
  std::size_t dim() const { return std::size_t{1} << num_qubits(); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(cplx coef, const Monomial& m);
  void add(const OperatorSum& other, cplx scale = 1.0);

  nlohmann::json& meta() { return meta_; }
  const nlohmann::json& meta() const { return meta_; }

  OperatorSum operator+(const OperatorSum& other) const;
  OperatorSum operator*(const OperatorSum& other) const;
  OperatorSum scaled(cplx s) const;
  OperatorSum adjoint() const;
  OperatorSum pruned(double tol = 0.0) const;

  /// Coefficient of the identity monomial, i.e. Tr(o)/dim.
  cplx normalized_trace() const;

  /// Jordan-Wigner rewrite of a Majorana sum as a Pauli sum on N/2 qubits.
  OperatorSum to_pauli() const;

  /// Max weight of any non-identity monomial (k) and max number of such
  /// terms touching one site (D); sites are qubits or Majorana modes.
  int locality() const;
  int degree() const;
  /// Largest |coefficient| (each monomial has unit norm).
  double max_term_norm() const;
  /// Triangle-inequality bound sum_a |c_a| on the operator norm.
  double norm_bound() const;

  /// True when every term is diagonal in the computational basis.
  bool is_diagonal() const;
  /// Diagonal entries, valid when is_diagonal(); basis index bit (n-1-q) is qubit q.
  Eigen::VectorXd diagonal_real() const;

  /// Dense matrix; qubit 0 is the leftmost tensor factor (most significant
  /// bit of the basis index). Throws PreconditionError above `cap`.
  Eigen::MatrixXcd to_dense(std::size_t cap = kDefaultDenseCap) const;

 private:
  Basis basis_ = Basis::pauli;
  int size_ = 0;
  std::vector<Term> terms_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> index_;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// Tr(o)/dim.
cplx normalized_trace(const OperatorSum& o);
Eigen::MatrixXcd to_dense(const OperatorSum& o, std::size_t cap = kDefaultDenseCap);

/// Dense matrix of a single monomial (phase included).
Eigen::MatrixXcd monomial_dense(const Monomial& m, std::size_t cap = kDefaultDenseCap);

/// Max |A - A^dag| entry.
double hermiticity_residual(const Eigen::MatrixXcd& a);

}  // namespace zerofree
