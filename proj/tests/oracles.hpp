#pragma once

// Reference computations that avoid the library's own pipelines: dense
// matrices are built here from Kronecker products, spectra come straight
// from Eigen, and scalar equations are solved by plain iteration.

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// Qubit 0 is the leftmost factor.
inline Mat pauli_string(const std::string& s) {
  Mat m = Mat::Identity(1, 1);
  for (char c : s) m = kron(m, pauli(c));
  return m;
}

// gamma_{2j} = Z..Z X_j, gamma_{2j+1} = Z..Z Y_j (0-based).
inline Mat majorana(int n_modes, int a) {
  std::string s(static_cast<std::size_t>(n_modes / 2), 'I');
  for (int q = 0; q < a / 2; ++q) s[static_cast<std::size_t>(q)] = 'Z';
  s[static_cast<std::size_t>(a / 2)] = a % 2 == 0 ? 'X' : 'Y';
  return pauli_string(s);
}

inline Eigen::VectorXd eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// log Z with a plain max shift; the sum itself is naive.
inline cplx log_z(const Eigen::VectorXd& e, cplx beta) {
  double shift = -1e300;
  for (double x : e) shift = std::max(shift, (-beta * x).real());
  cplx s = 0.0;
  for (double x : e) s += std::exp(-beta * x - shift);
  return std::log(s) + shift;
}

inline double thermal(const Mat& h, const Mat& o, double beta) {
  const Mat rho = (-beta * h).exp();
  return ((rho * o).trace() / rho.trace()).real();
}

// Tr[(B(t) M)^{2L}] / dim with B(t) = e^{iHt} B e^{-iHt}.
inline double otoc(const Mat& h, const Mat& b, const Mat& m, int L, double t) {
  const Mat u = (cplx(0, -t) * h).exp();
  const Mat bt = u.adjoint() * b * u;
  const Mat y = bt * m;
  Mat x = Mat::Identity(h.rows(), h.cols());
  for (int i = 0; i < 2 * L; ++i) x = x * y;
  return x.trace().real() / static_cast<double>(h.rows());
}

// Fixed point of c = b cos(c/2) for small b.
inline cplx saddle_fixed_point(cplx b) {
  cplx c = b;
  for (int i = 0; i < 500; ++i) c = b * std::cos(c / 2.0);
  return c;
}

inline double critical_y() {
  double lo = 0.5, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::tanh(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
