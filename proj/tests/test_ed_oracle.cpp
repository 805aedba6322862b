#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>

#include "oracles.hpp"
#include "zerofree/codes.hpp"
#include "zerofree/ensembles.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/otoc.hpp"
#include "zerofree/spectrum.hpp"

using namespace zerofree;

namespace {

OperatorSum single_z() { return OperatorSum::from_monomial(Monomial::pauli("Z")); }

OperatorSum repetition3() {
  OperatorSum h(Basis::pauli, 3);
  h.add(1.0, Monomial::pauli("ZZI"));
  h.add(1.0, Monomial::pauli("IZZ"));
  return h;
}

std::string site_string(int n, int q, char c) {
  std::string s(static_cast<std::size_t>(n), 'I');
  s[static_cast<std::size_t>(q)] = c;
  return s;
}

}  // namespace

TEST(Diagonalize, SingleZ) {
  const Spectrum s = diagonalize(single_z());
  ASSERT_EQ(s.dim, 2U);
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), -1.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 1.0);
}

TEST(Diagonalize, RepetitionCode) {
  const Spectrum s = diagonalize(repetition3());
  const std::vector<double> want{-2, -2, 0, 0, 0, 0, 2, 2};
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(s.eigenvalues(i), want[static_cast<std::size_t>(i)], 1e-12);
}

TEST(Diagonalize, TraceAndResidual) {
  const OperatorSum h = heisenberg_sk(6, 1.0, 3) + OperatorSum::identity(Basis::pauli, 6, 0.3);
  DiagonalizeOptions opt;
  opt.eigenvectors = true;
  const Spectrum s = diagonalize(h, opt);
  EXPECT_NEAR(s.eigenvalues.sum(), double(s.dim) * h.normalized_trace().real(), 1e-9 * double(s.dim));
  for (Eigen::Index k = 1; k < s.eigenvalues.size(); ++k) ASSERT_LE(s.eigenvalues(k - 1), s.eigenvalues(k));
  const Eigen::MatrixXcd d = h.to_dense();
  const double hn = d.cwiseAbs().rowwise().sum().maxCoeff();
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    const Eigen::VectorXcd v = s.eigenvectors->col(k);
    ASSERT_LT((d * v - s.eigenvalues(k) * v).norm(), 1e-9 * hn);
  }
  const Eigen::VectorXd ref = oracle::eigenvalues(d);
  EXPECT_LT((ref - s.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Diagonalize, RejectsNonHermitian) {
  OperatorSum h(Basis::pauli, 2);
  h.add(cplx(0, 1), Monomial::pauli("XZ"));
  EXPECT_THROW(diagonalize(h), PreconditionError);
}

TEST(Diagonalize, QuadraticSykIsReflectionSymmetric) {
  const Spectrum s = diagonalize(syk(8, 2, 1.0, 4));
  const auto& e = s.eigenvalues;
  const Eigen::Index d = e.size();
  for (Eigen::Index k = 0; k < d; ++k) EXPECT_NEAR(e(k) + e(d - 1 - k), 0.0, 1e-9);
}

TEST(Diagonalize, QuarticSykOddMomentIsNonzero) {
  // Tr H^3 computed from the dense matrix: the q = 4, N = 8 spectrum is not
  // symmetric about 0, so the paired-eigenvalue check cannot hold there.
  const OperatorSum h = syk(8, 4, 1.0, 1);
  const Eigen::MatrixXcd d = h.to_dense();
  const double tr3 = (d * d * d).trace().real();
  const Spectrum s = diagonalize(h);
  EXPECT_NEAR(s.eigenvalues.array().cube().sum(), tr3, 1e-10);
  EXPECT_GT(std::abs(tr3), 1e-3);
}

TEST(PartitionExact, SingleZ) {
  const Spectrum s = diagonalize(single_z());
  const LogValue z = partition_exact(s, 1.0);
  EXPECT_NEAR(std::exp(z.log_modulus), 2.0 * std::cosh(1.0), 1e-12);
  EXPECT_EQ(z.phase, 0.0);
  const LogValue zero = partition_exact(s, cplx(0, std::numbers::pi / 2));
  EXPECT_TRUE(zero.is_zero);
  EXPECT_TRUE(std::isinf(zero.log_modulus) && zero.log_modulus < 0);
  EXPECT_FALSE(std::isnan(zero.phase));
}

TEST(PartitionExact, RepetitionClosedForm) {
  const LogValue z = partition_exact(diagonalize(repetition3()), 0.7);
  const double want = 8.0 * std::pow(std::cosh(0.7), 2);
  EXPECT_LT(std::abs(std::exp(z.log_modulus) - want) / want, 1e-12);
}

TEST(PartitionExact, MatchesNaiveSumOnComplexGrid) {
  const OperatorSum h = heisenberg_sk(6, 1.0, 8);
  const Spectrum s = diagonalize(h);
  const Eigen::VectorXd e = oracle::eigenvalues(h.to_dense());
  for (double re : {-2.0, -0.3, 0.0, 0.4, 3.0}) {
    for (double im : {-5.0, -1.0, 0.0, 0.7, 4.0}) {
      const cplx b(re, im);
      const LogValue z = partition_exact(s, b);
      const cplx ref = oracle::log_z(e, b);
      ASSERT_NEAR(z.log_modulus, ref.real(), 1e-10);
      ASSERT_NEAR(std::remainder(z.phase - ref.imag(), 2 * std::numbers::pi), 0.0, 1e-9);
    }
  }
}

TEST(PartitionExact, NoOverflowAtLargeBeta) {
  const Spectrum s = diagonalize(single_z());
  const LogValue z = partition_exact(s, cplx(300.0, 2.0));
  EXPECT_TRUE(std::isfinite(z.log_modulus));
  EXPECT_NEAR(z.log_modulus, 300.0, 1e-9);
}

TEST(PartitionExact, RealBetaIsLogConvexWithZeroPhase) {
  const Spectrum s = diagonalize(ising_pspin(6, 3, 1.0, 2));
  std::vector<double> f;
  for (int i = 0; i <= 60; ++i) {
    const LogValue z = partition_exact(s, -3.0 + 0.1 * i);
    ASSERT_EQ(z.phase, 0.0);
    f.push_back(z.log_modulus);
  }
  for (std::size_t i = 1; i + 1 < f.size(); ++i) ASSERT_GE(f[i - 1] + f[i + 1] - 2 * f[i], -1e-12);
}

TEST(PartitionExact, DerivativeIsMinusEnergy) {
  const OperatorSum h = syk(10, 4, 1.0, 6);
  const Spectrum s = diagonalize(h);
  for (double b : {0.2, 1.0, 2.5}) {
    const double hstep = 1e-5;
    const double fd =
        (partition_exact(s, b + hstep).log_modulus - partition_exact(s, b - hstep).log_modulus) / (2 * hstep);
    const double energy = observable_exact(h, h, b);
    EXPECT_LT(std::abs(fd + energy) / std::abs(energy), 1e-6);
    EXPECT_NEAR(log_partition_derivative(s, b).real(), -energy, 1e-10);
  }
}

TEST(ObservableExact, Examples) {
  EXPECT_NEAR(observable_exact(single_z(), single_z(), 1.0), -std::tanh(1.0), 1e-14);
  const OperatorSum h = heisenberg_sk(5, 1.0, 1);
  EXPECT_NEAR(observable_exact(h, OperatorSum::from_monomial(Monomial::pauli("XZIIY")), 0.0), 0.0, 1e-14);
  const StabilizerCode code = steane_code();
  const OperatorSum hs = code.hamiltonian();
  // Code Gibbs states are weighted by e^{+beta H}.
  EXPECT_NEAR(observable_exact(hs.scaled(-1.0), hs, 0.5), code.m() * std::tanh(0.5), 1e-10);
}

TEST(ObservableExact, MatchesMatrixExponential) {
  const OperatorSum h = heisenberg_sk(5, 1.0, 4);
  const OperatorSum o = OperatorSum::from_monomial(Monomial::pauli("ZZIII"));
  EXPECT_NEAR(observable_exact(h, o, 0.8), oracle::thermal(h.to_dense(), o.to_dense(), 0.8), 1e-12);
}

TEST(ObservableExact, DimensionMismatch) {
  EXPECT_THROW(observable_exact(single_z(), repetition3(), 1.0), PreconditionError);
}

TEST(OtocExact, TrivialCases) {
  const OperatorSum h = random_bond_chain(5, 1.0, 3);
  EXPECT_NEAR(std::abs(otoc_exact(h, {1, 'Z'}, {2, 'X'}, 1, 0.0) - 1.0), 0.0, 1e-12);
  const OperatorSum zero(Basis::pauli, 5);
  EXPECT_NEAR(std::abs(otoc_exact(zero, {1, 'Z'}, {2, 'X'}, 2, 0.7) - 1.0), 0.0, 1e-12);
  EXPECT_THROW(otoc_exact(h, {1, 'Z'}, {1, 'X'}, 1, 0.3), PreconditionError);
}

TEST(OtocExact, MatchesDirectPropagator) {
  for (std::uint64_t seed : {1, 2}) {
    const OperatorSum h = random_bond_chain(6, 1.0, seed);
    const double want = oracle::otoc(h.to_dense(), oracle::pauli_string(site_string(6, 2, 'Z')),
                                     oracle::pauli_string(site_string(6, 3, 'Z')), 1, 0.5);
    const cplx got = otoc_exact(h, {2, 'Z'}, {3, 'Z'}, 1, 0.5);
    EXPECT_NEAR(got.real(), want, 1e-10);
    EXPECT_NEAR(got.imag(), 0.0, 1e-10);
    EXPECT_LE(std::abs(got), 1.0 + 1e-12);
  }
}

TEST(OtocExact, BasisProductState) {
  const OperatorSum h = random_bond_chain(4, 1.0, 5);
  StateSpec rho;
  rho.kind = StateSpec::Kind::basis_product;
  rho.bits = 0b0101;
  const Eigen::MatrixXcd r = state_matrix(rho, 4);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-15);
  const Eigen::MatrixXcd u = (cplx(0, -0.4) * h.to_dense()).exp();
  const Eigen::MatrixXcd b = oracle::pauli_string("IXII"), m = oracle::pauli_string("IIYI");
  const Eigen::MatrixXcd y = u.adjoint() * b * u * m;
  const cplx want = (r * y * y).trace();
  const cplx got = otoc_exact(h, {1, 'X'}, {2, 'Y'}, 1, 0.4, rho);
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-10);
}

TEST(SpectrumCache, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "zerofree_cache_test";
  std::filesystem::remove_all(dir);
  const OperatorSum h = syk(8, 4, 1.0, 2);
  const Spectrum a = cached_diagonalize(h, dir);
  const Spectrum b = cached_diagonalize(h, dir);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}
