#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "zerofree/conformal_map.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/otoc.hpp"
#include "zerofree/spectrum.hpp"

using namespace zerofree;

namespace {

Spectrum with_vectors(const OperatorSum& h) {
  DiagonalizeOptions opt;
  opt.eigenvectors = true;
  return diagonalize(h, opt);
}

}  // namespace

TEST(SigmaEta, Examples) {
  EXPECT_NEAR(sigma_eta(0.5, 1, 2, 1.0, 2), (1 - 1 / std::sqrt(1.5)) / 8, 1e-15);
  EXPECT_NEAR(sigma_eta(0.5, 1, 2, 1.0, 2), 0.02294, 1e-5);
  EXPECT_LT(sigma_eta(1 - 1e-12, 1, 2, 1.0, 2), 1e-12);
  EXPECT_NEAR(sigma_eta(0.3, 2, 2, 2.0, 3), 0.5 * sigma_eta(0.3, 2, 2, 1.0, 3), 1e-15);
  // larger L shrinks the strip
  EXPECT_LT(sigma_eta(0.5, 3, 2, 1.0, 2), sigma_eta(0.5, 1, 2, 1.0, 2));
}

TEST(BondChain, MetaAndNorms) {
  const OperatorSum h = random_bond_chain(6, 0.5, 3);
  EXPECT_EQ(h.meta()["k"], 2);
  EXPECT_EQ(h.meta()["D"], 2);
  EXPECT_DOUBLE_EQ(h.meta()["J"].get<double>(), 0.5);
  EXPECT_LE(h.locality(), 2);
  EXPECT_LT(hermiticity_residual(h.to_dense()), 1e-14);
  // Each bond term has operator norm J.
  for (int e = 0; e + 1 < 6; ++e) {
    OperatorSum bond(Basis::pauli, 6);
    for (const auto& t : h.terms()) {
      const auto s = t.mono.support();
      if (s.size() == 2 && s[0] == e && s[1] == e + 1) bond.add(t.coef, t.mono);
    }
    const Eigen::VectorXd ev = oracle::eigenvalues(bond.to_dense());
    EXPECT_NEAR(std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))), 0.5, 1e-12) << e;
  }
  const OperatorSum xyz = random_bond_chain(5, 1.0, 3, true);
  for (const auto& t : xyz.terms()) {
    const std::string l = t.mono.label();
    EXPECT_TRUE(l.find("XX") != std::string::npos || l.find("YY") != std::string::npos ||
                l.find("ZZ") != std::string::npos)
        << l;
  }
}

TEST(OtocTask, Validation) {
  const OperatorSum h = random_bond_chain(4, 1.0, 1);
  EXPECT_THROW(make_otoc_task(h, {1, 'Z'}, {1, 'X'}, 0.1).validate(), PreconditionError);
  EXPECT_THROW(make_otoc_task(h, {0, 'Z'}, {4, 'X'}, 0.1).validate(), PreconditionError);
  EXPECT_THROW(make_otoc_task(h, {0, 'Z'}, {1, 'X'}, 0.1, 0).validate(), PreconditionError);
  const OtocTask t = make_otoc_task(h, {0, 'Z'}, {1, 'X'}, 0.1);
  EXPECT_DOUBLE_EQ(t.growth_constant(), 8.0);
}

TEST(OtocSeries, ConstantTermIsOne) {
  const OtocTask t = make_otoc_task(random_bond_chain(5, 1.0, 2), {1, 'X'}, {3, 'Z'}, 0.0, 2);
  EXPECT_LT(std::abs(otoc_series(t, 6)[0] - 1.0), 1e-14);
}

TEST(OtocSeries, ZeroHamiltonian) {
  OtocTask t;
  t.h = OperatorSum(Basis::pauli, 4);
  t.b = {0, 'Z'};
  t.m = {2, 'X'};
  t.k = 2;
  t.D = 2;
  t.J = 1.0;
  const PowerSeries s = otoc_series(t, 5);
  EXPECT_LT(std::abs(s[0] - 1.0), 1e-15);
  for (int r = 1; r <= 5; ++r) EXPECT_EQ(s[r], cplx(0.0));
}

TEST(OtocSeries, MatchesExactSixQubits) {
  const OperatorSum h = random_bond_chain(6, 0.5, 1);
  const Spectrum s = with_vectors(h);
  for (int L : {1, 2}) {
    const OtocTask t = make_otoc_task(h, {2, 'Z'}, {3, 'X'}, 0.3, L);
    const cplx want = otoc_exact(s, h, {2, 'Z'}, {3, 'X'}, L, 0.3);
    EXPECT_LT(std::abs(otoc_series(t, 30).eval(0.3) - want), 1e-8) << L;
  }
}

TEST(OtocSeries, BasisProductState) {
  const OperatorSum h = random_bond_chain(5, 0.5, 4);
  StateSpec rho;
  rho.kind = StateSpec::Kind::basis_product;
  rho.bits = 0b10110;
  const OtocTask t = make_otoc_task(h, {1, 'Y'}, {2, 'Z'}, 0.2, 1, rho);
  EXPECT_LT(std::abs(otoc_series(t, 30).eval(0.2) - otoc_exact(h, {1, 'Y'}, {2, 'Z'}, 1, 0.2, rho)), 1e-9);
}

TEST(OtocSeries, ErrorShrinksWithK) {
  const OperatorSum h = random_bond_chain(6, 1.0, 2);
  const OtocTask t = make_otoc_task(h, {0, 'X'}, {1, 'Z'}, 0.5);
  const cplx want = otoc_reference(t);
  const PowerSeries s = otoc_series(t, 30);
  double prev = 1e9;
  for (int K : {6, 12, 18, 24}) {
    const double err = std::abs(s.truncated(K).eval(0.5) - want);
    EXPECT_LT(err, prev) << K;
    prev = err;
  }
}

TEST(OtocSeries, Preconditions) {
  const OtocTask t = make_otoc_task(random_bond_chain(4, 1.0, 1), {0, 'Z'}, {1, 'X'}, 0.1);
  EXPECT_THROW(otoc_series(t, 41), PreconditionError);
  EXPECT_THROW(otoc_series(make_otoc_task(random_bond_chain(11, 1.0, 1), {0, 'Z'}, {1, 'X'}, 0.1), 4),
               PreconditionError);
}

TEST(OtocEstimate, TimeZero) {
  const OtocTask t = make_otoc_task(random_bond_chain(4, 1.0, 1), {0, 'Z'}, {1, 'X'}, 0.0);
  EXPECT_EQ(estimate_otoc(t, 1e-3).value, 1.0);
}

TEST(OtocEstimate, EightQubitChain) {
  const OperatorSum h = random_bond_chain(8, 0.1, 1);
  const OtocTask t = make_otoc_task(h, {3, 'Z'}, {4, 'Z'}, 0.5);
  OtocOptions opt;
  opt.eta = 0.1;
  const OtocEstimate e = estimate_otoc(t, 1e-4, opt);
  EXPECT_LT(std::abs(e.value - otoc_reference(t)), 1e-3);
  EXPECT_GE(e.sigma, opt.gate);
  EXPECT_NEAR(e.map_rho, e.sigma / 2, 1e-15);
  EXPECT_LE(std::abs(e.value), 1 + 1e-3);
  const auto j = to_json(e);
  EXPECT_TRUE(j.contains("K"));
}

TEST(OtocEstimate, DirectVariantAgrees) {
  const OperatorSum h = random_bond_chain(6, 0.1, 2);
  const OtocTask t = make_otoc_task(h, {2, 'X'}, {3, 'Y'}, 0.3);
  OtocOptions a, b;
  a.eta = b.eta = 0.1;
  b.direct = true;
  const double want = otoc_reference(t);
  EXPECT_LT(std::abs(estimate_otoc(t, 1e-4, a).value - want), 1e-3);
  EXPECT_LT(std::abs(estimate_otoc(t, 1e-4, b).value - want), 1e-3);
}

TEST(OtocEstimate, GateRejectsLongTimes) {
  const OperatorSum h = random_bond_chain(4, 1.0, 1);
  const double s = sigma_eta(0.5, 1, 2, 1.0, 2);
  const OtocTask t = make_otoc_task(h, {0, 'Z'}, {1, 'X'}, s / 0.04);
  EXPECT_THROW(estimate_otoc(t, 1e-3), PreconditionError);
}

TEST(OtocEstimate, TruncationOrderFormula) {
  const double rho = 0.2, eta = 0.1, eps = 1e-4;
  const int K = otoc_truncation_order(rho, eta, eps);
  const double beta = build_strip_map(rho, 4).strip.beta_radius;
  const double vr = (1 + beta) / 2, c = std::log(2.0) + (2 - eta) / eta;
  auto tail = [&](int k) { return c / (std::pow(vr, k + 1) * (1 - 1 / vr)); };
  EXPECT_LE(tail(K), eps);
  EXPECT_GT(tail(K - 1), eps);
}

TEST(OtocExact, BoundedForRealTime) {
  const OperatorSum h = random_bond_chain(6, 1.0, 5);
  const Spectrum s = with_vectors(h);
  for (double t : {0.0, 0.3, 1.0, 4.0, 20.0}) {
    for (int L : {1, 2}) EXPECT_LE(std::abs(otoc_exact(s, h, {1, 'Z'}, {4, 'X'}, L, t)), 1 + 1e-9);
  }
}

TEST(OtocExact, StripCertificate) {
  const OperatorSum h = random_bond_chain(6, 1.0, 6);
  const Spectrum s = with_vectors(h);
  const double c0 = 2 * 2 * 1.0 * 2;
  std::mt19937_64 rng(2);
  for (int L : {1, 2}) {
    const double half = sigma_eta(0.5, L, 2, 1.0, 2) / 2;
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(-half, half);
    for (int i = 0; i < 500; ++i) {
      const cplx z(re(rng), im(rng));
      const double bound = std::pow(1 - c0 * std::abs(z.imag()), -2.0 * L);
      ASSERT_LE(std::abs(otoc_exact(s, h, {2, 'Z'}, {3, 'Z'}, L, z)), bound + 1e-12) << z;
    }
  }
}

TEST(OtocExact, MatchesDensePropagator) {
  // Eigenbasis evaluation against e^{iHt} B e^{-iHt} on a small chain.
  const OperatorSum h = random_bond_chain(5, 1.0, 8);
  const Eigen::MatrixXcd hd = h.to_dense();
  const Eigen::MatrixXcd b = oracle::pauli_string("IYIII"), m = oracle::pauli_string("IIIXI");
  for (int L : {1, 3}) {
    const cplx want = oracle::otoc(hd, b, m, L, 0.7);
    EXPECT_LT(std::abs(otoc_exact(h, {1, 'Y'}, {3, 'X'}, L, 0.7) - want), 1e-10) << L;
  }
}

TEST(LiebRobinson, FullBallIsExact) {
  const OperatorSum h = random_bond_chain(6, 1.0, 2);
  const OtocTask t = make_otoc_task(h, {1, 'Z'}, {2, 'X'}, 0.4);
  const LrResult r = lr_baseline(t, 5);
  EXPECT_EQ(r.ball_size, 6);
  EXPECT_FALSE(r.low_radius);
  EXPECT_NEAR(r.estimate, otoc_reference(t), 1e-12);
}

TEST(LiebRobinson, RadiusZeroFlagged) {
  const OtocTask t = make_otoc_task(random_bond_chain(6, 1.0, 2), {1, 'Z'}, {2, 'X'}, 0.4);
  const LrResult r = lr_baseline(t, 0);
  EXPECT_TRUE(r.low_radius);
  EXPECT_TRUE(std::isfinite(r.estimate));
  EXPECT_THROW(lr_baseline(t, -1), PreconditionError);
}

TEST(LiebRobinson, ErrorDecreasesWithRadius) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const OtocTask t = make_otoc_task(random_bond_chain(8, 1.0, seed), {0, 'Z'}, {1, 'Z'}, 0.5);
    const double want = otoc_reference(t);
    double prev = 1e9;
    for (int R : {1, 2, 3, 4}) {
      const double err = std::abs(lr_baseline(t, R).estimate - want);
      EXPECT_LT(err, prev) << seed << ' ' << R;
      prev = err;
    }
  }
}

TEST(LiebRobinson, EpsRadius) {
  const OtocTask t = make_otoc_task(random_bond_chain(8, 0.1, 1), {0, 'Z'}, {1, 'Z'}, 0.5);
  LrConstants c;
  const LrResult r = lr_baseline_eps(t, 1e-3, c);
  const double v = 2 * 2 * 0.1 * 2 * std::exp(1.0);
  EXPECT_EQ(r.radius, static_cast<int>(std::ceil(v * 0.5 + std::log(4.0 / 1e-3))));
  c.v = 1.0;
  c.mu = 2.0;
  EXPECT_EQ(lr_baseline_eps(t, 1e-3, c).radius, static_cast<int>(std::ceil(0.5 + std::log(4.0 / 1e-3) / 2)));
}

TEST(AdNorm, Examples) {
  const OperatorSum h = random_bond_chain(6, 1.0, 2);
  const AdNormBound r0 = ad_norm_bound(h, {2, 'Z'}, 0);
  EXPECT_NEAR(r0.computed, 1.0, 1e-14);
  EXPECT_EQ(r0.bound, 1.0);
  const AdNormBound r1 = ad_norm_bound(h, {2, 'Z'}, 1);
  EXPECT_EQ(r1.bound, 8.0);
  // Dense oracle for ||[H, B]||.
  const Eigen::MatrixXcd hd = h.to_dense(), b = oracle::pauli_string("IIZIII");
  const Eigen::MatrixXcd comm = hd * b - b * hd;
  EXPECT_NEAR(r1.computed, Eigen::JacobiSVD<Eigen::MatrixXcd>(comm).singularValues()(0), 1e-10);
  for (int r = 0; r <= 5; ++r) {
    const AdNormBound a = ad_norm_bound(h, {2, 'Z'}, r);
    EXPECT_TRUE(a.holds) << r;
    EXPECT_LE(a.computed, a.bound);
  }
  EXPECT_THROW(ad_norm_bound(h, {2, 'Z'}, 9), PreconditionError);
}
