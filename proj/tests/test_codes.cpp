#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "zerofree/codes.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/spectrum.hpp"
#include "zerofree/zeros.hpp"

using namespace zerofree;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<StabilizerCode> small_codes() {
  return {repetition_code(3), repetition_code(5), toric_code(2), steane_code()};
}

// Tr e^{zH}, the weight used for code Gibbs states, from ED.
cplx ed_z(const OperatorSum& h, cplx z) { return std::exp(partition_exact(diagonalize(h), -z).log()); }

cplx closed(const LogValue& v) { return v.is_zero ? cplx(0.0) : std::exp(v.log()); }

// Pauli strings anticommute iff they differ at an odd number of shared sites.
bool anticommute(const std::string& a, const std::string& b) {
  int clashes = 0;
  for (std::size_t i = 0; i < a.size(); ++i) clashes += a[i] != 'I' && b[i] != 'I' && a[i] != b[i];
  return clashes % 2 == 1;
}

std::array<double, 3> random_bloch(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::array<double, 3> v{g(rng), g(rng), g(rng)};
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::cbrt(u(rng));
  for (double& x : v) x *= r / n;
  return v;
}

// Product state of pure qubits pointing along the unit vectors `bloch`.
Eigen::VectorXcd product_state(const std::vector<std::array<double, 3>>& bloch) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (const auto& r : bloch) {
    const double theta = std::acos(std::clamp(r[2], -1.0, 1.0)), phi = std::atan2(r[1], r[0]);
    Eigen::VectorXcd q(2);
    q << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
    Eigen::VectorXcd next(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) next.segment(2 * i, 2) = psi(i) * q;
    psi = next;
  }
  return psi;
}

}  // namespace

TEST(Closed, RepetitionExample) {
  const LogValue v = stabilizer_partition(repetition_code(3), 0.7);
  EXPECT_NEAR(std::exp(v.log_modulus) / (8 * std::pow(std::cosh(0.7), 2)), 1.0, 1e-14);
  EXPECT_NEAR(std::exp(stabilizer_partition(repetition_code(3), 0.0).log_modulus), 8.0, 1e-13);
  EXPECT_TRUE(stabilizer_partition(steane_code(), cplx(0, kPi / 2)).is_zero);
}

TEST(Closed, MatchesEd) {
  for (const StabilizerCode& c : small_codes()) {
    const OperatorSum h = c.hamiltonian();
    for (cplx z : {cplx(0.3, 0.0), cplx(-0.8, 1.1), cplx(0.2, 2.9), cplx(1.5, -0.4)}) {
      const cplx want = ed_z(h, z);
      EXPECT_LT(std::abs(closed(stabilizer_partition(c, z)) / want - 1.0), 1e-10) << c.name << ' ' << z;
    }
  }
}

TEST(Closed, SignsDoNotChangeZ) {
  StabilizerCode c = steane_code();
  c.signs = {1, 0, 1, 1, 0, 0};
  const cplx z(0.4, 0.7);
  EXPECT_LT(std::abs(closed(stabilizer_partition(c, z)) / ed_z(c.hamiltonian(), z) - 1.0), 1e-10);
}

TEST(Codes, Parameters) {
  const StabilizerCode t = toric_code(2);
  EXPECT_EQ(t.n, 8);
  EXPECT_EQ(t.k, 2);
  EXPECT_EQ(t.m(), 6);
  EXPECT_EQ(t.all_checks().size(), 8U);
  const StabilizerCode s = steane_code();
  EXPECT_EQ(s.m(), 6);
  EXPECT_EQ(s.k, 1);
  EXPECT_EQ(repetition_code(4).m(), 3);
}

TEST(Codes, ChecksCommuteDensely) {
  for (const StabilizerCode& c : small_codes()) {
    const auto all = c.all_checks();
    for (const auto& a : all) {
      for (const auto& b : all) {
        const Eigen::MatrixXcd pa = oracle::pauli_string(a.label()), pb = oracle::pauli_string(b.label());
        ASSERT_LT((pa * pb - pb * pa).cwiseAbs().maxCoeff(), 1e-15) << c.name;
      }
    }
  }
}

TEST(Codes, ValidateRejects) {
  EXPECT_THROW(code_from_json({{"checks", {"XI", "ZI"}}}), PreconditionError);
  EXPECT_THROW(code_from_json({{"checks", {"ZZ", "ZZ"}}}), PreconditionError);
  EXPECT_THROW(code_from_json({{"checks", {"ZZI", "IZZ", "ZIZ"}}}), PreconditionError);
  EXPECT_THROW(code_from_json(nlohmann::json::object()), PreconditionError);
  EXPECT_THROW(code_by_name("surface:3"), PreconditionError);
}

TEST(Codes, JsonRoundTrip) {
  const StabilizerCode c = code_from_json({{"checks", {"ZZI", "IZZ"}}, {"signs", {0, 1}}});
  EXPECT_EQ(c.m(), 2);
  EXPECT_EQ(c.k, 1);
  const StabilizerCode back = code_from_json(code_to_json(toric_code(2)));
  EXPECT_EQ(back.checks, toric_code(2).checks);
  EXPECT_EQ(back.redundant, toric_code(2).redundant);
  EXPECT_EQ(code_to_json(c)["signs"], nlohmann::json({0, 1}));
}

TEST(Zeros, CoshZerosHaveMultiplicityM) {
  for (const StabilizerCode& c : small_codes()) {
    if (c.n > 8) continue;
    const ZeroCount n = count_zeros_rectangle(diagonalize(c.hamiltonian()), {-0.5, 0.5, 1.0, 2.0});
    EXPECT_EQ(n.rounded, c.m()) << c.name;
    EXPECT_LT(std::abs(n.value - c.m()), 1e-2);
  }
}

TEST(Anticommuting, ToricSingleX) {
  const StabilizerCode t = toric_code(2);
  for (int q = 0; q < t.n; ++q) {
    std::string a(8, 'I');
    a[static_cast<std::size_t>(q)] = 'X';
    const auto got = anticommuting_set(t, Monomial::pauli(a));
    std::vector<int> want;
    for (int i = 0; i < t.m(); ++i) {
      if (anticommute(t.checks[static_cast<std::size_t>(i)].label(), a)) want.push_back(i);
    }
    EXPECT_EQ(got, want) << q;
    for (int i : got) EXPECT_EQ(t.checks[static_cast<std::size_t>(i)].letter(q), 'Z');
  }
  // Qubit 0 touches two generator plaquettes.
  EXPECT_EQ(anticommuting_set(t, Monomial::pauli("XIIIIIII")).size(), 2U);
}

TEST(Anticommuting, IdentityAndChecks) {
  const StabilizerCode s = steane_code();
  EXPECT_TRUE(anticommuting_set(s, Monomial::identity(Basis::pauli, 7)).empty());
  for (const auto& c : s.checks) EXPECT_TRUE(anticommuting_set(s, c).empty());
  EXPECT_THROW(anticommuting_set(s, Monomial::pauli("XX")), PreconditionError);
}

TEST(Perturbed, DeltaZeroIsClosedForm) {
  for (int r = 1; r <= 5; ++r) {
    const cplx z(0.6, 0.3);
    EXPECT_LT(std::abs(perturbed_block_sum(r, 0.0, z) / std::pow(2.0 * std::cosh(z), r) - 1.0), 1e-13);
  }
  const StabilizerCode t = toric_code(2);
  const Monomial a = Monomial::pauli("XIIIIIII");
  const cplx z(0.9, -0.2);
  EXPECT_LT(std::abs(closed(perturbed_stabilizer_partition(t, a, 0.0, z)) / closed(stabilizer_partition(t, z)) - 1.0),
            1e-13);
}

TEST(Perturbed, MatchesEd) {
  struct Case {
    StabilizerCode code;
    std::string a;
    std::size_t r;
  };
  const std::vector<Case> cases{{repetition_code(3), "XII", 1}, {repetition_code(3), "IXI", 2},
                                {toric_code(2), "XIIIIIII", 2}, {steane_code(), "IIIIIIY", 6}};
  for (const auto& [code, a, r] : cases) {
    const Monomial pa = Monomial::pauli(a);
    ASSERT_EQ(anticommuting_set(code, pa).size(), r) << code.name << ' ' << a;
    const OperatorSum h = code.hamiltonian() + OperatorSum::from_monomial(pa, 0.1);
    for (cplx z : {cplx(1.0), cplx(0.3, 0.8), cplx(-0.5, 2.0)}) {
      const cplx want = ed_z(h, z);
      EXPECT_LT(std::abs(closed(perturbed_stabilizer_partition(code, pa, 0.1, z)) / want - 1.0), 1e-10)
          << code.name << ' ' << a << ' ' << z;
    }
  }
  // r = 1, z = 1: 2^{|R|+k} cosh(1)^{|R|} * 2 cosh(sqrt(1.01))
  const LogValue v = perturbed_stabilizer_partition(repetition_code(3), Monomial::pauli("XII"), 0.1, 1.0);
  EXPECT_NEAR(std::exp(v.log_modulus), 4 * std::cosh(1.0) * 2 * std::cosh(std::sqrt(1.01)), 1e-12);
}

TEST(Perturbed, ZAtOriginAndErrors) {
  const StabilizerCode s = steane_code();
  for (double d : {0.0, 0.1, 2.0}) {
    EXPECT_NEAR(std::exp(perturbed_stabilizer_partition(s, Monomial::pauli("XIIIIII"), d, 0.0).log_modulus), 128.0,
                1e-10);
  }
  EXPECT_THROW(perturbed_stabilizer_partition(s, Monomial::identity(Basis::pauli, 7), 0.1, 1.0), PreconditionError);
  EXPECT_THROW(perturbed_stabilizer_partition(repetition_code(25), Monomial::pauli(std::string(25, 'X')), 0.1, 1.0),
               PreconditionError);
}

TEST(Perturbed, BlockSpectrumMatchesSum) {
  const Spectrum s = perturbed_block_spectrum(3, 0.2);
  const cplx z(0.4, 0.9);
  // Sum over +-omega of e^{z omega} is twice the cosh sum.
  EXPECT_LT(std::abs(std::exp(partition_exact(s, -z).log()) / perturbed_block_sum(3, 0.2, z) - 2.0), 1e-12);
}

TEST(Perturbed, SmallDeltaStripIsZeroFree) {
  for (int r = 1; r <= 3; ++r) {
    for (double d : {0.01, 0.05, 0.1}) {
      const ZeroCount c = count_zeros_rectangle(perturbed_block_spectrum(r, d), {-5.0, 5.0, -1.0, 1.0});
      EXPECT_EQ(c.rounded, 0) << r << ' ' << d;
    }
  }
}

TEST(Separability, ToricThreshold) {
  const SeparabilityReport rep = separability_bound(toric_code(2));
  EXPECT_EQ(rep.m_total, 8);
  for (const auto& v : rep.v) {
    EXPECT_NEAR(v[0], 0.5, 1e-15);
    EXPECT_EQ(v[1], 0.0);
    EXPECT_NEAR(v[2], 0.5, 1e-15);
  }
  EXPECT_NEAR(rep.bound, 8 / std::sqrt(2.0), 1e-12);
  ASSERT_TRUE(rep.threshold_beta.has_value());
  EXPECT_NEAR(*rep.threshold_beta, std::atanh(1 / std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(*rep.threshold_beta, 0.8813, 1e-4);
}

TEST(Separability, RepetitionHasNoThreshold) {
  const SeparabilityReport rep = separability_bound(repetition_code(3));
  EXPECT_NEAR(rep.bound, 2.0, 1e-15);
  EXPECT_FALSE(rep.threshold_beta.has_value());
  // All spins up reach the maximum energy m.
  EXPECT_NEAR(product_state_energy(repetition_code(3), {{{0, 0, 1}, {0, 0, 1}, {0, 0, 1}}}), 2.0, 1e-15);
}

TEST(Separability, CorollaryFormula) {
  const StabilizerCode s = steane_code();
  const double w = 1 - (2 - std::sqrt(2.0)) / 4 * (1 + 1.0 / 6);
  EXPECT_NEAR(separability_corollary(s), 6 * w, 1e-12);
  EXPECT_LE(separability_bound(s).bound, separability_corollary(s) + 1e-12);
  EXPECT_NEAR(separability_bound(s).bound, 3 * std::sqrt(2.0), 1e-12);
}

TEST(Separability, ProductEnergyMatchesDense) {
  std::mt19937_64 rng(4);
  const StabilizerCode s = steane_code();
  const Eigen::MatrixXcd h = s.full_hamiltonian().to_dense();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::array<double, 3>> bloch;
    for (int a = 0; a < s.n; ++a) {
      auto v = random_bloch(rng);
      const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (double& x : v) x /= n;
      bloch.push_back(v);
    }
    const Eigen::VectorXcd psi = product_state(bloch);
    EXPECT_NEAR(product_state_energy(s, bloch), (psi.adjoint() * h * psi)(0).real(), 1e-12);
  }
}

TEST(Separability, BoundNeverExceeded) {
  std::mt19937_64 rng(11);
  for (const StabilizerCode& c : small_codes()) {
    const double bound = separability_bound(c).bound;
    double worst = -1e9;
    for (int trial = 0; trial < 10000; ++trial) {
      std::vector<std::array<double, 3>> bloch;
      for (int a = 0; a < c.n; ++a) bloch.push_back(random_bloch(rng));
      worst = std::max(worst, product_state_energy(c, bloch));
    }
    EXPECT_LE(worst, bound + 1e-12) << c.name;
  }
}

TEST(Gibbs, EnergyIdentity) {
  for (const StabilizerCode& c : small_codes()) {
    const OperatorSum h = c.hamiltonian();
    for (double beta : {0.1, 0.5, 2.0}) {
      const double want = c.m() * std::tanh(beta);
      EXPECT_LT(std::abs(observable_exact(h.scaled(-1.0), h, beta) / want - 1.0), 1e-10) << c.name;
    }
  }
}
