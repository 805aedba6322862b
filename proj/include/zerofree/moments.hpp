#pragma once

#include <vector>

#include "zerofree/operator_sum.hpp"
#include "zerofree/power_series.hpp"
#include "zerofree/spectrum.hpp"

namespace zerofree {

enum class MomentBackend { symbolic, spectral, automatic };

/// Default cap on monomial products for the symbolic backend.
constexpr double kDefaultWorkCap = 1e9;

/// Tr(H^r)/dim for r = 0..K.
///
/// symbolic: builds P_j = H^j for j <= ceil(K/2) by merging monomial
/// products and pairs them, Tr(P_a P_b)/dim = sum_m P_a[m] P_b[m] (m^2),
/// so only half the powers are expanded. Throws PreconditionError once the
/// number of monomial products would pass `work_cap`.
/// spectral: diagonalizes and sums E^r with compensated summation.
/// automatic: spectral when the dense dimension fits, symbolic otherwise.
std::vector<double> moments(const OperatorSum& h, int K, MomentBackend backend = MomentBackend::automatic,
                            double work_cap = kDefaultWorkCap);
std::vector<double> spectral_moments(const Spectrum& s, int K);

/// Maclaurin series of log Z(t), Z(t) = Tr e^{-tH}, through order K from
/// mu_r = Tr(H^r)/dim: a_0 = dim_log, and with m_r = (-1)^r mu_r / r!,
/// a_r = m_r - sum_{i<r} (i/r) a_i m_{r-i} (the cumulant recurrence for
/// kappa_r = r! a_r written in scaled form). Requires mu[0] = 1.
PowerSeries moments_to_cumulants(const std::vector<double>& mu, int K, double dim_log);

}  // namespace zerofree
