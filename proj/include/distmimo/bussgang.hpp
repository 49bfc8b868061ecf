// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "distmimo/common.hpp"
#include "distmimo/frontend.hpp"

namespace distmimo {

/// Bussgang linearization z = D u + eta of a per-antenna front-end for a
/// Gaussian input with correlation C_uu: diagonal gain D, distortion
/// correlation C_etaeta, output correlation C_zz = D C_uu D^H + C_etaeta.
/// Monte-Carlo estimates additionally carry per-entry standard errors and
/// the residual cross-correlation E{eta u^H} (zero in expectation).
struct BussgangDecomposition {
    CVec d;
    CMat C_etaeta;
    CMat C_zz;
    CMat C_uu;
    Mat se_etaeta;   // standard error of |[C_etaeta]_ij| (MC only, else empty)
    CMat cross_etau; // MC estimate of E{eta u^H} (MC only, else empty)
    Mat se_etau;     // standard error of |[cross_etau]_ij| (MC only)
};

/// D = I, C_etaeta = 0.
BussgangDecomposition bussgang_identity(const CMat& c_uu);

/// Closed form for the third-order non-linearity:
/// d_m = 1 - 2 a_m rho_mm, [C_etaeta]_ij = 2 a_i a_j |rho_ij|^2 rho_ij.
BussgangDecomposition bussgang_third_order(const CMat& c_uu, const Vec& a);

/// Monte-Carlo estimate for an arbitrary front-end. Draws n_samples input
/// vectors through a PSD factor of C_uu, estimates d from E{g(u_m) u_m^*},
/// and accumulates the distortion residual eta = z - D u directly, which
/// keeps the estimator noise at the distortion scale rather than the
/// signal scale. C_zz is reconstructed as D C_uu D^H + C_etaeta.
/// with_errors controls whether per-entry standard errors and the
/// eta-u cross-correlation are tracked (three times the cost when on).
BussgangDecomposition bussgang_monte_carlo(const FrontEnd& fe, const CMat& c_uu,
                                           std::int64_t n_samples, Rng& rng,
                                           bool with_errors = true);

/// Closed form or Monte-Carlo depending on the front-end kind.
BussgangDecomposition bussgang_decompose(const FrontEnd& fe, const CMat& c_uu,
                                         std::int64_t mc_samples, Rng& rng,
                                         bool with_errors = false);

/// xi = C_ij / sqrt(C_ii * C_jj). Rejects a zero diagonal.
Cx correlation_coeff(const CMat& c, Eigen::Index i, Eigen::Index j);

/// Replaces C_etaeta (and C_zz accordingly) by its diagonal, i.e. the
/// uncorrelated-distortion approximation.
BussgangDecomposition neglect_correlation(const BussgangDecomposition& bd);

}  // namespace distmimo
