// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>

#include "distmimo/common.hpp"

namespace distmimo {

/// Scalar quantizer designed for a unit-variance real Gaussian input.
/// levels holds the L = 2^b reconstruction points in increasing order;
/// thresholds holds the L-1 finite decision boundaries (the outer ones are
/// -inf/+inf by convention). Per-antenna operation scales both by
/// sqrt(rho_mm / 2) so the quantizer stays matched to the input variance.
struct Quantizer {
    int bits = 0;
    Vec levels;
    Vec thresholds;
};

/// Quasi-memoryless per-antenna receiver front-end.
struct FrontEnd {
    enum class Kind { Identity, ThirdOrder, Quantizer, Composite };
    Kind kind = Kind::Identity;
    Vec a;        // third-order coefficients, per antenna (ThirdOrder/Composite)
    Quantizer q;  // Quantizer/Composite

    static FrontEnd identity() { return FrontEnd{}; }
    static FrontEnd third_order(Vec a_coeffs);
    static FrontEnd quantizer(Quantizer q);
    static FrontEnd composite(Vec a_coeffs, Quantizer q);

    /// True when the Bussgang decomposition has a closed form.
    bool closed_form() const {
        return kind == Kind::Identity || kind == Kind::ThirdOrder;
    }
};

/// z_m = u_m - a_m * |u_m|^2 * u_m, element-wise per antenna (rows of u are
/// antennas, columns are samples).
CMat third_order_apply(const CMat& u, const Vec& a);

/// a_m = alpha / (b_off * E{|u_m|^2}).
Vec third_order_coefficients(double alpha, double b_off, const Vec& avg_powers);

/// MSE-optimal scalar quantizer for a unit-variance real Gaussian source,
/// by Lloyd iteration (levels initialized at Gaussian quantiles, stop when
/// the max level movement is below 1e-10 or after 1e4 iterations).
Quantizer lloyd_quantizer(int bits);

/// Expected distortion E{(x - Q(x))^2} of a quantizer on a unit-variance
/// real Gaussian, in closed form.
double quantizer_mse(const Quantizer& q);

/// Quantizes real and imaginary parts independently; levels and thresholds
/// of row m are scaled by sqrt(rho(m) / 2).
CMat quantizer_apply(const CMat& u, const Quantizer& q, const Vec& rho);

/// Closed-form Bussgang gain d_m and output power [C_zz]_mm of the scaled
/// quantizer for per-antenna input power rho.
std::pair<double, double> quantizer_bussgang_diag(const Quantizer& q, double rho);

/// Applies the front-end sample-wise. rho gives the per-antenna input
/// powers used for quantizer gain control; ignored by the other kinds.
CMat frontend_apply(const FrontEnd& fe, const CMat& u, const Vec& rho);

/// Levels/thresholds as a JSON string ({"bits":..,"levels":[..],"thresholds":[..]}).
std::string quantizer_to_json(const Quantizer& q);

}  // namespace distmimo
