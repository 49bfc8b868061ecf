// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "distmimo/common.hpp"

namespace distmimo {

enum class FadingKind { IidRayleigh, CorrelatedRayleigh, FreeSpaceUla };

FadingKind fading_kind_from_string(const std::string& s);
std::string to_string(FadingKind k);

/// Uplink channel description for K single-antenna users and an M-antenna
/// receiver. Pathloss and power control are folded into the per-user SNRs:
/// columns of H are scaled so that E{||h_k||^2} = M * snr_k * sigma2 / p.
struct ChannelModel {
    FadingKind kind = FadingKind::IidRayleigh;
    int M = 1;
    int K = 1;
    double angular_std_deg = 10.0;      // correlated-rayleigh only
    double antenna_spacing = 0.5;       // wavelengths, ULA models
    std::vector<double> ue_angles_deg;  // ULA models, within [-60, 60]
    std::vector<double> ue_snrs;        // linear p_k/sigma2 per UE
    double p = 1.0;                     // transmit power
    double sigma2 = 1.0;                // noise power

    void validate() const;

    /// Per-column entry variance beta_k = snr_k * sigma2 / p.
    double column_scale(int k) const { return ue_snrs.at(k) * sigma2 / p; }

    /// E{||h_k||^2} = M * beta_k.
    double channel_gain(int k) const { return M * column_scale(k); }

    /// Statistical per-antenna receive power E{|u_m|^2} = p * sum_k beta_k
    /// (equal across antennas for all three fading models).
    double antenna_power() const;
};

struct ChannelRealization {
    CMat H;  // M x K, column k = h_k
    ChannelModel model;
};

/// Local scattering correlation matrix for a uniform linear array with a
/// Gaussian angular density (nominal angle, angular std in degrees).
/// Evaluated by Gauss-Hermite quadrature; trace is exactly M.
CMat spatial_correlation_matrix(int M, double nominal_angle_deg,
                                double angular_std_deg, double spacing);

ChannelRealization draw_channel(const ChannelModel& model, Rng& rng);

/// C_uu = p * H * H^H.
CMat signal_correlation(const ChannelRealization& ch, double p);

/// Pilot matrix with entries exp(-2*pi*j*k*t/K); Phi * Phi^H = K * I.
CMat dft_pilot_matrix(int K);

/// Least-squares channel estimate Hhat = Y * Phi^H / (sqrt(p) * K).
/// Rejects a pilot matrix that is not square or not orthogonal
/// (Phi * Phi^H != K * I).
CMat ls_estimate(const CMat& pilot_observations, const CMat& pilot_matrix, double p);

}  // namespace distmimo
