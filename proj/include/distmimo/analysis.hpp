// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "distmimo/common.hpp"

namespace distmimo {

/// Parameters of the closed-form distortion expressions, which hold for
/// i.i.d. Rayleigh fading with equal SNRs. All values are linear units.
struct ClosedFormInputs {
    int M = 1;
    int K = 1;
    double alpha = 1.0 / 3.0;
    double b_off = 1.0;  // linear back-off >= 1
    double p = 1.0;
    double sigma2 = 1.0;
    double kappa = 1.0;

    void validate() const;
};

/// Normalized BS distortion power E{h^H C_etaeta h} / E{||h||^2} under MR
/// combining, with the distortion correlation accounted for.
double bs_distortion_mr_corr(const ClosedFormInputs& in);

/// Same quantity when the correlation is neglected (diagonal C_etaeta);
/// independent of M.
double bs_distortion_mr_uncorr(const ClosedFormInputs& in);

/// Ratio corr/uncorr = 1 + 2(M-1)/((K+2)(K+3)); always >= 1 and
/// independent of the non-linearity parameters.
double distortion_ratio(int M, int K);

/// Normalized UE-distortion channel gain E{|h^H D h|^2} / E{||h||^2}.
double ue_distortion_mr(const ClosedFormInputs& in);

/// Large-M bound on the SE overestimation from neglecting BS distortion
/// when it equals the UE distortion: log2(1 / (1 - kappa/2)); < 1.
double asymptotic_se_gap(double kappa);

/// E{|h|^{2p}} = p! for unit-variance complex Gaussian h.
double moment_oracle(int p);

}  // namespace distmimo
