// SPDX-License-Identifier: Apache-2.0

#include "distmimo/analysis.hpp"

#include <cmath>

namespace distmimo {

void ClosedFormInputs::validate() const {
    if (M < 1 || K < 1)
        throw std::invalid_argument("closed form: M and K must be >= 1");
    if (alpha <= 0.0 || alpha > 1.0 / 3.0)
        throw std::invalid_argument("closed form: alpha must be in (0, 1/3]");
    if (b_off < 1.0)
        throw std::invalid_argument("closed form: back-off must be >= 1");
    if (kappa < 0.0 || kappa > 1.0)
        throw std::invalid_argument("closed form: kappa must be in [0, 1]");
    if (p <= 0.0 || sigma2 <= 0.0)
        throw std::invalid_argument("closed form: p and sigma2 must be > 0");
}

double bs_distortion_mr_corr(const ClosedFormInputs& in) {
    in.validate();
    const double K = in.K, M = in.M;
    const double c = 2.0 * in.alpha * in.alpha * in.p / (in.b_off * in.b_off);
    return c * (K + 6.0 + 9.0 / K + 4.0 / (K * K) + 2.0 * M * (K + 1.0) / (K * K));
}

double bs_distortion_mr_uncorr(const ClosedFormInputs& in) {
    in.validate();
    const double K = in.K;
    const double c = 2.0 * in.alpha * in.alpha * in.p / (in.b_off * in.b_off);
    return c * (K + 6.0 + 11.0 / K + 6.0 / (K * K));
}

double distortion_ratio(int M, int K) {
    if (M < 1 || K < 1)
        throw std::invalid_argument("distortion ratio: M and K must be >= 1");
    return 1.0 + 2.0 * (M - 1.0) / ((K + 2.0) * (K + 3.0));
}

double ue_distortion_mr(const ClosedFormInputs& in) {
    in.validate();
    const double K = in.K, M = in.M;
    const double r = in.alpha / in.b_off;
    return (M + 1.0) - 4.0 * r * (M * K + K + M + 3.0) / K +
           4.0 * r * r *
               (M * K * K + 8.0 * K + 11.0 + 2.0 * M * K + K * K + M) / (K * K);
}

double asymptotic_se_gap(double kappa) {
    if (kappa <= 0.0 || kappa >= 1.0)
        throw std::invalid_argument("asymptotic gap: kappa must be in (0, 1)");
    return std::log2(1.0 / (1.0 - 0.5 * kappa));
}

double moment_oracle(int p) {
    if (p < 1) throw std::invalid_argument("moment oracle: p must be >= 1");
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return f;
}

}  // namespace distmimo
