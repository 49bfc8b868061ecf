// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "distmimo/analysis.hpp"
#include "distmimo/bussgang.hpp"

using namespace distmimo;

namespace {

ClosedFormInputs inputs(int M, int K) {
    ClosedFormInputs in;
    in.M = M;
    in.K = K;
    in.alpha = 1.0 / 3.0;
    in.b_off = std::pow(10.0, 0.7);
    in.p = 1.0;
    in.sigma2 = 1.0;
    in.kappa = 0.99;
    return in;
}

double to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace

TEST_CASE("corr/uncorr ratio closed form hits the quoted dB values") {
    CHECK(std::abs(to_db(distortion_ratio(200, 1)) - 15.34) < 0.05);
    CHECK(std::abs(to_db(distortion_ratio(200, 10)) - 5.50) < 0.05);
    CHECK(distortion_ratio(1, 5) == 1.0);
    CHECK_THROWS_AS(distortion_ratio(0, 1), std::invalid_argument);
}

TEST_CASE("ratio equals the quotient of the two distortion expressions") {
    for (int M : {1, 10, 200}) {
        for (int K : {1, 2, 5, 17}) {
            const ClosedFormInputs in = inputs(M, K);
            const double q = bs_distortion_mr_corr(in) / bs_distortion_mr_uncorr(in);
            CHECK(q == doctest::Approx(distortion_ratio(M, K)).epsilon(1e-12));
        }
    }
}

TEST_CASE("BS distortion closed forms match channel monte-carlo") {
    // Average h_k^H C_etaeta h_k / E{||h_k||^2} over i.i.d. Rayleigh draws
    // with the third-order closed-form C_etaeta per realization.
    const int M = 10, K = 2, n = 4000;
    const ClosedFormInputs in = inputs(M, K);
    Rng rng(51);
    double corr_acc = 0.0, uncorr_acc = 0.0;
    for (int r = 0; r < n; ++r) {
        const CMat h = rng.cgauss_matrix(M, K);
        const CMat c_uu = in.p * h * h.adjoint();
        const Vec a = third_order_coefficients(in.alpha, in.b_off,
                                               Vec::Constant(M, in.p * K));
        const auto bd = bussgang_third_order(c_uu, a);
        const auto diag = neglect_correlation(bd);
        corr_acc += (h.col(0).adjoint() * bd.C_etaeta * h.col(0))(0, 0).real();
        uncorr_acc += (h.col(0).adjoint() * diag.C_etaeta * h.col(0))(0, 0).real();
    }
    const double norm = double(n) * M;  // E{||h_k||^2} = M
    CHECK(std::abs(corr_acc / norm - bs_distortion_mr_corr(in)) <
          0.05 * bs_distortion_mr_corr(in));
    CHECK(std::abs(uncorr_acc / norm - bs_distortion_mr_uncorr(in)) <
          0.05 * bs_distortion_mr_uncorr(in));
}

TEST_CASE("UE distortion channel gain matches channel monte-carlo") {
    const int M = 10, K = 2, n = 20000;
    const ClosedFormInputs in = inputs(M, K);
    Rng rng(52);
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
        const CMat h = rng.cgauss_matrix(M, K);
        const Vec a = third_order_coefficients(in.alpha, in.b_off,
                                               Vec::Constant(M, in.p * K));
        CVec dh(M);
        for (int m = 0; m < M; ++m) {
            const double rho = in.p * h.row(m).squaredNorm();
            dh(m) = (1.0 - 2.0 * a(m) * rho) * h(m, 0);
        }
        acc += std::norm(h.col(0).dot(dh));
    }
    const double got = acc / (double(n) * M);
    const double want = ue_distortion_mr(in);
    CHECK(std::abs(got - want) < 0.05 * want);
}

TEST_CASE("asymptotic SE gap value and bound") {
    CHECK(std::abs(asymptotic_se_gap(0.99) - 0.9856) < 1e-4);
    for (int i = 1; i <= 99; ++i) {
        const double kappa = i / 100.0;
        const double gap = asymptotic_se_gap(kappa);
        CHECK(gap > 0.0);
        CHECK(gap < 1.0);
    }
    CHECK_THROWS_AS(asymptotic_se_gap(0.0), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_se_gap(1.0), std::invalid_argument);
}

TEST_CASE("gaussian moment oracle is p! and matches sampling") {
    CHECK(moment_oracle(1) == 1.0);
    CHECK(moment_oracle(2) == 2.0);
    CHECK(moment_oracle(3) == 6.0);
    CHECK(moment_oracle(4) == 24.0);
    Rng rng(53);
    const int n = 1000000;
    double m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = std::norm(rng.cgauss());
        m2 += g;
        m4 += g * g;
    }
    CHECK(std::abs(m2 / n - 1.0) < 0.01);
    CHECK(std::abs(m4 / n - 2.0) < 0.05);
}

TEST_CASE("closed-form input validation") {
    ClosedFormInputs in = inputs(10, 2);
    in.alpha = 0.5;
    CHECK_THROWS_AS(in.validate(), std::invalid_argument);
    in = inputs(10, 2);
    in.b_off = 0.5;
    CHECK_THROWS_AS(in.validate(), std::invalid_argument);
    in = inputs(10, 2);
    in.kappa = 1.5;
    CHECK_THROWS_AS(in.validate(), std::invalid_argument);
}
