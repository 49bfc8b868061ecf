// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "distmimo/bussgang.hpp"

using namespace distmimo;

namespace {

CMat random_cuu(int m, int k, Rng& rng, double p = 1.0) {
    const CMat h = rng.cgauss_matrix(m, k);
    return p * h * h.adjoint();
}

void check_consistency(const BussgangDecomposition& bd) {
    const CMat rebuilt =
        CMat(bd.d.asDiagonal()) * bd.C_uu * CMat(bd.d.conjugate().asDiagonal()) +
        bd.C_etaeta;
    CHECK((bd.C_zz - rebuilt).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, bd.C_zz.cwiseAbs().maxCoeff()));
    CHECK(hermitian_deviation(bd.C_etaeta) < 1e-9);
    Eigen::SelfAdjointEigenSolver<CMat> es(bd.C_etaeta);
    CHECK(es.eigenvalues().minCoeff() >
          -1e-8 * std::max(1.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

TEST_CASE("identity decomposition is gain one with zero distortion") {
    Rng rng(31);
    const CMat c = random_cuu(4, 2, rng);
    const auto bd = bussgang_identity(c);
    CHECK((bd.d - CVec::Ones(4)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bd.C_etaeta.cwiseAbs().maxCoeff() == 0.0);
    CHECK((bd.C_zz - c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("third-order closed form matches its definition") {
    Rng rng(32);
    const CMat c = random_cuu(3, 2, rng);
    Vec a(3);
    a << 0.02, 0.05, 0.01;
    const auto bd = bussgang_third_order(c, a);
    for (int i = 0; i < 3; ++i)
        CHECK(bd.d(i) == Cx(1.0 - 2.0 * a(i) * c(i, i).real(), 0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Cx want = 2.0 * a(i) * a(j) * std::norm(c(i, j)) * c(i, j);
            CHECK(std::abs(bd.C_etaeta(i, j) - want) < 1e-14);
        }
    check_consistency(bd);
}

TEST_CASE("third-order closed form agrees with monte-carlo within 5 SE") {
    Rng rng(33);
    const CMat c = random_cuu(4, 2, rng);
    const Vec a = third_order_coefficients(1.0 / 3.0, 5.0, c.diagonal().real());
    const auto exact = bussgang_third_order(c, a);
    Rng mc_rng(34);
    const auto mc =
        bussgang_monte_carlo(FrontEnd::third_order(a), c, 200000, mc_rng, true);
    CHECK((mc.d - exact.d).cwiseAbs().maxCoeff() < 5e-3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double se = std::max(mc.se_etaeta(i, j), 1e-12);
            CHECK(std::abs(mc.C_etaeta(i, j) - exact.C_etaeta(i, j)) < 5.0 * se);
        }
    check_consistency(mc);
}

TEST_CASE("distortion is uncorrelated with the input for every front-end") {
    Rng rng(35);
    const CMat c = random_cuu(4, 2, rng);
    const Vec a = third_order_coefficients(1.0 / 3.0, 5.0, c.diagonal().real());
    std::vector<FrontEnd> fes = {
        FrontEnd::third_order(a), FrontEnd::quantizer(lloyd_quantizer(3)),
        FrontEnd::composite(a, lloyd_quantizer(3))};
    for (const auto& fe : fes) {
        Rng mc_rng(36);
        const auto bd = bussgang_monte_carlo(fe, c, 100000, mc_rng, true);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double se = std::max(bd.se_etau(i, j), 1e-12);
                CHECK(std::abs(bd.cross_etau(i, j)) < 4.0 * se);
            }
        check_consistency(bd);
    }
}

TEST_CASE("cubic correlation law for third-order distortion") {
    Rng rng(37);
    const CMat c = random_cuu(5, 3, rng);
    const Vec a = third_order_coefficients(0.2, 4.0, c.diagonal().real());
    const auto bd = bussgang_third_order(c, a);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (i == j) continue;
            const Cx xi_u = correlation_coeff(c, i, j);
            const Cx xi_eta = correlation_coeff(bd.C_etaeta, i, j);
            CHECK(std::abs(xi_eta - std::norm(xi_u) * xi_u) < 1e-10);
            // Distortion is less correlated than the signal.
            CHECK(std::abs(xi_eta) <= std::abs(xi_u) + 1e-12);
        }
}

TEST_CASE("monte-carlo decomposition is deterministic given the stream") {
    Rng rng_a(38), rng_b(38);
    const CMat c = random_cuu(3, 2, rng_a);
    const CMat c2 = random_cuu(3, 2, rng_b);
    const FrontEnd fe = FrontEnd::quantizer(lloyd_quantizer(2));
    Rng mc_a(39), mc_b(39);
    const auto bd_a = bussgang_monte_carlo(fe, c, 20000, mc_a, false);
    const auto bd_b = bussgang_monte_carlo(fe, c2, 20000, mc_b, false);
    CHECK((bd_a.d - bd_b.d).cwiseAbs().maxCoeff() == 0.0);
    CHECK((bd_a.C_etaeta - bd_b.C_etaeta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("monte-carlo rejects tiny sample budgets") {
    Rng rng(40);
    const CMat c = random_cuu(2, 1, rng);
    Rng mc(41);
    CHECK_THROWS_AS(
        bussgang_monte_carlo(FrontEnd::quantizer(lloyd_quantizer(1)), c, 100, mc),
        std::invalid_argument);
}

TEST_CASE("quantizer monte-carlo diagonal matches the closed form") {
    Rng rng(42);
    const CMat c = random_cuu(3, 2, rng);
    const Quantizer q = lloyd_quantizer(3);
    Rng mc_rng(43);
    const auto bd = bussgang_monte_carlo(FrontEnd::quantizer(q), c, 200000, mc_rng);
    for (int m = 0; m < 3; ++m) {
        const auto [d_want, czz_want] = quantizer_bussgang_diag(q, c(m, m).real());
        CHECK(std::abs(bd.d(m) - d_want) < 5e-3);
        CHECK(std::abs(bd.C_zz(m, m).real() - czz_want) < 0.02 * czz_want);
    }
}

TEST_CASE("neglecting correlation keeps the diagonal and drops the rest") {
    Rng rng(44);
    const CMat c = random_cuu(4, 2, rng);
    const Vec a = third_order_coefficients(1.0 / 3.0, 5.0, c.diagonal().real());
    const auto bd = bussgang_third_order(c, a);
    const auto diag = neglect_correlation(bd);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j)
                CHECK(diag.C_etaeta(i, i) == bd.C_etaeta(i, i));
            else
                CHECK(diag.C_etaeta(i, j) == Cx(0.0, 0.0));
        }
    check_consistency(diag);
}

TEST_CASE("correlation coefficient rejects a zero diagonal") {
    CMat c = CMat::Zero(2, 2);
    CHECK_THROWS_AS(correlation_coeff(c, 0, 1), std::invalid_argument);
}
