// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "distmimo/combining.hpp"

using namespace distmimo;

namespace {

SimSetup ideal_setup(int M, int K, double snr = 1.0) {
    SimSetup s;
    s.channel.kind = FadingKind::IidRayleigh;
    s.channel.M = M;
    s.channel.K = K;
    s.channel.ue_snrs.assign(K, snr);
    s.frontend.kind = "identity";
    s.kappa = 1.0;
    s.mc_samples = 10000;
    return s;
}

}  // namespace

TEST_CASE("realizations are deterministic in the seed") {
    SimSetup s = ideal_setup(6, 2);
    s.frontend.kind = "quantizer";
    s.frontend.bits = 3;
    const FrontEnd fe = s.frontend.build(6, s.channel.antenna_power());
    const auto a = make_realization(s, fe, 777);
    const auto b = make_realization(s, fe, 777);
    const auto c = make_realization(s, fe, 778);
    CHECK((a.ch.H - b.ch.H).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.bd.C_etaeta - b.bd.C_etaeta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.ch.H - c.ch.H).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("ideal single-antenna ergodic SE matches the quadrature value") {
    // E{log2(1 + |h|^2)} at 0 dB for |h|^2 ~ Exp(1) is 0.86035, computed
    // by independent numerical integration of exp(-x) log2(1+x).
    SimSetup s = ideal_setup(1, 1);
    const auto est = ergodic_se(s, Scheme::Mr, 20000, 4242);
    CHECK(est.std_error(0) < 0.01);
    CHECK(std::abs(est.mean(0) - 0.86035) < 4.0 * est.std_error(0) + 1e-3);
}

TEST_CASE("ergodic SE grows with the array gain") {
    SimSetup s8 = ideal_setup(8, 1);
    SimSetup s64 = ideal_setup(64, 1);
    const auto e8 = ergodic_se(s8, Scheme::Mr, 300, 5);
    const auto e64 = ergodic_se(s64, Scheme::Mr, 300, 5);
    CHECK(e64.mean(0) > e8.mean(0) + 2.5);  // ~3 bit from 8x more antennas
}

TEST_CASE("neglecting distortion correlation never hurts the reported SE") {
    SimSetup s = ideal_setup(16, 2);
    s.frontend.kind = "composite";
    s.frontend.alpha = 1.0 / 3.0;
    s.frontend.b_off_db = 7.0;
    s.frontend.bits = 4;
    s.kappa = 0.99;
    const FrontEnd fe = s.frontend.build(16, s.channel.antenna_power());
    for (Scheme scheme : {Scheme::DaMr, Scheme::DaMmse}) {
        double gap = 0.0;
        for (int r = 0; r < 20; ++r) {
            const auto real = make_realization(s, fe, substream_seed(99, r));
            const auto corr = realization_sinr(real, s, scheme, false);
            const auto uncorr = realization_sinr(real, s, scheme, true);
            for (int k = 0; k < 2; ++k)
                gap += std::log2(1.0 + uncorr[k].sinr) - std::log2(1.0 + corr[k].sinr);
        }
        CHECK(gap >= 0.0);  // paired samples, systematic overestimate
    }
}

TEST_CASE("LS estimation through an ideal front-end recovers the channel") {
    SimSetup s = ideal_setup(8, 3);
    s.channel.sigma2 = 1e-12;
    const FrontEnd fe = s.frontend.build(8, s.channel.antenna_power());
    const auto real = make_realization(s, fe, 31337);
    Rng prng(1);
    const CMat hhat = estimate_channel_ls(real, s, fe, prng);
    CHECK((hhat - real.ch.H).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("LS estimation through a distorting front-end tracks D H") {
    // High per-UE SNR makes the pilot noise negligible next to the
    // distortion, which is scale-free.
    SimSetup s = ideal_setup(16, 4, 1e8);
    s.frontend.kind = "third-order";
    s.frontend.alpha = 1.0 / 3.0;
    s.frontend.b_off_db = 7.0;
    const FrontEnd fe = s.frontend.build(16, s.channel.antenna_power());
    double err_eff = 0.0, err_raw = 0.0;
    for (int r = 0; r < 50; ++r) {
        const auto real = make_realization(s, fe, substream_seed(31338, r));
        Rng prng(r);
        const CMat hhat = estimate_channel_ls(real, s, fe, prng);
        const CMat eff = real.bd.d.asDiagonal() * real.ch.H;
        err_eff += (hhat - eff).norm();
        err_raw += (hhat - real.ch.H).norm();
    }
    // The estimate sits markedly closer to the effective channel D H than
    // to H; the residual is the pilot-projected distortion.
    CHECK(err_eff < 0.7 * err_raw);
}

TEST_CASE("averaged SINR runs for mr/da-mr and rejects other schemes") {
    SimSetup s = ideal_setup(8, 2, 0.1);
    s.frontend.kind = "third-order";
    s.kappa = 0.99;
    const Vec perfect = averaged_sinr(s, Scheme::DaMr, 50, 7, false, false);
    const Vec imperfect = averaged_sinr(s, Scheme::DaMr, 50, 7, false, true);
    for (int k = 0; k < 2; ++k) {
        CHECK(perfect(k) > 0.0);
        CHECK(imperfect(k) > 0.0);
        // Imperfect CSI cannot beat perfect CSI on average at low SNR.
        CHECK(imperfect(k) < perfect(k) * 1.05);
    }
    CHECK_THROWS_AS(averaged_sinr(s, Scheme::DaMmse, 10, 7, false, false),
                    std::invalid_argument);
}

TEST_CASE("ergodic SE estimates come with sane standard errors") {
    SimSetup s = ideal_setup(4, 2);
    const auto est = ergodic_se(s, Scheme::DaMmse, 200, 11);
    REQUIRE(est.mean.size() == 2);
    REQUIRE(est.std_error.size() == 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(est.mean(k) > 0.0);
        CHECK(est.std_error(k) > 0.0);
        CHECK(est.std_error(k) < est.mean(k));
    }
    CHECK_THROWS_AS(ergodic_se(s, Scheme::Mr, 0, 1), std::invalid_argument);
}
