// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "distmimo/combining.hpp"

namespace distmimo {

Realization make_realization(const SimSetup& setup, const FrontEnd& fe,
                             std::uint64_t realization_seed) {
    Rng rng(realization_seed);
    Realization r;
    r.ch = draw_channel(setup.channel, rng);
    const CMat c_uu = signal_correlation(r.ch, setup.channel.p);
    r.bd = bussgang_decompose(fe, c_uu, setup.mc_samples, rng, false);
    return r;
}

std::vector<SinrBreakdown> realization_sinr(const Realization& r, const SimSetup& setup,
                                            Scheme scheme, bool uncorr) {
    const ChannelModel& ch = setup.channel;
    CombinerInputs in;
    in.H = r.ch.H;
    in.d = r.bd.d;
    in.C_etaeta = uncorr ? CMat(r.bd.C_etaeta.diagonal().asDiagonal()) : r.bd.C_etaeta;
    in.p = ch.p;
    in.sigma2 = ch.sigma2;
    in.channel_gain.resize(ch.K);
    for (int k = 0; k < ch.K; ++k) in.channel_gain(k) = ch.channel_gain(k);

    const CombinerSet cs = build_combiner(scheme, in);
    std::vector<SinrBreakdown> out(ch.K);
    for (int k = 0; k < ch.K; ++k)
        out[k] = sinr(cs.V.col(k), k, in.H, in.d, in.C_etaeta, in.p, in.sigma2,
                      setup.kappa);
    return out;
}

UeEstimate ergodic_se(const SimSetup& setup, Scheme scheme, int n_realizations,
                      std::uint64_t seed, bool uncorr) {
    if (n_realizations < 1)
        throw std::invalid_argument("ergodic se: need at least one realization");
    const int K = setup.channel.K;
    const FrontEnd fe = setup.frontend.build(setup.channel.M, setup.channel.antenna_power());
    Vec sum = Vec::Zero(K), sum_sq = Vec::Zero(K);
    for (int r = 0; r < n_realizations; ++r) {
        const Realization real = make_realization(setup, fe, substream_seed(seed, r));
        const auto breakdowns = realization_sinr(real, setup, scheme, uncorr);
        for (int k = 0; k < K; ++k) {
            const double se = std::log2(1.0 + breakdowns[k].sinr);
            sum(k) += se;
            sum_sq(k) += se * se;
        }
    }
    UeEstimate est;
    est.mean = sum / n_realizations;
    est.std_error.resize(K);
    for (int k = 0; k < K; ++k) {
        const double var =
            std::max(sum_sq(k) / n_realizations - est.mean(k) * est.mean(k), 0.0);
        est.std_error(k) = std::sqrt(var / n_realizations);
    }
    return est;
}

CMat estimate_channel_ls(const Realization& r, const SimSetup& setup,
                         const FrontEnd& fe, Rng& rng) {
    const ChannelModel& ch = setup.channel;
    const CMat phi = dft_pilot_matrix(ch.K);
    // Pilots are distorted like data; the ADC gain control keeps the
    // operating point set for the data statistics.
    const CMat u_pilot = std::sqrt(ch.p) * r.ch.H * phi;
    const Vec rho = r.bd.C_uu.diagonal().real();
    CMat y = frontend_apply(fe, u_pilot, rho);
    const double noise_scale = std::sqrt(ch.sigma2);
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, j) += noise_scale * rng.cgauss();
    return ls_estimate(y, phi, ch.p);
}

Vec averaged_sinr(const SimSetup& setup, Scheme scheme, int n_realizations,
                  std::uint64_t seed, bool uncorr, bool imperfect_csi) {
    if (scheme != Scheme::Mr && scheme != Scheme::DaMr)
        throw std::invalid_argument("averaged sinr: only mr and da-mr are supported");
    const ChannelModel& ch = setup.channel;
    const int K = ch.K;
    const FrontEnd fe = setup.frontend.build(ch.M, ch.antenna_power());
    Vec num = Vec::Zero(K), den = Vec::Zero(K);
    for (int r = 0; r < n_realizations; ++r) {
        const std::uint64_t rseed = substream_seed(seed, r);
        const Realization real = make_realization(setup, fe, rseed);
        const CMat c_eta = uncorr ? CMat(real.bd.C_etaeta.diagonal().asDiagonal())
                                  : real.bd.C_etaeta;

        CombinerInputs in;
        in.p = ch.p;
        in.sigma2 = ch.sigma2;
        in.C_etaeta = c_eta;
        in.channel_gain.resize(K);
        for (int k = 0; k < K; ++k) in.channel_gain(k) = ch.channel_gain(k);
        if (imperfect_csi) {
            // The LS estimate sees the effective channel D h_k, so the
            // combiner treats it as such with no separate gain knowledge.
            Rng pilot_rng(substream_seed(rseed, 0x70697363ULL));
            in.H = estimate_channel_ls(real, setup, fe, pilot_rng);
            in.d = CVec::Ones(ch.M);
        } else {
            in.H = real.ch.H;
            in.d = real.bd.d;
        }
        const CombinerSet cs = build_combiner(scheme, in);
        for (int k = 0; k < K; ++k) {
            const auto b = sinr(cs.V.col(k), k, real.ch.H, real.bd.d, c_eta, ch.p,
                                ch.sigma2, setup.kappa);
            num(k) += b.signal;
            den(k) += b.interference + b.ue_distortion + b.bs_distortion + b.noise;
        }
    }
    return num.array() / den.array();
}

}  // namespace distmimo
