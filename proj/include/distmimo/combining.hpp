// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "distmimo/bussgang.hpp"
#include "distmimo/channel.hpp"
#include "distmimo/frontend.hpp"

namespace distmimo {

enum class Scheme { Mr, DaMr, DaZf, DaMmse };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

/// Thrown by DA-ZF when the target channel lies inside the nulled subspace.
struct DaZfNullError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CombinerInputs {
    CMat H;           // raw channels, column k = h_k
    CVec d;           // Bussgang gains (diagonal of D)
    CMat C_etaeta;
    double p = 1.0;
    double sigma2 = 1.0;
    Vec channel_gain; // E{||h_k||^2} per UE, used by the MR normalization
};

struct CombinerSet {
    Scheme scheme;
    CMat V;  // M x K, column k combines for UE k
};

/// mr:      v_k = h_k / sqrt(E{||h_k||^2})
/// da-mr:   v_k = D h_k / ||D h_k||
/// da-zf:   D h_k projected orthogonally to span{D h_i, i != k} plus the
///          eigenvectors of C_etaeta above 1e-10 * trace, unit norm
/// da-mmse: v_k = p (C_zz + sigma2 I - p D h_k h_k^H D^H)^{-1} D h_k,
///          evaluated with one factorization of C_zz + sigma2 I shared by
///          all UEs (rank-one downdate per UE)
CombinerSet build_combiner(Scheme scheme, const CombinerInputs& in);

/// DA-MMSE through the explicit interference-plus-distortion form
/// p (sum_{i != k} p D h_i h_i^H D^H + C_etaeta + sigma2 I)^{-1} D h_k;
/// algebraically parallel to build_combiner's route.
CMat da_mmse_interference_form(const CombinerInputs& in);

struct SinrBreakdown {
    double signal = 0.0;         // kappa p |v^H D h_k|^2
    double interference = 0.0;   // sum_{i != k} p |v^H D h_i|^2
    double ue_distortion = 0.0;  // (1-kappa) p |v^H D h_k|^2
    double bs_distortion = 0.0;  // v^H C_etaeta v
    double noise = 0.0;          // sigma2 ||v||^2
    double sinr = 0.0;
};

SinrBreakdown sinr(const CVec& v, int k, const CMat& H, const CVec& d,
                   const CMat& C_etaeta, double p, double sigma2, double kappa);

/// Front-end parameterization resolved per scenario: the third-order
/// coefficient uses the statistical per-antenna power and the quantizer
/// tables are designed once per bit width.
struct FrontEndSpec {
    std::string kind = "identity";  // identity|third-order|quantizer|composite
    double alpha = 1.0 / 3.0;
    double b_off_db = 7.0;
    int bits = 6;

    FrontEnd build(int M, double avg_power) const;
};

struct SimSetup {
    ChannelModel channel;
    FrontEndSpec frontend;
    double kappa = 1.0;
    std::int64_t mc_samples = 100000;  // Bussgang sampling budget per realization
};

struct Realization {
    ChannelRealization ch;
    BussgangDecomposition bd;
};

/// Draws the channel and computes the Bussgang decomposition for one
/// coherence block, deterministically from the realization seed.
Realization make_realization(const SimSetup& setup, const FrontEnd& fe,
                             std::uint64_t realization_seed);

/// Per-UE SINR breakdowns for one realization; uncorr replaces C_etaeta by
/// its diagonal (same decomposition, paired evaluation).
std::vector<SinrBreakdown> realization_sinr(const Realization& r, const SimSetup& setup,
                                            Scheme scheme, bool uncorr);

struct UeEstimate {
    Vec mean;
    Vec std_error;
};

/// Monte-Carlo ergodic SE E{log2(1 + gamma'_k)} per UE with the Bussgang
/// decomposition recomputed each realization.
UeEstimate ergodic_se(const SimSetup& setup, Scheme scheme, int n_realizations,
                      std::uint64_t seed, bool uncorr = false);

/// LS channel estimate from DFT pilots sent through the same front-end and
/// noise chain as data. Returns Hhat (approximates the effective channel D H).
CMat estimate_channel_ls(const Realization& r, const SimSetup& setup,
                         const FrontEnd& fe, Rng& rng);

/// Fig-10 style averaged SINR: numerator and denominator of the SINR are
/// averaged separately over realizations. Schemes restricted to mr/da-mr.
/// With imperfect_csi the combiner is built from the LS estimate (treated
/// as the effective channel, D unknown to the receiver).
Vec averaged_sinr(const SimSetup& setup, Scheme scheme, int n_realizations,
                  std::uint64_t seed, bool uncorr, bool imperfect_csi);

}  // namespace distmimo
