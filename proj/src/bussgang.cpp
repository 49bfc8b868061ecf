// SPDX-License-Identifier: Apache-2.0

#include "distmimo/bussgang.hpp"

#include <cmath>

namespace distmimo {

namespace {

constexpr std::int64_t kChunk = 4096;

CMat rebuild_czz(const CVec& d, const CMat& c_uu, const CMat& c_etaeta) {
    return (d.asDiagonal() * c_uu) * d.conjugate().asDiagonal() + c_etaeta;
}

}  // namespace

BussgangDecomposition bussgang_identity(const CMat& c_uu) {
    require_hermitian(c_uu);
    BussgangDecomposition bd;
    bd.d = CVec::Ones(c_uu.rows());
    bd.C_etaeta = CMat::Zero(c_uu.rows(), c_uu.cols());
    bd.C_uu = c_uu;
    bd.C_zz = c_uu;
    return bd;
}

BussgangDecomposition bussgang_third_order(const CMat& c_uu, const Vec& a) {
    require_hermitian(c_uu);
    if (a.size() != c_uu.rows())
        throw std::invalid_argument("bussgang: coefficient/antenna count mismatch");
    const auto m = c_uu.rows();
    BussgangDecomposition bd;
    bd.C_uu = c_uu;
    bd.d.resize(m);
    for (Eigen::Index i = 0; i < m; ++i)
        bd.d(i) = 1.0 - 2.0 * a(i) * c_uu(i, i).real();
    bd.C_etaeta.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            const Cx rho = c_uu(i, j);
            bd.C_etaeta(i, j) = 2.0 * a(i) * a(j) * std::norm(rho) * rho;
        }
    bd.C_zz = rebuild_czz(bd.d, c_uu, bd.C_etaeta);
    return bd;
}

BussgangDecomposition bussgang_monte_carlo(const FrontEnd& fe, const CMat& c_uu,
                                           std::int64_t n_samples, Rng& rng,
                                           bool with_errors) {
    if (n_samples < 10000)
        throw std::invalid_argument("bussgang monte-carlo: need at least 1e4 samples");
    const CMat factor = psd_sqrt(c_uu);  // throws on non-Hermitian/indefinite
    const auto m = c_uu.rows();
    const auto r = factor.cols();
    const Vec rho = c_uu.diagonal().real();
    const std::uint64_t mc_seed = rng.raw();
    const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;

    // Pass 1: Bussgang gains d_m = sum g(u_m) u_m^* / sum |u_m|^2. The
    // empirical denominator (rather than the exact rho_mm) cancels the
    // signal-scale sampling noise, so the pass-2 residual eta = z - D u is
    // uncorrelated with u at the distortion scale, not merely on average.
    CVec s_zu = CVec::Zero(m);
    Vec s_uu = Vec::Zero(m);
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        Rng sub(substream_seed(mc_seed, static_cast<std::uint64_t>(c)));
        const std::int64_t n = std::min<std::int64_t>(kChunk, n_samples - c * kChunk);
        const CMat u = factor * sub.cgauss_matrix(r, n);
        const CMat z = frontend_apply(fe, u, rho);
        s_zu += (z.array() * u.array().conjugate()).rowwise().sum().matrix();
        s_uu += u.cwiseAbs2().rowwise().sum();
    }
    CVec d(m);
    for (Eigen::Index i = 0; i < m; ++i)
        d(i) = s_uu(i) > 0.0 ? s_zu(i) / s_uu(i) : Cx(1.0, 0.0);

    // Pass 2 (same substreams): accumulate the residual eta = z - D u.
    CMat c_acc = CMat::Zero(m, m);
    Mat p_acc, v_acc;
    CMat x_acc;
    if (with_errors) {
        p_acc = Mat::Zero(m, m);
        v_acc = Mat::Zero(m, m);
        x_acc = CMat::Zero(m, m);
    }
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        Rng sub(substream_seed(mc_seed, static_cast<std::uint64_t>(c)));
        const std::int64_t n = std::min<std::int64_t>(kChunk, n_samples - c * kChunk);
        const CMat u = factor * sub.cgauss_matrix(r, n);
        CMat eta = frontend_apply(fe, u, rho);
        eta -= d.asDiagonal() * u;
        c_acc.selfadjointView<Eigen::Lower>().rankUpdate(eta);
        if (with_errors) {
            const Mat q = eta.cwiseAbs2();
            p_acc.selfadjointView<Eigen::Lower>().rankUpdate(q);
            x_acc.noalias() += eta * u.adjoint();
            v_acc.noalias() += q * u.cwiseAbs2().transpose();
        }
    }

    BussgangDecomposition bd;
    bd.C_uu = c_uu;
    bd.d = d;
    bd.C_etaeta = c_acc.selfadjointView<Eigen::Lower>();
    bd.C_etaeta /= double(n_samples);
    bd.C_zz = rebuild_czz(d, c_uu, bd.C_etaeta);
    if (with_errors) {
        const double n = double(n_samples);
        bd.se_etaeta.resize(m, m);
        bd.se_etau.resize(m, m);
        bd.cross_etau = x_acc / n;
        const Mat p_full = Mat(p_acc.selfadjointView<Eigen::Lower>());
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) {
                const double var_c =
                    std::max(p_full(i, j) / n - std::norm(bd.C_etaeta(i, j)), 0.0);
                bd.se_etaeta(i, j) = std::sqrt(var_c / n);
                const double var_x =
                    std::max(v_acc(i, j) / n - std::norm(bd.cross_etau(i, j)), 0.0);
                bd.se_etau(i, j) = std::sqrt(var_x / n);
            }
    }
    return bd;
}

BussgangDecomposition bussgang_decompose(const FrontEnd& fe, const CMat& c_uu,
                                         std::int64_t mc_samples, Rng& rng,
                                         bool with_errors) {
    if (fe.kind == FrontEnd::Kind::Identity) return bussgang_identity(c_uu);
    if (fe.kind == FrontEnd::Kind::ThirdOrder) return bussgang_third_order(c_uu, fe.a);
    return bussgang_monte_carlo(fe, c_uu, mc_samples, rng, with_errors);
}

Cx correlation_coeff(const CMat& c, Eigen::Index i, Eigen::Index j) {
    const double cii = c(i, i).real();
    const double cjj = c(j, j).real();
    if (cii <= 0.0 || cjj <= 0.0)
        throw std::invalid_argument("correlation coefficient: zero diagonal entry");
    return c(i, j) / std::sqrt(cii * cjj);
}

BussgangDecomposition neglect_correlation(const BussgangDecomposition& bd) {
    BussgangDecomposition out = bd;
    out.C_etaeta = bd.C_etaeta.diagonal().asDiagonal();
    out.C_zz = rebuild_czz(out.d, out.C_uu, out.C_etaeta);
    return out;
}

}  // namespace distmimo
