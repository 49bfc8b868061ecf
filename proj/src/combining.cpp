// SPDX-License-Identifier: Apache-2.0

#include "distmimo/combining.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace distmimo {

Scheme scheme_from_string(const std::string& s) {
    if (s == "mr") return Scheme::Mr;
    if (s == "da-mr") return Scheme::DaMr;
    if (s == "da-zf") return Scheme::DaZf;
    if (s == "da-mmse") return Scheme::DaMmse;
    throw std::invalid_argument("unknown combining scheme: " + s);
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Mr: return "mr";
        case Scheme::DaMr: return "da-mr";
        case Scheme::DaZf: return "da-zf";
        case Scheme::DaMmse: return "da-mmse";
    }
    return "?";
}

namespace {

void check_inputs(const CombinerInputs& in) {
    if (in.d.size() != in.H.rows())
        throw std::invalid_argument("combiner: gain/antenna count mismatch");
    if (in.C_etaeta.rows() != in.H.rows() || in.C_etaeta.cols() != in.H.rows())
        throw std::invalid_argument("combiner: C_etaeta dimension mismatch");
    if (in.sigma2 <= 0.0 || in.p <= 0.0)
        throw std::invalid_argument("combiner: p and sigma2 must be > 0");
}

CMat da_zf(const CombinerInputs& in) {
    const auto m = in.H.rows();
    const auto k_total = in.H.cols();
    const CMat eff = in.d.asDiagonal() * in.H;

    // Eigenvectors of C_etaeta carrying distortion (cutoff 1e-10 * trace).
    Eigen::SelfAdjointEigenSolver<CMat> es(in.C_etaeta);
    const double cutoff = 1e-10 * std::max(in.C_etaeta.real().trace(), 0.0);
    std::vector<Eigen::Index> dist_idx;
    for (Eigen::Index i = 0; i < m; ++i)
        if (es.eigenvalues()(i) > cutoff) dist_idx.push_back(i);

    CMat v(m, k_total);
    for (Eigen::Index k = 0; k < k_total; ++k) {
        CMat basis(m, k_total - 1 + dist_idx.size());
        Eigen::Index col = 0;
        for (Eigen::Index i = 0; i < k_total; ++i)
            if (i != k) basis.col(col++) = eff.col(i);
        for (Eigen::Index i : dist_idx) basis.col(col++) = es.eigenvectors().col(i);

        CVec proj = eff.col(k);
        if (basis.cols() > 0) {
            Eigen::JacobiSVD<CMat> svd(basis, Eigen::ComputeThinU);
            const double sv_cut = svd.singularValues()(0) * 1e-12;
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) > sv_cut) ++rank;
            const auto q = svd.matrixU().leftCols(rank);
            proj -= q * (q.adjoint() * proj);
        }
        const double nrm = proj.norm();
        if (nrm <= 1e-10 * eff.col(k).norm())
            throw DaZfNullError("da-zf: target channel lies in the nulled subspace");
        v.col(k) = proj / nrm;
    }
    return v;
}

CMat da_mmse(const CombinerInputs& in) {
    const auto m = in.H.rows();
    const CMat eff = in.d.asDiagonal() * in.H;
    CMat czz = in.p * eff * eff.adjoint() + in.C_etaeta;
    czz += in.sigma2 * CMat::Identity(m, m);
    const Eigen::LDLT<CMat> ldlt(czz);
    const CMat w = ldlt.solve(eff);
    CMat v(m, in.H.cols());
    for (Eigen::Index k = 0; k < in.H.cols(); ++k) {
        // Rank-one downdate of the desired UE's own term (Sherman-Morrison).
        const Cx quad = eff.col(k).dot(w.col(k));  // h~^H w, real and in [0, 1/p)
        v.col(k) = in.p * w.col(k) / (1.0 - in.p * quad);
    }
    return v;
}

}  // namespace

CombinerSet build_combiner(Scheme scheme, const CombinerInputs& in) {
    check_inputs(in);
    CombinerSet out{scheme, {}};
    switch (scheme) {
        case Scheme::Mr: {
            if (in.channel_gain.size() != in.H.cols())
                throw std::invalid_argument("combiner: channel gain per UE required for MR");
            out.V = in.H;
            for (Eigen::Index k = 0; k < in.H.cols(); ++k)
                out.V.col(k) /= std::sqrt(in.channel_gain(k));
            break;
        }
        case Scheme::DaMr: {
            out.V = in.d.asDiagonal() * in.H;
            for (Eigen::Index k = 0; k < out.V.cols(); ++k)
                out.V.col(k).normalize();
            break;
        }
        case Scheme::DaZf:
            out.V = da_zf(in);
            break;
        case Scheme::DaMmse:
            out.V = da_mmse(in);
            break;
    }
    return out;
}

CMat da_mmse_interference_form(const CombinerInputs& in) {
    check_inputs(in);
    const auto m = in.H.rows();
    const CMat eff = in.d.asDiagonal() * in.H;
    CMat v(m, in.H.cols());
    for (Eigen::Index k = 0; k < in.H.cols(); ++k) {
        CMat b = in.C_etaeta + in.sigma2 * CMat::Identity(m, m);
        for (Eigen::Index i = 0; i < in.H.cols(); ++i)
            if (i != k) b += in.p * eff.col(i) * eff.col(i).adjoint();
        v.col(k) = in.p * b.ldlt().solve(eff.col(k));
    }
    return v;
}

SinrBreakdown sinr(const CVec& v, int k, const CMat& H, const CVec& d,
                   const CMat& C_etaeta, double p, double sigma2, double kappa) {
    if (kappa < 0.0 || kappa > 1.0)
        throw std::invalid_argument("sinr: kappa must be in [0, 1]");
    SinrBreakdown b;
    const CMat eff = d.asDiagonal() * H;
    const double own = p * std::norm(v.dot(eff.col(k)));
    b.signal = kappa * own;
    b.ue_distortion = (1.0 - kappa) * own;
    for (Eigen::Index i = 0; i < H.cols(); ++i)
        if (i != k) b.interference += p * std::norm(v.dot(eff.col(i)));
    b.bs_distortion = std::max((v.adjoint() * C_etaeta * v)(0, 0).real(), 0.0);
    b.noise = sigma2 * v.squaredNorm();
    b.sinr = b.signal / (b.interference + b.ue_distortion + b.bs_distortion + b.noise);
    return b;
}

namespace {

/// The Lloyd tables only depend on the bit width; cache them across the
/// many per-realization front-end builds.
const Quantizer& cached_lloyd(int bits) {
    static std::mutex mtx;
    static std::map<int, Quantizer> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(bits);
    if (it == cache.end()) it = cache.emplace(bits, lloyd_quantizer(bits)).first;
    return it->second;
}

}  // namespace

FrontEnd FrontEndSpec::build(int M, double avg_power) const {
    if (kind == "identity") return FrontEnd::identity();
    if (kind == "third-order") {
        const Vec a = third_order_coefficients(alpha, std::pow(10.0, b_off_db / 10.0),
                                               Vec::Constant(M, avg_power));
        return FrontEnd::third_order(a);
    }
    if (kind == "quantizer") return FrontEnd::quantizer(cached_lloyd(bits));
    if (kind == "composite") {
        const Vec a = third_order_coefficients(alpha, std::pow(10.0, b_off_db / 10.0),
                                               Vec::Constant(M, avg_power));
        return FrontEnd::composite(a, cached_lloyd(bits));
    }
    throw std::invalid_argument("unknown front-end kind: " + kind);
}

}  // namespace distmimo
