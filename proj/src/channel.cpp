// SPDX-License-Identifier: Apache-2.0

#include "distmimo/channel.hpp"

#include <cmath>
#include <numbers>

namespace distmimo {

namespace {

constexpr double deg2rad = std::numbers::pi / 180.0;

CVec steering_vector(int m_antennas, double angle_deg, double spacing) {
    CVec a(m_antennas);
    const double phase_step = 2.0 * std::numbers::pi * spacing * std::sin(angle_deg * deg2rad);
    for (int m = 0; m < m_antennas; ++m)
        a(m) = std::polar(1.0, phase_step * m);
    return a;
}

/// Gauss-Hermite nodes/weights (physicists' weight exp(-x^2)) by the
/// Golub-Welsch symmetric tridiagonal eigenproblem.
void gauss_hermite(int n, Vec& nodes, Vec& weights) {
    Mat j = Mat::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = std::sqrt(i / 2.0);
        j(i, i - 1) = b;
        j(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(j);
    nodes = es.eigenvalues();
    weights.resize(n);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        weights(i) = sqrt_pi * v0 * v0;
    }
}

}  // namespace

FadingKind fading_kind_from_string(const std::string& s) {
    if (s == "iid-rayleigh") return FadingKind::IidRayleigh;
    if (s == "correlated-rayleigh") return FadingKind::CorrelatedRayleigh;
    if (s == "free-space-ula") return FadingKind::FreeSpaceUla;
    throw std::invalid_argument("unknown channel kind: " + s);
}

std::string to_string(FadingKind k) {
    switch (k) {
        case FadingKind::IidRayleigh: return "iid-rayleigh";
        case FadingKind::CorrelatedRayleigh: return "correlated-rayleigh";
        case FadingKind::FreeSpaceUla: return "free-space-ula";
    }
    return "?";
}

void ChannelModel::validate() const {
    if (M < 1) throw std::invalid_argument("channel: M must be >= 1");
    if (K < 1) throw std::invalid_argument("channel: K must be >= 1");
    if (p <= 0.0) throw std::invalid_argument("channel: p must be > 0");
    if (sigma2 <= 0.0) throw std::invalid_argument("channel: sigma2 must be > 0");
    if (static_cast<int>(ue_snrs.size()) != K)
        throw std::invalid_argument("channel: ue-snrs must have K entries");
    for (double s : ue_snrs)
        if (s <= 0.0) throw std::invalid_argument("channel: ue-snrs must be > 0");
    if (kind != FadingKind::IidRayleigh) {
        if (static_cast<int>(ue_angles_deg.size()) != K)
            throw std::invalid_argument("channel: ue-angles must have K entries");
        for (double a : ue_angles_deg)
            if (a < -60.0 || a > 60.0)
                throw std::invalid_argument("channel: ue-angles must lie in [-60, 60] degrees");
        if (antenna_spacing <= 0.0)
            throw std::invalid_argument("channel: antenna-spacing must be > 0");
        if (angular_std_deg < 0.0)
            throw std::invalid_argument("channel: angular-std must be >= 0");
    }
}

double ChannelModel::antenna_power() const {
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += column_scale(k);
    return p * total;
}

CMat spatial_correlation_matrix(int M, double nominal_angle_deg,
                                double angular_std_deg, double spacing) {
    if (M < 1) throw std::invalid_argument("spatial correlation: M must be >= 1");
    if (angular_std_deg < 0.0)
        throw std::invalid_argument("spatial correlation: angular-std must be >= 0");
    if (spacing <= 0.0)
        throw std::invalid_argument("spatial correlation: spacing must be > 0");

    if (angular_std_deg == 0.0) {
        const CVec a = steering_vector(M, nominal_angle_deg, spacing);
        return a * a.adjoint();
    }

    // R_{lm} = E_delta{ exp(j*2*pi*spacing*(l-m)*sin(theta+delta)) },
    // delta ~ N(0, sigma_phi^2). With x the standard GH node, the change of
    // variable is delta = sqrt(2)*sigma_phi*x and the weights sum to sqrt(pi).
    constexpr int n_nodes = 64;
    Vec nodes, weights;
    gauss_hermite(n_nodes, nodes, weights);

    const double sigma_phi = angular_std_deg * deg2rad;
    const double theta = nominal_angle_deg * deg2rad;
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

    // R is Toeplitz in (l - m); evaluate one row of lags.
    CVec lag(M);
    for (int d = 0; d < M; ++d) {
        Cx acc(0.0, 0.0);
        for (int i = 0; i < n_nodes; ++i) {
            const double delta = std::numbers::sqrt2 * sigma_phi * nodes(i);
            const double phase = 2.0 * std::numbers::pi * spacing * d * std::sin(theta + delta);
            acc += weights(i) * std::polar(1.0, phase);
        }
        lag(d) = acc * inv_sqrt_pi;
    }
    lag(0) = Cx(1.0, 0.0);  // exact; keeps trace(R) = M

    CMat r(M, M);
    for (int l = 0; l < M; ++l) {
        for (int m = 0; m <= l; ++m) {
            r(l, m) = lag(l - m);
            r(m, l) = std::conj(lag(l - m));
        }
    }
    return r;
}

ChannelRealization draw_channel(const ChannelModel& model, Rng& rng) {
    model.validate();
    CMat h(model.M, model.K);
    switch (model.kind) {
        case FadingKind::IidRayleigh: {
            for (int k = 0; k < model.K; ++k) {
                const double s = std::sqrt(model.column_scale(k));
                for (int m = 0; m < model.M; ++m) h(m, k) = s * rng.cgauss();
            }
            break;
        }
        case FadingKind::CorrelatedRayleigh: {
            for (int k = 0; k < model.K; ++k) {
                const CMat r = spatial_correlation_matrix(
                    model.M, model.ue_angles_deg[k], model.angular_std_deg,
                    model.antenna_spacing);
                const CMat l = psd_sqrt(r);
                CVec w(l.cols());
                for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.cgauss();
                h.col(k) = std::sqrt(model.column_scale(k)) * (l * w);
            }
            break;
        }
        case FadingKind::FreeSpaceUla: {
            for (int k = 0; k < model.K; ++k) {
                const CVec a = steering_vector(model.M, model.ue_angles_deg[k],
                                               model.antenna_spacing);
                // Random common phase per UE per coherence block.
                const Cx phase = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
                h.col(k) = std::sqrt(model.column_scale(k)) * phase * a;
            }
            break;
        }
    }
    return ChannelRealization{std::move(h), model};
}

CMat signal_correlation(const ChannelRealization& ch, double p) {
    if (p <= 0.0) throw std::invalid_argument("signal correlation: p must be > 0");
    return p * ch.H * ch.H.adjoint();
}

CMat dft_pilot_matrix(int K) {
    CMat phi(K, K);
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < K; ++t)
            phi(k, t) = std::polar(1.0, -2.0 * std::numbers::pi * k * t / K);
    return phi;
}

CMat ls_estimate(const CMat& pilot_observations, const CMat& pilot_matrix, double p) {
    if (pilot_matrix.rows() != pilot_matrix.cols())
        throw std::invalid_argument("ls estimate: pilot matrix must be square");
    const auto K = pilot_matrix.rows();
    if (pilot_observations.cols() != K)
        throw std::invalid_argument("ls estimate: observation/pilot dimension mismatch");
    const CMat gram = pilot_matrix * pilot_matrix.adjoint();
    if ((gram - double(K) * CMat::Identity(K, K)).cwiseAbs().maxCoeff() > 1e-9 * K)
        throw std::invalid_argument("ls estimate: pilot matrix is not orthogonal");
    if (p <= 0.0) throw std::invalid_argument("ls estimate: p must be > 0");
    return pilot_observations * pilot_matrix.adjoint() / (std::sqrt(p) * K);
}

}  // namespace distmimo
