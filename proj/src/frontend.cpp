// SPDX-License-Identifier: Apache-2.0

#include "distmimo/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace distmimo {

namespace {

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Standard normal quantile by bisection on erf (monotone, ~1e-13 accurate).
double norm_quantile(double u) {
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (norm_cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Quantize one real value with thresholds scaled by `scale`.
double quantize_scalar(double x, const Quantizer& q, double scale) {
    const double* begin = q.thresholds.data();
    const double* end = begin + q.thresholds.size();
    const auto idx = std::upper_bound(begin, end, x / scale) - begin;
    return scale * q.levels(idx);
}

}  // namespace

FrontEnd FrontEnd::third_order(Vec a_coeffs) {
    if ((a_coeffs.array() < 0.0).any())
        throw std::invalid_argument("front-end: third-order coefficients must be >= 0");
    FrontEnd fe;
    fe.kind = Kind::ThirdOrder;
    fe.a = std::move(a_coeffs);
    return fe;
}

FrontEnd FrontEnd::quantizer(Quantizer q) {
    FrontEnd fe;
    fe.kind = Kind::Quantizer;
    fe.q = std::move(q);
    return fe;
}

FrontEnd FrontEnd::composite(Vec a_coeffs, Quantizer q) {
    FrontEnd fe;
    fe.kind = Kind::Composite;
    fe.a = std::move(a_coeffs);
    fe.q = std::move(q);
    return fe;
}

CMat third_order_apply(const CMat& u, const Vec& a) {
    if (a.size() != u.rows())
        throw std::invalid_argument("third-order: coefficient/antenna count mismatch");
    CMat z(u.rows(), u.cols());
    for (Eigen::Index j = 0; j < u.cols(); ++j)
        for (Eigen::Index m = 0; m < u.rows(); ++m) {
            const Cx um = u(m, j);
            z(m, j) = um - a(m) * std::norm(um) * um;
        }
    return z;
}

Vec third_order_coefficients(double alpha, double b_off, const Vec& avg_powers) {
    if (alpha <= 0.0) throw std::invalid_argument("third-order: alpha must be > 0");
    if (b_off < 1.0) throw std::invalid_argument("third-order: back-off must be >= 1");
    if ((avg_powers.array() <= 0.0).any())
        throw std::invalid_argument("third-order: average powers must be > 0");
    return alpha / (b_off * avg_powers.array());
}

Quantizer lloyd_quantizer(int bits) {
    if (bits < 1 || bits > 12)
        throw std::invalid_argument("lloyd: bits must be in [1, 12]");
    const int L = 1 << bits;
    Vec levels(L);
    for (int n = 0; n < L; ++n)
        levels(n) = norm_quantile((n + 0.5) / L);

    Vec thresholds(L - 1);
    for (int it = 0; it < 10000; ++it) {
        double move = 0.0;
        for (int n = 0; n < L - 1; ++n)
            thresholds(n) = 0.5 * (levels(n) + levels(n + 1));
        for (int n = 0; n < L; ++n) {
            const double lo = (n == 0) ? -std::numeric_limits<double>::infinity()
                                       : thresholds(n - 1);
            const double hi = (n == L - 1) ? std::numeric_limits<double>::infinity()
                                           : thresholds(n);
            const double pdf_lo = std::isinf(lo) ? 0.0 : norm_pdf(lo);
            const double pdf_hi = std::isinf(hi) ? 0.0 : norm_pdf(hi);
            const double mass = norm_cdf(hi) - norm_cdf(lo);
            const double next = (pdf_lo - pdf_hi) / mass;
            move = std::max(move, std::abs(next - levels(n)));
            levels(n) = next;
        }
        if (move < 1e-10) break;  // else stop after the iteration budget
    }

    // Enforce exact symmetry (the iteration preserves it up to round-off).
    for (int n = 0; n < L / 2; ++n) {
        const double v = 0.5 * (levels(L - 1 - n) - levels(n));
        levels(n) = -v;
        levels(L - 1 - n) = v;
    }
    for (int n = 0; n < L - 1; ++n)
        thresholds(n) = 0.5 * (levels(n) + levels(n + 1));

    return Quantizer{bits, std::move(levels), std::move(thresholds)};
}

double quantizer_mse(const Quantizer& q) {
    // E{(x-Q(x))^2} = 1 - 2*E{x Q(x)} + E{Q(x)^2} with cell-wise moments.
    const int L = static_cast<int>(q.levels.size());
    double exq = 0.0, eq2 = 0.0;
    for (int n = 0; n < L; ++n) {
        const double lo = (n == 0) ? -std::numeric_limits<double>::infinity()
                                   : q.thresholds(n - 1);
        const double hi = (n == L - 1) ? std::numeric_limits<double>::infinity()
                                       : q.thresholds(n);
        const double pdf_lo = std::isinf(lo) ? 0.0 : norm_pdf(lo);
        const double pdf_hi = std::isinf(hi) ? 0.0 : norm_pdf(hi);
        const double mass = norm_cdf(hi) - norm_cdf(lo);
        exq += q.levels(n) * (pdf_lo - pdf_hi);
        eq2 += q.levels(n) * q.levels(n) * mass;
    }
    return 1.0 - 2.0 * exq + eq2;
}

CMat quantizer_apply(const CMat& u, const Quantizer& q, const Vec& rho) {
    if (rho.size() != u.rows())
        throw std::invalid_argument("quantizer: power/antenna count mismatch");
    if ((rho.array() <= 0.0).any())
        throw std::invalid_argument("quantizer: per-antenna power must be > 0");
    CMat z(u.rows(), u.cols());
    for (Eigen::Index m = 0; m < u.rows(); ++m) {
        const double scale = std::sqrt(0.5 * rho(m));
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            const Cx um = u(m, j);
            z(m, j) = Cx(quantize_scalar(um.real(), q, scale),
                         quantize_scalar(um.imag(), q, scale));
        }
    }
    return z;
}

std::pair<double, double> quantizer_bussgang_diag(const Quantizer& q, double rho) {
    if (rho <= 0.0) throw std::invalid_argument("quantizer: rho must be > 0");
    const double scale = std::sqrt(0.5 * rho);
    const int L = static_cast<int>(q.levels.size());
    const double sqrt_rho = std::sqrt(rho);
    double d = 0.0, czz = 0.0;
    for (int n = 0; n < L; ++n) {
        const double lev = scale * q.levels(n);
        const double t_lo = (n == 0) ? -std::numeric_limits<double>::infinity()
                                     : scale * q.thresholds(n - 1);
        const double t_hi = (n == L - 1) ? std::numeric_limits<double>::infinity()
                                         : scale * q.thresholds(n);
        const double e_lo = std::isinf(t_lo) ? 0.0 : std::exp(-t_lo * t_lo / rho);
        const double e_hi = std::isinf(t_hi) ? 0.0 : std::exp(-t_hi * t_hi / rho);
        d += lev / std::sqrt(std::numbers::pi * rho) * (e_lo - e_hi);
        czz += lev * lev * (std::erf(t_hi / sqrt_rho) - std::erf(t_lo / sqrt_rho));
    }
    return {d, czz};
}

CMat frontend_apply(const FrontEnd& fe, const CMat& u, const Vec& rho) {
    switch (fe.kind) {
        case FrontEnd::Kind::Identity:
            return u;
        case FrontEnd::Kind::ThirdOrder:
            return third_order_apply(u, fe.a);
        case FrontEnd::Kind::Quantizer:
            return quantizer_apply(u, fe.q, rho);
        case FrontEnd::Kind::Composite: {
            // ADC gain control tracks the amplifier output power
            // rho * (1 - 2*a*rho)^2 + 2*a^2*rho^3.
            Vec rho_q(rho.size());
            for (Eigen::Index m = 0; m < rho.size(); ++m) {
                const double r = rho(m);
                const double dm = 1.0 - 2.0 * fe.a(m) * r;
                rho_q(m) = r * dm * dm + 2.0 * fe.a(m) * fe.a(m) * r * r * r;
            }
            return quantizer_apply(third_order_apply(u, fe.a), fe.q, rho_q);
        }
    }
    throw std::logic_error("frontend_apply: unknown kind");
}

std::string quantizer_to_json(const Quantizer& q) {
    nlohmann::json j;
    j["bits"] = q.bits;
    j["levels"] = std::vector<double>(q.levels.data(), q.levels.data() + q.levels.size());
    j["thresholds"] = std::vector<double>(q.thresholds.data(),
                                          q.thresholds.data() + q.thresholds.size());
    return j.dump();
}

}  // namespace distmimo
