// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace distmimo {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Mixes a master seed with a stream index into an independent substream
/// seed (splitmix64 finalizer). Used to give each Monte-Carlo realization
/// its own generator so results do not depend on the worker count.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Seeded random stream producing real and circularly-symmetric complex
/// Gaussian variates.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gauss() { return norm_(gen_); }
    double uniform() { return unif_(gen_); }
    std::uint64_t raw() { return gen_(); }

    /// CN(0,1): unit-variance circularly-symmetric complex Gaussian.
    Cx cgauss() {
        const double re = norm_(gen_);
        const double im = norm_(gen_);
        return Cx(re * inv_sqrt2, im * inv_sqrt2);
    }

    CMat cgauss_matrix(Eigen::Index rows, Eigen::Index cols) {
        CMat out(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                out(i, j) = cgauss();
        return out;
    }

  private:
    static constexpr double inv_sqrt2 = 0.7071067811865475244;
    std::mt19937_64 gen_;
    std::normal_distribution<double> norm_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

/// Max |C - C^H| over all entries.
inline double hermitian_deviation(const CMat& c) {
    return (c - c.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_hermitian(const CMat& c, double tol = 1e-9) {
    if (c.rows() != c.cols())
        throw std::invalid_argument("matrix is not square");
    if (hermitian_deviation(c) > tol * std::max(1.0, c.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("matrix is not Hermitian");
}

/// Factor L with L L^H = C for Hermitian PSD C, via eigendecomposition.
/// Eigenvalues below 1e-12 * trace are treated as zero, so L has one column
/// per retained eigenvalue (rank-revealing for rank-deficient inputs).
/// Throws if C is indefinite (eigenvalue below -1e-8 * trace).
CMat psd_sqrt(const CMat& c);

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix using the same
/// 1e-12 * trace eigenvalue cutoff as psd_sqrt.
CMat psd_pinv(const CMat& c);

}  // namespace distmimo
