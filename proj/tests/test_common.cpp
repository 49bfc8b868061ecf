// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "distmimo/common.hpp"

using namespace distmimo;

namespace {

CMat random_psd(int m, int rank, Rng& rng) {
    const CMat a = rng.cgauss_matrix(m, rank);
    return a * a.adjoint();
}

}  // namespace

TEST_CASE("substream seeds are deterministic and distinct") {
    CHECK(substream_seed(42, 0) == substream_seed(42, 0));
    CHECK(substream_seed(42, 0) != substream_seed(42, 1));
    CHECK(substream_seed(42, 0) != substream_seed(43, 0));
    // No collisions over a modest index range.
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(substream_seed(7, i));
    CHECK(seen.size() == 10000);
}

TEST_CASE("rng gaussians have the right first two moments") {
    Rng rng(123);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    Cx csum(0.0, 0.0);
    double cpow = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gauss();
        sum += x;
        sumsq += x * x;
        const Cx z = rng.cgauss();
        csum += z;
        cpow += std::norm(z);
    }
    // 4-sigma bounds on the sample mean/variance.
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(sumsq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(csum) / n < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(cpow / n - 1.0) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("rng streams with equal seeds agree, different seeds differ") {
    Rng a(99), b(99), c(100);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.gauss(), y = b.gauss(), z = c.gauss();
        all_equal = all_equal && x == y;
        any_diff = any_diff || x != z;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("psd_sqrt reconstructs full-rank matrices") {
    Rng rng(7);
    const CMat c = random_psd(6, 6, rng);
    const CMat l = psd_sqrt(c);
    CHECK(l.rows() == 6);
    CHECK((l * l.adjoint() - c).cwiseAbs().maxCoeff() < 1e-10 * c.cwiseAbs().maxCoeff());
}

TEST_CASE("psd_sqrt is rank-revealing") {
    Rng rng(8);
    const CMat c = random_psd(6, 2, rng);
    const CMat l = psd_sqrt(c);
    CHECK(l.cols() == 2);
    CHECK((l * l.adjoint() - c).cwiseAbs().maxCoeff() < 1e-9 * c.cwiseAbs().maxCoeff());
}

TEST_CASE("psd_sqrt rejects indefinite and non-hermitian input") {
    CMat c = CMat::Identity(3, 3);
    c(0, 0) = -1.0;
    CHECK_THROWS_AS(psd_sqrt(c), std::invalid_argument);
    CMat nh = CMat::Zero(3, 3);
    nh(0, 1) = Cx(1.0, 0.0);  // asymmetric
    CHECK_THROWS_AS(psd_sqrt(nh), std::invalid_argument);
}

TEST_CASE("psd_pinv satisfies the Moore-Penrose identity on PSD input") {
    Rng rng(9);
    const CMat c = random_psd(5, 3, rng);
    const CMat pinv = psd_pinv(c);
    CHECK((c * pinv * c - c).cwiseAbs().maxCoeff() < 1e-9 * c.cwiseAbs().maxCoeff());
    CHECK((pinv * c * pinv - pinv).cwiseAbs().maxCoeff() <
          1e-9 * pinv.cwiseAbs().maxCoeff());
}

TEST_CASE("require_hermitian accepts hermitian and rejects the rest") {
    Rng rng(10);
    const CMat c = random_psd(4, 4, rng);
    CHECK_NOTHROW(require_hermitian(c));
    CMat bad = c;
    bad(0, 1) += Cx(0.0, 0.5);
    CHECK_THROWS_AS(require_hermitian(bad), std::invalid_argument);
    CHECK_THROWS_AS(require_hermitian(CMat::Zero(2, 3)), std::invalid_argument);
}
