// SPDX-License-Identifier: Apache-2.0

#include "distmimo/common.hpp"

namespace distmimo {

CMat psd_sqrt(const CMat& c) {
    require_hermitian(c);
    Eigen::SelfAdjointEigenSolver<CMat> es(c);
    const Vec& ev = es.eigenvalues();
    const double tr = std::max(c.real().trace(), 0.0);
    if (ev.minCoeff() < -1e-8 * std::max(tr, 1e-300))
        throw std::invalid_argument("matrix is not positive semi-definite");
    const double cutoff = 1e-12 * tr;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cutoff) ++rank;
    CMat l(c.rows(), rank);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cutoff)
            l.col(col++) = es.eigenvectors().col(i) * std::sqrt(ev(i));
    }
    return l;
}

CMat psd_pinv(const CMat& c) {
    require_hermitian(c);
    Eigen::SelfAdjointEigenSolver<CMat> es(c);
    const Vec& ev = es.eigenvalues();
    const double cutoff = 1e-12 * std::max(c.real().trace(), 0.0);
    CMat out = CMat::Zero(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cutoff)
            out += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint() / ev(i);
    }
    return out;
}

}  // namespace distmimo
