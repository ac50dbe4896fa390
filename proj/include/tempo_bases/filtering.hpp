#pragma once

#include <cstddef>
#include <string>

#include <Eigen/SVD>

#include "basis.hpp"

namespace tempo_bases {

struct TruncatedPinv {
    Matrix pinv;  // N x q
    Eigen::Index rank = 0;
    double sv_ratio = 0.0;  // smallest / largest singular value
};

/** Right pseudo-inverse of a q x N matrix, dropping singular values below rcond * sigma_max. */
inline TruncatedPinv truncated_pinv(const Matrix& E, double rcond) {
    Eigen::BDCSVD<Matrix> svd(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    TruncatedPinv out;
    out.pinv = Matrix::Zero(E.cols(), E.rows());
    if (s.size() == 0 || !(s[0] > 0.0)) return out;
    out.sv_ratio = s[s.size() - 1] / s[0];
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] < rcond * s[0]) break;
        out.pinv += svd.matrixV().col(i) * (1.0 / s[i]) * svd.matrixU().col(i).transpose();
        ++out.rank;
    }
    return out;
}

/**
 * E+ = E^T (E E^T)^-1, so that E E+ = I. Throws when E is not of full row
 * rank at relative tolerance rcond.
 */
inline Matrix pseudo_inverse(const BasisMatrix& E, double rcond = 1e-12) {
    auto p = truncated_pinv(E.data, rcond);
    if (p.rank < E.data.rows()) {
        throw NumericalError("pseudo_inverse: basis is rank deficient (singular value ratio " +
                             std::to_string(p.sv_ratio) + " below " + std::to_string(rcond) + ")");
    }
    return std::move(p.pinv);
}

/** u' = E+ E u, the part of u that E can represent. */
inline Vector bandlimit_signal(const BasisMatrix& E, const Vector& u) {
    const Vector m = apply_basis(E, u);
    const Vector v = pseudo_inverse(E) * m;
    if (E.convention == ColumnConvention::TimeForward) return v;
    return v.reverse();
}

struct FilteredBasis {
    BasisMatrix base;
    std::size_t q_prime = 0;
    Matrix data;

    /** Row-normalized copy usable wherever a BasisMatrix is expected. */
    [[nodiscard]] BasisMatrix as_basis() const {
        auto b = make_basis(data, BasisKind::Filtered, base.convention);
        return b;
    }
};

/** E_l = E F^T F with F the first q_prime Fourier rows; not renormalized. */
inline FilteredBasis lowpass_filter_basis(const BasisMatrix& E, std::size_t q_prime) {
    if (q_prime == 0 || q_prime > E.N()) {
        throw ArgumentError("lowpass_filter_basis needs 1 <= q' <= N (got " + std::to_string(q_prime) + ")");
    }
    const Matrix F = mk_fourier_basis(q_prime, E.N()).data;
    FilteredBasis out;
    out.base = E;
    out.q_prime = q_prime;
    // Columns are time-ordered under either convention.
    out.data = E.data * F.transpose() * F;
    return out;
}

}  // namespace tempo_bases
