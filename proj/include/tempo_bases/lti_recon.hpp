#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "basis.hpp"
#include "filtering.hpp"
#include "ldn.hpp"

namespace tempo_bases {

enum class Dampening { None, Lstsq, Erasure };

/** The basis has too few columns to determine A_d (needs N >= q + 1). */
struct InsufficientColumnsError : ArgumentError {
    using ArgumentError::ArgumentError;
};

struct ReconstructionConfig {
    Dampening dampen = Dampening::None;
    double theta = 1.0;
    double rcond = 1e-12;
    // Multiply rows back by their recorded pre-normalization norms.
    bool use_row_norms = true;
};

inline void check_config(const ReconstructionConfig& c) {
    if (!(c.theta > 0.0)) throw ArgumentError("reconstruction needs theta > 0");
    if (!(c.rcond > 0.0 && c.rcond < 1.0)) throw ArgumentError("reconstruction needs 0 < rcond < 1");
}

/** P = I - e p^T with e the oldest column of E and p the first row of E+. */
inline Matrix erasure_projector(const Matrix& E, double rcond = 1e-12, Diagnostics* diag = nullptr) {
    const auto p = truncated_pinv(E, rcond);
    if (p.rank < E.rows() && diag) {
        diag->warnings.push_back("erasure: pseudo-inverse truncated to rank " + std::to_string(p.rank) +
                                 " (singular value ratio " + std::to_string(p.sv_ratio) + ")");
    }
    return Matrix::Identity(E.rows(), E.rows()) - E.col(0) * p.pinv.row(0);
}

/**
 * Identify (A_d, B_d) whose impulse response walks the columns of E from
 * newest to oldest: B_d is the last column and A_d E[:, k+1] ~ E[:, k].
 */
inline DiscreteLti reconstruct_discrete_lti(const BasisMatrix& basis, const ReconstructionConfig& cfg = {},
                                            Diagnostics* diag = nullptr) {
    check_config(cfg);
    const Matrix E = cfg.use_row_norms ? basis.unnormalized() : basis.data;
    const Eigen::Index q = E.rows();
    const Eigen::Index N = E.cols();
    if (N <= q) {
        throw InsufficientColumnsError("reconstruction needs N >= q + 1 columns (got q=" + std::to_string(q) +
                            ", N=" + std::to_string(N) + ")");
    }
    const bool damp = cfg.dampen == Dampening::Lstsq;
    Matrix X(N - 1 + (damp ? 1 : 0), q);
    Matrix Y = Matrix::Zero(X.rows(), q);
    X.topRows(N - 1) = E.rightCols(N - 1).transpose();
    Y.topRows(N - 1) = E.leftCols(N - 1).transpose();
    if (damp) {
        const double w = static_cast<double>(N - 1) / static_cast<double>(std::max<Eigen::Index>(q - 1, 1));
        X.row(N - 1) = w * E.col(0).transpose();
    }
    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(cfg.rcond);
    if (svd.rank() < q && diag) {
        diag->warnings.push_back("reconstruction: least-squares system has rank " + std::to_string(svd.rank()) +
                                 " < q; solved with singular-value cutoff");
    }
    DiscreteLti d;
    d.N = static_cast<std::size_t>(N);
    d.method = Discretization::Zoh;
    d.A_d = svd.solve(Y).transpose();
    d.B_d = E.col(N - 1);
    if (cfg.dampen == Dampening::Erasure) {
        const Matrix P = erasure_projector(E, cfg.rcond, diag);
        d.A_d = P * d.A_d;
        d.B_d = P * d.B_d;
    }
    return d;
}

/** Left-multiply both matrices by the erasure projector of E. */
inline DiscreteLti erasure_dampen(const DiscreteLti& d, const BasisMatrix& E, bool use_row_norms = true,
                                  Diagnostics* diag = nullptr) {
    const Matrix M = use_row_norms ? E.unnormalized() : E.data;
    if (M.rows() != d.A_d.rows()) throw ArgumentError("erasure_dampen: basis and system sizes differ");
    const Matrix P = erasure_projector(M, 1e-12, diag);
    DiscreteLti out = d;
    out.A_d = P * d.A_d;
    out.B_d = P * d.B_d;
    return out;
}

/** ||A_d E[:, 1:] - E[:, :-1]||_F / ||E||_F for the matrix the system was fit to. */
inline double identification_residual(const DiscreteLti& d, const Matrix& E) {
    const Eigen::Index N = E.cols();
    return (d.A_d * E.rightCols(N - 1) - E.leftCols(N - 1)).norm() / E.norm();
}

namespace detail {

inline void check_log_admissible(const Matrix& Ad) {
    Eigen::EigenSolver<Matrix> es(Ad, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> l = es.eigenvalues()[i];
        const double tol = 1e-12 * std::max(1.0, std::abs(l));
        if (std::abs(l.imag()) <= tol && l.real() <= tol) {
            throw NumericalError("undiscretize: eigenvalue " + std::to_string(l.real()) +
                                 " on the closed negative real axis, no real logarithm");
        }
    }
}

}  // namespace detail

/** Continuous feedback matrix A = (N / theta) log(A_d) alone. */
inline Matrix continuous_feedback(const DiscreteLti& d, double theta = 1.0) {
    if (!(theta > 0.0)) throw ArgumentError("undiscretize needs theta > 0");
    detail::check_log_admissible(d.A_d);
    return d.A_d.log() * (static_cast<double>(d.N) / theta);
}

/**
 * Inverse of discretize_lti: A = (N / theta) log(A_d) and
 * B = (1 / theta) (A_d - I)^-1 N log(A_d) B_d.
 */
inline LtiSystem undiscretize_lti(const DiscreteLti& d, double theta = 1.0) {
    if (!(theta > 0.0)) throw ArgumentError("undiscretize needs theta > 0");
    detail::check_log_admissible(d.A_d);
    const Matrix As = d.A_d.log() * static_cast<double>(d.N);
    if (!As.allFinite()) throw NumericalError("undiscretize: matrix logarithm is not finite");
    const Matrix Dm = d.A_d - Matrix::Identity(d.A_d.rows(), d.A_d.cols());
    Eigen::FullPivLU<Matrix> lu(Dm);
    if (!lu.isInvertible()) throw NumericalError("undiscretize: (A_d - I) is singular");
    LtiSystem s;
    s.theta = theta;
    s.A = As / theta;
    s.B = lu.solve(As * d.B_d) / theta;
    return s;
}

}  // namespace tempo_bases
