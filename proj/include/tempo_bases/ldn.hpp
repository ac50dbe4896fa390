#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "basis.hpp"

namespace tempo_bases {

/** Continuous system dm/dt = A m + B u, with A and B already divided by theta. */
struct LtiSystem {
    Matrix A;
    Vector B;
    double theta = 1.0;
};

enum class Discretization { Zoh, Euler };

/** m_t = A_d m_{t-1} + B_d u_t, N steps per window. */
struct DiscreteLti {
    Matrix A_d;
    Vector B_d;
    std::size_t N = 1;
    Discretization method = Discretization::Zoh;
};

inline LtiSystem mk_ldn_lti(std::size_t q, double theta = 1.0) {
    if (q == 0) throw ArgumentError("LDN needs q >= 1");
    if (!(theta > 0.0)) throw ArgumentError("LDN needs theta > 0");
    LtiSystem s;
    s.theta = theta;
    s.A.resize(q, q);
    s.B.resize(q);
    for (std::size_t i = 0; i < q; ++i) {
        const double w = static_cast<double>(2 * i + 1);
        for (std::size_t j = 0; j < q; ++j) {
            const double sign = (i <= j) ? -1.0 : (((i - j + 1) % 2 == 0) ? 1.0 : -1.0);
            s.A(i, j) = w * sign / theta;
        }
        s.B[i] = w * ((i % 2 == 0) ? 1.0 : -1.0) / theta;
    }
    return s;
}

inline void check_system(const LtiSystem& s) {
    if (s.A.rows() != s.A.cols() || s.A.rows() != s.B.size() || s.A.rows() == 0) {
        throw ArgumentError("LTI system has inconsistent dimensions");
    }
    if (!(s.theta > 0.0)) throw ArgumentError("LTI system needs theta > 0");
}

/**
 * Zero-order hold discretization with N steps per window:
 * A_d = exp(A theta / N), B_d = (A theta)^-1 (A_d - I) B theta.
 */
inline DiscreteLti discretize_lti(const LtiSystem& sys, std::size_t N) {
    check_system(sys);
    if (N == 0) throw ArgumentError("discretization needs N >= 1");
    const Matrix As = sys.A * sys.theta;
    const Vector Bs = sys.B * sys.theta;
    Eigen::FullPivLU<Matrix> lu(As);
    if (!lu.isInvertible()) {
        throw NumericalError("discretize_lti: feedback matrix is singular (rank " +
                             std::to_string(lu.rank()) + " of " + std::to_string(As.rows()) + ")");
    }
    DiscreteLti d;
    d.N = N;
    d.method = Discretization::Zoh;
    d.A_d = (As / static_cast<double>(N)).exp();
    const Matrix I = Matrix::Identity(As.rows(), As.cols());
    d.B_d = lu.solve((d.A_d - I) * Bs);
    return d;
}

/** Forward Euler: A_d = I + A theta / N, B_d = B theta / N. */
inline DiscreteLti discretize_euler(const LtiSystem& sys, std::size_t N) {
    check_system(sys);
    if (N == 0) throw ArgumentError("discretization needs N >= 1");
    const double dN = static_cast<double>(N);
    DiscreteLti d;
    d.N = N;
    d.method = Discretization::Euler;
    d.A_d = Matrix::Identity(sys.A.rows(), sys.A.cols()) + sys.A * sys.theta / dN;
    d.B_d = sys.B * sys.theta / dN;
    return d;
}

/** Row t is A_d^t B_d, the state after a unit impulse at step 0. */
inline Matrix impulse_response(const DiscreteLti& d, std::size_t steps) {
    if (steps == 0) throw ArgumentError("impulse_response needs steps >= 1");
    Matrix R(steps, d.B_d.size());
    Vector v = d.B_d;
    for (std::size_t t = 0; t < steps; ++t) {
        R.row(t) = v.transpose();
        v = d.A_d * v;
    }
    return R;
}

/** Unnormalized q x N matrix whose column k (0-based) is A_d^(N-1-k) B_d. */
inline Matrix lti_basis_columns(const DiscreteLti& d, std::size_t N) {
    Matrix H(d.B_d.size(), N);
    Vector v = d.B_d;
    for (std::size_t k = N; k-- > 0;) {
        H.col(k) = v;
        if (k > 0) v = d.A_d * v;
    }
    return H;
}

inline BasisMatrix mk_ldn_basis(std::size_t q, std::size_t N) {
    detail::check_shape(q, N);
    auto H = lti_basis_columns(discretize_lti(mk_ldn_lti(q, 1.0), N), N);
    return make_basis(std::move(H), BasisKind::Ldn);
}

/**
 * LDN basis from the Euler recurrence. The divergence flag is raised when
 * the impulse-response state grows past its initial norm, or when any entry
 * exceeds 1e6 before normalization.
 */
inline BasisMatrix mk_ldn_basis_euler(std::size_t q, std::size_t N) {
    detail::check_shape(q, N);
    const auto d = discretize_euler(mk_ldn_lti(q, 1.0), N);
    Matrix H = lti_basis_columns(d, N);
    const double b0 = d.B_d.norm();
    bool diverged = !H.allFinite() || H.cwiseAbs().maxCoeff() > 1e6;
    for (Eigen::Index k = 0; k < H.cols() && !diverged; ++k) {
        if (H.col(k).norm() > b0 * (1.0 + 1e-12)) diverged = true;
    }
    BasisMatrix b;
    if (H.allFinite()) {
        b = make_basis(std::move(H), BasisKind::LdnEuler);
    } else {
        b.data = std::move(H);
        b.kind = BasisKind::LdnEuler;
    }
    b.diagnostics.diverged = diverged;
    if (diverged) b.diagnostics.warnings.push_back("Euler LDN impulse response grows (N too small for q)");
    return b;
}

/**
 * Mean of the continuous LDN impulse response over each sample interval,
 * column k covering lags [(N-1-k)/N, (N-k)/N] of the window. Each column
 * uses its own matrix exponentials; nothing is iterated.
 */
inline Matrix ldn_mean_sampled_impulse(std::size_t q, std::size_t N) {
    detail::check_shape(q, N);
    const auto s = mk_ldn_lti(q, 1.0);
    Eigen::FullPivLU<Matrix> lu(s.A);
    const double dN = static_cast<double>(N);
    Matrix H(q, N);
    for (std::size_t k = 0; k < N; ++k) {
        const double t0 = static_cast<double>(N - 1 - k) / dN;
        const double t1 = static_cast<double>(N - k) / dN;
        const Matrix E0 = (s.A * t0).exp();
        const Matrix E1 = (s.A * t1).exp();
        H.col(k) = lu.solve((E1 - E0) * s.B) * dN;
    }
    return H;
}

/** Root-mean-square of (a - ref) divided by the root-mean-square of ref. */
inline double nrmse(const Matrix& a, const Matrix& ref) {
    if (a.rows() != ref.rows() || a.cols() != ref.cols()) throw ArgumentError("nrmse: shape mismatch");
    const double denom = ref.norm();
    if (!(denom > 0.0)) throw ArgumentError("nrmse: reference is zero");
    return (a - ref).norm() / denom;
}

namespace detail {

// Keep DFT bins with frequency index <= f_hat; the rest are zeroed.
inline Vector hard_bandlimit(const Vector& u, double f_hat) {
    const std::size_t n = static_cast<std::size_t>(u.size());
    Eigen::FFT<double> fft;
    std::vector<double> x(u.data(), u.data() + u.size());
    std::vector<std::complex<double>> X;
    fft.fwd(X, x);
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t f = std::min(b, n - b);
        if (static_cast<double>(f) > f_hat) X[b] = 0.0;
    }
    std::vector<double> y;
    fft.inv(y, X);
    return Eigen::Map<Vector>(y.data(), static_cast<Eigen::Index>(n));
}

}  // namespace detail

struct SpectrumConfig {
    std::size_t trials = 64;
    std::uint64_t seed = 0x5eed;
};

/**
 * Mean NRMSE between H u and H u_hat over white-noise trials, where u_hat
 * is u with every frequency above f_hat removed (theta = 1 window, so
 * frequency index equals Hz).
 */
inline std::vector<double> spectrum_nrmse(std::size_t q, std::size_t N, const std::vector<double>& f_hats,
                                          const SpectrumConfig& cfg = {}) {
    const auto H = mk_ldn_basis(q, N);
    std::vector<double> out;
    out.reserve(f_hats.size());
    for (double f_hat : f_hats) {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double acc = 0.0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            Vector u(N);
            for (auto& v : u) v = gauss(rng);
            const Vector m = H.data * u;
            const Vector mh = H.data * detail::hard_bandlimit(u, f_hat);
            acc += (m - mh).norm() / m.norm();
        }
        out.push_back(acc / static_cast<double>(cfg.trials));
    }
    return out;
}

}  // namespace tempo_bases
