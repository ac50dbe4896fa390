#pragma once

// Test-side reference computations. None of these share code paths with the
// library: they trade speed for obviousness.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using boost::multiprecision::cpp_rational;

/** exp(M) by Taylor series on M / 2^s in long double, then s squarings. */
inline Matrix expm_taylor(const Matrix& M) {
    LMatrix X = M.cast<long double>();
    int s = 0;
    long double norm = X.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.125L) {
        norm /= 2;
        ++s;
    }
    X /= std::ldexp(1.0L, s);
    LMatrix term = LMatrix::Identity(M.rows(), M.cols());
    LMatrix sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * X / static_cast<long double>(k);
        sum += term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum.cast<double>();
}

/** LDN matrices from the entry formula, theta = 1, written out longhand. */
inline void ldn_matrices(std::size_t q, Matrix& A, Vector& B) {
    A.resize(q, q);
    B.resize(q);
    for (std::size_t i = 0; i < q; ++i) {
        const double g = 2.0 * i + 1.0;
        B[i] = (i % 2 == 0) ? g : -g;
        for (std::size_t j = 0; j < q; ++j) {
            if (i < j) {
                A(i, j) = -g;
            } else {
                A(i, j) = ((i - j + 1) % 2 == 0) ? g : -g;
            }
        }
    }
}

/**
 * Discrete orthonormal polynomials on k = 0..N-1 by exact Gram-Schmidt of
 * the monomials over the rationals; sign chosen so the last column is positive.
 */
inline Matrix dlop_gram_schmidt(std::size_t q, std::size_t N) {
    std::vector<std::vector<cpp_rational>> rows;
    Matrix out(q, N);
    for (std::size_t n = 0; n < q; ++n) {
        std::vector<cpp_rational> v(N);
        for (std::size_t k = 0; k < N; ++k) {
            cpp_rational p = 1;
            for (std::size_t e = 0; e < n; ++e) p *= k;
            v[k] = p;
        }
        for (const auto& r : rows) {
            cpp_rational num = 0, den = 0;
            for (std::size_t k = 0; k < N; ++k) {
                num += v[k] * r[k];
                den += r[k] * r[k];
            }
            const cpp_rational c = num / den;
            for (std::size_t k = 0; k < N; ++k) v[k] -= c * r[k];
        }
        rows.push_back(v);
        double nrm = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            out(n, k) = static_cast<double>(v[k]);
            nrm += out(n, k) * out(n, k);
        }
        out.row(n) /= std::sqrt(nrm) * (out(n, N - 1) > 0 ? 1.0 : -1.0);
    }
    return out;
}

/** Project u onto the span of the first f_hat + 1 DFT frequencies by an O(N^2) real DFT. */
inline Vector dft_lowpass(const Vector& u, double f_hat) {
    const auto N = u.size();
    Vector out = Vector::Zero(N);
    const long double two_pi = 6.283185307179586476925286766559L;
    for (Eigen::Index f = 0; f < N; ++f) {
        const Eigen::Index fold = std::min(f, N - f);
        if (static_cast<double>(fold) > f_hat) continue;
        long double re = 0, im = 0;
        for (Eigen::Index k = 0; k < N; ++k) {
            re += u[k] * std::cos(two_pi * f * k / N);
            im -= u[k] * std::sin(two_pi * f * k / N);
        }
        for (Eigen::Index k = 0; k < N; ++k) {
            out[k] += static_cast<double>((re * std::cos(two_pi * f * k / N) - im * std::sin(two_pi * f * k / N)) / N);
        }
    }
    return out;
}

/** sum_{i=0}^{t-1} A^i B u_{t-1-i}: the state after feeding u_0..u_{t-1} from rest. */
inline Vector power_expansion(const Matrix& A, const Vector& B, const Vector& u, Eigen::Index t) {
    Vector acc = Vector::Zero(B.size());
    Matrix P = Matrix::Identity(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < t; ++i) {
        acc += P * B * u[t - 1 - i];
        P = P * A;
    }
    return acc;
}

inline Vector gaussian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = g(rng);
    return v;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace oracle
