#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "basis.hpp"

namespace tempo_bases {

struct DlopParams {
    // A column is frozen at zero once two consecutive rows fall below this.
    // Rounding noise in the decaying tail of a column grows to about the
    // square root of the working precision before the true values get there,
    // so the threshold has to sit above that level; zeroing true values below
    // it costs roughly eps / 5 of orthogonality.
    double zero_clamp_eps = 3e-9;
    bool zero_clamp = true;
};

/**
 * Orthonormal discrete Legendre polynomials via the normalized three-term
 * recurrence. Row n has degree n in k; the last column is positive.
 *
 * The recurrence runs in extended precision: with a 64-bit mantissa the tail
 * noise stays near 3e-10, which lets the clamp sit low enough for gram errors
 * below 1e-9. In plain double the clamp cannot go below about 5e-8.
 */
inline BasisMatrix mk_dlop_basis(std::size_t q, std::size_t N, const DlopParams& params = {}) {
    static_assert(std::numeric_limits<long double>::digits >= 64, "DLOP recurrence needs extended long double");
    using T = long double;
    detail::check_shape(q, N);
    if (!(params.zero_clamp_eps > 0.0 && params.zero_clamp_eps < 1e-6)) {
        throw ArgumentError("zero_clamp_eps must lie in (0, 1e-6)");
    }
    const T dN = static_cast<T>(N);
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> L =
        Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(N));
    L.row(0).setConstant(1 / std::sqrt(dN));
    if (q > 1) {
        const T c = std::sqrt(3 * (dN - 1) / (dN * (dN + 1)));
        for (std::size_t k = 0; k < N; ++k) {
            L(1, k) = (2 * static_cast<T>(k) - dN + 1) / (dN - 1) * c;
        }
    }
    std::vector<char> dead(N, 0);
    const T eps = params.zero_clamp_eps;
    for (std::size_t n = 2; n < q; ++n) {
        const T dn = static_cast<T>(n);
        const T r1 = (2 * dn + 1) * (dN - dn) / ((2 * dn - 1) * (dN + dn));
        const T r2 = (2 * dn + 1) * (dN - dn) * (dN - dn + 1) / ((2 * dn - 3) * (dN + dn) * (dN + dn - 1));
        const T a = (2 * dn - 1) / (dn * (dN - dn)) * std::sqrt(r1);
        const T b = (dn - 1) * (dN + dn - 1) / (dn * (dN - dn)) * std::sqrt(r2);
        for (std::size_t k = 0; k < N; ++k) {
            if (params.zero_clamp) {
                if (!dead[k] && std::abs(L(n - 1, k)) < eps && std::abs(L(n - 2, k)) < eps) {
                    dead[k] = 1;
                }
                if (dead[k]) continue;
            }
            const T x = 2 * static_cast<T>(k) - dN + 1;
            L(n, k) = a * x * L(n - 1, k) - b * L(n - 2, k);
        }
    }
    BasisMatrix out;
    out.data = L.cast<double>();
    out.kind = BasisKind::Dlop;
    if (!out.data.allFinite() || out.data.cwiseAbs().maxCoeff() > 1.0) {
        out.diagnostics.warnings.push_back("DLOP recurrence rebounded (entries exceed 1)");
    }
    return out;
}

namespace detail {

using boost::multiprecision::cpp_int;

// |num| / den as a double without overflowing either operand.
inline double ratio_to_double(const cpp_int& num, const cpp_int& den) {
    if (num == 0) return 0.0;
    const bool neg = num < 0;
    cpp_int a = neg ? cpp_int(-num) : num;
    cpp_int b = den;
    const long sa = static_cast<long>(boost::multiprecision::msb(a));
    const long sb = static_cast<long>(boost::multiprecision::msb(b));
    const long ka = std::max(0L, sa - 62);
    const long kb = std::max(0L, sb - 62);
    a >>= ka;
    b >>= kb;
    const double r = std::ldexp(a.convert_to<double>() / b.convert_to<double>(),
                                static_cast<int>(ka - kb));
    return neg ? -r : r;
}

// a_i = (-1)^i C(n,i) C(n+i,i) (N-1-i)^(n-i), i = 0..n
inline std::vector<cpp_int> dlop_closed_form_terms(std::size_t n, std::size_t N) {
    std::vector<cpp_int> c(n + 1), g(n + 1), a(n + 1);
    c[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        c[i + 1] = -c[i] * static_cast<long>(n - i) * static_cast<long>(n + i + 1);
        c[i + 1] /= static_cast<long>((i + 1) * (i + 1));
    }
    g[n] = 1;
    for (std::size_t i = n; i-- > 0;) g[i] = g[i + 1] * static_cast<long>(N - 1 - i);
    for (std::size_t i = 0; i <= n; ++i) a[i] = c[i] * g[i];
    return a;
}

// Sum_i a_i k^(i) by nested falling-factorial Horner.
inline cpp_int falling_horner(const std::vector<cpp_int>& a, std::size_t k) {
    const std::size_t m = std::min(a.size() - 1, k);
    cpp_int acc = a[m];
    for (std::size_t i = m; i-- > 0;) {
        acc *= static_cast<long>(k - i);
        acc += a[i];
    }
    return acc;
}

}  // namespace detail

/**
 * Unnormalized closed-form DLOP value L_n(k; N) in the coordinate where
 * L_n(0; N) = 1 / sqrt(N). Row n of mk_dlop_basis is proportional to
 * L_n(N - 1 - k; N).
 */
inline double dlop_closed_form_value(std::size_t n, std::size_t k, std::size_t N) {
    if (n >= N || k >= N) throw ArgumentError("dlop_closed_form_value needs n, k < N");
    const auto a = detail::dlop_closed_form_terms(n, N);
    return detail::ratio_to_double(detail::falling_horner(a, k), a[0]) /
           std::sqrt(static_cast<double>(N));
}

/**
 * DLOP matrix from the closed form, summed exactly over big integers and
 * normalized in floating point at the end.
 */
inline BasisMatrix mk_dlop_basis_direct(std::size_t q, std::size_t N) {
    detail::check_shape(q, N);
    Matrix L(q, N);
    for (std::size_t n = 0; n < q; ++n) {
        const auto a = detail::dlop_closed_form_terms(n, N);
        // a[0] = (N-1)^(n) is the common denominator; the ratio stays within
        // double range even when the integers do not.
        for (std::size_t k = 0; k < N; ++k) {
            L(n, N - 1 - k) = detail::ratio_to_double(detail::falling_horner(a, k), a[0]);
        }
        const double mx = L.row(n).cwiseAbs().maxCoeff();
        L.row(n) /= mx;
    }
    auto b = make_basis(std::move(L), BasisKind::Dlop);
    b.row_norms.resize(0);
    return b;
}

/**
 * Test oracle: each row is the degree-n polynomial orthogonal to all
 * lower-degree rows with value 1 at the last column, solved exactly over
 * rationals. Restricted to N <= 16.
 */
inline BasisMatrix mk_dlop_basis_linsys(std::size_t q, std::size_t N) {
    using boost::multiprecision::cpp_rational;
    detail::check_shape(q, N);
    if (N > 16) throw ArgumentError("mk_dlop_basis_linsys supports N <= 16 only");

    // moments[m] = sum_k k^m
    std::vector<cpp_rational> moments(2 * N, cpp_rational(0));
    for (std::size_t k = 0; k < N; ++k) {
        cpp_rational p = 1;
        for (std::size_t m = 0; m < 2 * N; ++m) {
            moments[m] += p;
            p *= static_cast<long>(k);
        }
    }
    Matrix L(q, N);
    for (std::size_t n = 0; n < q; ++n) {
        const std::size_t s = n + 1;
        std::vector<std::vector<cpp_rational>> M(s, std::vector<cpp_rational>(s + 1, 0));
        // orthogonal to k^0 .. k^(n-1)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < s; ++j) M[r][j] = moments[r + j];
        // value 1 at k = N - 1
        cpp_rational p = 1;
        for (std::size_t j = 0; j < s; ++j) {
            M[n][j] = p;
            p *= static_cast<long>(N - 1);
        }
        M[n][s] = 1;
        for (std::size_t col = 0; col < s; ++col) {
            std::size_t piv = col;
            while (M[piv][col] == 0) ++piv;
            std::swap(M[piv], M[col]);
            for (std::size_t r = 0; r < s; ++r) {
                if (r == col || M[r][col] == 0) continue;
                const cpp_rational f = M[r][col] / M[col][col];
                for (std::size_t j = col; j <= s; ++j) M[r][j] -= f * M[col][j];
            }
        }
        for (std::size_t k = 0; k < N; ++k) {
            cpp_rational v = 0, kp = 1;
            for (std::size_t j = 0; j < s; ++j) {
                v += M[j][s] / M[j][j] * kp;
                kp *= static_cast<long>(k);
            }
            L(n, k) = v.convert_to<double>();
        }
    }
    auto b = make_basis(std::move(L), BasisKind::Dlop);
    b.row_norms.resize(0);
    return b;
}

}  // namespace tempo_bases
