#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tempo_bases {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/** Bad shapes, out-of-range parameters, malformed inputs. */
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** Singular systems, inadmissible logarithms, rank deficiency. */
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BasisKind {
    Fourier,
    Cosine,
    LegendreNaive,
    LegendreMean,
    Dlop,
    Haar,
    Ldn,
    LdnEuler,
    Filtered,
    Custom,
};

// TimeForward: column j multiplies u_j of a window ordered oldest to newest.
// FirReversed: the window is ordered newest first, so column j multiplies u_{N-1-j}.
enum class ColumnConvention { TimeForward, FirReversed };

enum class Sampling { Naive, Mean };

struct Diagnostics {
    std::vector<std::string> warnings;
    bool diverged = false;
};

/**
 * q x N matrix whose rows are unit-norm discrete basis functions.
 *
 * Column N-1 always belongs to the newest sample of the window; the
 * convention only describes how an input vector is laid out.
 */
struct BasisMatrix {
    Matrix data;
    BasisKind kind = BasisKind::Custom;
    ColumnConvention convention = ColumnConvention::TimeForward;
    // Row norms before normalization; empty when the rows were built unit-norm.
    Vector row_norms;
    Diagnostics diagnostics;

    [[nodiscard]] std::size_t q() const { return static_cast<std::size_t>(data.rows()); }
    [[nodiscard]] std::size_t N() const { return static_cast<std::size_t>(data.cols()); }

    /** Undo row normalization when the pre-normalization norms are known. */
    [[nodiscard]] Matrix unnormalized() const {
        if (row_norms.size() != data.rows()) return data;
        return row_norms.asDiagonal() * data;
    }
};

inline std::string_view kind_name(BasisKind k) {
    switch (k) {
        case BasisKind::Fourier: return "fourier";
        case BasisKind::Cosine: return "cosine";
        case BasisKind::LegendreNaive: return "legendre-naive";
        case BasisKind::LegendreMean: return "legendre";
        case BasisKind::Dlop: return "dlop";
        case BasisKind::Haar: return "haar";
        case BasisKind::Ldn: return "ldn";
        case BasisKind::LdnEuler: return "ldn-euler";
        case BasisKind::Filtered: return "filtered";
        case BasisKind::Custom: return "custom";
    }
    return "custom";
}

inline BasisKind kind_from_name(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(BasisKind::Custom); ++i) {
        auto k = static_cast<BasisKind>(i);
        if (kind_name(k) == s) return k;
    }
    if (s == "legendre-mean") return BasisKind::LegendreMean;
    throw ArgumentError("unknown basis kind '" + std::string(s) + "'");
}

namespace detail {

inline void check_shape(std::size_t q, std::size_t N) {
    if (q == 0) throw ArgumentError("basis needs q >= 1");
    if (q > N) {
        throw ArgumentError("basis needs q <= N (got q=" + std::to_string(q) +
                            ", N=" + std::to_string(N) + ")");
    }
}

}  // namespace detail

/** Scale every row to unit Euclidean norm and return the original norms. */
inline Vector row_normalize(Matrix& m) {
    Vector norms = m.rowwise().norm();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (!(norms[r] > 0.0) || !std::isfinite(norms[r])) {
            throw NumericalError("cannot normalize row " + std::to_string(r) +
                                 " (norm " + std::to_string(norms[r]) + ")");
        }
        m.row(r) /= norms[r];
    }
    return norms;
}

inline BasisMatrix make_basis(Matrix raw, BasisKind kind,
                              ColumnConvention conv = ColumnConvention::TimeForward) {
    BasisMatrix b;
    b.row_norms = row_normalize(raw);
    b.data = std::move(raw);
    b.kind = kind;
    b.convention = conv;
    return b;
}

/** Wrap an arbitrary matrix; rows are normalized, norms recorded. */
inline BasisMatrix custom_basis(Matrix raw) {
    detail::check_shape(static_cast<std::size_t>(raw.rows()), static_cast<std::size_t>(raw.cols()));
    if (!raw.allFinite()) throw ArgumentError("basis matrix has non-finite entries");
    return make_basis(std::move(raw), BasisKind::Custom);
}

/**
 * Discrete Fourier basis. Row 0 is constant, then sin/cos pairs of
 * increasing frequency sampled at bin centres (k + 1/2) / N.
 */
inline BasisMatrix mk_fourier_basis(std::size_t q, std::size_t N) {
    detail::check_shape(q, N);
    const double pi = std::numbers::pi;
    const double dN = static_cast<double>(N);
    Matrix m(q, N);
    for (std::size_t r = 0; r < q; ++r) {
        const double f = static_cast<double>((r + 1) / 2);
        for (std::size_t k = 0; k < N; ++k) {
            const double x = (static_cast<double>(k) + 0.5) / dN;
            if (r == 0) {
                m(r, k) = 1.0;
            } else if (r % 2 == 1) {
                // sin(pi (k + 1/2)) = (-1)^k exactly, avoid the rounding of sin near pi multiples
                m(r, k) = (2 * (r + 1) / 2 == N) ? ((k % 2 == 0) ? 1.0 : -1.0)
                                                   : std::sin(2.0 * pi * f * x);
            } else {
                m(r, k) = std::cos(2.0 * pi * f * x);
            }
        }
    }
    return make_basis(std::move(m), BasisKind::Fourier);
}

/** Discrete cosine (DCT-II) basis. */
inline BasisMatrix mk_cosine_basis(std::size_t q, std::size_t N) {
    detail::check_shape(q, N);
    const double pi = std::numbers::pi;
    const double dN = static_cast<double>(N);
    Matrix m(q, N);
    for (std::size_t n = 0; n < q; ++n) {
        for (std::size_t k = 0; k < N; ++k) {
            m(n, k) = std::cos(pi * static_cast<double>(n) * (static_cast<double>(k) + 0.5) / dN);
        }
    }
    return make_basis(std::move(m), BasisKind::Cosine);
}

/**
 * Monomial coefficients of the Legendre polynomial p_n on [-1, 1],
 * lowest degree first, from (n+1) p_{n+1} = (2n+1) y p_n - n p_{n-1}.
 */
inline std::vector<double> legendre_coefficients(std::size_t n) {
    std::vector<double> prev{1.0};
    if (n == 0) return prev;
    std::vector<double> cur{0.0, 1.0};
    for (std::size_t d = 1; d < n; ++d) {
        std::vector<double> next(d + 2, 0.0);
        const double a = static_cast<double>(2 * d + 1);
        const double b = static_cast<double>(d);
        for (std::size_t i = 0; i <= d; ++i) next[i + 1] += a * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= b * prev[i];
        for (double& c : next) c /= static_cast<double>(d + 1);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace detail {

inline double horner(const std::vector<double>& c, double y) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
    return acc;
}

inline std::vector<double> antiderivative(const std::vector<double>& c) {
    std::vector<double> out(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) out[i + 1] = c[i] / static_cast<double>(i + 1);
    return out;
}

}  // namespace detail

/**
 * Sampled shifted Legendre basis, mirrored so that column 0 sits at x = 1.
 *
 * Naive sampling evaluates p~_n(x) = p_n(2x - 1) at x = 1 - (k + 1/2) / N.
 * Mean sampling averages p~_n over each sample interval through the exact
 * antiderivative. Rows are unit norm but not mutually orthogonal.
 */
inline BasisMatrix mk_leg_basis(std::size_t q, std::size_t N, Sampling scheme = Sampling::Mean) {
    detail::check_shape(q, N);
    const double dN = static_cast<double>(N);
    Matrix m(q, N);
    for (std::size_t n = 0; n < q; ++n) {
        const auto c = legendre_coefficients(n);
        if (scheme == Sampling::Naive) {
            for (std::size_t k = 0; k < N; ++k) {
                const double x = 1.0 - (static_cast<double>(k) + 0.5) / dN;
                m(n, k) = detail::horner(c, 2.0 * x - 1.0);
            }
        } else {
            // d/dx P(2x - 1) / 2 = p(2x - 1)
            const auto P = detail::antiderivative(c);
            auto F = [&](double x) { return 0.5 * detail::horner(P, 2.0 * x - 1.0); };
            for (std::size_t k = 0; k < N; ++k) {
                const double hi = 1.0 - static_cast<double>(k) / dN;
                const double lo = 1.0 - static_cast<double>(k + 1) / dN;
                m(n, k) = dN * (F(hi) - F(lo));
            }
        }
    }
    auto b = make_basis(std::move(m), scheme == Sampling::Naive ? BasisKind::LegendreNaive
                                                                 : BasisKind::LegendreMean);
    if (q > 50) {
        b.diagnostics.warnings.push_back(
            "Legendre rows above degree 50 lose accuracy in double-precision monomial form");
    }
    return b;
}

namespace detail {

// Support of w_n for n >= 1: positive half [lo, mid), negative half [mid, hi].
struct HaarSupport {
    double lo, mid, hi, height;
};

inline HaarSupport haar_support(std::size_t n) {
    std::size_t phi = 1;
    while (phi * 2 <= n) phi *= 2;
    const double p = static_cast<double>(phi);
    const double off = static_cast<double>(n) - p;
    return {off / p, (off + 0.5) / p, (off + 1.0) / p, std::sqrt(p)};
}

inline double overlap(double a, double b, double c, double d) {
    return std::max(0.0, std::min(b, d) - std::max(a, c));
}

}  // namespace detail

/** Haar wavelet function w_n on [0, 1], w_0 = 1. */
inline double haar_function(std::size_t n, double x) {
    if (n == 0) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    const auto s = detail::haar_support(n);
    if (x >= s.lo && x < s.mid) return s.height;
    if (x >= s.mid && x <= s.hi) return -s.height;
    return 0.0;
}

/**
 * Haar basis in scale-major, shift-minor order (w_0, w_1, w_2, ...).
 * Orthogonal exactly when q = N is a power of two.
 */
inline BasisMatrix mk_haar_basis(std::size_t q, std::size_t N, Sampling scheme = Sampling::Naive) {
    detail::check_shape(q, N);
    const double dN = static_cast<double>(N);
    Matrix m(q, N);
    for (std::size_t n = 0; n < q; ++n) {
        for (std::size_t k = 0; k < N; ++k) {
            const double a = static_cast<double>(k) / dN;
            const double b = static_cast<double>(k + 1) / dN;
            if (scheme == Sampling::Naive) {
                m(n, k) = haar_function(n, 0.5 * (a + b));
            } else if (n == 0) {
                m(n, k) = 1.0;
            } else {
                const auto s = detail::haar_support(n);
                m(n, k) = s.height * (detail::overlap(a, b, s.lo, s.mid) -
                                      detail::overlap(a, b, s.mid, s.hi)) * dN;
            }
        }
    }
    return make_basis(std::move(m), BasisKind::Haar);
}

/** m = E u under the matrix's column convention. */
inline Vector apply_basis(const BasisMatrix& E, const Vector& u) {
    if (static_cast<std::size_t>(u.size()) != E.N()) {
        throw ArgumentError("signal has " + std::to_string(u.size()) + " samples, basis expects " +
                            std::to_string(E.N()));
    }
    if (E.convention == ColumnConvention::TimeForward) return E.data * u;
    return E.data * u.reverse();
}

inline Matrix gram(const BasisMatrix& E) { return E.data * E.data.transpose(); }

inline double max_offdiag(const Matrix& g) {
    double mx = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            if (i != j) mx = std::max(mx, std::abs(g(i, j)));
    return mx;
}

}  // namespace tempo_bases
