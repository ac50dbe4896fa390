#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "basis.hpp"
#include "ldn.hpp"

namespace tempo_bases {

/**
 * Per-sample FIR filter bank over the N most recent samples.
 *
 * The ring buffer stores every sample twice, N apart, so the current window
 * is always one contiguous oldest-to-newest span of length N.
 */
class SlidingFir {
public:
    explicit SlidingFir(BasisMatrix basis) : basis_(std::move(basis)), buf_(2 * basis_.N(), 0.0) {}

    const Vector& step(double u) {
        const std::size_t N = basis_.N();
        buf_[head_] = u;
        buf_[head_ + N] = u;
        head_ = (head_ + 1) % N;
        const Eigen::Map<const Vector> window(buf_.data() + head_, static_cast<Eigen::Index>(N));
        m_.noalias() = basis_.data * window;
        return m_;
    }

    /** Current window, oldest sample first. */
    [[nodiscard]] Vector window() const {
        return Eigen::Map<const Vector>(buf_.data() + head_, static_cast<Eigen::Index>(basis_.N()));
    }

    void reset() {
        std::fill(buf_.begin(), buf_.end(), 0.0);
        head_ = 0;
        m_.setZero();
    }

    [[nodiscard]] const BasisMatrix& basis() const { return basis_; }
    [[nodiscard]] const Vector& coefficients() const { return m_; }

private:
    BasisMatrix basis_;
    std::vector<double> buf_;
    std::size_t head_ = 0;
    Vector m_ = Vector::Zero(static_cast<Eigen::Index>(basis_.q()));
};

/** m <- A_d m + B_d u, O(q^2) per step. */
class SlidingLti {
public:
    explicit SlidingLti(DiscreteLti sys) : sys_(std::move(sys)), m_(Vector::Zero(sys_.B_d.size())) {}

    const Vector& step(double u) {
        tmp_.noalias() = sys_.A_d * m_;
        m_ = tmp_ + sys_.B_d * u;
        return m_;
    }

    void reset() { m_.setZero(); }
    [[nodiscard]] const Vector& state() const { return m_; }
    [[nodiscard]] const DiscreteLti& system() const { return sys_; }

private:
    DiscreteLti sys_;
    Vector m_;
    Vector tmp_;
};

namespace detail {

inline bool is_ldn_system(const LtiSystem& s) {
    const auto ref = mk_ldn_lti(static_cast<std::size_t>(s.A.rows()), 1.0);
    const Matrix As = s.A * s.theta;
    const Vector Bs = s.B * s.theta;
    return (As - ref.A).cwiseAbs().maxCoeff() <= 1e-12 * ref.A.cwiseAbs().maxCoeff() &&
           (Bs - ref.B).cwiseAbs().maxCoeff() <= 1e-12 * ref.B.cwiseAbs().maxCoeff();
}

}  // namespace detail

/**
 * Euler-discretized runner. For the LDN system the feedback product uses
 *   (A m)_i = (2i+1) [ -sum_{j>=i} m_j + sum_{j<i} s_ij m_j ],
 *   s_ij = +1 if i - j is odd, -1 if even,
 * evaluated with one suffix sum and two parity-split prefix sums, so a step
 * costs O(q). Any other system runs the dense product.
 */
class SlidingEuler {
public:
    SlidingEuler(const LtiSystem& sys, std::size_t N)
        : dense_(discretize_euler(sys, N)),
          fast_(detail::is_ldn_system(sys)),
          m_(Vector::Zero(sys.B.size())),
          suffix_(static_cast<std::size_t>(sys.B.size()) + 1, 0.0),
          gain_(static_cast<std::size_t>(sys.B.size())) {
        for (std::size_t i = 0; i < gain_.size(); ++i) {
            gain_[i] = static_cast<double>(2 * i + 1) / static_cast<double>(N);
        }
        if (fast_) diverged_ = mk_ldn_basis_euler(gain_.size(), N).diagnostics.diverged;
    }

    const Vector& step(double u) {
        if (!fast_) {
            tmp_.noalias() = dense_.A_d * m_;
            m_ = tmp_ + dense_.B_d * u;
        } else {
            step_structured(u);
        }
        if (!m_.allFinite()) diverged_ = true;
        return m_;
    }

    void reset() {
        m_.setZero();
        ops_ = 0;
    }

    [[nodiscard]] bool dense_fallback() const { return !fast_; }
    [[nodiscard]] bool diverged() const { return diverged_; }
    [[nodiscard]] const Vector& state() const { return m_; }
    [[nodiscard]] const DiscreteLti& system() const { return dense_; }
    // Arithmetic operations performed by the structured path since the last reset.
    [[nodiscard]] std::uint64_t op_count() const { return ops_; }

private:
    void step_structured(double u) {
        const std::size_t q = gain_.size();
        suffix_[q] = 0.0;
        for (std::size_t i = q; i-- > 0;) suffix_[i] = suffix_[i + 1] + m_[static_cast<Eigen::Index>(i)];
        double even = 0.0;  // sum of m_j, j < i, j even
        double odd = 0.0;   // sum of m_j, j < i, j odd
        for (std::size_t i = 0; i < q; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double mi = m_[ii];
            // B_i = (2i+1)(-1)^i shares the parity sign with the prefix term.
            const double t = (i % 2 == 0) ? (odd - even + u) : (even - odd - u);
            m_[ii] = mi + gain_[i] * (t - suffix_[i]);
            if (i % 2 == 0) even += mi; else odd += mi;
        }
        // suffix: q adds; per row: 2 for t, 1 subtract, 1 multiply, 1 add, 1 prefix add
        ops_ += 7 * q;
    }

    DiscreteLti dense_;
    bool fast_;
    bool diverged_ = false;
    Vector m_;
    Vector tmp_;
    std::vector<double> suffix_;
    std::vector<double> gain_;
    std::uint64_t ops_ = 0;
};

struct CrossoverRow {
    std::size_t q;
    std::size_t N;
    double lti_ops;  // q^2 per sample
    double fir_ops;  // 34 q log2(N) per sample, zero-delay FFT convolution
    bool lti_wins;   // strictly q < 34 log2(N)
};

inline std::vector<CrossoverRow> crossover_table(const std::vector<std::size_t>& Ns,
                                                 const std::vector<std::size_t>& qs) {
    std::vector<CrossoverRow> rows;
    for (auto N : Ns) {
        if (N == 0) throw ArgumentError("crossover_table needs N >= 1");
        for (auto q : qs) {
            const double dq = static_cast<double>(q);
            const double l = std::log2(static_cast<double>(N));
            rows.push_back({q, N, dq * dq, 34.0 * dq * l, dq < 34.0 * l});
        }
    }
    return rows;
}

}  // namespace tempo_bases
