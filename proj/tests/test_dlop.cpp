#include <cmath>

#include <gtest/gtest.h>

#include <tempo_bases.hpp>

#include "oracles.hpp"

using namespace tempo_bases;

TEST(DlopRecurrence, FirstRowIsConstant) {
    for (std::size_t N : {1u, 5u, 64u}) {
        auto E = mk_dlop_basis(std::min<std::size_t>(3, N), N);
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(N); ++k) {
            EXPECT_NEAR(E.data(0, k), 1.0 / std::sqrt(static_cast<double>(N)), 1e-15);
        }
    }
}

TEST(DlopRecurrence, LinearRowOnThreePoints) {
    auto E = mk_dlop_basis(2, 3);
    EXPECT_NEAR(E.data(1, 0), -1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(E.data(1, 1), 0.0, 1e-15);
    EXPECT_NEAR(E.data(1, 2), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(DlopRecurrence, MatchesExactGramSchmidt) {
    for (std::size_t N : {4u, 9u, 20u, 33u}) {
        EXPECT_LE(oracle::max_abs(mk_dlop_basis(N, N).data - oracle::dlop_gram_schmidt(N, N)), 1e-10) << N;
    }
}

TEST(DlopRecurrence, FrozenHighPrecisionEntries) {
    // 50-digit Gram-Schmidt reference at N = 20, columns 0, 5 and 19.
    auto E = mk_dlop_basis(8, 20);
    EXPECT_NEAR(E.data(3, 0), -0.43760938779302368, 1e-14);
    EXPECT_NEAR(E.data(3, 5), 0.26690108171896491, 1e-14);
    EXPECT_NEAR(E.data(3, 19), 0.43760938779302368, 1e-14);
    EXPECT_NEAR(E.data(7, 0), -0.20629104374622708, 1e-14);
    EXPECT_NEAR(E.data(7, 5), -0.12358302465911746, 1e-14);
    EXPECT_NEAR(E.data(7, 19), 0.20629104374622708, 1e-14);
}

TEST(DlopRecurrence, ClampEpsValidated) {
    DlopParams p;
    p.zero_clamp_eps = 1e-6;
    EXPECT_THROW(mk_dlop_basis(4, 8, p), ArgumentError);
    p.zero_clamp_eps = 0.0;
    EXPECT_THROW(mk_dlop_basis(4, 8, p), ArgumentError);
    EXPECT_THROW(mk_dlop_basis(9, 8), ArgumentError);
}

TEST(DlopRecurrence, AgreesWithClosedFormAtFullSize) {
    EXPECT_LE(oracle::max_abs(mk_dlop_basis(256, 256).data - mk_dlop_basis_direct(256, 256).data), 1e-7);
}

TEST(DlopDirect, TwoByTwo) {
    auto E = mk_dlop_basis_direct(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(E.data(0, 0), r, 1e-15);
    EXPECT_NEAR(E.data(0, 1), r, 1e-15);
    EXPECT_NEAR(E.data(1, 0), -r, 1e-15);
    EXPECT_NEAR(E.data(1, 1), r, 1e-15);
}

TEST(DlopDirect, NormalizationAtOrigin) {
    // Unnormalized L_n(0; N) = 1 / sqrt(N) for every n.
    for (std::size_t n = 0; n < 12; ++n) {
        EXPECT_NEAR(dlop_closed_form_value(n, 0, 12), 1.0 / std::sqrt(12.0), 1e-15) << n;
    }
}

TEST(DlopDirect, OrthonormalToRounding) {
    for (std::size_t N : {64u, 200u}) {
        const auto E = mk_dlop_basis_direct(N, N);
        EXPECT_LE(oracle::max_abs(gram(E) - Matrix::Identity(N, N)), 1e-12) << N;
    }
}

TEST(DlopDirect, MatchesExactGramSchmidt) {
    EXPECT_LE(oracle::max_abs(mk_dlop_basis_direct(16, 16).data - oracle::dlop_gram_schmidt(16, 16)), 1e-14);
}

TEST(DlopLinsys, Trivial) {
    auto E = mk_dlop_basis_linsys(1, 1);
    EXPECT_EQ(E.data(0, 0), 1.0);
}

TEST(DlopLinsys, AgreesWithDirect) {
    for (std::size_t N = 1; N <= 16; ++N) {
        EXPECT_LE(oracle::max_abs(mk_dlop_basis_linsys(N, N).data - mk_dlop_basis_direct(N, N).data), 1e-14) << N;
    }
}

TEST(DlopLinsys, LinearRowOnFourPoints) {
    auto E = mk_dlop_basis_linsys(2, 4);
    const double s = E.data(1, 3) / 3.0;
    const double want[] = {-3, -1, 1, 3};
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(E.data(1, k), s * want[k], 1e-15);
}

TEST(DlopLinsys, RejectsLargeN) {
    EXPECT_THROW(mk_dlop_basis_linsys(4, 17), ArgumentError);
}

TEST(DlopProperties, OrthonormalOnGrid) {
    for (std::size_t N : {8u, 31u, 64u, 128u, 300u, 512u}) {
        for (std::size_t q : {std::size_t{1}, N / 3 + 1, N}) {
            const auto E = mk_dlop_basis(q, N);
            EXPECT_LE(oracle::max_abs(gram(E) - Matrix::Identity(q, q)), 1e-9) << q << "x" << N;
        }
    }
}

TEST(DlopProperties, ParitySymmetry) {
    const auto E = mk_dlop_basis(60, 97);
    for (Eigen::Index n = 0; n < E.data.rows(); ++n) {
        const double sign = (n % 2) ? -1.0 : 1.0;
        EXPECT_LE((E.data.row(n) - sign * E.data.row(n).reverse()).cwiseAbs().maxCoeff(), 1e-9) << n;
    }
}

TEST(DlopProperties, ZeroClampPreventsRebound) {
    DlopParams off;
    off.zero_clamp = false;
    EXPECT_GT(oracle::max_abs(mk_dlop_basis(128, 128, off).data), 10.0);
    const auto on = mk_dlop_basis(128, 128);
    EXPECT_LE(oracle::max_abs(on.data), 1.0);
    EXPECT_TRUE(on.diagnostics.warnings.empty());
}
