#include <random>

#include <gtest/gtest.h>

#include <tempo_bases.hpp>

#include "oracles.hpp"

using namespace tempo_bases;

TEST(PseudoInverse, OrthonormalIsTranspose) {
    const auto E = mk_cosine_basis(7, 20);
    EXPECT_LE(oracle::max_abs(pseudo_inverse(E) - E.data.transpose()), 1e-12);
}

TEST(PseudoInverse, RightInverseOfNonOrthogonalBasis) {
    const auto E = mk_leg_basis(4, 16, Sampling::Mean);
    EXPECT_LE(oracle::max_abs(E.data * pseudo_inverse(E) - Matrix::Identity(4, 4)), 1e-10);
    // agrees with the normal-equation formula on this well-conditioned case
    const Matrix ref = E.data.transpose() * (E.data * E.data.transpose()).inverse();
    EXPECT_LE(oracle::max_abs(pseudo_inverse(E) - ref), 1e-10);
}

TEST(PseudoInverse, RankDeficientIsAnError) {
    Matrix m(2, 4);
    m << 1, 2, 3, 4, 1, 2, 3, 4;
    try {
        pseudo_inverse(custom_basis(m));
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("singular value ratio"), std::string::npos);
    }
}

TEST(Bandlimit, RowSpaceSignalUnchanged) {
    std::mt19937_64 rng(1);
    const auto E = mk_dlop_basis(6, 30);
    const Vector u = E.data.transpose() * oracle::gaussian(6, rng);
    EXPECT_LE(oracle::max_abs(bandlimit_signal(E, u) - u), 1e-10);
}

TEST(Bandlimit, FullOrthonormalBasisIsIdentity) {
    std::mt19937_64 rng(2);
    const auto E = mk_fourier_basis(12, 12);
    const Vector u = oracle::gaussian(12, rng);
    EXPECT_LE(oracle::max_abs(bandlimit_signal(E, u) - u), 1e-12);
}

TEST(Bandlimit, ImpulseThroughLowFourierRows) {
    const auto E = mk_fourier_basis(3, 8);
    Vector e0 = Vector::Zero(8);
    e0[0] = 1.0;
    // brute force: sum over rows of <row, e0> row
    Vector ref = Vector::Zero(8);
    for (Eigen::Index r = 0; r < 3; ++r) ref += E.data(r, 0) * E.data.row(r).transpose();
    EXPECT_LE(oracle::max_abs(bandlimit_signal(E, e0) - ref), 1e-14);
}

TEST(Bandlimit, CoefficientsPreserved) {
    std::mt19937_64 rng(3);
    for (auto kind : {BasisKind::Ldn, BasisKind::LegendreMean, BasisKind::Haar}) {
        auto E = mk_basis(kind, 5, 24);
        const Vector u = oracle::gaussian(24, rng);
        EXPECT_LE(oracle::max_abs(apply_basis(E, bandlimit_signal(E, u)) - apply_basis(E, u)), 1e-10);
        E.convention = ColumnConvention::FirReversed;
        EXPECT_LE(oracle::max_abs(apply_basis(E, bandlimit_signal(E, u)) - apply_basis(E, u)), 1e-10);
    }
}

TEST(LowpassBasis, FourierIsFixedPoint) {
    const auto F = mk_fourier_basis(9, 40);
    EXPECT_LE(oracle::max_abs(lowpass_filter_basis(F, 9).data - F.data), 1e-12);
}

TEST(LowpassBasis, FilteredDlopLosesOrthogonality) {
    const auto f = lowpass_filter_basis(mk_dlop_basis(40, 100), 40);
    EXPECT_GT(max_offdiag(gram(f.as_basis())), 1e-3);
}

TEST(LowpassBasis, EquivalentToFilteringTheSignal) {
    std::mt19937_64 rng(4);
    const auto E = mk_haar_basis(8, 32);
    const auto f = lowpass_filter_basis(E, 11);
    const auto F = mk_fourier_basis(11, 32);
    const Vector u = oracle::gaussian(32, rng);
    const Vector u_f = F.data.transpose() * (F.data * u);
    EXPECT_LE(oracle::max_abs(f.data * u - E.data * u_f), 1e-10);
    EXPECT_LE(oracle::max_abs(f.data * u - E.data * bandlimit_signal(F, u)), 1e-10);
}

TEST(LowpassBasis, RenormalizedCopyHasUnitRows) {
    const auto b = lowpass_filter_basis(mk_cosine_basis(10, 50), 6).as_basis();
    EXPECT_LE((b.data.rowwise().norm().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_EQ(b.kind, BasisKind::Filtered);
}

TEST(LowpassBasis, RejectsBadOrder) {
    EXPECT_THROW(lowpass_filter_basis(mk_cosine_basis(4, 10), 11), ArgumentError);
    EXPECT_THROW(lowpass_filter_basis(mk_cosine_basis(4, 10), 0), ArgumentError);
}

TEST(FilteringProperties, ReconstructionLemmaBothDirections) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t N = 4 + rng() % 29;
        const std::size_t q = 1 + rng() % std::min<std::size_t>(8, N - 1);
        const auto E = (trial % 2) ? mk_fourier_basis(q, N) : mk_cosine_basis(q, N);
        const Matrix P = E.data.transpose() * E.data;
        const Vector inside = E.data.transpose() * oracle::gaussian(q, rng);
        EXPECT_LE(oracle::max_abs(P * inside - inside), 1e-10);
        Vector outside = oracle::gaussian(N, rng);
        outside -= P * outside;
        outside /= outside.norm();
        EXPECT_GT((P * outside - outside).norm(), 1e-6);
    }
}

TEST(FilteringProperties, ProjectorIdempotent) {
    const auto E = mk_leg_basis(7, 33);
    const Matrix P = pseudo_inverse(E) * E.data;
    EXPECT_LE(oracle::max_abs(P * P - P), 1e-10);
}

TEST(FilteringProperties, FilteringTwiceIsFilteringOnce) {
    const auto once = lowpass_filter_basis(mk_dlop_basis(20, 64), 13);
    const auto twice = lowpass_filter_basis(custom_basis(once.data), 13);
    // custom_basis normalizes rows; compare directions row by row
    for (Eigen::Index r = 0; r < once.data.rows(); ++r) {
        const Vector a = once.data.row(r).normalized();
        EXPECT_LE(oracle::max_abs(twice.data.row(r).transpose() - a), 1e-10) << r;
    }
}
