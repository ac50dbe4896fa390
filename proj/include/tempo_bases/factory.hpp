#pragma once

#include <cstddef>

#include "basis.hpp"
#include "dlop.hpp"
#include "ldn.hpp"

namespace tempo_bases {

/** Construct any built-in basis by kind with default parameters. */
inline BasisMatrix mk_basis(BasisKind kind, std::size_t q, std::size_t N) {
    switch (kind) {
        case BasisKind::Fourier: return mk_fourier_basis(q, N);
        case BasisKind::Cosine: return mk_cosine_basis(q, N);
        case BasisKind::LegendreNaive: return mk_leg_basis(q, N, Sampling::Naive);
        case BasisKind::LegendreMean: return mk_leg_basis(q, N, Sampling::Mean);
        case BasisKind::Dlop: return mk_dlop_basis(q, N);
        case BasisKind::Haar: return mk_haar_basis(q, N);
        case BasisKind::Ldn: return mk_ldn_basis(q, N);
        case BasisKind::LdnEuler: return mk_ldn_basis_euler(q, N);
        case BasisKind::Filtered:
        case BasisKind::Custom: break;
    }
    throw ArgumentError("basis kind '" + std::string(kind_name(kind)) + "' has no constructor");
}

}  // namespace tempo_bases
