#pragma once

#include "band_matrix.hpp"
#include "signed_sqrt.hpp"

namespace qhlat {

/// Explicit reference form of the R-band metric, R = 1..7, transcribed
/// diagonal by diagonal from the known solutions (each nonvanishing diagonal
/// is all ones except for a central R-plet of closed-form coefficients).
/// Deliberately independent of the general diamond-rule assembly so the two
/// can be checked against each other entry for entry.
BandMatrix<Rational> reference_theta(int bands, const Rational& g, long window);

/// Hermitized single-defect Hamiltonian for the diagonal Dyson map: the
/// kinetic matrix with the four defect couplings replaced by -sqrt(1-g^2),
/// kept exact as signed square roots.
BandMatrix<SignedSqrt> reference_hermitized_diagonal(const Rational& g, long window);

/// Hermitized single-defect Hamiltonian for the explicit tridiagonal Dyson
/// map: central diagonal block (2-g^2, 2g^2, 2-g^2), nearest couplings
/// -sqrt(2g^2(1-g^2)), second-neighbor corners 1-g^2, free elsewhere.
BandMatrix<double> reference_hermitized_tridiagonal(const Rational& g, long window);

} // namespace qhlat
