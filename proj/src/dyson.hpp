#pragma once

#include <optional>

#include "band_matrix.hpp"
#include "lattice_model.hpp"
#include "metric_engine.hpp"
#include "signed_sqrt.hpp"

namespace qhlat {

enum class DysonKind { DiagonalSqrt, ExplicitTridiagonal, TriangularFactor };

const char* dyson_kind_name(DysonKind kind);

/// Invertible map Omega with Omega^dag Omega = Theta, carrying the
/// Hamiltonian to its Hermitian isospectral partner h = Omega H Omega^{-1}.
///
/// The float matrix is always present. Where the construction permits, the
/// exact payload is kept as well: the diagonal Theta for a diagonal square
/// root, or the rational part plus the squared central element for the
/// explicit tridiagonal map (whose only irrational entry sits at the
/// center), so that Omega^dag Omega can be formed in rational arithmetic.
struct DysonMap {
    DysonKind kind = DysonKind::TriangularFactor;
    long window = 0;
    BandMatrix<double> omega{0};
    std::optional<BandMatrix<double>> omega_inverse; // explicit closed form when known
    std::optional<BandMatrix<Rational>> theta_diagonal;
    std::optional<BandMatrix<Rational>> omega_rational; // center entry stored as zero
    std::optional<Rational> center_square;
    bool boundary_warning = false; // sits on the |gamma| = 1 positivity boundary
};

/// Diagonal Dyson map: entrywise square root of a positive diagonal metric.
DysonMap factor_diagonal(const MetricSpec& theta);

/// The explicit asymmetric tridiagonal map for the boundary superposition
/// 2 Theta_1 - Theta_2: bidiagonal (1,-1) rows on the left half, junction
/// entries -1-g, central element sqrt(2g^2(1+g)/(1-g)), mirrored on the
/// right; built together with its closed-form inverse (triangular blocks of
/// ones and a central column of sqrt((1-g^2)/(2g^2))).
///
/// Requires 0 < |g| < 1: the central element vanishes at g = 0 and the
/// construction degenerates at the spectral singularity.
DysonMap explicit_tridiagonal_omega(const Rational& g, long window);

/// General factorization: upper-triangular banded Cholesky factor of the
/// metric. Throws NotPositiveDefinite when the truncated metric is not.
DysonMap cholesky_dyson(const MetricSpec& theta);

/// Omega^dag Omega in exact arithmetic (DiagonalSqrt and ExplicitTridiagonal
/// only; the triangular factor is float by nature).
BandMatrix<Rational> omega_gram_exact(const DysonMap& map);

struct HermitizeOptions {
    double tolerance = 1e-9; // interior asymmetry beyond this throws
};

struct HermitizeResult {
    BandMatrix<double> partner{0};
    double max_asymmetry = 0;
    long interior_halfwidth = 0;
};

/// Isospectral Hermitian partner h = Omega H Omega^{-1}, computed by applying
/// Omega and solving against it. Asserts Hermiticity of the interior window
/// (truncation pollutes a few edge rows, more for wider factors).
HermitizeResult hermitize(const LatticeModel& model, const DysonMap& map,
                          const HermitizeOptions& options = {});

/// Exact partner for a diagonal map: entries sqrt(theta_i) H(i,j) / sqrt(theta_j)
/// as signed square roots of rationals.
BandMatrix<SignedSqrt> hermitize_diagonal_exact(const LatticeModel& model, const DysonMap& map);

long hermitize_interior_halfwidth(const LatticeModel& model, const DysonMap& map);

struct IsospectralityReport {
    double max_deviation;         // between sorted spectra
    bool spectra_real;            // eigenvalues of H real within tolerance
    double max_imag;              // largest |Im eigenvalue| of H
    double eigenvector_condition; // condition of H's eigenvector matrix
    bool ill_conditioned;         // non-normality warning (near the singularity)
};

/// Compares the (truncated, dense) spectra of H and its partner on a small
/// window. Conjugation by an invertible truncated map preserves the finite
/// spectrum, so deviations beyond roundoff signal a broken factorization.
IsospectralityReport isospectrality_check(const BandMatrix<double>& h,
                                          const BandMatrix<double>& partner,
                                          double real_tolerance = 1e-8);

} // namespace qhlat
