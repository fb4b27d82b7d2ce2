#pragma once

#include <vector>

#include "band_matrix.hpp"
#include "rational.hpp"

namespace qhlat {

enum class ModelKind { FreeLaplacian, PointDefect, TwoCenter, MultiParam };

const char* model_kind_name(ModelKind kind);

/// Discretized lattice Hamiltonian H = -Laplacian + V on the window -N..N.
/// All models are tridiagonal with constant diagonal 2 (lattice units,
/// energy band E in [0,4]); the defect sits in the off-diagonal couplings.
struct LatticeModel {
    ModelKind kind = ModelKind::FreeLaplacian;
    Rational g{0};                // PointDefect / TwoCenter coupling
    int half_separation = 0;      // TwoCenter M (centers roughly 2M apart)
    std::vector<Rational> params; // MultiParam couplings, outward from the center
    long window = 0;
    BandMatrix<Rational> matrix{0};

    /// Largest |row| touched by a defect bond; the tails beyond are free.
    long defect_half_width() const;

    /// Physical site label of an internal index. MultiParam lives on the
    /// odd-integer lattice without a zero site, so internal i maps to 2i+1;
    /// the other models use the index itself.
    long site_label(long internal) const {
        return kind == ModelKind::MultiParam ? 2 * internal + 1 : internal;
    }

    BandMatrix<double> matrix_float() const { return to_float(matrix); }
};

/// -Laplacian: diagonal 2, off-diagonals -1.
LatticeModel free_laplacian(long window);

/// Single defect at the center: the two bonds touching site 0 become
/// -1-g (toward the center column) and -1+g (away from it).
LatticeModel point_defect(const Rational& g, long window);

/// Two antisymmetric defect bonds (-g above / +g below on the left, mirrored
/// on the right) separated by 2M-3 free columns. M = 1 degenerates to the
/// single-defect model.
LatticeModel two_center(const Rational& g, int m_sep, long window);

/// Multiparametric two-diagonal defect on the odd-site lattice: the bond at
/// distance j from the center carries -p_j above and +p_j below the diagonal.
/// Couplings with |p| >= 1 are accepted but make the diagonal metric
/// indefinite; callers interested in positivity should keep |p_j| < 1.
LatticeModel multiparam(const std::vector<Rational>& params, long window);

} // namespace qhlat
