#pragma once

#include <array>
#include <complex>
#include <vector>

#include "lattice_model.hpp"

namespace qhlat {

/// Free-lattice dispersion E = 2 - 2 cos(kappa). Band-edge wavenumbers
/// (kappa <= 0 or >= pi) are rejected: zero group velocity, no scattering
/// problem to pose.
double dispersion(double kappa);

enum class Incidence { Left, Right };

struct ScatteringResult {
    double kappa = 0;
    double energy = 0;
    std::complex<double> reflection{0, 0};
    std::complex<double> transmission{0, 0};
    double unitarity_deficit = 0;
    double condition = 0; // condition number of the matching system
};

/// Solves the discrete scattering problem with plane-wave boundary
/// conditions: a unit wave comes in from the incidence side, psi matches
/// e^{ikn} + R e^{-ikn} on that side and T e^{ikn} beyond the defect.
/// The matching sites sit matching_pad rows further out than the default
/// (defect half-width + 2).
ScatteringResult solve_scattering(const LatticeModel& model, double kappa,
                                  Incidence incidence = Incidence::Left,
                                  long matching_pad = 0);

struct TransferResult {
    std::complex<double> reflection{0, 0};
    std::complex<double> transmission{0, 0};
    // Transfer across the defect in the position-referenced plane-wave
    // basis (row-major 2x2); the identity for a free lattice.
    std::array<std::complex<double>, 4> plane_wave_matrix{};
};

/// Independent route to (R, T): product of per-site 2x2 transfer steps
/// across the defect region, no linear system involved.
TransferResult transfer_matrix(const LatticeModel& model, double kappa);

struct SingularityScanRow {
    double g = 0;
    double max_deficit = 0;
    double max_condition = 0;
    // conditioning relative to the free lattice at the same kappa and
    // matching geometry; isolates the defect-induced growth from the
    // band-edge baseline and diverges toward |g| = 1
    double max_condition_ratio = 0;
};

struct ScanGrid {
    int points = 50;
    double kappa_min = 0.1;
    double kappa_max = 0; // defaults to pi - kappa_min when <= 0
};

/// Unitarity deficit and matching-system conditioning over a coupling range;
/// the conditioning diverges toward the spectral singularity at |g| = 1.
std::vector<SingularityScanRow> singularity_scan(ModelKind kind, int m_sep,
                                                 const std::vector<double>& g_values,
                                                 long window, const ScanGrid& grid = {});

std::vector<double> kappa_grid(const ScanGrid& grid);

} // namespace qhlat
