#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "band_matrix.hpp"
#include "lattice_model.hpp"

namespace qhlat {

enum class MetricKind { ClosedForm, Solved, Superposition, DiagonalMultiparam, CrossDemo };

const char* metric_kind_name(MetricKind kind);

/// A candidate metric operator Theta together with how it was produced.
/// Band metrics with R nonvanishing diagonals keep R in `bands`; the matrix
/// is exact (rational) unless it was assembled in float scan mode.
struct MetricSpec {
    MetricKind kind = MetricKind::ClosedForm;
    int bands = 0;                      // R; 0 when not a band-family metric
    std::optional<Rational> g;
    std::vector<Rational> coefficients; // superposition weights / diagonal couplings
    bool demo_only = false;             // quarantined from positivity/factorization
    std::variant<BandMatrix<Rational>, BandMatrix<double>> matrix{BandMatrix<Rational>(0)};

    bool is_exact() const { return std::holds_alternative<BandMatrix<Rational>>(matrix); }
    long window() const;
    const BandMatrix<Rational>& exact() const;
    BandMatrix<double> as_float() const;
};

MetricSpec to_float_spec(const MetricSpec& spec);

/// Closed-form coefficients of the band-metric family:
///   corner  A_k = (1+g)(1-2g^2)^{k-1}
///   wedge   B_k = (1-g^2)(1-2g^2)^{k-1}
///   center  z_{2k+1} = A_{k+1}/(1-g)
struct ThetaCoefficients {
    Rational corner;
    Rational wedge;
    Rational center;
};
ThetaCoefficients theta_coefficients(int k, const Rational& g);

/// Central anomalous element z_R = A_{(R+1)/2}/(1-g) of the odd-R metrics.
Rational theta_center_element(int bands, const Rational& g);

/// The R-band metric Theta_R of the single-defect model in closed form.
///
/// Entries follow a single diamond rule. Offsets R-1, R-3, ... carry the
/// nonvanishing diagonals (interlaced with zero diagonals); along them, with
/// s = (R+1-|i|-|j|)/2,
///     s <= 0                      -> 1 (far field)
///     s >= 1, min(|i|,|j|) >= 1   -> B_s
///     s >= 1, one index zero      -> A_s
///     i = j = 0 (odd R)           -> z_R
/// Rejects |g| >= 1, where the construction degenerates at the spectral
/// singularity.
MetricSpec closed_form_theta(int bands, const Rational& g, long window);

/// Same assembly without the spectral-singularity guard, for probing the
/// degenerate region (e.g. positivity failure past |g| = 1). Still needs
/// g != 1 when R is odd.
MetricSpec closed_form_theta_unchecked(int bands, const Rational& g, long window);

/// Solves the quasi-Hermiticity constraint H^dag Theta = Theta H as an exact
/// linear system over the R-band ansatz: unknowns are the entries inside the
/// central diamond |i|+|j| <= R+1 on the valid offsets, the far field is
/// pinned to 1 (unit-tail normalization). Throws on a rank-deficient or
/// inconsistent system (wrong ansatz parity or a spectral-singularity
/// parameter).
MetricSpec solve_band_metric(const LatticeModel& model, int bands);

/// Theta(alpha) = sum_j alpha_j Theta_j. Exact when every input is exact.
MetricSpec superpose(const std::vector<Rational>& alphas, const std::vector<const MetricSpec*>& thetas);
MetricSpec superpose(const std::vector<double>& alphas, const std::vector<const MetricSpec*>& thetas);

/// Diagonal metric of the multiparametric model: site products
///   theta_{+-(2m+1)} = (1 +- p_1) * prod_{j=2}^{m+1} (1 +- p_j)^2
///                      * prod_{j>m+1} (1 - p_j^2).
MetricSpec diagonal_multiparam_metric(const std::vector<Rational>& params, long window);

/// Cross-shaped long-range pattern (1s on |i-j| = k-1 and |i+j+1| = k-1).
/// Demonstrates the causality problem of strictly local non-Hermitian
/// potentials; quarantined from positivity and factorization.
MetricSpec cross_demo(int k, long window);

struct PositivityResult {
    bool positive;
    long pivot_site; // first failing pivot when not positive
};

/// Positive-definiteness of the truncated metric via the banded
/// factorization (exact pivots in rational mode).
PositivityResult positivity_check(const MetricSpec& spec);

struct LocalityReport {
    bool local;
    long diamond_radius; // largest |i|+|j| with an entry outside {0,1}; -1 if none
    int max_offset;      // largest |i-j| carrying a nonzero entry
    bool unit_tails;     // outside the diamond every nonzero entry equals 1
    bool diagonal_unit;  // c(j) = c(-j) = 1 beyond the diamond
    bool diamond_bounded;
    long scan_halfwidth;
};

/// Checks the asymptotic structure of a metric: nonzero entries outside the
/// central diamond must equal 1, the diagonal profile must be symmetric and
/// unit, and the couplings must stay within a bounded band. `margin` rows
/// and columns at the window edge are excluded from the scan.
LocalityReport asymptotic_locality_report(const MetricSpec& spec, long margin);

} // namespace qhlat
