#include "scattering.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>

namespace qhlat {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Complex = std::complex<double>;

Complex plane_wave(double kappa, long n) { return std::exp(Complex(0.0, kappa * n)); }

// Tridiagonal coefficient with free tails continued past the window.
double hop_coefficient(const LatticeModel& model, long i, long j) {
    const long n = model.window;
    if (std::labs(i) <= n && std::labs(j) <= n)
        return model.matrix.at(i, j).to_double();
    if (i == j)
        return 2.0;
    return std::labs(i - j) == 1 ? -1.0 : 0.0;
}

long matching_halfwidth(const LatticeModel& model, long pad) {
    const long n0 = model.defect_half_width() + 2 + pad;
    if (n0 + 1 > model.window)
        fail(ErrorCode::InvalidArgument, "window too small for the matching region");
    return n0;
}

} // namespace

double dispersion(double kappa) {
    if (!(kappa > 0.0) || !(kappa < kPi))
        fail(ErrorCode::InvalidArgument,
             "wavenumber must lie strictly inside (0, pi); band edges have zero group velocity");
    return 2.0 - 2.0 * std::cos(kappa);
}

ScatteringResult solve_scattering(const LatticeModel& model, double kappa, Incidence incidence,
                                  long matching_pad) {
    const double energy = dispersion(kappa);
    const long n0 = matching_halfwidth(model, matching_pad);
    // sign of the incoming wavenumber: +kappa from the left, -kappa from the right
    const double k = incidence == Incidence::Left ? kappa : -kappa;

    // Unknowns: psi_{-n0+1..n0-1}, then R, then T.
    const long interior = 2 * n0 - 1;
    const Eigen::Index m_size = static_cast<Eigen::Index>(interior) + 2;
    const Eigen::Index idx_r = m_size - 2;
    const Eigen::Index idx_t = m_size - 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m_size, m_size);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(m_size);

    // psi_j on the incidence side carries the incoming wave and R; beyond the
    // defect it carries T alone.
    auto add_psi = [&](Eigen::Index row, long j, double weight) {
        if (weight == 0.0)
            return;
        const bool in_side = incidence == Incidence::Left ? j <= -n0 : j >= n0;
        const bool out_side = incidence == Incidence::Left ? j >= n0 : j <= -n0;
        if (!in_side && !out_side) {
            a(row, static_cast<Eigen::Index>(j + n0 - 1)) += weight;
        } else if (in_side) {
            b(row) -= weight * plane_wave(k, j);
            a(row, idx_r) += weight * plane_wave(-k, j);
        } else {
            a(row, idx_t) += weight * plane_wave(k, j);
        }
    };

    for (long m = -n0; m <= n0; ++m) {
        const Eigen::Index row = static_cast<Eigen::Index>(m + n0);
        for (long j = m - 1; j <= m + 1; ++j)
            add_psi(row, j, hop_coefficient(model, m, j));
        add_psi(row, m, -energy);
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()(m_size - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e14)
        fail(ErrorCode::SingularMatrix,
             "matching system is singular (spectral singularity or bound state at this energy)");
    const Eigen::VectorXcd x = svd.solve(b);

    ScatteringResult result;
    result.kappa = kappa;
    result.energy = energy;
    result.reflection = x(idx_r);
    result.transmission = x(idx_t);
    result.unitarity_deficit =
        std::abs(std::norm(result.reflection) + std::norm(result.transmission) - 1.0);
    result.condition = smax / smin;
    return result;
}

TransferResult transfer_matrix(const LatticeModel& model, double kappa) {
    const double energy = dispersion(kappa);
    const long n0 = matching_halfwidth(model, 0);

    // state (psi_{m+1}, psi_m) = M_m (psi_m, psi_{m-1})
    Eigen::Matrix2cd p = Eigen::Matrix2cd::Identity();
    for (long m = -n0; m <= n0; ++m) {
        const double alpha = hop_coefficient(model, m, m - 1);
        const double beta = hop_coefficient(model, m, m + 1);
        const double diag = hop_coefficient(model, m, m);
        Eigen::Matrix2cd step;
        step << Complex((energy - diag) / beta, 0.0), Complex(-alpha / beta, 0.0),
            Complex(1.0, 0.0), Complex(0.0, 0.0);
        p = step * p;
    }
    if (!p.allFinite())
        fail(ErrorCode::SingularMatrix,
             "transfer product overflowed across the defect region");

    auto basis = [&](long m) {
        Eigen::Matrix2cd w;
        w << plane_wave(kappa, m), plane_wave(-kappa, m), plane_wave(kappa, m - 1),
            plane_wave(-kappa, m - 1);
        return w;
    };
    // entry state sits at (psi_{-n0}, psi_{-n0-1}), exit at (psi_{n0+1}, psi_{n0})
    const Eigen::Matrix2cd pw = basis(n0 + 1).inverse() * p * basis(-n0);

    TransferResult result;
    result.plane_wave_matrix = {pw(0, 0), pw(0, 1), pw(1, 0), pw(1, 1)};
    if (std::abs(pw(1, 1)) == 0.0)
        fail(ErrorCode::SingularMatrix, "transfer matrix is degenerate at this energy");
    result.reflection = -pw(1, 0) / pw(1, 1);
    result.transmission = pw.determinant() / pw(1, 1);
    return result;
}

std::vector<double> kappa_grid(const ScanGrid& grid) {
    if (grid.points < 1)
        fail(ErrorCode::InvalidArgument, "grid needs at least one point");
    const double hi = grid.kappa_max > 0.0 ? grid.kappa_max : kPi - grid.kappa_min;
    if (!(grid.kappa_min > 0.0) || !(hi < kPi) || !(grid.kappa_min <= hi))
        fail(ErrorCode::InvalidArgument, "kappa grid must lie strictly inside (0, pi)");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(grid.points));
    if (grid.points == 1) {
        out.push_back(grid.kappa_min);
        return out;
    }
    const double step = (hi - grid.kappa_min) / (grid.points - 1);
    for (int k = 0; k < grid.points; ++k)
        out.push_back(grid.kappa_min + step * k);
    return out;
}

std::vector<SingularityScanRow> singularity_scan(ModelKind kind, int m_sep,
                                                 const std::vector<double>& g_values,
                                                 long window, const ScanGrid& grid) {
    std::vector<SingularityScanRow> rows;
    const std::vector<double> kappas = kappa_grid(grid);
    const LatticeModel free_model = free_laplacian(window);
    std::map<long, std::vector<double>> baselines; // free-lattice conditioning per matching size
    for (double g : g_values) {
        LatticeModel model;
        switch (kind) {
        case ModelKind::PointDefect:
            model = point_defect(Rational::from_double(g), window);
            break;
        case ModelKind::TwoCenter:
            model = two_center(Rational::from_double(g), m_sep, window);
            break;
        default:
            fail(ErrorCode::InvalidArgument, "singularity scan covers the defect models");
        }
        const long pad = model.defect_half_width(); // same matching size for the baseline
        auto [it, fresh] = baselines.try_emplace(pad);
        if (fresh)
            for (double kappa : kappas)
                it->second.push_back(
                    solve_scattering(free_model, kappa, Incidence::Left, pad).condition);
        const std::vector<double>& baseline = it->second;
        SingularityScanRow row;
        row.g = g;
        for (std::size_t k = 0; k < kappas.size(); ++k) {
            const ScatteringResult r = solve_scattering(model, kappas[k]);
            row.max_deficit = std::max(row.max_deficit, r.unitarity_deficit);
            row.max_condition = std::max(row.max_condition, r.condition);
            row.max_condition_ratio = std::max(row.max_condition_ratio, r.condition / baseline[k]);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qhlat
