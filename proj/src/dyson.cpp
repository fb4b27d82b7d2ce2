#include "dyson.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace qhlat {

const char* dyson_kind_name(DysonKind kind) {
    switch (kind) {
    case DysonKind::DiagonalSqrt: return "diagonal_sqrt";
    case DysonKind::ExplicitTridiagonal: return "explicit_tridiagonal";
    case DysonKind::TriangularFactor: return "triangular_factor";
    }
    return "?";
}

DysonMap factor_diagonal(const MetricSpec& theta) {
    if (theta.demo_only)
        fail(ErrorCode::InvalidArgument, "demo-only metric is quarantined from factorization");
    if (!theta.is_exact())
        fail(ErrorCode::ScalarKindMismatch, "diagonal factorization works on exact metrics");
    const BandMatrix<Rational>& m = theta.exact();
    if (m.bandwidth() != 0)
        fail(ErrorCode::InvalidArgument, "diagonal factorization needs a diagonal metric");

    DysonMap map;
    map.kind = DysonKind::DiagonalSqrt;
    map.window = m.window();
    map.omega = BandMatrix<double>(m.window());
    for (long i = -m.window(); i <= m.window(); ++i) {
        const Rational& v = m.at(i, i);
        if (v.sign() <= 0)
            fail(ErrorCode::NotPositiveDefinite, "diagonal metric has a non-positive entry");
        map.omega.set(i, i, std::sqrt(v.to_double()));
    }
    map.theta_diagonal = m;
    return map;
}

DysonMap explicit_tridiagonal_omega(const Rational& g, long window) {
    const Rational one(1);
    if (g.is_zero())
        fail(ErrorCode::SingularMatrix, "central element vanishes at g = 0; map is singular");
    if (g.abs() >= one)
        fail(ErrorCode::SpectralSingularity, "explicit map needs |g| < 1");
    if (window < 3)
        fail(ErrorCode::InvalidArgument, "window too small");

    DysonMap map;
    map.kind = DysonKind::ExplicitTridiagonal;
    map.window = window;
    map.boundary_warning = true;

    BandMatrix<Rational> rational_part(window);
    for (long i = -window; i <= window; ++i)
        if (i != 0)
            rational_part.set(i, i, one);
    for (long i = -window; i <= -2; ++i)
        rational_part.set(i, i + 1, -one);
    for (long i = 2; i <= window; ++i)
        rational_part.set(i, i - 1, -one);
    rational_part.set(-1, 0, -(one + g));
    rational_part.set(1, 0, -(one + g));

    const Rational rho = Rational(2) * g * g * (one + g) / (one - g); // squared central element
    map.center_square = rho;
    map.omega_rational = rational_part;

    map.omega = to_float(rational_part);
    map.omega.set(0, 0, std::sqrt(rho.to_double()));

    // Closed-form inverse: triangular blocks of ones and a central column.
    const Rational sigma = (one - g * g) / (Rational(2) * g * g);
    const Rational tau = (one - g) / (Rational(2) * g * g * (one + g));
    BandMatrix<double> inv(window);
    const double root_sigma = std::sqrt(sigma.to_double());
    for (long i = -window; i <= window; ++i) {
        if (i == 0) {
            inv.set(0, 0, std::sqrt(tau.to_double()));
            continue;
        }
        inv.set(i, 0, root_sigma);
        if (i < 0)
            for (long j = i; j <= -1; ++j)
                inv.set(i, j, 1.0);
        else
            for (long j = 1; j <= i; ++j)
                inv.set(i, j, 1.0);
    }
    map.omega_inverse = std::move(inv);
    return map;
}

DysonMap cholesky_dyson(const MetricSpec& theta) {
    if (theta.demo_only)
        fail(ErrorCode::InvalidArgument, "demo-only metric is quarantined from factorization");
    auto factor = std::visit([](const auto& m) { return banded_cholesky(m); }, theta.matrix);
    if (std::holds_alternative<PivotFailure>(factor))
        fail(ErrorCode::NotPositiveDefinite,
             "metric is not positive definite (pivot at site " +
                 std::to_string(std::get<PivotFailure>(factor).site) + ")");
    DysonMap map;
    map.kind = DysonKind::TriangularFactor;
    map.window = theta.window();
    map.omega = std::get<BandMatrix<double>>(std::move(factor));
    return map;
}

BandMatrix<Rational> omega_gram_exact(const DysonMap& map) {
    switch (map.kind) {
    case DysonKind::DiagonalSqrt:
        return *map.theta_diagonal;
    case DysonKind::ExplicitTridiagonal: {
        // The central row of the rational part is zero, so the cross terms
        // with the irrational center vanish and the gram matrix is rational:
        // Omega^dag Omega = R^dag R + rho * E_00.
        BandMatrix<Rational> gram = multiply(adjoint(*map.omega_rational), *map.omega_rational);
        gram.set(0, 0, gram.at(0, 0) + *map.center_square);
        return gram;
    }
    case DysonKind::TriangularFactor:
        fail(ErrorCode::ScalarKindMismatch, "triangular factors carry no exact payload");
    }
    fail(ErrorCode::InvalidArgument, "unknown dyson kind");
}

long hermitize_interior_halfwidth(const LatticeModel& model, const DysonMap& map) {
    const long bw = map.omega.bandwidth();
    return model.window - 2 * bw - model.matrix.bandwidth() - 3;
}

HermitizeResult hermitize(const LatticeModel& model, const DysonMap& map,
                          const HermitizeOptions& options) {
    if (model.window != map.window)
        fail(ErrorCode::WindowMismatch, "model and map windows differ");
    const BandMatrix<double> h = model.matrix_float();
    const BandMatrix<double> applied = multiply(map.omega, h);

    // partner rows solve Omega^T x = (row of applied); factor once.
    DenseLU<double> lu(adjoint(map.omega));
    const long n = model.window;
    const std::size_t size = static_cast<std::size_t>(2 * n + 1);
    BandMatrix<double> partner(n);
    std::vector<double> rhs(size, 0.0);
    for (long r = -n; r <= n; ++r) {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (long c = std::max(-n, r - applied.bandwidth()); c <= std::min(n, r + applied.bandwidth()); ++c)
            rhs[static_cast<std::size_t>(c + n)] = applied.at(r, c);
        const std::vector<double> row = lu.solve(rhs);
        for (long c = -n; c <= n; ++c) {
            const double v = row[static_cast<std::size_t>(c + n)];
            if (v != 0.0)
                partner.set(r, c, v);
        }
    }

    const long bound = hermitize_interior_halfwidth(model, map);
    double max_asym = 0.0;
    if (bound >= 0) {
        for (long i = -bound; i <= bound; ++i)
            for (long j = std::max(-bound, i - partner.bandwidth()); j <= std::min(bound, i + partner.bandwidth()); ++j)
                max_asym = std::max(max_asym, std::abs(partner.at(i, j) - partner.at(j, i)));
    }
    if (max_asym > options.tolerance)
        fail(ErrorCode::HermiticityViolation,
             "hermitized matrix is asymmetric on the interior (wrong factorization?)");
    return {std::move(partner), max_asym, bound};
}

BandMatrix<SignedSqrt> hermitize_diagonal_exact(const LatticeModel& model, const DysonMap& map) {
    if (map.kind != DysonKind::DiagonalSqrt || !map.theta_diagonal)
        fail(ErrorCode::InvalidArgument, "exact hermitization needs a diagonal square-root map");
    if (model.window != map.window)
        fail(ErrorCode::WindowMismatch, "model and map windows differ");
    const BandMatrix<Rational>& theta = *map.theta_diagonal;
    BandMatrix<SignedSqrt> partner(model.window);
    model.matrix.for_each_entry([&](long i, long j, const Rational& v) {
        if (v.is_zero())
            return;
        // sqrt(theta_i) H(i,j) / sqrt(theta_j), one product per entry
        partner.set(i, j, SignedSqrt(v.sign(), v * v * theta.at(i, i) / theta.at(j, j)));
    });
    return partner;
}

IsospectralityReport isospectrality_check(const BandMatrix<double>& h,
                                          const BandMatrix<double>& partner,
                                          double real_tolerance) {
    require_same_window(h, partner);
    const long n = h.window();
    const auto size = static_cast<Eigen::Index>(2 * n + 1);
    Eigen::MatrixXd hd = Eigen::MatrixXd::Zero(size, size);
    Eigen::MatrixXd pd = Eigen::MatrixXd::Zero(size, size);
    h.for_each_entry([&](long i, long j, double v) {
        hd(static_cast<Eigen::Index>(i + n), static_cast<Eigen::Index>(j + n)) = v;
    });
    partner.for_each_entry([&](long i, long j, double v) {
        pd(static_cast<Eigen::Index>(i + n), static_cast<Eigen::Index>(j + n)) = v;
    });

    Eigen::EigenSolver<Eigen::MatrixXd> hs(hd, true);
    Eigen::EigenSolver<Eigen::MatrixXd> ps(pd, false);

    double max_imag = 0.0;
    std::vector<double> he, pe;
    for (Eigen::Index k = 0; k < size; ++k) {
        max_imag = std::max(max_imag, std::abs(hs.eigenvalues()[k].imag()));
        he.push_back(hs.eigenvalues()[k].real());
        pe.push_back(ps.eigenvalues()[k].real());
    }
    std::sort(he.begin(), he.end());
    std::sort(pe.begin(), pe.end());
    double max_dev = 0.0;
    for (std::size_t k = 0; k < he.size(); ++k)
        max_dev = std::max(max_dev, std::abs(he[k] - pe[k]));

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(hs.eigenvectors());
    const double cond = svd.singularValues()(0) / svd.singularValues()(size - 1);

    IsospectralityReport report;
    report.max_deviation = max_dev;
    report.max_imag = max_imag;
    report.spectra_real = max_imag <= real_tolerance;
    report.eigenvector_condition = cond;
    report.ill_conditioned = cond > 10.0;
    return report;
}

} // namespace qhlat
