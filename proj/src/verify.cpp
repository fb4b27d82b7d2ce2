#include "verify.hpp"

#include <cmath>
#include <sstream>

#include "dyson.hpp"
#include "metric_engine.hpp"
#include "reference_forms.hpp"

namespace qhlat {

namespace {

template <typename S>
bool equal_within(const BandMatrix<S>& a, const BandMatrix<S>& b, long halfwidth) {
    bool ok = true;
    auto scan = [&](const BandMatrix<S>& x, const BandMatrix<S>& y) {
        x.for_each_entry([&](long i, long j, const S& v) {
            if (std::labs(i) <= halfwidth && std::labs(j) <= halfwidth && !(v == y.at(i, j)))
                ok = false;
        });
    };
    scan(a, b);
    scan(b, a);
    return ok;
}

double max_abs_diff_within(const BandMatrix<double>& a, const BandMatrix<double>& b, long halfwidth) {
    double worst = 0.0;
    auto scan = [&](const BandMatrix<double>& x, const BandMatrix<double>& y) {
        x.for_each_entry([&](long i, long j, double v) {
            if (std::labs(i) <= halfwidth && std::labs(j) <= halfwidth)
                worst = std::max(worst, std::abs(v - y.at(i, j)));
        });
    };
    scan(a, b);
    scan(b, a);
    return worst;
}

} // namespace

VerifyReport verify_reference(const Rational& g, long window) {
    if (g.is_zero() || g.abs() >= Rational(1))
        fail(ErrorCode::InvalidArgument, "fixture replay needs 0 < |g| < 1");
    if (window < 16)
        fail(ErrorCode::InvalidArgument, "fixture replay needs a window of at least 16");

    VerifyReport report;
    auto record = [&](const std::string& name, bool passed, const std::string& detail = "") {
        report.checks.push_back({name, passed, detail});
    };

    const LatticeModel model = point_defect(g, window);

    std::vector<MetricSpec> thetas;
    for (int r = 1; r <= 7; ++r) {
        const MetricSpec theta = closed_form_theta(r, g, window);
        const bool matches = theta.exact() == reference_theta(r, g, window);
        record("theta_" + std::to_string(r) + "_matches_reference", matches);

        const auto residual = quasi_hermiticity_residual(model.matrix, theta.exact());
        record("theta_" + std::to_string(r) + "_residual_zero",
               residual.interior_max_abs.is_zero(),
               "interior max |H^dag T - T H| = " + residual.interior_max_abs.str());
        thetas.push_back(theta);
    }

    const DysonMap omega = explicit_tridiagonal_omega(g, window);

    // Omega^dag Omega must equal 2 Theta_1 - Theta_2 away from the edge rows.
    const MetricSpec target =
        superpose(std::vector<Rational>{Rational(2), Rational(-1)},
                  std::vector<const MetricSpec*>{&thetas[0], &thetas[1]});
    record("omega_gram_equals_boundary_superposition",
           equal_within(omega_gram_exact(omega), target.exact(), window - 1));

    // Omega * Omega^{-1} = identity on interior rows.
    {
        const BandMatrix<double> product = multiply(omega.omega, *omega.omega_inverse);
        const double err =
            max_abs_diff_within(product, BandMatrix<double>::identity(window), window - 1);
        std::ostringstream detail;
        detail << "max |Omega Omega^{-1} - I| = " << err;
        record("omega_times_inverse_is_identity", err <= 1e-12, detail.str());
    }

    // Hermitized partner for the diagonal map, exact comparison.
    {
        const DysonMap diag_map = factor_diagonal(thetas[0]);
        const auto partner = hermitize_diagonal_exact(model, diag_map);
        record("hermitized_diagonal_matches_reference",
               partner == reference_hermitized_diagonal(g, window));
    }

    // Hermitized partner for the tridiagonal map, float comparison.
    {
        const HermitizeResult result = hermitize(model, omega);
        const double err = max_abs_diff_within(
            result.partner, reference_hermitized_tridiagonal(g, window), result.interior_halfwidth);
        std::ostringstream detail;
        detail << "max interior deviation = " << err;
        record("hermitized_tridiagonal_matches_reference", err <= 1e-12, detail.str());
    }

    return report;
}

} // namespace qhlat
