#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <fstream>
#include <random>
#include <sstream>

#include "json_io.hpp"
#include "metric_engine.hpp"
#include "reference_forms.hpp"
#include "support.hpp"

using qhlat::BandMatrix;
using qhlat::MetricSpec;
using qhlat::Rational;

namespace {

const std::vector<Rational> kCouplings{Rational(1, 3), Rational(1, 2), Rational(9, 10)};

BandMatrix<Rational> load_fixture(int bands, const Rational& g) {
    std::ostringstream name;
    name << QHLAT_FIXTURE_DIR << "/theta" << bands << "_g" << g.raw().get_num().get_str() << "_"
         << g.raw().get_den().get_str() << ".json";
    std::ifstream in(name.str());
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    auto any = qhlat::band_from_json(j);
    REQUIRE(std::holds_alternative<BandMatrix<Rational>>(any));
    return std::get<BandMatrix<Rational>>(std::move(any));
}

double min_eigenvalue_dense(const BandMatrix<double>& m) {
    const long n = m.window();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    m.for_each_entry([&](long i, long j, double v) {
        d(static_cast<Eigen::Index>(i + n), static_cast<Eigen::Index>(j + n)) = v;
    });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace

TEST_CASE("coefficient table rows") {
    const Rational g(1, 2);
    SUBCASE("first row") {
        auto row = qhlat::theta_coefficients(1, g);
        CHECK(row.corner == Rational(1) + g);
        CHECK(row.wedge == Rational(1) - g * g);
        // z_3 = A_2 / (1-g)
        CHECK(row.center == (Rational(1) + g) * (Rational(1) - Rational(2) * g * g) / (Rational(1) - g));
    }
    SUBCASE("second row at g = 1/2") {
        auto row = qhlat::theta_coefficients(2, g);
        CHECK(row.corner == Rational(3, 4));
        CHECK(row.wedge == Rational(3, 8));
    }
    SUBCASE("Hermitian limit is all ones") {
        for (int k = 1; k <= 8; ++k) {
            auto row = qhlat::theta_coefficients(k, Rational(0));
            CHECK(row.corner == Rational(1));
            CHECK(row.wedge == Rational(1));
            CHECK(row.center == Rational(1));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(qhlat::theta_coefficients(0, g), qhlat::Error);
        CHECK_THROWS_AS(qhlat::theta_coefficients(1, Rational(1)), qhlat::Error);
    }
}

TEST_CASE("one-band metric is the identity with one anomalous center") {
    const Rational g(1, 2);
    auto theta = qhlat::closed_form_theta(1, g, 10);
    CHECK(theta.exact().bandwidth() == 0);
    CHECK(theta.exact().at(0, 0) == Rational(3)); // (1+g)/(1-g)
    for (long i = 1; i <= 10; ++i) {
        CHECK(theta.exact().at(i, i) == Rational(1));
        CHECK(theta.exact().at(-i, -i) == Rational(1));
    }
}

TEST_CASE("two-band metric has a zero main diagonal and corner pair on the superdiagonal") {
    auto theta = qhlat::closed_form_theta(2, Rational(1, 2), 10);
    const auto& m = theta.exact();
    CHECK(!m.has_diagonal(0));
    CHECK(m.at(-2, -1) == Rational(1));
    CHECK(m.at(-1, 0) == Rational(3, 2));
    CHECK(m.at(0, 1) == Rational(3, 2));
    CHECK(m.at(1, 2) == Rational(1));
}

TEST_CASE("seven-band metric center row reads (a, c, e, z, e, c, a)") {
    const Rational g(1, 2);
    auto theta = qhlat::closed_form_theta(7, g, 16);
    const auto& m = theta.exact();
    const Rational damp = Rational(1) - Rational(2) * g * g;
    const Rational a = Rational(1) + g;
    const Rational c = a * damp;
    const Rational e = a * damp * damp;
    const Rational z7 = a * damp * damp * damp / (Rational(1) - g);
    CHECK(m.at(0, -6) == a);
    CHECK(m.at(0, -4) == c);
    CHECK(m.at(0, -2) == e);
    CHECK(m.at(0, 0) == z7);
    CHECK(m.at(0, 2) == e);
    CHECK(m.at(0, 4) == c);
    CHECK(m.at(0, 6) == a);
}

TEST_CASE("three-band center at g = 1/3 evaluates to 14/9") {
    auto theta = qhlat::closed_form_theta(3, Rational(1, 3), 8);
    CHECK(theta.exact().at(0, 0) == Rational(14, 9));
}

TEST_CASE("closed form rejects the spectral-singularity region") {
    CHECK_THROWS_AS(qhlat::closed_form_theta(1, Rational(1), 10), qhlat::Error);
    CHECK_THROWS_AS(qhlat::closed_form_theta(3, Rational(-1), 10), qhlat::Error);
    CHECK_THROWS_AS(qhlat::closed_form_theta(2, Rational(3, 2), 10), qhlat::Error);
    // the unchecked variant builds past the singularity for diagnostics
    CHECK(qhlat::closed_form_theta_unchecked(1, Rational(3, 2), 10).exact().at(0, 0) ==
          Rational(-5));
}

TEST_CASE("nonzero offsets are exactly R-1, R-3, ... interlaced with zero diagonals") {
    for (int bands = 1; bands <= 9; ++bands) {
        auto theta = qhlat::closed_form_theta(bands, Rational(1, 3), 2 * bands + 4);
        std::vector<int> expected;
        for (int d = bands - 1; d >= 0; d -= 2) {
            if (d > 0)
                expected.push_back(-d);
            expected.push_back(d);
        }
        std::sort(expected.begin(), expected.end());
        CHECK(theta.exact().offsets() == expected);
        CHECK(adjoint(theta.exact()) == theta.exact());
        CHECK(parity_reflected(theta.exact()) == theta.exact());
    }
}

TEST_CASE("closed form reproduces the reference matrices entry for entry") {
    for (int bands = 1; bands <= 7; ++bands)
        for (const auto& g : kCouplings)
            CHECK(qhlat::closed_form_theta(bands, g, 16).exact() ==
                  qhlat::reference_theta(bands, g, 16));
}

TEST_CASE("closed form reproduces the frozen JSON fixtures") {
    for (int bands = 1; bands <= 7; ++bands)
        for (const auto& g : kCouplings)
            CHECK(qhlat::closed_form_theta(bands, g, 16).exact() == load_fixture(bands, g));
}

TEST_CASE("interior residual vanishes exactly for R up to 15") {
    for (const auto& g : kCouplings) {
        for (int bands = 1; bands <= 15; ++bands) {
            const long window = 2 * bands + 4;
            auto model = qhlat::point_defect(g, window);
            auto theta = qhlat::closed_form_theta(bands, g, window);
            auto report = qhlat::quasi_hermiticity_residual(model.matrix, theta.exact());
            CHECK(report.interior_max_abs.is_zero());
        }
    }
}

TEST_CASE("g = 0 closed form is all ones on its diagonals with zero residual") {
    auto theta = qhlat::closed_form_theta(5, Rational(0), 14);
    theta.exact().for_each_entry([&](long, long, const Rational& v) { CHECK(v == Rational(1)); });
    auto model = qhlat::free_laplacian(14);
    CHECK(qhlat::quasi_hermiticity_residual(model.matrix, theta.exact())
              .interior_max_abs.is_zero());
}

TEST_CASE("solver recovers the central anomaly at g = 1/3") {
    auto model = qhlat::point_defect(Rational(1, 3), 12);
    auto solved = qhlat::solve_band_metric(model, 1);
    CHECK(solved.exact().at(0, 0) == Rational(2));
}

TEST_CASE("solver equals the closed form for R = 1..9") {
    for (const auto& g : {Rational(1, 3), Rational(1, 2)}) {
        for (int bands = 1; bands <= 9; ++bands) {
            const long window = 2 * bands + 6;
            auto model = qhlat::point_defect(g, window);
            auto solved = qhlat::solve_band_metric(model, bands);
            auto closed = qhlat::closed_form_theta(bands, g, window);
            CHECK(solved.exact() == closed.exact());
        }
    }
}

TEST_CASE("solver on the free lattice returns the identity") {
    auto model = qhlat::free_laplacian(10);
    auto solved = qhlat::solve_band_metric(model, 1);
    CHECK(solved.exact() == BandMatrix<Rational>::identity(10));
}

TEST_CASE("solver reports the degenerate system at the spectral singularity") {
    auto model = qhlat::point_defect(Rational(1), 12);
    CHECK_THROWS_AS(qhlat::solve_band_metric(model, 1), qhlat::Error);
}

TEST_CASE("superposition basics") {
    const Rational g(1, 2);
    auto theta1 = qhlat::closed_form_theta(1, g, 12);
    auto theta2 = qhlat::closed_form_theta(2, g, 12);

    SUBCASE("weight (1, 0) returns the first metric") {
        auto s = qhlat::superpose(std::vector<Rational>{Rational(1), Rational(0)},
                                  {&theta1, &theta2});
        CHECK(s.exact() == theta1.exact());
    }
    SUBCASE("the boundary combination 2 Theta_1 - Theta_2 at g = 1/2") {
        auto s = qhlat::superpose(std::vector<Rational>{Rational(2), Rational(-1)},
                                  {&theta1, &theta2});
        CHECK(s.exact().at(0, 0) == Rational(6));
        CHECK(s.exact().at(1, 1) == Rational(2));
        CHECK(s.exact().at(-2, -2) == Rational(2));
        CHECK(s.exact().at(-1, 0) == Rational(-3, 2));
        CHECK(s.exact().at(0, 1) == Rational(-3, 2));
        CHECK(s.exact().at(-2, -1) == Rational(-1));
        CHECK(s.exact().at(1, 2) == Rational(-1));
    }
    SUBCASE("residual is linear in the superposition") {
        auto model = qhlat::point_defect(g, 12);
        std::mt19937 rng(13);
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<Rational> alphas{test_support::random_rational(rng),
                                         test_support::random_rational(rng)};
            auto s = qhlat::superpose(alphas, {&theta1, &theta2});
            auto report = qhlat::quasi_hermiticity_residual(model.matrix, s.exact());
            CHECK(report.interior_max_abs.is_zero());
        }
    }
    SUBCASE("window mismatch is rejected") {
        auto other = qhlat::closed_form_theta(1, g, 10);
        CHECK_THROWS_AS(
            qhlat::superpose(std::vector<Rational>{Rational(1), Rational(1)}, {&theta1, &other}),
            qhlat::Error);
    }
}

TEST_CASE("positivity of the tridiagonal superposition family") {
    const Rational g(1, 2);
    auto theta1 = qhlat::closed_form_theta(1, g, 20);
    auto theta2 = qhlat::closed_form_theta(2, g, 20);
    auto family = [&](double gamma) {
        return qhlat::superpose(std::vector<double>{2.0, gamma}, {&theta1, &theta2});
    };

    for (double gamma : {-0.9, 0.0, 0.9}) {
        auto spec = family(gamma);
        CHECK(qhlat::positivity_check(spec).positive);
        CHECK(min_eigenvalue_dense(spec.as_float()) > 0.0); // dense oracle agrees
    }
    for (double gamma : {-1.5, 1.5}) {
        auto spec = family(gamma);
        CHECK(!qhlat::positivity_check(spec).positive);
        CHECK(min_eigenvalue_dense(spec.as_float()) < 0.0);
    }
}

TEST_CASE("positivity fails past the spectral singularity") {
    auto bad = qhlat::closed_form_theta_unchecked(1, Rational(3, 2), 10);
    auto result = qhlat::positivity_check(bad);
    CHECK(!result.positive);
    CHECK(result.pivot_site == 0);
}

TEST_CASE("diagonal multiparametric metric") {
    SUBCASE("single coupling") {
        auto spec = qhlat::diagonal_multiparam_metric({Rational(1, 2)}, 8);
        CHECK(spec.exact().at(0, 0) == Rational(3, 2));  // site +1
        CHECK(spec.exact().at(-1, -1) == Rational(1, 2)); // site -1
        CHECK(spec.exact().at(3, 3) == Rational(3, 2));   // site +7, same sign factor
        CHECK(spec.exact().at(-4, -4) == Rational(1, 2));
    }
    SUBCASE("two couplings: site +3 value (1+a)(1+b)^2") {
        auto spec = qhlat::diagonal_multiparam_metric({Rational(1, 2), Rational(1, 3)}, 8);
        CHECK(spec.exact().at(1, 1) == Rational(8, 3)); // site +3
        CHECK(spec.exact().at(0, 0) == Rational(3, 2) * Rational(8, 9));  // (1+a)(1-b^2)
        CHECK(spec.exact().at(-2, -2) == Rational(1, 2) * Rational(4, 9)); // (1-a)(1-b)^2
    }
    SUBCASE("zero couplings give the identity") {
        auto spec = qhlat::diagonal_multiparam_metric({Rational(0), Rational(0)}, 8);
        CHECK(spec.exact() == BandMatrix<Rational>::identity(8));
    }
    SUBCASE("residual vanishes exactly for the three-coupling model") {
        const std::vector<Rational> params{Rational(3, 10), Rational(1, 5), Rational(1, 10)};
        auto model = qhlat::multiparam(params, 16);
        auto spec = qhlat::diagonal_multiparam_metric(params, 16);
        CHECK(qhlat::quasi_hermiticity_residual(model.matrix, spec.exact())
                  .interior_max_abs.is_zero());
    }
    SUBCASE("residual vanishes for random couplings") {
        std::mt19937 rng(41);
        std::uniform_int_distribution<long> num(-3, 3);
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<Rational> params;
            for (int k = 0; k < 3; ++k)
                params.emplace_back(num(rng), 7);
            auto model = qhlat::multiparam(params, 14);
            auto spec = qhlat::diagonal_multiparam_metric(params, 14);
            CHECK(qhlat::quasi_hermiticity_residual(model.matrix, spec.exact())
                      .interior_max_abs.is_zero());
        }
    }
}

TEST_CASE("cross-shaped demo pattern") {
    auto demo = qhlat::cross_demo(1, 10);
    const auto& m = demo.exact();
    for (long i = -10; i <= 10; ++i) {
        CHECK(m.at(i, i) == Rational(1));
        if (std::labs(-1 - i) <= 10)
            CHECK(m.at(i, -1 - i) == Rational(1));
    }
    CHECK(adjoint(m) == m);
    CHECK(demo.demo_only);

    SUBCASE("thickened variant shifts both arms one step outward") {
        auto demo2 = qhlat::cross_demo(2, 10);
        CHECK(demo2.exact().at(-3, -2) == Rational(1)); // band arm |i-j| = 1
        CHECK(demo2.exact().at(-2, 0) == Rational(1));  // cross arm i+j = -2
        CHECK(demo2.exact().at(-2, 2) == Rational(1));  // cross arm i+j = 0
        CHECK(demo2.exact().at(0, 2) == Rational(0));
        CHECK(adjoint(demo2.exact()) == demo2.exact());
    }
    SUBCASE("quarantined from positivity and factorization") {
        CHECK_THROWS_AS(qhlat::positivity_check(demo), qhlat::Error);
    }
}

TEST_CASE("asymptotic locality report") {
    const Rational g(1, 2);
    SUBCASE("diagonal defect metric is local with unit diagonal beyond the center") {
        auto theta = qhlat::closed_form_theta(1, g, 16);
        for (long j = 1; j <= 16; ++j) {
            CHECK(theta.exact().at(j, j) == Rational(1));
            CHECK(theta.exact().at(-j, -j) == Rational(1));
        }
        auto report = qhlat::asymptotic_locality_report(theta, 2);
        CHECK(report.local);
        CHECK(report.diamond_radius == 0);
    }
    SUBCASE("seven-band metric is local; everything beyond the diamond is 1") {
        auto theta = qhlat::closed_form_theta(7, g, 20);
        theta.exact().for_each_entry([&](long i, long j, const Rational& v) {
            if (std::labs(i) + std::labs(j) >= 8 && !v.is_zero())
                CHECK(v == Rational(1));
        });
        auto report = qhlat::asymptotic_locality_report(theta, 4);
        CHECK(report.local);
        CHECK(report.diamond_radius == 6);
        CHECK(report.unit_tails);
        CHECK(report.diagonal_unit);
    }
    SUBCASE("cross pattern couples remote sites and fails") {
        auto report = qhlat::asymptotic_locality_report(qhlat::cross_demo(1, 20), 4);
        CHECK(!report.local);
        CHECK(report.max_offset > 8);
    }
    SUBCASE("multiparametric diagonal metric keeps a long-range asymmetry") {
        auto spec = qhlat::diagonal_multiparam_metric({Rational(3, 10)}, 20);
        auto report = qhlat::asymptotic_locality_report(spec, 4);
        CHECK(!report.local);
        CHECK(!report.diamond_bounded);
    }
}

TEST_CASE("every produced metric keeps an exactly zero interior residual") {
    const Rational g(2, 5);
    const long window = 14;
    auto model = qhlat::point_defect(g, window);
    std::vector<MetricSpec> specs;
    specs.push_back(qhlat::closed_form_theta(4, g, window));
    specs.push_back(qhlat::solve_band_metric(model, 3));
    {
        auto t1 = qhlat::closed_form_theta(1, g, window);
        auto t3 = qhlat::closed_form_theta(3, g, window);
        specs.push_back(qhlat::superpose(std::vector<Rational>{Rational(5), Rational(1, 3)},
                                         {&t1, &t3}));
    }
    for (const auto& spec : specs)
        CHECK(qhlat::quasi_hermiticity_residual(model.matrix, spec.exact())
                  .interior_max_abs.is_zero());
}
