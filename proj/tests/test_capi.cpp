// Exercises the shared-library surface end to end: handles, error codes,
// thread-local messages and the JSON/CSV payloads.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "qhlat.h"

namespace {

std::string take(char* owned) {
    REQUIRE(owned != nullptr);
    std::string out(owned);
    qh_string_free(owned);
    return out;
}

struct Model {
    qh_model* ptr = nullptr;
    explicit Model(const char* descriptor) {
        REQUIRE(qh_model_create_json(descriptor, &ptr) == QH_OK);
    }
    ~Model() { qh_model_free(ptr); }
};

} // namespace

TEST_CASE("version and error message plumbing") {
    CHECK(qh_version() != nullptr);
    CHECK(qh_error_message() != nullptr);
}

TEST_CASE("model creation and serialization") {
    Model model("{\"model\":\"point_defect\",\"g\":\"1/2\",\"N\":20}");
    char* descriptor = nullptr;
    REQUIRE(qh_model_descriptor_json(model.ptr, &descriptor) == QH_OK);
    const std::string text = take(descriptor);
    CHECK(text.find("\"point_defect\"") != std::string::npos);
    CHECK(text.find("\"1/2\"") != std::string::npos);

    char* matrix = nullptr;
    REQUIRE(qh_model_matrix_json(model.ptr, QH_SCALAR_RATIONAL, &matrix) == QH_OK);
    CHECK(take(matrix).find("\"-3/2\"") != std::string::npos);

    qh_model* bad = nullptr;
    CHECK(qh_model_create_json("{\"model\":\"nope\",\"N\":4}", &bad) == QH_ERR_PARSE);
    CHECK(std::strlen(qh_error_message()) > 0);
    CHECK(qh_model_create_json("not json", &bad) == QH_ERR_PARSE);
    CHECK(qh_model_create_json(nullptr, &bad) == QH_ERR_INVALID_ARGUMENT);
}

TEST_CASE("closed-form metric, residual and positivity through the C API") {
    Model model("{\"model\":\"point_defect\",\"g\":\"1/2\",\"N\":20}");
    qh_metric* theta = nullptr;
    REQUIRE(qh_metric_closed_form("1/2", 7, 20, &theta) == QH_OK);

    char* max_abs = nullptr;
    int exact_zero = 0;
    REQUIRE(qh_metric_residual(model.ptr, theta, &max_abs, &exact_zero) == QH_OK);
    CHECK(take(max_abs) == "0");
    CHECK(exact_zero == 1);

    int positive = -1;
    long pivot = -1;
    qh_metric* theta2 = nullptr;
    REQUIRE(qh_metric_closed_form("1/2", 2, 20, &theta2) == QH_OK);
    REQUIRE(qh_metric_positivity(theta2, &positive, &pivot) == QH_OK);
    // an even-band metric has a zero main diagonal, never positive definite
    CHECK(positive == 0);
    qh_metric_free(theta2);

    char* json = nullptr;
    REQUIRE(qh_metric_to_json(theta, QH_SCALAR_RATIONAL, &json) == QH_OK);
    const std::string text = take(json);
    CHECK(text.find("\"closed_form\"") != std::string::npos);
    CHECK(text.find("\"rational\"") != std::string::npos);
    qh_metric_free(theta);

    qh_metric* rejected = nullptr;
    CHECK(qh_metric_closed_form("1/1", 1, 20, &rejected) == QH_ERR_SPECTRAL_SINGULARITY);
    CHECK(qh_metric_closed_form("3/2", 1, 20, &rejected) == QH_ERR_SPECTRAL_SINGULARITY);
    CHECK(qh_metric_closed_form("x", 1, 20, &rejected) == QH_ERR_PARSE);
}

TEST_CASE("solved metric equals the closed form") {
    Model model("{\"model\":\"point_defect\",\"g\":\"1/3\",\"N\":16}");
    qh_metric* solved = nullptr;
    qh_metric* closed = nullptr;
    REQUIRE(qh_metric_solve(model.ptr, 3, &solved) == QH_OK);
    REQUIRE(qh_metric_closed_form("1/3", 3, 16, &closed) == QH_OK);
    char* a = nullptr;
    char* b = nullptr;
    REQUIRE(qh_metric_to_json(solved, QH_SCALAR_RATIONAL, &a) == QH_OK);
    REQUIRE(qh_metric_to_json(closed, QH_SCALAR_RATIONAL, &b) == QH_OK);
    std::string sa = take(a), sb = take(b);
    // same matrix payload, different kind tags
    CHECK(sa.substr(sa.find("\"matrix\"")) == sb.substr(sb.find("\"matrix\"")));
    qh_metric_free(solved);
    qh_metric_free(closed);
}

TEST_CASE("superposition and the gamma positivity scan") {
    qh_metric* theta1 = nullptr;
    qh_metric* theta2 = nullptr;
    REQUIRE(qh_metric_closed_form("1/2", 1, 20, &theta1) == QH_OK);
    REQUIRE(qh_metric_closed_form("1/2", 2, 20, &theta2) == QH_OK);

    const qh_metric* members[2] = {theta1, theta2};
    const char* weights_pos[2] = {"2", "1/2"};
    qh_metric* combined = nullptr;
    REQUIRE(qh_metric_superpose(members, weights_pos, 2, QH_SCALAR_RATIONAL, &combined) == QH_OK);
    int positive = 0;
    REQUIRE(qh_metric_positivity(combined, &positive, nullptr) == QH_OK);
    CHECK(positive == 1);
    qh_metric_free(combined);

    const char* weights_bad[2] = {"2", "1.5"};
    qh_metric* indefinite = nullptr;
    REQUIRE(qh_metric_superpose(members, weights_bad, 2, QH_SCALAR_FLOAT, &indefinite) == QH_OK);
    long pivot = 0;
    REQUIRE(qh_metric_positivity(indefinite, &positive, &pivot) == QH_OK);
    CHECK(positive == 0);
    qh_metric_free(indefinite);
    qh_metric_free(theta1);
    qh_metric_free(theta2);

    char* report = nullptr;
    REQUIRE(qh_positivity_gamma_scan("1/2", 20, -1.5, 1.5, 0.25, &report) == QH_OK);
    const std::string text = take(report);
    CHECK(text.find("\"upper_boundary\"") != std::string::npos);
    CHECK(text.find("\"bracketed\":true") != std::string::npos);
}

TEST_CASE("diagonal multiparametric metric and locality report") {
    const char* params[3] = {"3/10", "1/5", "1/10"};
    qh_metric* diag = nullptr;
    REQUIRE(qh_metric_multiparam_diagonal(params, 3, 16, &diag) == QH_OK);
    Model model("{\"model\":\"multiparam\",\"params\":[\"3/10\",\"1/5\",\"1/10\"],\"N\":16}");
    int exact_zero = 0;
    REQUIRE(qh_metric_residual(model.ptr, diag, nullptr, &exact_zero) == QH_OK);
    CHECK(exact_zero == 1);
    char* locality = nullptr;
    REQUIRE(qh_metric_locality(diag, 3, &locality) == QH_OK);
    CHECK(take(locality).find("\"local\":false") != std::string::npos);
    qh_metric_free(diag);

    qh_metric* cross = nullptr;
    REQUIRE(qh_metric_cross_demo(1, 16, &cross) == QH_OK);
    int positive = 0;
    CHECK(qh_metric_positivity(cross, &positive, nullptr) == QH_ERR_INVALID_ARGUMENT);
    qh_metric_free(cross);
}

TEST_CASE("window mismatch surfaces as its own status") {
    Model model("{\"model\":\"point_defect\",\"g\":\"1/2\",\"N\":20}");
    qh_metric* theta = nullptr;
    REQUIRE(qh_metric_closed_form("1/2", 1, 16, &theta) == QH_OK);
    CHECK(qh_metric_residual(model.ptr, theta, nullptr, nullptr) == QH_ERR_WINDOW_MISMATCH);
    qh_metric_free(theta);
}

TEST_CASE("dyson maps and hermitization") {
    Model model("{\"model\":\"point_defect\",\"g\":\"1/2\",\"N\":16}");
    qh_metric* theta = nullptr;
    REQUIRE(qh_metric_closed_form("1/2", 1, 16, &theta) == QH_OK);

    qh_dyson* diag = nullptr;
    REQUIRE(qh_dyson_factor_diagonal(theta, &diag) == QH_OK);
    char* matrix = nullptr;
    char* report = nullptr;
    REQUIRE(qh_hermitize(model.ptr, diag, &matrix, &report) == QH_OK);
    CHECK(take(matrix).find("\"float\"") != std::string::npos);
    CHECK(take(report).find("\"diagonal_sqrt\"") != std::string::npos);
    qh_dyson_free(diag);

    qh_dyson* tri = nullptr;
    REQUIRE(qh_dyson_tridiagonal("1/2", 16, &tri) == QH_OK);
    char* tri_json = nullptr;
    REQUIRE(qh_dyson_to_json(tri, &tri_json) == QH_OK);
    CHECK(take(tri_json).find("omega_inverse") != std::string::npos);
    qh_dyson_free(tri);

    qh_dyson* singular = nullptr;
    CHECK(qh_dyson_tridiagonal("0", 16, &singular) == QH_ERR_SINGULAR);

    qh_dyson* chol = nullptr;
    REQUIRE(qh_dyson_cholesky(theta, &chol) == QH_OK);
    qh_dyson_free(chol);
    qh_metric_free(theta);

    char* iso = nullptr;
    REQUIRE(qh_isospectrality(model.ptr, "diagonal", 12, &iso) == QH_OK);
    const std::string iso_text = take(iso);
    CHECK(iso_text.find("\"spectra_real\":true") != std::string::npos);
    CHECK(qh_isospectrality(model.ptr, "nonsense", 12, &iso) == QH_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scattering surface") {
    double energy = 0.0;
    REQUIRE(qh_dispersion(1.5707963267948966, &energy) == QH_OK);
    CHECK(energy == doctest::Approx(2.0));
    CHECK(qh_dispersion(0.0, &energy) == QH_ERR_INVALID_ARGUMENT);

    Model model("{\"model\":\"point_defect\",\"g\":\"1/2\",\"N\":20}");
    double values[7];
    REQUIRE(qh_scatter(model.ptr, 1.0, values) == QH_OK);
    const double norm = values[1] * values[1] + values[2] * values[2] + values[3] * values[3] +
                        values[4] * values[4];
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(values[5] <= 1e-10);

    double rt[4];
    REQUIRE(qh_transfer(model.ptr, 1.0, rt) == QH_OK);
    CHECK(rt[0] == doctest::Approx(values[1]).epsilon(1e-9));
    CHECK(rt[2] == doctest::Approx(values[3]).epsilon(1e-9));

    char* csv = nullptr;
    char* summary = nullptr;
    REQUIRE(qh_scatter_grid_csv(model.ptr, 10, 0.1, 0.0, &csv, &summary) == QH_OK);
    const std::string table = take(csv);
    CHECK(table.rfind("kappa,E,Re(R),Im(R),Re(T),Im(T),deficit\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 11);
    CHECK(take(summary).find("\"max_deficit\"") != std::string::npos);
}

TEST_CASE("fixture replay through the C API") {
    int all_passed = 0;
    char* report = nullptr;
    REQUIRE(qh_verify_reference("1/2", 20, &all_passed, &report) == QH_OK);
    CHECK(all_passed == 1);
    CHECK(take(report).find("\"all_passed\":true") != std::string::npos);
    CHECK(qh_verify_reference("0", 20, &all_passed, &report) == QH_ERR_INVALID_ARGUMENT);
}

TEST_CASE("band-matrix interchange handles round-trip bit exactly") {
    qh_metric* theta = nullptr;
    REQUIRE(qh_metric_closed_form("9/10", 5, 14, &theta) == QH_OK);
    char* json = nullptr;
    REQUIRE(qh_metric_to_json(theta, QH_SCALAR_RATIONAL, &json) == QH_OK);
    std::string text = take(json);
    const std::string matrix_text = text.substr(text.find("\"matrix\":") + 9);
    const std::string payload = matrix_text.substr(0, matrix_text.size() - 1);
    qh_metric_free(theta);

    qh_matrix* first = nullptr;
    REQUIRE(qh_matrix_from_json(payload.c_str(), &first) == QH_OK);
    char* round = nullptr;
    REQUIRE(qh_matrix_to_json(first, &round) == QH_OK);
    const std::string round_text = take(round);

    qh_matrix* second = nullptr;
    REQUIRE(qh_matrix_from_json(round_text.c_str(), &second) == QH_OK);
    int equal = 0;
    REQUIRE(qh_matrix_equal(first, second, &equal) == QH_OK);
    CHECK(equal == 1);
    char* again = nullptr;
    REQUIRE(qh_matrix_to_json(second, &again) == QH_OK);
    CHECK(take(again) == round_text);

    qh_matrix_free(first);
    qh_matrix_free(second);

    qh_matrix* bad = nullptr;
    CHECK(qh_matrix_from_json("{\"window\":1}", &bad) == QH_ERR_PARSE);
}
