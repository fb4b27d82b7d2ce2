#include "qhlat.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "dyson.hpp"
#include "json_io.hpp"
#include "lattice_model.hpp"
#include "metric_engine.hpp"
#include "scattering.hpp"
#include "verify.hpp"

struct qh_model {
    qhlat::LatticeModel value;
};
struct qh_metric {
    qhlat::MetricSpec value;
};
struct qh_dyson {
    qhlat::DysonMap value;
};
struct qh_matrix {
    qhlat::BandMatrixAny value;
};

namespace {

thread_local std::string t_error;

qh_status status_of(qhlat::ErrorCode code) {
    using qhlat::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return QH_ERR_INVALID_ARGUMENT;
    case ErrorCode::WindowMismatch: return QH_ERR_WINDOW_MISMATCH;
    case ErrorCode::ScalarKindMismatch: return QH_ERR_SCALAR_MISMATCH;
    case ErrorCode::SpectralSingularity: return QH_ERR_SPECTRAL_SINGULARITY;
    case ErrorCode::SingularMatrix: return QH_ERR_SINGULAR;
    case ErrorCode::NotPositiveDefinite: return QH_ERR_NOT_POSITIVE;
    case ErrorCode::HermiticityViolation: return QH_ERR_HERMITICITY;
    case ErrorCode::ParseError: return QH_ERR_PARSE;
    }
    return QH_ERR_INTERNAL;
}

template <typename F>
qh_status guarded(F&& body) {
    try {
        body();
        t_error.clear();
        return QH_OK;
    } catch (const qhlat::Error& e) {
        t_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        t_error = e.what();
        return QH_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what) {
    if (!ok)
        qhlat::fail(qhlat::ErrorCode::InvalidArgument, what);
}

qhlat::Rational parse_rational(const char* text) {
    require(text != nullptr, "null rational argument");
    return qhlat::Rational::parse_or_throw(text);
}

std::string sci(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

qhlat::LatticeModel rebuild_model(const qhlat::LatticeModel& m, long window) {
    switch (m.kind) {
    case qhlat::ModelKind::FreeLaplacian: return qhlat::free_laplacian(window);
    case qhlat::ModelKind::PointDefect: return qhlat::point_defect(m.g, window);
    case qhlat::ModelKind::TwoCenter: return qhlat::two_center(m.g, m.half_separation, window);
    case qhlat::ModelKind::MultiParam: return qhlat::multiparam(m.params, window);
    }
    qhlat::fail(qhlat::ErrorCode::InvalidArgument, "unknown model kind");
}

/// Closed-form metric matching the model family (used to derive Dyson maps).
qhlat::MetricSpec natural_diagonal_metric(const qhlat::LatticeModel& model) {
    switch (model.kind) {
    case qhlat::ModelKind::FreeLaplacian: {
        qhlat::MetricSpec spec;
        spec.kind = qhlat::MetricKind::ClosedForm;
        spec.bands = 1;
        spec.matrix = qhlat::BandMatrix<qhlat::Rational>::identity(model.window);
        return spec;
    }
    case qhlat::ModelKind::PointDefect:
        return qhlat::closed_form_theta(1, model.g, model.window);
    case qhlat::ModelKind::MultiParam:
        return qhlat::diagonal_multiparam_metric(model.params, model.window);
    case qhlat::ModelKind::TwoCenter:
        qhlat::fail(qhlat::ErrorCode::InvalidArgument,
                    "no closed-form metric is implemented for the two-center model");
    }
    qhlat::fail(qhlat::ErrorCode::InvalidArgument, "unknown model kind");
}

qhlat::DysonMap build_dyson(const qhlat::LatticeModel& model, const std::string& kind) {
    if (kind == "diagonal")
        return qhlat::factor_diagonal(natural_diagonal_metric(model));
    if (kind == "tridiagonal") {
        require(model.kind == qhlat::ModelKind::PointDefect,
                "tridiagonal map is defined for the point-defect model");
        return qhlat::explicit_tridiagonal_omega(model.g, model.window);
    }
    if (kind == "cholesky")
        return qhlat::cholesky_dyson(natural_diagonal_metric(model));
    qhlat::fail(qhlat::ErrorCode::InvalidArgument,
                "omega kind must be diagonal, tridiagonal or cholesky");
}

} // namespace

extern "C" {

const char* qh_version(void) { return "1.0.0"; }

const char* qh_error_message(void) { return t_error.c_str(); }

void qh_string_free(char* text) { std::free(text); }

/* ---- models ---- */

qh_status qh_model_create_json(const char* descriptor_json, qh_model** out) {
    return guarded([&] {
        require(descriptor_json != nullptr && out != nullptr, "null argument");
        auto j = nlohmann::json::parse(descriptor_json, nullptr, false);
        if (j.is_discarded())
            qhlat::fail(qhlat::ErrorCode::ParseError, "descriptor is not valid JSON");
        *out = new qh_model{qhlat::model_from_json(j)};
    });
}

void qh_model_free(qh_model* model) { delete model; }

qh_status qh_model_descriptor_json(const qh_model* model, char** out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        *out = dup_string(qhlat::model_to_json(model->value).dump());
    });
}

qh_status qh_model_matrix_json(const qh_model* model, qh_scalar_kind kind, char** out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        nlohmann::json j = kind == QH_SCALAR_RATIONAL
                               ? qhlat::band_to_json(model->value.matrix)
                               : qhlat::band_to_json(model->value.matrix_float());
        *out = dup_string(j.dump());
    });
}

/* ---- metrics ---- */

qh_status qh_metric_closed_form(const char* g, int bands, long window, qh_metric** out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = new qh_metric{qhlat::closed_form_theta(bands, parse_rational(g), window)};
    });
}

qh_status qh_metric_solve(const qh_model* model, int bands, qh_metric** out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        *out = new qh_metric{qhlat::solve_band_metric(model->value, bands)};
    });
}

qh_status qh_metric_superpose(const qh_metric* const* metrics, const char* const* weights,
                              size_t count, qh_scalar_kind kind, qh_metric** out) {
    return guarded([&] {
        require(metrics != nullptr && weights != nullptr && out != nullptr && count > 0,
                "null argument");
        std::vector<const qhlat::MetricSpec*> specs;
        for (size_t k = 0; k < count; ++k) {
            require(metrics[k] != nullptr, "null metric in superposition");
            specs.push_back(&metrics[k]->value);
        }
        if (kind == QH_SCALAR_RATIONAL) {
            std::vector<qhlat::Rational> alphas;
            for (size_t k = 0; k < count; ++k)
                alphas.push_back(parse_rational(weights[k]));
            *out = new qh_metric{qhlat::superpose(alphas, specs)};
        } else {
            std::vector<double> alphas;
            for (size_t k = 0; k < count; ++k) {
                require(weights[k] != nullptr, "null weight");
                alphas.push_back(std::strtod(weights[k], nullptr));
            }
            *out = new qh_metric{qhlat::superpose(alphas, specs)};
        }
    });
}

qh_status qh_metric_multiparam_diagonal(const char* const* params, size_t count, long window,
                                        qh_metric** out) {
    return guarded([&] {
        require(params != nullptr && out != nullptr, "null argument");
        std::vector<qhlat::Rational> p;
        for (size_t k = 0; k < count; ++k)
            p.push_back(parse_rational(params[k]));
        *out = new qh_metric{qhlat::diagonal_multiparam_metric(p, window)};
    });
}

qh_status qh_metric_cross_demo(int k, long window, qh_metric** out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = new qh_metric{qhlat::cross_demo(k, window)};
    });
}

void qh_metric_free(qh_metric* metric) { delete metric; }

qh_status qh_metric_to_json(const qh_metric* metric, qh_scalar_kind kind, char** out) {
    return guarded([&] {
        require(metric != nullptr && out != nullptr, "null argument");
        const qhlat::MetricSpec& spec = metric->value;
        if (kind == QH_SCALAR_RATIONAL && !spec.is_exact())
            qhlat::fail(qhlat::ErrorCode::ScalarKindMismatch,
                        "metric was assembled in float mode; no exact form to serialize");
        nlohmann::json j = kind == QH_SCALAR_FLOAT && spec.is_exact()
                               ? qhlat::metric_to_json(qhlat::to_float_spec(spec))
                               : qhlat::metric_to_json(spec);
        *out = dup_string(j.dump());
    });
}

qh_status qh_metric_residual(const qh_model* model, const qh_metric* metric, char** max_abs,
                             int* exact_zero) {
    return guarded([&] {
        require(model != nullptr && metric != nullptr, "null argument");
        std::string text;
        bool zero = false;
        if (metric->value.is_exact()) {
            auto report =
                qhlat::quasi_hermiticity_residual(model->value.matrix, metric->value.exact());
            text = report.interior_max_abs.str();
            zero = report.interior_max_abs.is_zero();
        } else {
            auto report = qhlat::quasi_hermiticity_residual(model->value.matrix_float(),
                                                            metric->value.as_float());
            text = sci(report.interior_max_abs);
            zero = report.interior_max_abs == 0.0;
        }
        if (max_abs != nullptr)
            *max_abs = dup_string(text);
        if (exact_zero != nullptr)
            *exact_zero = zero ? 1 : 0;
    });
}

qh_status qh_metric_positivity(const qh_metric* metric, int* positive, long* pivot_site) {
    return guarded([&] {
        require(metric != nullptr, "null metric");
        auto result = qhlat::positivity_check(metric->value);
        if (positive != nullptr)
            *positive = result.positive ? 1 : 0;
        if (pivot_site != nullptr)
            *pivot_site = result.pivot_site;
    });
}

qh_status qh_metric_locality(const qh_metric* metric, long margin, char** report_json) {
    return guarded([&] {
        require(metric != nullptr && report_json != nullptr, "null argument");
        auto report = qhlat::asymptotic_locality_report(metric->value, margin);
        *report_json = dup_string(qhlat::locality_to_json(report).dump());
    });
}

/* ---- Dyson maps ---- */

qh_status qh_dyson_factor_diagonal(const qh_metric* metric, qh_dyson** out) {
    return guarded([&] {
        require(metric != nullptr && out != nullptr, "null argument");
        *out = new qh_dyson{qhlat::factor_diagonal(metric->value)};
    });
}

qh_status qh_dyson_tridiagonal(const char* g, long window, qh_dyson** out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = new qh_dyson{qhlat::explicit_tridiagonal_omega(parse_rational(g), window)};
    });
}

qh_status qh_dyson_cholesky(const qh_metric* metric, qh_dyson** out) {
    return guarded([&] {
        require(metric != nullptr && out != nullptr, "null argument");
        *out = new qh_dyson{qhlat::cholesky_dyson(metric->value)};
    });
}

void qh_dyson_free(qh_dyson* map) { delete map; }

qh_status qh_dyson_to_json(const qh_dyson* map, char** out) {
    return guarded([&] {
        require(map != nullptr && out != nullptr, "null argument");
        *out = dup_string(qhlat::dyson_to_json(map->value).dump());
    });
}

qh_status qh_hermitize(const qh_model* model, const qh_dyson* map, char** matrix_json,
                       char** report_json) {
    return guarded([&] {
        require(model != nullptr && map != nullptr, "null argument");
        auto result = qhlat::hermitize(model->value, map->value);
        if (matrix_json != nullptr)
            *matrix_json = dup_string(qhlat::band_to_json(result.partner).dump());
        if (report_json != nullptr) {
            nlohmann::json j = {{"provenance", qhlat::dyson_kind_name(map->value.kind)},
                                {"max_asymmetry", result.max_asymmetry},
                                {"interior_halfwidth", result.interior_halfwidth},
                                {"boundary_warning", map->value.boundary_warning}};
            *report_json = dup_string(j.dump());
        }
    });
}

qh_status qh_isospectrality(const qh_model* model, const char* omega_kind, long small_window,
                            char** report_json) {
    return guarded([&] {
        require(model != nullptr && omega_kind != nullptr && report_json != nullptr,
                "null argument");
        qhlat::LatticeModel small = rebuild_model(model->value, small_window);
        qhlat::DysonMap map = build_dyson(small, omega_kind);
        auto hermitized = qhlat::hermitize(small, map);
        auto report = qhlat::isospectrality_check(small.matrix_float(), hermitized.partner);
        nlohmann::json j = {{"window", small_window},
                            {"omega", omega_kind},
                            {"max_deviation", report.max_deviation},
                            {"spectra_real", report.spectra_real},
                            {"max_imag", report.max_imag},
                            {"eigenvector_condition", report.eigenvector_condition},
                            {"ill_conditioned", report.ill_conditioned}};
        *report_json = dup_string(j.dump());
    });
}

/* ---- scattering ---- */

qh_status qh_dispersion(double kappa, double* energy) {
    return guarded([&] {
        require(energy != nullptr, "null output");
        *energy = qhlat::dispersion(kappa);
    });
}

qh_status qh_scatter(const qh_model* model, double kappa, double out_values[7]) {
    return guarded([&] {
        require(model != nullptr && out_values != nullptr, "null argument");
        auto r = qhlat::solve_scattering(model->value, kappa);
        out_values[0] = r.energy;
        out_values[1] = r.reflection.real();
        out_values[2] = r.reflection.imag();
        out_values[3] = r.transmission.real();
        out_values[4] = r.transmission.imag();
        out_values[5] = r.unitarity_deficit;
        out_values[6] = r.condition;
    });
}

qh_status qh_transfer(const qh_model* model, double kappa, double out_values[4]) {
    return guarded([&] {
        require(model != nullptr && out_values != nullptr, "null argument");
        auto r = qhlat::transfer_matrix(model->value, kappa);
        out_values[0] = r.reflection.real();
        out_values[1] = r.reflection.imag();
        out_values[2] = r.transmission.real();
        out_values[3] = r.transmission.imag();
    });
}

qh_status qh_scatter_grid_csv(const qh_model* model, int points, double kappa_min,
                              double kappa_max, char** csv, char** summary_json) {
    return guarded([&] {
        require(model != nullptr, "null model");
        qhlat::ScanGrid grid{points, kappa_min, kappa_max};
        const std::vector<double> kappas = qhlat::kappa_grid(grid);
        std::string text = "kappa,E,Re(R),Im(R),Re(T),Im(T),deficit\n";
        double max_deficit = 0.0;
        double max_condition = 0.0;
        for (double kappa : kappas) {
            auto r = qhlat::solve_scattering(model->value, kappa);
            text += sci(r.kappa) + "," + sci(r.energy) + "," + sci(r.reflection.real()) + "," +
                    sci(r.reflection.imag()) + "," + sci(r.transmission.real()) + "," +
                    sci(r.transmission.imag()) + "," + sci(r.unitarity_deficit) + "\n";
            max_deficit = std::max(max_deficit, r.unitarity_deficit);
            max_condition = std::max(max_condition, r.condition);
        }
        if (csv != nullptr)
            *csv = dup_string(text);
        if (summary_json != nullptr) {
            nlohmann::json j = {{"model", qhlat::model_to_json(model->value)},
                                {"points", static_cast<int>(kappas.size())},
                                {"kappa_min", kappas.front()},
                                {"kappa_max", kappas.back()},
                                {"max_deficit", max_deficit},
                                {"max_condition", max_condition}};
            *summary_json = dup_string(j.dump());
        }
    });
}

qh_status qh_positivity_gamma_scan(const char* g, long window, double gamma_min,
                                   double gamma_max, double gamma_step, char** report_json) {
    return guarded([&] {
        require(report_json != nullptr, "null output");
        require(gamma_step > 0.0 && gamma_max >= gamma_min, "bad gamma grid");
        const qhlat::Rational gr = parse_rational(g);
        const qhlat::MetricSpec theta1 = qhlat::closed_form_theta(1, gr, window);
        const qhlat::MetricSpec theta2 = qhlat::closed_form_theta(2, gr, window);
        auto positive_at = [&](double gamma) {
            auto spec = qhlat::superpose(std::vector<double>{2.0, gamma}, {&theta1, &theta2});
            return qhlat::positivity_check(spec);
        };

        nlohmann::json rows = nlohmann::json::array();
        for (double gamma = gamma_min; gamma <= gamma_max + 1e-12; gamma += gamma_step) {
            auto r = positive_at(gamma);
            rows.push_back({{"gamma", gamma}, {"positive", r.positive}, {"pivot_site", r.pivot_site}});
        }

        // bisect the positivity boundary on each side of gamma = 0
        auto bisect = [&](double inside, double outside) {
            nlohmann::json j;
            if (positive_at(outside).positive) {
                j["bracketed"] = false;
                return j;
            }
            double lo = inside, hi = outside;
            while (std::abs(hi - lo) > 1.0 / 128.0) {
                const double mid = 0.5 * (lo + hi);
                (positive_at(mid).positive ? lo : hi) = mid;
            }
            j["bracketed"] = true;
            j["positive_side"] = lo;
            j["failing_side"] = hi;
            return j;
        };
        nlohmann::json j = {{"g", gr.str()},
                            {"window", window},
                            {"rows", std::move(rows)},
                            {"upper_boundary", bisect(0.0, std::max(gamma_max, 2.0))},
                            {"lower_boundary", bisect(0.0, std::min(gamma_min, -2.0))}};
        *report_json = dup_string(j.dump());
    });
}

/* ---- fixture replay ---- */

qh_status qh_verify_reference(const char* g, long window, int* all_passed, char** report_json) {
    return guarded([&] {
        auto report = qhlat::verify_reference(parse_rational(g), window);
        if (all_passed != nullptr)
            *all_passed = report.all_passed() ? 1 : 0;
        if (report_json != nullptr) {
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& c : report.checks) {
                nlohmann::json row = {{"name", c.name}, {"passed", c.passed}};
                if (!c.detail.empty())
                    row["detail"] = c.detail;
                checks.push_back(std::move(row));
            }
            nlohmann::json j = {{"g", parse_rational(g).str()},
                                {"window", window},
                                {"all_passed", report.all_passed()},
                                {"checks", std::move(checks)}};
            *report_json = dup_string(j.dump());
        }
    });
}

/* ---- band-matrix interchange ---- */

qh_status qh_matrix_from_json(const char* json, qh_matrix** out) {
    return guarded([&] {
        require(json != nullptr && out != nullptr, "null argument");
        auto j = nlohmann::json::parse(json, nullptr, false);
        if (j.is_discarded())
            qhlat::fail(qhlat::ErrorCode::ParseError, "matrix text is not valid JSON");
        *out = new qh_matrix{qhlat::band_from_json(j)};
    });
}

void qh_matrix_free(qh_matrix* matrix) { delete matrix; }

qh_status qh_matrix_to_json(const qh_matrix* matrix, char** out) {
    return guarded([&] {
        require(matrix != nullptr && out != nullptr, "null argument");
        *out = dup_string(qhlat::band_to_json(matrix->value).dump());
    });
}

qh_status qh_matrix_equal(const qh_matrix* a, const qh_matrix* b, int* equal) {
    return guarded([&] {
        require(a != nullptr && b != nullptr && equal != nullptr, "null argument");
        *equal = a->value == b->value ? 1 : 0;
    });
}

} // extern "C"
