#include "json_io.hpp"

namespace qhlat {

namespace {

long require_long(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        fail(ErrorCode::ParseError, std::string("missing or non-integer field '") + key + "'");
    return j[key].get<long>();
}

Rational require_rational(const nlohmann::json& j, const char* key) {
    if (!j.contains(key))
        fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
    const auto& v = j[key];
    if (v.is_string())
        return Rational::parse_or_throw(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<long>());
    if (v.is_number_float())
        return Rational::from_double(v.get<double>());
    fail(ErrorCode::ParseError, std::string("field '") + key + "' is not a rational");
}

template <typename S, typename EntryWriter>
nlohmann::json band_to_json_impl(const BandMatrix<S>& m, const char* scalar, EntryWriter&& write) {
    nlohmann::json diags = nlohmann::json::object();
    for (int d : m.offsets()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const S& v : m.diagonal(d))
            arr.push_back(write(v));
        diags[std::to_string(d)] = std::move(arr);
    }
    return {{"window", m.window()}, {"scalar", scalar}, {"diagonals", std::move(diags)}};
}

template <typename S, typename EntryReader>
BandMatrix<S> band_from_json_impl(const nlohmann::json& j, EntryReader&& read) {
    const long window = require_long(j, "window");
    BandMatrix<S> m(window);
    if (!j.contains("diagonals") || !j["diagonals"].is_object())
        fail(ErrorCode::ParseError, "missing 'diagonals' object");
    for (const auto& [key, arr] : j["diagonals"].items()) {
        int offset = 0;
        try {
            offset = std::stoi(key);
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "diagonal key is not an integer offset: '" + key + "'");
        }
        if (!arr.is_array() || static_cast<long>(arr.size()) != 2 * window + 1 - std::abs(offset))
            fail(ErrorCode::ParseError, "diagonal '" + key + "' has the wrong length");
        auto& diag = m.ensure_diagonal(offset);
        for (std::size_t k = 0; k < arr.size(); ++k)
            diag[k] = read(arr[k]);
    }
    return m;
}

} // namespace

nlohmann::json band_to_json(const BandMatrix<Rational>& m) {
    return band_to_json_impl(m, "rational", [](const Rational& v) { return v.str(); });
}

nlohmann::json band_to_json(const BandMatrix<double>& m) {
    return band_to_json_impl(m, "float", [](double v) { return v; });
}

nlohmann::json band_to_json(const BandMatrixAny& m) {
    return std::visit([](const auto& b) { return band_to_json(b); }, m);
}

BandMatrixAny band_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("scalar") || !j["scalar"].is_string())
        fail(ErrorCode::ParseError, "band matrix JSON needs a 'scalar' tag");
    const std::string scalar = j["scalar"].get<std::string>();
    if (scalar == "rational")
        return band_from_json_impl<Rational>(j, [](const nlohmann::json& v) {
            if (!v.is_string())
                fail(ErrorCode::ParseError, "rational entries must be strings");
            return Rational::parse_or_throw(v.get<std::string>());
        });
    if (scalar == "float")
        return band_from_json_impl<double>(j, [](const nlohmann::json& v) {
            if (!v.is_number())
                fail(ErrorCode::ParseError, "float entries must be numbers");
            return v.get<double>();
        });
    fail(ErrorCode::ParseError, "unknown scalar kind '" + scalar + "'");
}

nlohmann::json model_to_json(const LatticeModel& model) {
    nlohmann::json j = {{"model", model_kind_name(model.kind)}, {"N", model.window}};
    switch (model.kind) {
    case ModelKind::FreeLaplacian:
        break;
    case ModelKind::PointDefect:
        j["g"] = model.g.str();
        break;
    case ModelKind::TwoCenter:
        j["g"] = model.g.str();
        j["M"] = model.half_separation;
        break;
    case ModelKind::MultiParam: {
        nlohmann::json params = nlohmann::json::array();
        for (const auto& p : model.params)
            params.push_back(p.str());
        j["params"] = std::move(params);
        break;
    }
    }
    return j;
}

LatticeModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("model") || !j["model"].is_string())
        fail(ErrorCode::ParseError, "model JSON needs a 'model' tag");
    std::string kind = j["model"].get<std::string>();
    for (auto& c : kind)
        if (c == '-')
            c = '_';
    const long window = require_long(j, "N");
    if (kind == "free")
        return free_laplacian(window);
    if (kind == "point_defect")
        return point_defect(require_rational(j, "g"), window);
    if (kind == "two_center")
        return two_center(require_rational(j, "g"), static_cast<int>(require_long(j, "M")), window);
    if (kind == "multiparam") {
        if (!j.contains("params") || !j["params"].is_array())
            fail(ErrorCode::ParseError, "multiparam model needs a 'params' array");
        std::vector<Rational> params;
        for (const auto& v : j["params"]) {
            if (v.is_string())
                params.push_back(Rational::parse_or_throw(v.get<std::string>()));
            else if (v.is_number_integer())
                params.push_back(Rational(v.get<long>()));
            else if (v.is_number_float())
                params.push_back(Rational::from_double(v.get<double>()));
            else
                fail(ErrorCode::ParseError, "multiparam coupling is not a rational");
        }
        return multiparam(params, window);
    }
    fail(ErrorCode::ParseError, "unknown model kind '" + kind + "'");
}

nlohmann::json metric_to_json(const MetricSpec& spec) {
    nlohmann::json j;
    j["kind"] = metric_kind_name(spec.kind);
    if (spec.bands > 0)
        j["R"] = spec.bands;
    if (spec.g)
        j["g"] = spec.g->str();
    if (!spec.coefficients.empty()) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& c : spec.coefficients)
            coeffs.push_back(c.str());
        j[spec.kind == MetricKind::DiagonalMultiparam ? "params" : "coefficients"] = std::move(coeffs);
    }
    if (spec.demo_only)
        j["demo_only"] = true;
    j["matrix"] = std::visit([](const auto& m) { return band_to_json(m); }, spec.matrix);
    return j;
}

MetricSpec metric_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        fail(ErrorCode::ParseError, "metric JSON needs a 'kind' tag");
    const std::string kind = j["kind"].get<std::string>();
    MetricSpec spec;
    if (kind == "closed_form")
        spec.kind = MetricKind::ClosedForm;
    else if (kind == "solved")
        spec.kind = MetricKind::Solved;
    else if (kind == "superposition")
        spec.kind = MetricKind::Superposition;
    else if (kind == "diagonal_multiparam")
        spec.kind = MetricKind::DiagonalMultiparam;
    else if (kind == "cross_demo")
        spec.kind = MetricKind::CrossDemo;
    else
        fail(ErrorCode::ParseError, "unknown metric kind '" + kind + "'");
    if (j.contains("R"))
        spec.bands = static_cast<int>(require_long(j, "R"));
    if (j.contains("g"))
        spec.g = require_rational(j, "g");
    const char* coeff_key = spec.kind == MetricKind::DiagonalMultiparam ? "params" : "coefficients";
    if (j.contains(coeff_key)) {
        for (const auto& v : j[coeff_key])
            spec.coefficients.push_back(v.is_string() ? Rational::parse_or_throw(v.get<std::string>())
                                                      : Rational::from_double(v.get<double>()));
    }
    spec.demo_only = j.value("demo_only", false);
    if (!j.contains("matrix"))
        fail(ErrorCode::ParseError, "metric JSON needs a 'matrix'");
    auto any = band_from_json(j["matrix"]);
    if (std::holds_alternative<BandMatrix<Rational>>(any))
        spec.matrix = std::get<BandMatrix<Rational>>(std::move(any));
    else
        spec.matrix = std::get<BandMatrix<double>>(std::move(any));
    return spec;
}

nlohmann::json dyson_to_json(const DysonMap& map) {
    nlohmann::json j;
    j["provenance"] = dyson_kind_name(map.kind);
    j["omega"] = band_to_json(map.omega);
    if (map.omega_inverse)
        j["omega_inverse"] = band_to_json(*map.omega_inverse);
    if (map.boundary_warning)
        j["boundary_warning"] = true;
    return j;
}

nlohmann::json locality_to_json(const LocalityReport& report) {
    return {{"local", report.local},
            {"diamond_radius", report.diamond_radius},
            {"max_offset", report.max_offset},
            {"unit_tails", report.unit_tails},
            {"diagonal_unit", report.diagonal_unit},
            {"diamond_bounded", report.diamond_bounded},
            {"scan_halfwidth", report.scan_halfwidth}};
}

} // namespace qhlat
