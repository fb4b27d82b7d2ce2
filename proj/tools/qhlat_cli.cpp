// Command-line front end for the quasi-Hermitian lattice toolkit.
// Talks to the shared library exclusively through the C API.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qhlat.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError {
    std::string message;
};

struct ToolError {
    std::string message;
};

[[noreturn]] void usage_fail(const std::string& message) { throw UsageError{message}; }

void check(qh_status status) {
    if (status != QH_OK)
        throw ToolError{qh_error_message()};
}

std::string take_string(char* owned) {
    std::string out = owned != nullptr ? owned : "";
    qh_string_free(owned);
    return out;
}

std::string output_dir() {
    const char* dir = std::getenv("QHLAT_OUTPUT_DIR");
    return dir != nullptr && *dir != '\0' ? dir : ".";
}

std::string resolve_output(const std::string& explicit_path, const std::string& default_name) {
    if (!explicit_path.empty())
        return explicit_path;
    return output_dir() + "/" + default_name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ToolError{"cannot open output file: " + path};
    out << content;
    if (!content.empty() && content.back() != '\n')
        out << '\n';
}

// "p/q" and integer strings pass through; decimal literals become exact
// decimal fractions p/10^k (callers decide whether that promotes the run to
// float output mode).
std::string to_rational_literal(const std::string& text) {
    const std::size_t dot = text.find('.');
    if (dot == std::string::npos)
        return text;
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    bool negative = false;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
        negative = digits[0] == '-';
        digits.erase(digits.begin());
    }
    const std::size_t frac_digits = text.size() - dot - 1;
    if (digits.empty() || frac_digits == 0 ||
        digits.find_first_not_of("0123456789") != std::string::npos)
        usage_fail("malformed numeric literal: '" + text + "'");
    std::string den = "1";
    den.append(frac_digits, '0');
    while (digits.size() > 1 && digits[0] == '0')
        digits.erase(digits.begin());
    return (negative ? "-" : "") + digits + "/" + den;
}

bool is_decimal(const std::string& text) { return text.find('.') != std::string::npos; }

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string model_descriptor(const std::string& model, const std::string& g_rational,
                             int two_center_m, const std::vector<std::string>& params, long window) {
    std::string kind = model;
    for (auto& c : kind)
        if (c == '-')
            c = '_';
    if (kind == "free")
        return "{\"model\":\"free\",\"N\":" + std::to_string(window) + "}";
    if (kind == "point_defect")
        return "{\"model\":\"point_defect\",\"g\":\"" + g_rational +
               "\",\"N\":" + std::to_string(window) + "}";
    if (kind == "two_center")
        return "{\"model\":\"two_center\",\"g\":\"" + g_rational +
               "\",\"M\":" + std::to_string(two_center_m) + ",\"N\":" + std::to_string(window) + "}";
    if (kind == "multiparam") {
        std::string list;
        for (std::size_t k = 0; k < params.size(); ++k)
            list += (k > 0 ? "," : "") + std::string("\"") + to_rational_literal(params[k]) + "\"";
        return "{\"model\":\"multiparam\",\"params\":[" + list +
               "],\"N\":" + std::to_string(window) + "}";
    }
    usage_fail("unknown model '" + model + "'");
}

struct ModelHandle {
    qh_model* ptr = nullptr;
    explicit ModelHandle(const std::string& descriptor) { check(qh_model_create_json(descriptor.c_str(), &ptr)); }
    ~ModelHandle() { qh_model_free(ptr); }
    ModelHandle(const ModelHandle&) = delete;
    ModelHandle& operator=(const ModelHandle&) = delete;
};

struct MetricHandle {
    qh_metric* ptr = nullptr;
    MetricHandle() = default;
    explicit MetricHandle(qh_metric* p) : ptr(p) {}
    ~MetricHandle() { qh_metric_free(ptr); }
    MetricHandle(MetricHandle&& o) noexcept : ptr(o.ptr) { o.ptr = nullptr; }
    MetricHandle& operator=(MetricHandle&&) = delete;
    MetricHandle(const MetricHandle&) = delete;
    MetricHandle& operator=(const MetricHandle&) = delete;
};

struct DysonHandle {
    qh_dyson* ptr = nullptr;
    ~DysonHandle() { qh_dyson_free(ptr); }
};

struct MetricOptions {
    std::string model = "point-defect";
    std::string g = "0";
    std::vector<std::string> params;
    int two_center_m = 2;
    int bands = 1;
    long window = 0;
    std::string scalar = "exact";
    bool solve = false;
    std::string alphas;
    std::string output;
};

int run_metric(const MetricOptions& opt) {
    std::string scalar = opt.scalar;
    if (is_decimal(opt.g)) {
        std::cerr << "notice: decimal coupling given, promoting output to float mode\n";
        scalar = "float";
    }
    if (scalar != "exact" && scalar != "float")
        usage_fail("--scalar must be exact or float");
    const std::string g_rational = to_rational_literal(opt.g);
    if (opt.bands < 1)
        usage_fail("--R must be >= 1");
    if (opt.model == "two-center" || opt.model == "two_center")
        usage_fail("the band-metric family covers the single-defect model; "
                   "use --model point-defect or multiparam");
    const long window = opt.window > 0 ? opt.window : 2 * opt.bands + 10;
    if (window < 2 * opt.bands + 4)
        usage_fail("--N must be at least 2R+4");

    ModelHandle model(model_descriptor(opt.model, g_rational, opt.two_center_m, opt.params, window));

    auto literal_magnitude = [](const std::string& text) {
        const std::size_t slash = text.find('/');
        if (slash == std::string::npos)
            return std::abs(std::strtod(text.c_str(), nullptr));
        const double den = std::strtod(text.substr(slash + 1).c_str(), nullptr);
        return den != 0.0 ? std::abs(std::strtod(text.c_str(), nullptr) / den) : HUGE_VAL;
    };
    for (const auto& p : opt.params)
        if (literal_magnitude(p) >= 1.0)
            std::cerr << "notice: coupling " << p << " has modulus >= 1; the diagonal metric "
                      << "will not be positive\n";

    MetricHandle metric;
    if (opt.model == "multiparam") {
        std::vector<std::string> literals;
        std::vector<const char*> raw;
        for (const auto& p : opt.params)
            literals.push_back(to_rational_literal(p));
        for (const auto& p : literals)
            raw.push_back(p.c_str());
        check(qh_metric_multiparam_diagonal(raw.data(), raw.size(), window, &metric.ptr));
    } else if (!opt.alphas.empty()) {
        std::vector<std::string> weights = split_list(opt.alphas);
        std::vector<MetricHandle> members;
        std::vector<const qh_metric*> member_ptrs;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            qh_metric* theta = nullptr;
            check(qh_metric_closed_form(g_rational.c_str(), static_cast<int>(k) + 1, window, &theta));
            members.emplace_back(theta);
            member_ptrs.push_back(theta);
        }
        std::vector<std::string> literals;
        std::vector<const char*> raw;
        for (const auto& w : weights)
            literals.push_back(scalar == "exact" ? to_rational_literal(w) : w);
        for (const auto& w : literals)
            raw.push_back(w.c_str());
        check(qh_metric_superpose(member_ptrs.data(), raw.data(), raw.size(),
                                  scalar == "exact" ? QH_SCALAR_RATIONAL : QH_SCALAR_FLOAT,
                                  &metric.ptr));
    } else if (opt.solve) {
        check(qh_metric_solve(model.ptr, opt.bands, &metric.ptr));
    } else {
        check(qh_metric_closed_form(g_rational.c_str(), opt.bands, window, &metric.ptr));
    }

    char* metric_json = nullptr;
    check(qh_metric_to_json(metric.ptr, scalar == "exact" ? QH_SCALAR_RATIONAL : QH_SCALAR_FLOAT,
                            &metric_json));
    const std::string metric_path = resolve_output(opt.output, "metric.json");
    write_file(metric_path, take_string(metric_json));

    char* max_abs = nullptr;
    int exact_zero = 0;
    check(qh_metric_residual(model.ptr, metric.ptr, &max_abs, &exact_zero));
    const std::string residual_text = take_string(max_abs);
    const std::string residual_path = metric_path + ".residual.json";
    write_file(residual_path, std::string("{\"interior_max_abs\":\"") + residual_text +
                                  "\",\"exact_zero\":" + (exact_zero ? "true" : "false") + "}");

    std::cout << "metric written to " << metric_path << "\n"
              << "residual report written to " << residual_path << "\n"
              << "interior residual max |entry| = " << residual_text << "\n";
    if (scalar == "exact" && exact_zero == 0) {
        std::cerr << "verification failure: interior residual is nonzero in exact mode\n";
        return kExitVerificationFailure;
    }
    return kExitOk;
}

struct ScatterOptions {
    std::string model = "point-defect";
    std::string g = "0.5";
    int two_center_m = 2;
    long window = 40;
    int grid = 50;
    double kappa_min = 0.1;
    double kappa_max = 0.0;
    std::string scalar = "float";
    std::string output;
    std::string summary;
};

int run_scatter(const ScatterOptions& opt) {
    if (opt.scalar == "exact")
        usage_fail("scattering amplitudes are complex; only --scalar float is supported");
    ModelHandle model(model_descriptor(opt.model, to_rational_literal(opt.g), opt.two_center_m,
                                       {}, opt.window));
    char* csv = nullptr;
    char* summary = nullptr;
    check(qh_scatter_grid_csv(model.ptr, opt.grid, opt.kappa_min, opt.kappa_max, &csv, &summary));
    const std::string csv_path = resolve_output(opt.output, "scatter.csv");
    const std::string summary_path = resolve_output(opt.summary, "scatter_summary.json");
    write_file(csv_path, take_string(csv));
    const std::string summary_text = take_string(summary);
    write_file(summary_path, summary_text);
    std::cout << "scatter table written to " << csv_path << "\n"
              << "summary written to " << summary_path << "\n"
              << summary_text << "\n";

    // the summary keeps max_deficit; re-check it against the unitarity gate
    const std::string key = "\"max_deficit\":";
    const std::size_t pos = summary_text.find(key);
    const double max_deficit =
        pos == std::string::npos ? 1.0 : std::strtod(summary_text.c_str() + pos + key.size(), nullptr);
    if (max_deficit > 1e-10) {
        std::cerr << "verification failure: unitarity deficit " << max_deficit << " exceeds 1e-10\n";
        return kExitVerificationFailure;
    }
    return kExitOk;
}

struct HermitizeOptions {
    std::string model = "point-defect";
    std::string omega = "diagonal";
    std::string g = "1/2";
    std::vector<std::string> params;
    long window = 24;
    std::string scalar = "float";
    std::string output;
    std::string report;
};

int run_hermitize(const HermitizeOptions& opt) {
    if (opt.scalar == "exact")
        usage_fail("hermitized entries are square roots; only --scalar float is supported");
    const std::string g_rational = to_rational_literal(opt.g);
    ModelHandle model(model_descriptor(opt.model, g_rational, 2, opt.params, opt.window));

    DysonHandle dyson;
    if (opt.omega == "tridiagonal") {
        check(qh_dyson_tridiagonal(g_rational.c_str(), opt.window, &dyson.ptr));
    } else if (opt.omega == "diagonal" || opt.omega == "cholesky") {
        MetricHandle metric;
        if (opt.model == "multiparam") {
            std::vector<std::string> literals;
            std::vector<const char*> raw;
            for (const auto& p : opt.params)
                literals.push_back(to_rational_literal(p));
            for (const auto& p : literals)
                raw.push_back(p.c_str());
            check(qh_metric_multiparam_diagonal(raw.data(), raw.size(), opt.window, &metric.ptr));
        } else {
            check(qh_metric_closed_form(g_rational.c_str(), 1, opt.window, &metric.ptr));
        }
        check(opt.omega == "diagonal" ? qh_dyson_factor_diagonal(metric.ptr, &dyson.ptr)
                                      : qh_dyson_cholesky(metric.ptr, &dyson.ptr));
    } else {
        usage_fail("--omega must be diagonal, tridiagonal or cholesky");
    }

    char* matrix_json = nullptr;
    char* report_json = nullptr;
    check(qh_hermitize(model.ptr, dyson.ptr, &matrix_json, &report_json));
    const std::string matrix_path = resolve_output(opt.output, "hermitized.json");
    const std::string report_path = resolve_output(opt.report, "hermitized_report.json");
    write_file(matrix_path, take_string(matrix_json));
    const std::string report_text = take_string(report_json);
    write_file(report_path, report_text);
    std::cout << "hermitized matrix written to " << matrix_path << "\n"
              << "report written to " << report_path << "\n"
              << report_text << "\n";
    return kExitOk;
}

struct PositivityOptions {
    std::string g = "1/2";
    long window = 20;
    std::string gamma_grid = "-1.5:1.5:0.25";
    std::string scalar = "float";
    std::string output;
};

int run_positivity(const PositivityOptions& opt) {
    if (opt.scalar == "exact")
        usage_fail("the gamma grid is a scan; only --scalar float is supported");
    const std::vector<std::string> parts = [&] {
        std::vector<std::string> out;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= opt.gamma_grid.size(); ++k)
            if (k == opt.gamma_grid.size() || opt.gamma_grid[k] == ':') {
                out.push_back(opt.gamma_grid.substr(start, k - start));
                start = k + 1;
            }
        return out;
    }();
    if (parts.size() != 3)
        usage_fail("--gamma-grid expects lo:hi:step");
    const double lo = std::strtod(parts[0].c_str(), nullptr);
    const double hi = std::strtod(parts[1].c_str(), nullptr);
    const double step = std::strtod(parts[2].c_str(), nullptr);

    char* report = nullptr;
    check(qh_positivity_gamma_scan(to_rational_literal(opt.g).c_str(), opt.window, lo, hi, step,
                                   &report));
    const std::string report_text = take_string(report);
    const std::string path = resolve_output(opt.output, "positivity.json");
    write_file(path, report_text);
    std::cout << "positivity scan written to " << path << "\n" << report_text << "\n";
    return kExitOk;
}

struct VerifyOptions {
    std::string g = "1/2";
    long window = 24;
    std::string output;
};

int run_verify(const VerifyOptions& opt) {
    int all_passed = 0;
    char* report = nullptr;
    check(qh_verify_reference(to_rational_literal(opt.g).c_str(), opt.window, &all_passed, &report));
    const std::string report_text = take_string(report);
    if (!opt.output.empty())
        write_file(opt.output, report_text);
    std::cout << report_text << "\n";
    if (all_passed == 0) {
        std::cerr << "verification failure: at least one reference matrix does not match\n";
        return kExitVerificationFailure;
    }
    std::cout << "all reference matrices reproduced\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-Hermitian lattice toolkit"};
    app.require_subcommand(1);

    MetricOptions metric_opt;
    auto* metric_cmd = app.add_subcommand(
        "metric", "build a band metric (closed form, solved, superposition or diagonal)");
    metric_cmd->add_option("--model", metric_opt.model,
                           "free | point-defect | two-center | multiparam");
    metric_cmd->add_option("--g", metric_opt.g, "coupling, rational p/q or decimal");
    metric_cmd->add_option("--params", metric_opt.params, "multiparam couplings")->delimiter(',');
    metric_cmd->add_option("--M", metric_opt.two_center_m, "two-center separation parameter");
    metric_cmd->add_option("--R", metric_opt.bands, "number of nonvanishing diagonals");
    metric_cmd->add_option("--N", metric_opt.window, "window half-width (default 2R+10)");
    metric_cmd->add_option("--scalar", metric_opt.scalar, "exact | float");
    metric_cmd->add_flag("--solve", metric_opt.solve, "solve the linear system instead of the closed form");
    metric_cmd->add_option("--alphas", metric_opt.alphas,
                           "superposition weights for Theta_1..Theta_k (comma list)");
    metric_cmd->add_option("-o,--output", metric_opt.output, "metric JSON path");

    ScatterOptions scatter_opt;
    auto* scatter_cmd = app.add_subcommand("scatter", "reflection/transmission over a kappa grid");
    scatter_cmd->add_option("--model", scatter_opt.model, "point-defect | two-center | multiparam");
    scatter_cmd->add_option("--g", scatter_opt.g, "coupling");
    scatter_cmd->add_option("--M", scatter_opt.two_center_m, "two-center separation parameter");
    scatter_cmd->add_option("--N", scatter_opt.window, "window half-width");
    scatter_cmd->add_option("--grid", scatter_opt.grid, "number of kappa points");
    scatter_cmd->add_option("--kappa-min", scatter_opt.kappa_min, "lowest kappa");
    scatter_cmd->add_option("--kappa-max", scatter_opt.kappa_max, "highest kappa (0 = pi - kappa-min)");
    scatter_cmd->add_option("--scalar", scatter_opt.scalar, "float (exact mode is rejected)");
    scatter_cmd->add_option("-o,--output", scatter_opt.output, "CSV path");
    scatter_cmd->add_option("--summary", scatter_opt.summary, "summary JSON path");

    HermitizeOptions hermitize_opt;
    auto* hermitize_cmd =
        app.add_subcommand("hermitize", "isospectral Hermitian partner h = Omega H Omega^{-1}");
    hermitize_cmd->add_option("--model", hermitize_opt.model, "point-defect | multiparam");
    hermitize_cmd->add_option("--omega", hermitize_opt.omega, "diagonal | tridiagonal | cholesky");
    hermitize_cmd->add_option("--g", hermitize_opt.g, "coupling");
    hermitize_cmd->add_option("--params", hermitize_opt.params, "multiparam couplings")->delimiter(',');
    hermitize_cmd->add_option("--N", hermitize_opt.window, "window half-width");
    hermitize_cmd->add_option("--scalar", hermitize_opt.scalar, "float (exact mode is rejected)");
    hermitize_cmd->add_option("-o,--output", hermitize_opt.output, "partner matrix JSON path");
    hermitize_cmd->add_option("--report", hermitize_opt.report, "Hermiticity report path");

    PositivityOptions positivity_opt;
    auto* positivity_cmd =
        app.add_subcommand("positivity", "positivity of 2 Theta_1 + gamma Theta_2 over a gamma grid");
    positivity_cmd->add_option("--g", positivity_opt.g, "coupling");
    positivity_cmd->add_option("--N", positivity_opt.window, "window half-width");
    positivity_cmd->add_option("--gamma-grid", positivity_opt.gamma_grid, "lo:hi:step");
    positivity_cmd->add_option("--scalar", positivity_opt.scalar, "float (exact mode is rejected)");
    positivity_cmd->add_option("-o,--output", positivity_opt.output, "report JSON path");

    VerifyOptions verify_opt;
    auto* verify_cmd =
        app.add_subcommand("verify-fixtures", "replay all explicitly known matrices at a coupling");
    verify_cmd->add_option("--g", verify_opt.g, "coupling, 0 < |g| < 1");
    verify_cmd->add_option("--N", verify_opt.window, "window half-width");
    verify_cmd->add_option("-o,--output", verify_opt.output, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (metric_cmd->parsed())
            return run_metric(metric_opt);
        if (scatter_cmd->parsed())
            return run_scatter(scatter_opt);
        if (hermitize_cmd->parsed())
            return run_hermitize(hermitize_opt);
        if (positivity_cmd->parsed())
            return run_positivity(positivity_opt);
        if (verify_cmd->parsed())
            return run_verify(verify_opt);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.message << "\n";
        return kExitUsage;
    } catch (const ToolError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
