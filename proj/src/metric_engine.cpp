#include "metric_engine.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace qhlat {

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
    case MetricKind::ClosedForm: return "closed_form";
    case MetricKind::Solved: return "solved";
    case MetricKind::Superposition: return "superposition";
    case MetricKind::DiagonalMultiparam: return "diagonal_multiparam";
    case MetricKind::CrossDemo: return "cross_demo";
    }
    return "?";
}

long MetricSpec::window() const {
    return std::visit([](const auto& m) { return m.window(); }, matrix);
}

const BandMatrix<Rational>& MetricSpec::exact() const {
    if (!is_exact())
        fail(ErrorCode::ScalarKindMismatch, "metric is stored in float mode");
    return std::get<BandMatrix<Rational>>(matrix);
}

BandMatrix<double> MetricSpec::as_float() const {
    if (is_exact())
        return to_float(exact());
    return std::get<BandMatrix<double>>(matrix);
}

MetricSpec to_float_spec(const MetricSpec& spec) {
    MetricSpec out = spec;
    out.matrix = spec.as_float();
    return out;
}

ThetaCoefficients theta_coefficients(int k, const Rational& g) {
    if (k < 1)
        fail(ErrorCode::InvalidArgument, "coefficient family index must be >= 1");
    if (g == Rational(1))
        fail(ErrorCode::SpectralSingularity, "central element undefined at g = 1");
    const Rational one(1);
    const Rational damp = one - Rational(2) * g * g; // 1 - 2g^2
    const Rational corner = (one + g) * pow_n(damp, static_cast<unsigned>(k - 1));
    const Rational wedge = (one - g * g) * pow_n(damp, static_cast<unsigned>(k - 1));
    const Rational center = (one + g) * pow_n(damp, static_cast<unsigned>(k)) / (one - g);
    return {corner, wedge, center};
}

Rational theta_center_element(int bands, const Rational& g) {
    if (bands < 1 || bands % 2 == 0)
        fail(ErrorCode::InvalidArgument, "central element exists for odd band counts only");
    if (g == Rational(1))
        fail(ErrorCode::SpectralSingularity, "central element undefined at g = 1");
    const Rational one(1);
    const int k = (bands + 1) / 2; // z_R = A_k / (1-g)
    return (one + g) * pow_n(one - Rational(2) * g * g, static_cast<unsigned>(k - 1)) / (one - g);
}

namespace {

Rational diamond_value(int bands, long i, long j, const Rational& g) {
    const long twice_s = bands + 1 - std::labs(i) - std::labs(j);
    if (twice_s <= 0)
        return Rational(1);
    if (i == 0 && j == 0)
        return theta_center_element(bands, g);
    const int s = static_cast<int>(twice_s / 2);
    const Rational one(1);
    const Rational damp_pow = pow_n(one - Rational(2) * g * g, static_cast<unsigned>(s - 1));
    if (i == 0 || j == 0)
        return (one + g) * damp_pow; // corner A_s
    return (one - g * g) * damp_pow; // wedge B_s
}

MetricSpec assemble_theta(int bands, const Rational& g, long window) {
    if (bands < 1)
        fail(ErrorCode::InvalidArgument, "band count must be >= 1");
    if (window < 2 * bands)
        fail(ErrorCode::InvalidArgument, "window too small for the requested band metric");
    BandMatrix<Rational> m(window);
    for (int d = bands - 1; d >= 0; d -= 2) {
        auto& up = m.ensure_diagonal(d);
        const long lo = m.row_lo(d);
        for (long i = lo; i <= m.row_hi(d); ++i)
            up[static_cast<std::size_t>(i - lo)] = diamond_value(bands, i, i + d, g);
        if (d > 0) {
            auto& down = m.ensure_diagonal(-d);
            const long dlo = m.row_lo(-d);
            for (long i = dlo; i <= m.row_hi(-d); ++i)
                down[static_cast<std::size_t>(i - dlo)] = diamond_value(bands, i, i - d, g);
        }
    }
    MetricSpec spec;
    spec.kind = MetricKind::ClosedForm;
    spec.bands = bands;
    spec.g = g;
    spec.matrix = std::move(m);
    return spec;
}

} // namespace

MetricSpec closed_form_theta(int bands, const Rational& g, long window) {
    if (g.abs() >= Rational(1))
        fail(ErrorCode::SpectralSingularity,
             "band metric degenerates at the spectral singularity; require |g| < 1");
    return assemble_theta(bands, g, window);
}

MetricSpec closed_form_theta_unchecked(int bands, const Rational& g, long window) {
    return assemble_theta(bands, g, window);
}

MetricSpec solve_band_metric(const LatticeModel& model, int bands) {
    if (bands < 1)
        fail(ErrorCode::InvalidArgument, "band count must be >= 1");
    const long n = model.window;
    if (n < 2 * bands + 4)
        fail(ErrorCode::InvalidArgument, "window too small for the band ansatz (need N >= 2R+4)");
    const BandMatrix<Rational>& h = model.matrix;

    auto valid_offset = [&](long i, long j) {
        const long d = std::labs(j - i);
        return d <= bands - 1 && ((bands - 1 - d) % 2 == 0);
    };

    // Unknowns: symmetric entry pairs inside the diamond |i|+|j| <= R+1.
    std::map<std::pair<long, long>, std::size_t> unknown_of;
    std::vector<std::pair<long, long>> positions;
    for (int d = bands - 1; d >= 0; d -= 2) {
        for (long i = -n; i + d <= n; ++i) {
            const long j = i + d;
            if (std::labs(i) + std::labs(j) > bands + 1)
                continue;
            unknown_of.emplace(std::make_pair(i, j), positions.size());
            positions.emplace_back(i, j);
        }
    }
    const std::size_t n_unknowns = positions.size();

    // theta(i,j) as a linear form over the unknowns: either an unknown index,
    // the pinned far-field value 1, or zero off the valid offsets.
    enum class Slot { Zero, One, Unknown };
    struct Probe {
        Slot slot;
        std::size_t index;
    };
    auto classify = [&](long i, long j) -> Probe {
        if (i < -n || i > n || j < -n || j > n)
            return {Slot::Zero, 0};
        if (!valid_offset(i, j))
            return {Slot::Zero, 0};
        auto key = i <= j ? std::make_pair(i, j) : std::make_pair(j, i);
        auto it = unknown_of.find(key);
        if (it != unknown_of.end())
            return {Slot::Unknown, it->second};
        return {Slot::One, 0};
    };

    // One equation per residual entry (m,n), m < n; the residual is
    // antisymmetric for a symmetric ansatz, so the lower triangle repeats it.
    const long cap = std::min(n - 1, static_cast<long>(bands) + 3);
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (long mrow = -cap; mrow <= cap; ++mrow) {
        for (long ncol = mrow + 1; ncol <= cap; ++ncol) {
            std::vector<Rational> coeff(n_unknowns, Rational(0));
            Rational constant(0);
            bool nonempty = false;
            auto accumulate = [&](const Rational& weight, long i, long j) {
                if (weight.is_zero())
                    return;
                Probe p = classify(i, j);
                if (p.slot == Slot::Zero)
                    return;
                nonempty = true;
                if (p.slot == Slot::Unknown)
                    coeff[p.index] += weight;
                else
                    constant += weight;
            };
            // [H^dag Theta](m,n) = sum_k H(k,m) Theta(k,n), H tridiagonal
            for (long k = std::max(-n, mrow - 1); k <= std::min(n, mrow + 1); ++k)
                accumulate(h.at(k, mrow), k, ncol);
            // -[Theta H](m,n) = -sum_k Theta(m,k) H(k,n)
            for (long k = std::max(-n, ncol - 1); k <= std::min(n, ncol + 1); ++k)
                accumulate(-h.at(k, ncol), mrow, k);
            if (!nonempty)
                continue;
            bool all_zero = constant.is_zero();
            for (const auto& c : coeff)
                if (!c.is_zero()) {
                    all_zero = false;
                    break;
                }
            if (all_zero)
                continue;
            rows.push_back(std::move(coeff));
            rhs.push_back(-constant);
        }
    }

    // Exact Gaussian elimination with full rank/consistency reporting.
    std::vector<long> pivot_row_of(n_unknowns, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n_unknowns && rank < rows.size(); ++col) {
        std::size_t best = rank;
        Rational best_abs = rows[rank][col].abs();
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            Rational cand = rows[r][col].abs();
            if (best_abs < cand) {
                best_abs = cand;
                best = r;
            }
        }
        if (rows[best][col].is_zero())
            continue;
        std::swap(rows[rank], rows[best]);
        std::swap(rhs[rank], rhs[best]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col].is_zero())
                continue;
            Rational f = rows[r][col] / rows[rank][col];
            for (std::size_t c = col; c < n_unknowns; ++c)
                rows[r][c] -= f * rows[rank][c];
            rhs[r] -= f * rhs[rank];
        }
        pivot_row_of[col] = static_cast<long>(rank);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (!rhs[r].is_zero())
            fail(ErrorCode::SingularMatrix,
                 "quasi-Hermiticity system is inconsistent (wrong ansatz parity or spectral singularity)");
    for (std::size_t col = 0; col < n_unknowns; ++col)
        if (pivot_row_of[col] < 0)
            fail(ErrorCode::SingularMatrix,
                 "quasi-Hermiticity system is rank deficient (wrong ansatz parity or spectral singularity)");

    std::vector<Rational> solution(n_unknowns, Rational(0));
    for (std::size_t col = 0; col < n_unknowns; ++col) {
        const auto r = static_cast<std::size_t>(pivot_row_of[col]);
        solution[col] = rhs[r] / rows[r][col];
    }

    BandMatrix<Rational> theta(n);
    for (int d = bands - 1; d >= 0; d -= 2) {
        theta.ensure_diagonal(d);
        if (d > 0)
            theta.ensure_diagonal(-d);
        for (long i = theta.row_lo(d); i <= theta.row_hi(d); ++i) {
            Probe p = classify(i, i + d);
            Rational v = p.slot == Slot::Unknown ? solution[p.index] : Rational(1);
            theta.set(i, i + d, v);
            if (d > 0)
                theta.set(i + d, i, v);
        }
    }

    // The imposed equations cover every row the unknowns touch; re-check the
    // whole interior so a bad ansatz cannot slip through silently.
    auto check = quasi_hermiticity_residual(h, theta);
    if (!check.interior_max_abs.is_zero())
        fail(ErrorCode::SingularMatrix, "solved metric fails the interior residual check");

    MetricSpec spec;
    spec.kind = MetricKind::Solved;
    spec.bands = bands;
    spec.g = model.g;
    spec.matrix = std::move(theta);
    return spec;
}

namespace {

void check_superpose_args(std::size_t n_alphas, std::size_t n_thetas) {
    if (n_alphas == 0 || n_alphas != n_thetas)
        fail(ErrorCode::InvalidArgument, "superposition needs matching, nonempty weight and metric lists");
}

MetricSpec superpose_common(const std::vector<const MetricSpec*>& thetas) {
    MetricSpec out;
    out.kind = MetricKind::Superposition;
    out.bands = 0;
    bool same_g = true;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        out.bands = std::max(out.bands, thetas[k]->bands);
        if (thetas[k]->demo_only)
            fail(ErrorCode::InvalidArgument, "demo-only metric cannot enter a superposition");
        if (k > 0 && thetas[k]->g != thetas[0]->g)
            same_g = false;
    }
    if (same_g && !thetas.empty())
        out.g = thetas[0]->g;
    return out;
}

} // namespace

MetricSpec superpose(const std::vector<Rational>& alphas, const std::vector<const MetricSpec*>& thetas) {
    check_superpose_args(alphas.size(), thetas.size());
    for (std::size_t k = 1; k < thetas.size(); ++k)
        if (thetas[k]->window() != thetas[0]->window())
            fail(ErrorCode::WindowMismatch, "superposed metrics must share one window");
    BandMatrix<Rational> acc(thetas[0]->window());
    for (std::size_t k = 0; k < alphas.size(); ++k)
        acc = add(acc, scale(alphas[k], thetas[k]->exact()));
    MetricSpec out = superpose_common(thetas);
    out.coefficients = alphas;
    out.matrix = std::move(acc);
    return out;
}

MetricSpec superpose(const std::vector<double>& alphas, const std::vector<const MetricSpec*>& thetas) {
    check_superpose_args(alphas.size(), thetas.size());
    for (std::size_t k = 1; k < thetas.size(); ++k)
        if (thetas[k]->window() != thetas[0]->window())
            fail(ErrorCode::WindowMismatch, "superposed metrics must share one window");
    BandMatrix<double> acc(thetas[0]->window());
    for (std::size_t k = 0; k < alphas.size(); ++k)
        acc = add(acc, scale(alphas[k], thetas[k]->as_float()));
    MetricSpec out = superpose_common(thetas);
    for (double a : alphas)
        out.coefficients.push_back(Rational::from_double(a));
    out.matrix = std::move(acc);
    return out;
}

MetricSpec diagonal_multiparam_metric(const std::vector<Rational>& params, long window) {
    if (params.empty())
        fail(ErrorCode::InvalidArgument, "diagonal metric needs at least one coupling");
    if (window < 1)
        fail(ErrorCode::InvalidArgument, "window must be >= 1");
    const Rational one(1);
    BandMatrix<Rational> m(window);
    auto& diag = m.ensure_diagonal(0);
    for (long i = -window; i <= window; ++i) {
        const long site = 2 * i + 1;
        const int sgn = site > 0 ? 1 : -1;
        const long dist = (std::labs(site) - 1) / 2; // site +-(2m+1) -> m
        Rational p1 = params[0];
        Rational value = sgn > 0 ? one + p1 : one - p1;
        for (std::size_t j = 2; j <= params.size(); ++j) {
            const Rational& p = params[j - 1];
            if (static_cast<long>(j) <= dist + 1) {
                Rational f = sgn > 0 ? one + p : one - p;
                value *= f * f;
            } else {
                value *= one - p * p;
            }
        }
        diag[static_cast<std::size_t>(i + window)] = value;
    }
    MetricSpec spec;
    spec.kind = MetricKind::DiagonalMultiparam;
    spec.bands = 0;
    spec.coefficients = params;
    spec.matrix = std::move(m);
    return spec;
}

MetricSpec cross_demo(int k, long window) {
    if (k < 1)
        fail(ErrorCode::InvalidArgument, "cross pattern index must be >= 1");
    BandMatrix<Rational> m(window);
    for (long i = -window; i <= window; ++i) {
        for (long j : {i + (k - 1), i - (k - 1)}) {
            if (j >= -window && j <= window)
                m.set(i, j, Rational(1));
        }
        for (long j : {-1 - i + (k - 1), -1 - i - (k - 1)}) {
            if (j >= -window && j <= window)
                m.set(i, j, Rational(1));
        }
    }
    MetricSpec spec;
    spec.kind = MetricKind::CrossDemo;
    spec.bands = 0;
    spec.demo_only = true;
    spec.matrix = std::move(m);
    return spec;
}

PositivityResult positivity_check(const MetricSpec& spec) {
    if (spec.demo_only)
        fail(ErrorCode::InvalidArgument, "demo-only metric is quarantined from positivity checks");
    return std::visit(
        [](const auto& m) -> PositivityResult {
            auto f = banded_ldlt(m);
            if (std::holds_alternative<PivotFailure>(f))
                return {false, std::get<PivotFailure>(f).site};
            return {true, 0};
        },
        spec.matrix);
}

namespace {

template <typename S>
LocalityReport locality_impl(const BandMatrix<S>& m, long margin, int bands) {
    const long half = std::max<long>(0, m.window() - std::max<long>(0, margin));
    long diamond = -1;
    int max_offset = -1;
    m.for_each_entry([&](long i, long j, const S& v) {
        if (std::labs(i) > half || std::labs(j) > half || scalar_is_zero(v))
            return;
        max_offset = std::max<int>(max_offset, static_cast<int>(std::labs(i - j)));
        if (!(v == S(1)))
            diamond = std::max(diamond, std::labs(i) + std::labs(j));
    });
    const bool bounded = diamond < half;
    const long claimed = bands >= 1 ? bands + 1 : std::max<long>(diamond, 0);

    bool unit_tails = true;
    m.for_each_entry([&](long i, long j, const S& v) {
        if (std::labs(i) > half || std::labs(j) > half || scalar_is_zero(v))
            return;
        if (std::labs(i) + std::labs(j) > claimed && !(v == S(1)))
            unit_tails = false;
    });

    bool diagonal_unit = true;
    const bool has_diag = m.has_diagonal(0);
    for (long j = claimed / 2 + 1; j <= half; ++j) {
        if (!(m.at(j, j) == m.at(-j, -j)))
            diagonal_unit = false;
        if (has_diag && !(m.at(j, j) == S(1)))
            diagonal_unit = false;
    }

    const bool local =
        bounded && unit_tails && diagonal_unit && max_offset <= static_cast<int>(claimed) + 1;
    return {local, diamond, std::max(max_offset, 0), unit_tails, diagonal_unit, bounded, half};
}

} // namespace

LocalityReport asymptotic_locality_report(const MetricSpec& spec, long margin) {
    return std::visit([&](const auto& m) { return locality_impl(m, margin, spec.bands); },
                      spec.matrix);
}

} // namespace qhlat
