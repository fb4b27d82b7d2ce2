#include "reference_forms.hpp"

#include <map>
#include <string>
#include <vector>

namespace qhlat {

namespace {

// Central R-plets of the nonvanishing diagonals, listed per offset exactly
// as the explicit matrices display them. Symbols: a..f are the corner/wedge
// coefficients, z is the anomalous central element.
const std::map<int, std::map<int, std::vector<char>>>& plet_tables() {
    static const std::map<int, std::map<int, std::vector<char>>> tables = {
        {1, {{0, {'z'}}}},
        {2, {{1, {'a', 'a'}}}},
        {3, {{2, {'a', 'b', 'a'}}, {0, {'b', 'z', 'b'}}}},
        {4, {{3, {'a', 'b', 'b', 'a'}}, {1, {'b', 'c', 'c', 'b'}}}},
        {5,
         {{4, {'a', 'b', 'b', 'b', 'a'}},
          {2, {'b', 'c', 'd', 'c', 'b'}},
          {0, {'b', 'd', 'z', 'd', 'b'}}}},
        {6,
         {{5, {'a', 'b', 'b', 'b', 'b', 'a'}},
          {3, {'b', 'c', 'd', 'd', 'c', 'b'}},
          {1, {'b', 'd', 'e', 'e', 'd', 'b'}}}},
        {7,
         {{6, {'a', 'b', 'b', 'b', 'b', 'b', 'a'}},
          {4, {'b', 'c', 'd', 'd', 'd', 'c', 'b'}},
          {2, {'b', 'd', 'e', 'f', 'e', 'd', 'b'}},
          {0, {'b', 'd', 'f', 'z', 'f', 'd', 'b'}}}},
    };
    return tables;
}

Rational symbol_value(char symbol, int bands, const Rational& g) {
    const Rational one(1);
    const Rational damp = one - Rational(2) * g * g;
    switch (symbol) {
    case 'a': return one + g;
    case 'b': return one - g * g;
    case 'c': return (one + g) * damp;
    case 'd': return (one - g * g) * damp;
    case 'e': return (one + g) * damp * damp;
    case 'f': return (one - g * g) * damp * damp;
    case 'z': {
        if (g == one)
            fail(ErrorCode::SpectralSingularity, "central element undefined at g = 1");
        // z_1 = (1+g)/(1-g), then one extra factor of (1-2g^2) per step
        Rational z = (one + g) / (one - g);
        for (int r = 3; r <= bands; r += 2)
            z *= damp;
        return z;
    }
    }
    fail(ErrorCode::InvalidArgument, "unknown coefficient symbol");
}

} // namespace

BandMatrix<Rational> reference_theta(int bands, const Rational& g, long window) {
    auto table_it = plet_tables().find(bands);
    if (table_it == plet_tables().end())
        fail(ErrorCode::InvalidArgument, "reference metrics cover R = 1..7 only");
    if (window < 2 * bands)
        fail(ErrorCode::InvalidArgument, "window too small for the reference metric");

    BandMatrix<Rational> m(window);
    for (const auto& [offset, plet] : table_it->second) {
        for (int d : {offset, -offset}) {
            auto& diag = m.ensure_diagonal(d);
            for (auto& v : diag)
                v = Rational(1);
            // the R-plet is centered across the diagonal; on the signed
            // offset d it occupies rows -(R-1+d)/2 .. (R-1-d)/2
            const long start = -(static_cast<long>(bands) - 1 + d) / 2;
            for (std::size_t k = 0; k < plet.size(); ++k) {
                const long i = start + static_cast<long>(k);
                diag[static_cast<std::size_t>(i - m.row_lo(d))] = symbol_value(plet[k], bands, g);
            }
            if (offset == 0)
                break;
        }
    }
    return m;
}

BandMatrix<SignedSqrt> reference_hermitized_diagonal(const Rational& g, long window) {
    if (window < 2)
        fail(ErrorCode::InvalidArgument, "window too small");
    const Rational one(1);
    BandMatrix<SignedSqrt> m(window);
    for (long i = -window; i <= window; ++i)
        m.set(i, i, SignedSqrt::from_rational(Rational(2)));
    const SignedSqrt hop = SignedSqrt::from_rational(Rational(-1));
    const SignedSqrt defect = -SignedSqrt::sqrt_of(one - g * g);
    for (long i = -window; i < window; ++i) {
        const bool touches_center = (i == -1 || i == 0);
        m.set(i, i + 1, touches_center ? defect : hop);
        m.set(i + 1, i, touches_center ? defect : hop);
    }
    return m;
}

BandMatrix<double> reference_hermitized_tridiagonal(const Rational& g, long window) {
    if (window < 3)
        fail(ErrorCode::InvalidArgument, "window too small");
    const double gf = g.to_double();
    BandMatrix<double> m(window);
    for (long i = -window; i <= window; ++i)
        m.set(i, i, 2.0);
    for (long i = -window; i < window; ++i) {
        m.set(i, i + 1, -1.0);
        m.set(i + 1, i, -1.0);
    }
    const double coupling = -std::sqrt(2.0 * gf * gf * (1.0 - gf * gf));
    m.set(-1, -1, 2.0 - gf * gf);
    m.set(0, 0, 2.0 * gf * gf);
    m.set(1, 1, 2.0 - gf * gf);
    for (auto [i, j] : {std::pair<long, long>{-1, 0}, {0, -1}, {0, 1}, {1, 0}})
        m.set(i, j, coupling);
    m.set(-1, 1, 1.0 - gf * gf);
    m.set(1, -1, 1.0 - gf * gf);
    return m;
}

} // namespace qhlat
