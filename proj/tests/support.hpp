#pragma once

// Dense, brute-force oracle helpers shared by the test suites. These stay
// deliberately independent of the banded implementation paths they check.

#include <random>
#include <vector>

#include "band_matrix.hpp"

namespace test_support {

template <typename S>
using Dense = std::vector<std::vector<S>>;

template <typename S>
Dense<S> to_dense(const qhlat::BandMatrix<S>& m) {
    const std::size_t n = static_cast<std::size_t>(m.size());
    Dense<S> out(n, std::vector<S>(n, S(0)));
    m.for_each_entry([&](long i, long j, const S& v) {
        out[static_cast<std::size_t>(i + m.window())][static_cast<std::size_t>(j + m.window())] = v;
    });
    return out;
}

template <typename S>
Dense<S> dense_product(const Dense<S>& a, const Dense<S>& b) {
    const std::size_t n = a.size();
    Dense<S> c(n, std::vector<S>(n, S(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                c[i][j] = c[i][j] + a[i][k] * b[k][j];
    return c;
}

template <typename S>
bool dense_equals(const Dense<S>& a, const qhlat::BandMatrix<S>& b) {
    const long n = b.window();
    for (long i = -n; i <= n; ++i)
        for (long j = -n; j <= n; ++j)
            if (!(a[static_cast<std::size_t>(i + n)][static_cast<std::size_t>(j + n)] == b.at(i, j)))
                return false;
    return true;
}

/// Leading principal minors (from the top-left corner, i.e. site -N) via
/// exact fraction-free expansion on small windows.
inline std::vector<qhlat::Rational> leading_principal_minors(
    const qhlat::BandMatrix<qhlat::Rational>& m) {
    using qhlat::Rational;
    const auto dense = to_dense(m);
    const std::size_t n = dense.size();
    std::vector<Rational> minors;
    for (std::size_t size = 1; size <= n; ++size) {
        // rational Gaussian elimination with row swaps on the leading block
        Dense<Rational> a(size, std::vector<Rational>(size));
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                a[i][j] = dense[i][j];
        Rational det(1);
        bool singular = false;
        for (std::size_t col = 0; col < size && !singular; ++col) {
            std::size_t pivot = col;
            while (pivot < size && a[pivot][col].is_zero())
                ++pivot;
            if (pivot == size) {
                singular = true;
                break;
            }
            if (pivot != col) {
                std::swap(a[pivot], a[col]);
                det = -det;
            }
            det *= a[col][col];
            for (std::size_t r = col + 1; r < size; ++r) {
                if (a[r][col].is_zero())
                    continue;
                Rational f = a[r][col] / a[col][col];
                for (std::size_t c = col; c < size; ++c)
                    a[r][c] -= f * a[col][c];
            }
        }
        minors.push_back(singular ? Rational(0) : det);
    }
    return minors;
}

inline qhlat::Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 4);
    return qhlat::Rational(num(rng), den(rng));
}

inline qhlat::BandMatrix<qhlat::Rational> random_band(std::mt19937& rng, long window,
                                                      int bandwidth) {
    qhlat::BandMatrix<qhlat::Rational> m(window);
    for (int d = -bandwidth; d <= bandwidth; ++d) {
        auto& diag = m.ensure_diagonal(d);
        for (auto& v : diag)
            v = random_rational(rng);
    }
    m.prune_zero_diagonals();
    return m;
}

inline qhlat::BandMatrix<qhlat::Rational> random_symmetric_band(std::mt19937& rng, long window,
                                                                int bandwidth) {
    auto m = random_band(rng, window, bandwidth);
    return qhlat::scale(qhlat::Rational(1, 2), qhlat::add(m, qhlat::adjoint(m)));
}

} // namespace test_support
