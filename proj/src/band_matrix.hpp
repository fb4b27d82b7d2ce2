#pragma once

#include <cmath>
#include <cstdlib>
#include <map>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace qhlat {

inline bool scalar_is_zero(const Rational& r) { return r.is_zero(); }
inline bool scalar_is_zero(double x) { return x == 0.0; }
inline Rational scalar_abs(const Rational& r) { return r.abs(); }
inline double scalar_abs(double x) { return std::abs(x); }
inline double scalar_to_double(const Rational& r) { return r.to_double(); }
inline double scalar_to_double(double x) { return x; }

/// Banded matrix on the symmetric index window -N..N, stored diagonal by
/// diagonal. The entry (i,j) lives on offset d = j-i; offsets that are not
/// stored are implicitly zero. Each stored diagonal holds exactly
/// 2N+1-|d| values.
///
/// Instantiated with Rational for exact verification work and with double
/// for scans; all scalars are real.
template <typename S>
class BandMatrix {
public:
    explicit BandMatrix(long window) : window_(window) {
        if (window < 0)
            fail(ErrorCode::InvalidArgument, "band matrix window must be >= 0");
    }

    static BandMatrix identity(long window) {
        BandMatrix m(window);
        auto& diag = m.ensure_diagonal(0);
        for (auto& v : diag)
            v = S(1);
        return m;
    }

    long window() const { return window_; }
    long size() const { return 2 * window_ + 1; }

    /// Largest |offset| among stored diagonals (0 for an all-zero matrix).
    int bandwidth() const {
        int bw = 0;
        for (const auto& [d, vec] : diagonals_)
            bw = std::max(bw, std::abs(d));
        return bw;
    }

    bool has_diagonal(int offset) const { return diagonals_.count(offset) != 0; }

    std::vector<int> offsets() const {
        std::vector<int> out;
        out.reserve(diagonals_.size());
        for (const auto& [d, vec] : diagonals_)
            out.push_back(d);
        return out;
    }

    long row_lo(int offset) const { return offset >= 0 ? -window_ : -window_ - offset; }
    long row_hi(int offset) const { return offset >= 0 ? window_ - offset : window_; }

    const std::vector<S>& diagonal(int offset) const {
        auto it = diagonals_.find(offset);
        if (it == diagonals_.end())
            fail(ErrorCode::InvalidArgument, "diagonal not stored");
        return it->second;
    }

    const S& at(long i, long j) const {
        check_index(i, j);
        const int d = static_cast<int>(j - i);
        auto it = diagonals_.find(d);
        if (it == diagonals_.end())
            return zero_ref();
        return it->second[static_cast<std::size_t>(i - row_lo(d))];
    }

    void set(long i, long j, S value) {
        check_index(i, j);
        const int d = static_cast<int>(j - i);
        if (!diagonals_.count(d) && scalar_is_zero(value))
            return;
        ensure_diagonal(d)[static_cast<std::size_t>(i - row_lo(d))] = std::move(value);
    }

    std::vector<S>& ensure_diagonal(int offset) {
        if (std::abs(offset) > 2 * window_)
            fail(ErrorCode::InvalidArgument, "diagonal offset outside window");
        auto it = diagonals_.find(offset);
        if (it == diagonals_.end()) {
            const long len = 2 * window_ + 1 - std::abs(offset);
            it = diagonals_.emplace(offset, std::vector<S>(static_cast<std::size_t>(len), S(0))).first;
        }
        return it->second;
    }

    /// Drop diagonals that hold only zeros, so bandwidth() reflects content.
    void prune_zero_diagonals() {
        for (auto it = diagonals_.begin(); it != diagonals_.end();) {
            bool all_zero = true;
            for (const auto& v : it->second)
                if (!scalar_is_zero(v)) {
                    all_zero = false;
                    break;
                }
            it = all_zero ? diagonals_.erase(it) : ++it;
        }
    }

    template <typename F>
    void for_each_entry(F&& f) const {
        for (const auto& [d, vec] : diagonals_) {
            const long lo = row_lo(d);
            for (long i = lo; i <= row_hi(d); ++i)
                f(i, i + d, vec[static_cast<std::size_t>(i - lo)]);
        }
    }

    friend bool operator==(const BandMatrix& a, const BandMatrix& b) {
        if (a.window_ != b.window_)
            return false;
        std::map<int, bool> seen;
        for (const auto& [d, vec] : a.diagonals_)
            seen[d] = true;
        for (const auto& [d, vec] : b.diagonals_)
            seen[d] = true;
        for (const auto& [d, flag] : seen) {
            for (long i = a.row_lo(d); i <= a.row_hi(d); ++i)
                if (!(a.at(i, i + d) == b.at(i, i + d)))
                    return false;
        }
        return true;
    }
    friend bool operator!=(const BandMatrix& a, const BandMatrix& b) { return !(a == b); }

private:
    static const S& zero_ref() {
        static const S zero(0);
        return zero;
    }

    void check_index(long i, long j) const {
        if (i < -window_ || i > window_ || j < -window_ || j > window_)
            fail(ErrorCode::InvalidArgument, "matrix index outside window");
    }

    long window_;
    std::map<int, std::vector<S>> diagonals_;
};

template <typename S>
void require_same_window(const BandMatrix<S>& a, const BandMatrix<S>& b) {
    if (a.window() != b.window())
        fail(ErrorCode::WindowMismatch, "band matrices have different windows");
}

/// C(i,j) = sum_k A(i,k) B(k,j) restricted to the shared window.
template <typename S>
BandMatrix<S> multiply(const BandMatrix<S>& a, const BandMatrix<S>& b) {
    require_same_window(a, b);
    const long n = a.window();
    BandMatrix<S> c(n);
    for (int da : a.offsets()) {
        for (int db : b.offsets()) {
            const long d = static_cast<long>(da) + db;
            if (std::labs(d) > 2 * n)
                continue;
            const int dc = static_cast<int>(d);
            // i constrained by row ranges of A(.,.+da), B(.+da,.+da+db), C(.,.+dc)
            const long lo = std::max({a.row_lo(da), b.row_lo(db) - da, c.row_lo(dc)});
            const long hi = std::min({a.row_hi(da), b.row_hi(db) - da, c.row_hi(dc)});
            if (lo > hi)
                continue;
            auto& out = c.ensure_diagonal(dc);
            const long out_lo = c.row_lo(dc);
            for (long i = lo; i <= hi; ++i)
                out[static_cast<std::size_t>(i - out_lo)] =
                    out[static_cast<std::size_t>(i - out_lo)] + a.at(i, i + da) * b.at(i + da, i + d);
        }
    }
    c.prune_zero_diagonals();
    return c;
}

template <typename S>
BandMatrix<S> add(const BandMatrix<S>& a, const BandMatrix<S>& b) {
    require_same_window(a, b);
    BandMatrix<S> c = a;
    b.for_each_entry([&](long i, long j, const S& v) { c.set(i, j, c.at(i, j) + v); });
    c.prune_zero_diagonals();
    return c;
}

template <typename S>
BandMatrix<S> subtract(const BandMatrix<S>& a, const BandMatrix<S>& b) {
    require_same_window(a, b);
    BandMatrix<S> c = a;
    b.for_each_entry([&](long i, long j, const S& v) { c.set(i, j, c.at(i, j) - v); });
    c.prune_zero_diagonals();
    return c;
}

template <typename S>
BandMatrix<S> scale(const S& factor, const BandMatrix<S>& a) {
    BandMatrix<S> c(a.window());
    a.for_each_entry([&](long i, long j, const S& v) { c.set(i, j, factor * v); });
    c.prune_zero_diagonals();
    return c;
}

/// Adjoint; the scalars are real, so this is the transpose.
template <typename S>
BandMatrix<S> adjoint(const BandMatrix<S>& a) {
    BandMatrix<S> t(a.window());
    a.for_each_entry([&](long i, long j, const S& v) { t.set(j, i, v); });
    return t;
}

/// Reflection through the center, entry(i,j) -> entry(-i,-j).
template <typename S>
BandMatrix<S> parity_reflected(const BandMatrix<S>& a) {
    BandMatrix<S> p(a.window());
    a.for_each_entry([&](long i, long j, const S& v) { p.set(-i, -j, v); });
    return p;
}

inline BandMatrix<double> to_float(const BandMatrix<Rational>& a) {
    BandMatrix<double> f(a.window());
    a.for_each_entry([&](long i, long j, const Rational& v) { f.set(i, j, v.to_double()); });
    return f;
}

template <typename S>
S max_abs_within(const BandMatrix<S>& a, long halfwidth) {
    S best(0);
    a.for_each_entry([&](long i, long j, const S& v) {
        if (std::labs(i) <= halfwidth && std::labs(j) <= halfwidth) {
            S m = scalar_abs(v);
            if (best < m)
                best = m;
        }
    });
    return best;
}

template <typename S>
S max_abs(const BandMatrix<S>& a) {
    return max_abs_within(a, a.window());
}

template <typename S>
struct QuasiHermiticityReport {
    BandMatrix<S> residual;
    S interior_max_abs;
    long interior_halfwidth; // negative when truncation leaves no interior
};

/// Residual of the quasi-Hermiticity constraint, H^dag Theta - Theta H.
/// The reported maximum is taken over the interior block untouched by
/// truncation, |i|,|j| <= N - bw(H) - bw(Theta).
template <typename S>
QuasiHermiticityReport<S> quasi_hermiticity_residual(const BandMatrix<S>& h, const BandMatrix<S>& theta) {
    require_same_window(h, theta);
    BandMatrix<S> res = subtract(multiply(adjoint(h), theta), multiply(theta, h));
    const long bound = h.window() - h.bandwidth() - theta.bandwidth();
    S max_val = bound >= 0 ? max_abs_within(res, bound) : S(0);
    return {std::move(res), std::move(max_val), bound};
}

struct PivotFailure {
    long site; // window index of the first non-positive pivot
};

template <typename S>
struct BandLDLT {
    BandMatrix<S> unit_lower; // L with unit diagonal
    std::vector<S> pivots;    // D, indexed by i + N
};

inline bool pivot_acceptable(const Rational& pivot, const Rational& /*scale*/) {
    return pivot.sign() > 0;
}
inline bool pivot_acceptable(double pivot, double scale) {
    return pivot > 1e-13 * scale;
}

/// Symmetric banded LDL^T factorization, eliminating from site -N upward.
/// Fails at the first pivot that is not acceptably positive: exactly <= 0 in
/// rational arithmetic, <= 1e-13 * max-diagonal in floating point.
template <typename S>
std::variant<BandLDLT<S>, PivotFailure> banded_ldlt(const BandMatrix<S>& a) {
    if (!(a == adjoint(a)))
        fail(ErrorCode::InvalidArgument, "ldlt factorization requires a symmetric matrix");
    const long n = a.window();
    const int w = a.bandwidth();
    S diag_scale(0);
    for (long i = -n; i <= n; ++i) {
        S m = scalar_abs(a.at(i, i));
        if (diag_scale < m)
            diag_scale = m;
    }

    BandMatrix<S> lower(n);
    std::vector<S> d(static_cast<std::size_t>(2 * n + 1), S(0));
    auto dref = [&](long i) -> S& { return d[static_cast<std::size_t>(i + n)]; };

    for (long j = -n; j <= n; ++j) {
        S pivot = a.at(j, j);
        for (long k = std::max(-n, j - w); k < j; ++k)
            pivot = pivot - lower.at(j, k) * lower.at(j, k) * dref(k);
        if (!pivot_acceptable(pivot, diag_scale))
            return PivotFailure{j};
        dref(j) = pivot;
        lower.set(j, j, S(1));
        for (long i = j + 1; i <= std::min(n, j + w); ++i) {
            S v = a.at(i, j);
            for (long k = std::max(-n, i - w); k < j; ++k)
                v = v - lower.at(i, k) * lower.at(j, k) * dref(k);
            lower.set(i, j, v / dref(j));
        }
    }
    return BandLDLT<S>{std::move(lower), std::move(d)};
}

/// Upper-triangular band factor U with A = U^T U and positive diagonal.
/// Positivity is decided by banded_ldlt (exactly, in rational mode); the
/// returned factor carries the square roots and is therefore floating point.
template <typename S>
std::variant<BandMatrix<double>, PivotFailure> banded_cholesky(const BandMatrix<S>& a) {
    auto ldlt = banded_ldlt(a);
    if (std::holds_alternative<PivotFailure>(ldlt))
        return std::get<PivotFailure>(ldlt);
    const auto& f = std::get<BandLDLT<S>>(ldlt);
    const long n = a.window();
    BandMatrix<double> u(n);
    f.unit_lower.for_each_entry([&](long i, long j, const S& v) {
        // U = D^{1/2} L^T
        const double root = std::sqrt(scalar_to_double(f.pivots[static_cast<std::size_t>(j + n)]));
        u.set(j, i, root * scalar_to_double(v));
    });
    return u;
}

/// Dense LU with partial pivoting, factored once and reused across
/// right-hand sides. Exact in rational mode (pivoting by largest |entry|
/// is still well defined there).
template <typename S>
class DenseLU {
public:
    explicit DenseLU(const BandMatrix<S>& a)
        : n_(static_cast<std::size_t>(a.size())),
          m_(n_, std::vector<S>(n_, S(0))),
          perm_(n_) {
        a.for_each_entry([&](long i, long j, const S& v) {
            m_[static_cast<std::size_t>(i + a.window())][static_cast<std::size_t>(j + a.window())] = v;
        });
        for (std::size_t k = 0; k < n_; ++k)
            perm_[k] = k;
        for (std::size_t col = 0; col < n_; ++col) {
            std::size_t pivot_row = col;
            S best = scalar_abs(m_[col][col]);
            for (std::size_t r = col + 1; r < n_; ++r) {
                S cand = scalar_abs(m_[r][col]);
                if (best < cand) {
                    best = cand;
                    pivot_row = r;
                }
            }
            if (scalar_is_zero(m_[pivot_row][col]))
                fail(ErrorCode::SingularMatrix, "singular matrix in solve");
            if (pivot_row != col) {
                std::swap(m_[pivot_row], m_[col]);
                std::swap(perm_[pivot_row], perm_[col]);
            }
            for (std::size_t r = col + 1; r < n_; ++r) {
                if (scalar_is_zero(m_[r][col]))
                    continue;
                m_[r][col] = m_[r][col] / m_[col][col];
                for (std::size_t c = col + 1; c < n_; ++c)
                    m_[r][c] = m_[r][c] - m_[r][col] * m_[col][c];
            }
        }
    }

    std::vector<S> solve(const std::vector<S>& rhs) const {
        if (rhs.size() != n_)
            fail(ErrorCode::InvalidArgument, "right-hand side length does not match window");
        std::vector<S> x(n_, S(0));
        for (std::size_t r = 0; r < n_; ++r) {
            S acc = rhs[perm_[r]];
            for (std::size_t c = 0; c < r; ++c)
                acc = acc - m_[r][c] * x[c];
            x[r] = acc;
        }
        for (std::size_t rev = 0; rev < n_; ++rev) {
            const std::size_t r = n_ - 1 - rev;
            S acc = x[r];
            for (std::size_t c = r + 1; c < n_; ++c)
                acc = acc - m_[r][c] * x[c];
            x[r] = acc / m_[r][r];
        }
        return x;
    }

private:
    std::size_t n_;
    std::vector<std::vector<S>> m_;
    std::vector<std::size_t> perm_;
};

/// Solve A x = rhs; exact in rational mode. rhs[k] addresses row k-N.
template <typename S>
std::vector<S> solve_band(const BandMatrix<S>& a, const std::vector<S>& rhs) {
    return DenseLU<S>(a).solve(rhs);
}

} // namespace qhlat
