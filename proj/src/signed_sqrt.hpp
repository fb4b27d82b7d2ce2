#pragma once

#include <cmath>

#include "errors.hpp"
#include "rational.hpp"

namespace qhlat {

/// Signed square root of a rational, value = sign * sqrt(square).
///
/// Closed under multiplication and negation but not addition; enough to
/// state identities like "this entry equals -sqrt(1-g^2)" exactly, with the
/// irrational part kept as its rational square.
struct SignedSqrt {
    int sign = 0;       // -1, 0, +1
    Rational square{0}; // always >= 0; zero iff sign == 0

    SignedSqrt() = default;
    SignedSqrt(int s) : sign(s == 0 ? 0 : (s > 0 ? 1 : -1)), square(s == 0 ? 0 : 1) {
        if (s != 0 && s != 1 && s != -1)
            square = Rational(static_cast<long>(s)) * Rational(static_cast<long>(s));
    }
    SignedSqrt(int s, Rational sq) : sign(s), square(std::move(sq)) {
        if (square.sign() < 0)
            fail(ErrorCode::InvalidArgument, "signed sqrt of a negative square");
        if (square.is_zero())
            sign = 0;
        if (sign == 0)
            square = Rational(0);
    }

    static SignedSqrt from_rational(const Rational& r) { return SignedSqrt(r.sign(), r * r); }
    static SignedSqrt sqrt_of(const Rational& r) {
        if (r.sign() < 0)
            fail(ErrorCode::InvalidArgument, "square root of a negative rational");
        return SignedSqrt(r.is_zero() ? 0 : 1, r);
    }

    bool is_zero() const { return sign == 0; }
    double to_double() const { return sign * std::sqrt(square.to_double()); }

    friend SignedSqrt operator*(const SignedSqrt& a, const SignedSqrt& b) {
        return SignedSqrt(a.sign * b.sign, a.square * b.square);
    }
    friend SignedSqrt operator/(const SignedSqrt& a, const SignedSqrt& b) {
        if (b.sign == 0)
            fail(ErrorCode::InvalidArgument, "signed sqrt division by zero");
        return SignedSqrt(a.sign * b.sign, a.square / b.square);
    }
    SignedSqrt operator-() const { return SignedSqrt(-sign, square); }

    friend bool operator==(const SignedSqrt& a, const SignedSqrt& b) {
        return a.sign == b.sign && a.square == b.square;
    }
    friend bool operator!=(const SignedSqrt& a, const SignedSqrt& b) { return !(a == b); }
};

inline bool scalar_is_zero(const SignedSqrt& v) { return v.is_zero(); }
inline double scalar_to_double(const SignedSqrt& v) { return v.to_double(); }

} // namespace qhlat
