#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"

namespace qhlat {

/// Exact rational scalar backed by GMP.
///
/// Always kept in lowest terms with a positive denominator (GMP's canonical
/// form). Values print as "p/q", or just "p" when the denominator is one,
/// and parse back bit-exactly.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long num, long den) {
        if (den == 0)
            fail(ErrorCode::InvalidArgument, "rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parse "p", "-p" or "p/q". Returns nullopt on malformed input.
    static std::optional<Rational> parse(const std::string& text) {
        if (text.empty())
            return std::nullopt;
        // mpq_set_str accepts whitespace and some forms we do not want; be strict.
        std::size_t slash = text.find('/');
        const std::string num = text.substr(0, slash);
        if (!is_integer_literal(num))
            return std::nullopt;
        mpq_class v;
        if (slash == std::string::npos) {
            v = mpq_class(num, 10);
        } else {
            const std::string den = text.substr(slash + 1);
            if (!is_integer_literal(den) || den[0] == '-')
                return std::nullopt;
            if (mpq_set_str(v.get_mpq_t(), text.c_str(), 10) != 0)
                return std::nullopt;
            if (v.get_den() == 0)
                return std::nullopt;
        }
        v.canonicalize();
        return Rational(Raw{}, v);
    }

    static Rational parse_or_throw(const std::string& text) {
        auto r = parse(text);
        if (!r)
            fail(ErrorCode::ParseError, "malformed rational literal: '" + text + "'");
        return *r;
    }

    /// Exact conversion of a finite double (doubles are dyadic rationals).
    static Rational from_double(double x) {
        mpq_class v(x);
        v.canonicalize();
        return Rational(Raw{}, v);
    }

    std::string str() const {
        if (v_.get_den() == 1)
            return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    double to_double() const { return v_.get_d(); }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational abs() const { return Rational(Raw{}, ::abs(v_)); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Raw{}, a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Raw{}, a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Raw{}, a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (sgn(b.v_) == 0)
            fail(ErrorCode::InvalidArgument, "rational division by zero");
        return Rational(Raw{}, mpq_class(a.v_ / b.v_));
    }
    Rational operator-() const { return Rational(Raw{}, mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

    const mpq_class& raw() const { return v_; }

private:
    struct Raw {};
    Rational(Raw, mpq_class v) : v_(std::move(v)) {}

    static bool is_integer_literal(const std::string& s) {
        if (s.empty())
            return false;
        std::size_t k = (s[0] == '-') ? 1 : 0;
        if (k == s.size())
            return false;
        for (; k < s.size(); ++k)
            if (s[k] < '0' || s[k] > '9')
                return false;
        return true;
    }

    mpq_class v_;
};

inline Rational pow_n(const Rational& base, unsigned exp) {
    Rational r(1);
    for (unsigned k = 0; k < exp; ++k)
        r *= base;
    return r;
}

} // namespace qhlat
