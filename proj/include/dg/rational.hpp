#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "dg/error.hpp"

namespace dg {

/// Exact rational with int64 parts, always in lowest terms, denominator > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) fail(ErrorCode::Validation, "zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return {a.num * b.num, a.den * b.den};
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) fail(ErrorCode::Validation, "division by zero");
        return {a.num * b.den, a.den * b.num};
    }
    Rational operator-() const {
        Rational r = *this;
        r.num = -r.num;
        return r;
    }

    bool operator==(const Rational&) const = default;
    std::strong_ordering operator<=>(const Rational& o) const {
        // cross-multiplication; denominators are positive
        std::int64_t l = num * o.den, r = o.num * den;
        return l <=> r;
    }

    bool is_zero() const { return num == 0; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

/// Parses "p" or "p/q"; throws SyntaxError on malformed input.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        std::size_t used = 0;
        std::int64_t n = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash))
            fail(ErrorCode::SyntaxError, "bad rational: " + s);
        if (slash == std::string::npos) return Rational(n);
        std::int64_t d = std::stoll(s.substr(slash + 1), &used);
        if (used != s.size() - slash - 1)
            fail(ErrorCode::SyntaxError, "bad rational: " + s);
        return Rational(n, d);
    } catch (const std::invalid_argument&) {
        fail(ErrorCode::SyntaxError, "bad rational: " + s);
    } catch (const std::out_of_range&) {
        fail(ErrorCode::SyntaxError, "rational out of range: " + s);
    }
}

} // namespace dg
