#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "ovs/error.hpp"

namespace ovs {

/// Exact rational scalar. Always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den) {
        if (den == 0) throw InvalidArgument("zero denominator");
        v_ = mpq_class(mpz_class(num), mpz_class(den));
        v_.canonicalize();
    }
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Accepts "p", "p/q" and finite decimals such as "-0.25".
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw ParseError("empty rational literal");
        auto dot = s.find('.');
        try {
            if (dot != std::string::npos) {
                std::string digits = s.substr(0, dot) + s.substr(dot + 1);
                if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad decimal '" + s + "'");
                if (digits[0] == '+') digits.erase(0, 1);
                mpz_class num(digits, 10);
                mpz_class den;
                mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
                return Rational(mpq_class(num, den));
            }
            if (s[0] == '+') s.erase(0, 1);
            auto slash = s.find('/');
            if (slash != std::string::npos) {
                mpz_class num(s.substr(0, slash), 10);
                mpz_class den(s.substr(slash + 1), 10);
                if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
                return Rational(mpq_class(num, den));
            }
            return Rational(mpq_class(mpz_class(s, 10)));
        } catch (const std::invalid_argument&) {
            throw ParseError("bad rational literal '" + std::string(text) + "'");
        }
    }

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    std::string str() const { return v_.get_str(); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    Rational inverse() const {
        if (is_zero()) throw InvalidArgument("inverse of zero");
        return Rational(mpq_class(1 / v_));
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw InvalidArgument("division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

private:
    mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ovs
