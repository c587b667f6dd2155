#pragma once

/**
 * @file field.hpp
 * @brief Exact scalar fields: the rationals and prime fields F_p.
 *
 * Every algebraic structure in kdual is templated over a type satisfying
 * the `Field` concept. Arithmetic is exact; there is no floating point
 * anywhere in the library.
 */

#include <cstdint>
#include <gmpxx.h>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdual {

namespace detail {
constexpr bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
}  // namespace detail

/// Residue class modulo a prime P.
template <std::uint32_t P>
class Fp {
    static_assert(detail::is_prime(P), "Fp requires a prime modulus");

public:
    static constexpr std::uint32_t characteristic = P;
    static constexpr bool is_finite = true;
    static constexpr std::uint64_t order = P;

    constexpr Fp() = default;
    constexpr Fp(long long v) : v_(static_cast<std::uint32_t>(((v % (long long)P) + P) % P)) {}

    /// Reduces a rational number mod P. Throws when P divides the denominator.
    static Fp from_rational(const mpq_class& q) {
        mpz_class num = q.get_num() % P;
        mpz_class den = q.get_den() % P;
        if (den == 0) throw std::domain_error("denominator vanishes in F_" + std::to_string(P));
        return Fp(num.get_si()) / Fp(den.get_si());
    }

    /// All field elements in a fixed order (0, 1, ..., P-1).
    static std::vector<Fp> elements() {
        std::vector<Fp> out;
        out.reserve(P);
        for (std::uint32_t i = 0; i < P; ++i) out.emplace_back(static_cast<long long>(i));
        return out;
    }

    constexpr bool is_zero() const { return v_ == 0; }
    constexpr std::uint32_t value() const { return v_; }

    constexpr Fp operator+(Fp o) const { return raw((v_ + o.v_) % P); }
    constexpr Fp operator-(Fp o) const { return raw((v_ + P - o.v_) % P); }
    constexpr Fp operator-() const { return raw((P - v_) % P); }
    constexpr Fp operator*(Fp o) const {
        return raw(static_cast<std::uint32_t>((std::uint64_t(v_) * o.v_) % P));
    }
    Fp inverse() const {
        if (v_ == 0) throw std::domain_error("division by zero in F_p");
        // Fermat: a^(P-2)
        std::uint64_t base = v_, acc = 1, e = P - 2;
        while (e) {
            if (e & 1) acc = acc * base % P;
            base = base * base % P;
            e >>= 1;
        }
        return raw(static_cast<std::uint32_t>(acc));
    }
    Fp operator/(Fp o) const { return *this * o.inverse(); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    constexpr bool operator==(const Fp&) const = default;

    std::string to_string() const { return std::to_string(v_); }
    friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

private:
    static constexpr Fp raw(std::uint32_t v) {
        Fp r;
        r.v_ = v;
        return r;
    }
    std::uint32_t v_ = 0;
};

/// Arbitrary-precision rational number, always kept in lowest terms.
class Rational {
public:
    static constexpr std::uint32_t characteristic = 0;
    static constexpr bool is_finite = false;
    static constexpr std::uint64_t order = 0;

    Rational() = default;
    Rational(long long v) : v_(static_cast<long>(v)) {}
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    static Rational from_rational(const mpq_class& q) { return Rational(q); }

    bool is_zero() const { return sgn(v_) == 0; }
    const mpq_class& value() const { return v_; }

    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw std::domain_error("division by zero in Q");
        return Rational(mpq_class(v_ / o.v_));
    }
    Rational inverse() const { return Rational(1) / *this; }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    bool operator==(const Rational& o) const { return v_ == o.v_; }

    std::string to_string() const { return v_.get_str(); }
    friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.v_.get_str(); }

private:
    mpq_class v_{0};
};

template <class K>
concept Field = requires(K a, K b, mpq_class q) {
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { a / b } -> std::convertible_to<K>;
    { -a } -> std::convertible_to<K>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a == b } -> std::convertible_to<bool>;
    { K::from_rational(q) } -> std::convertible_to<K>;
    { a.to_string() } -> std::convertible_to<std::string>;
    K::characteristic;
    K::is_finite;
};

template <class K>
concept FiniteField = Field<K> && K::is_finite;

using F2 = Fp<2>;
using F3 = Fp<3>;
using F5 = Fp<5>;
using Q = Rational;

/// (-1)^n as a field element.
template <Field K>
K sign(long long n) {
    return (n % 2 == 0) ? K(1) : K(-1);
}

/// Parses "a", "-a" or "a/b" into an exact rational.
inline mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational number: '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

}  // namespace kdual
