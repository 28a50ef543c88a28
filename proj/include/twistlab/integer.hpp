#pragma once

// Exact integer and rational types plus the few integer-theoretic helpers the
// rest of the library needs (integer roots, squarefree decomposition).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "twistlab/error.hpp"

namespace twistlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Integer& x) { return x.sign(); }

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(abs(a), abs(b));
}

/// Floor division for a positive or negative divisor.
inline Integer floor_div(const Integer& a, const Integer& b) {
    if (b == 0) throw Error(ErrorKind::division_by_zero, "division by zero");
    Integer q = a / b; // truncates toward zero
    Integer r = a - q * b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

/// floor(sqrt(n)) for n >= 0, by Newton iteration on integers.
inline Integer isqrt(const Integer& n) {
    if (n < 0) throw Error(ErrorKind::invalid_argument, "isqrt of a negative integer");
    if (n < 2) return n;
    // Start above the root: 2^(ceil(bits/2)).
    Integer x = Integer(1) << ((boost::multiprecision::msb(n) / 2) + 1);
    while (true) {
        Integer y = (x + n / x) >> 1;
        if (y >= x) return x;
        x = std::move(y);
    }
}

inline bool is_square(const Integer& n) {
    if (n < 0) return false;
    Integer s = isqrt(n);
    return s * s == n;
}

/// floor(n^(1/k)) for n >= 0, k >= 1, by bisection.
inline Integer iroot(const Integer& n, unsigned k) {
    if (k == 0) throw Error(ErrorKind::invalid_argument, "zeroth root");
    if (n < 0) throw Error(ErrorKind::invalid_argument, "iroot of a negative integer");
    if (k == 1 || n < 2) return n;
    if (k == 2) return isqrt(n);
    Integer lo = 1;
    Integer hi = Integer(1) << (boost::multiprecision::msb(n) / k + 1);
    // Invariant: lo^k <= n < hi^k.
    while (hi - lo > 1) {
        Integer mid = (lo + hi) >> 1;
        if (boost::multiprecision::pow(mid, k) <= n) lo = mid;
        else hi = mid;
    }
    return lo;
}

/// Exact k-th root of an integer, if it has one. Odd k admits negative input.
inline std::optional<Integer> exact_root(const Integer& n, unsigned k) {
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = exact_root(Integer(-n), k);
        if (!r) return std::nullopt;
        return Integer(-*r);
    }
    Integer r = iroot(n, k);
    if (boost::multiprecision::pow(r, k) != n) return std::nullopt;
    return r;
}

/// Exact k-th root of a rational, if it has one.
inline std::optional<Rational> exact_root(const Rational& x, unsigned k) {
    auto num = exact_root(Integer(boost::multiprecision::numerator(x)), k);
    if (!num) return std::nullopt;
    auto den = exact_root(Integer(boost::multiprecision::denominator(x)), k);
    if (!den) return std::nullopt;
    return Rational(*num, *den);
}

/// Splits n >= 1 into (s, f) with n = s^2 * f and f squarefree.
/// Trial division; intended for radicands of desk-scale size.
inline std::pair<Integer, Integer> squarefree_decompose(const Integer& n) {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "squarefree_decompose needs n >= 1");
    Integer square = 1;
    Integer rest = n;
    Integer free_part = 1;
    // Past the cube root, what is left has at most two prime factors, so it is
    // either squarefree or a prime square.
    for (Integer p = 2; p * p * p <= rest; p += (p == 2 ? 1 : 2)) {
        if (rest % p != 0) continue;
        Integer pp = p * p;
        while (rest % pp == 0) {
            rest /= pp;
            square *= p;
        }
        if (rest % p == 0) {
            rest /= p;
            free_part *= p;
        }
    }
    const Integer s = isqrt(rest);
    if (rest > 1 && s * s == rest) {
        square *= s;
    } else {
        free_part *= rest;
    }
    return {square, free_part};
}

inline Integer parse_integer(const std::string& text) {
    if (text.empty()) throw Error(ErrorKind::parse, "empty integer");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw Error(ErrorKind::parse, "malformed integer '" + text + "'");
    for (std::size_t k = i; k < text.size(); ++k) {
        if (text[k] < '0' || text[k] > '9')
            throw Error(ErrorKind::parse, "malformed integer '" + text + "'");
    }
    Integer v(text.substr(i));
    return text[0] == '-' ? Integer(-v) : v;
}

/// Accepts "n" or "n/m" with m != 0.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::division_by_zero, "zero denominator in '" + text + "'");
    return Rational(num, den);
}

inline std::string to_string(const Integer& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
    const Integer num = boost::multiprecision::numerator(x);
    const Integer den = boost::multiprecision::denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Integer numerator(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Integer denominator(const Rational& x) { return boost::multiprecision::denominator(x); }

inline bool fits_int64(const Integer& x) {
    return x >= std::numeric_limits<std::int64_t>::min() &&
           x <= std::numeric_limits<std::int64_t>::max();
}

} // namespace twistlab
