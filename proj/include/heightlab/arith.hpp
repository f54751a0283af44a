#pragma once

// Exact rational arithmetic over Q, the places of Q, and Weil heights of
// rational points of the projective line.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "heightlab/errors.hpp"

namespace heightlab {

using Integer = mpz_class;
/// Always canonical: gcd(num, den) = 1, den > 0, zero is 0/1.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

/// Parses "a/b" or "a" (optional sign, decimal digits only).
Rational parse_rational(std::string_view text);
std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

/// Natural logarithm of |x| for arbitrarily large x (x != 0).
double log_abs(const Integer& x);
double log_abs(const Rational& x);

/// Deterministic Miller-Rabin for n < 3.3e24; beyond that GMP's BPSW-based test.
bool is_prime(const Integer& n);

/// Prime factorization of |n| (n != 0) as ascending (prime, exponent) pairs.
std::vector<std::pair<Integer, int>> factor(const Integer& n);

/// p-adic valuation of a nonzero integer / rational.
long valuation(const Integer& x, const Integer& p);
long valuation(const Rational& x, const Integer& p);

class Place {
public:
    enum class Kind { Archimedean, Finite };

    static Place archimedean() { return Place(); }
    /// Throws InvalidArgument unless p is prime.
    static Place finite(const Integer& p);

    Kind kind() const noexcept { return kind_; }
    bool is_archimedean() const noexcept { return kind_ == Kind::Archimedean; }
    /// Only meaningful for finite places.
    const Integer& prime() const noexcept { return p_; }

    /// "inf" or the decimal prime.
    std::string label() const;

    friend bool operator==(const Place& a, const Place& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }
    /// Archimedean first, then primes ascending.
    friend bool operator<(const Place& a, const Place& b) {
        if (a.kind_ != b.kind_) return a.kind_ == Kind::Archimedean;
        return a.p_ < b.p_;
    }

private:
    Place() = default;
    Kind kind_ = Kind::Archimedean;
    Integer p_ = 0;
};

/// log|x|_v with |p|_p = 1/p. Throws UndefinedLog for x = 0.
double log_abs_at(const Rational& x, const Place& v);

/// A point [a:b] of P^1(Q) with coprime coordinates, b > 0, or (1, 0).
class ProjPointQ {
public:
    const Integer& a() const noexcept { return a_; }
    const Integer& b() const noexcept { return b_; }

    bool is_infinity() const noexcept { return b_ == 0; }
    /// Affine coordinate a/b; throws InvalidPoint at infinity.
    Rational affine() const;

    /// "inf", "a" or "a/b".
    std::string to_string() const;

    friend bool operator==(const ProjPointQ& x, const ProjPointQ& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator<(const ProjPointQ& x, const ProjPointQ& y) {
        if (x.b_ != y.b_) return x.b_ < y.b_;
        return x.a_ < y.a_;
    }

private:
    friend ProjPointQ normalize_proj(Integer a, Integer b);
    ProjPointQ(Integer a, Integer b) : a_(std::move(a)), b_(std::move(b)) {}

    Integer a_;
    Integer b_;
};

/// Throws InvalidPoint for (0, 0).
ProjPointQ normalize_proj(Integer a, Integer b);
ProjPointQ point_from_rational(const Rational& x);
/// Accepts "a/b", "a", "inf", or "[a:b]".
ProjPointQ parse_point(std::string_view text);

struct WeilHeight {
    Integer max_coord; ///< max(|a|, |b|)
    double value;      ///< log max(|a|, |b|)
};

WeilHeight weil_height_exact(const ProjPointQ& p);
double weil_height(const ProjPointQ& p);

} // namespace heightlab
