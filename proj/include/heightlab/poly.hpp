#pragma once

// Dense exact univariate polynomials, binary forms and homogeneous lifts of
// rational maps of the projective line.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "heightlab/arith.hpp"

namespace heightlab {

/// Dense polynomial with exact coefficients, index = degree of the monomial.
/// The coefficient vector never carries a trailing zero; the zero polynomial
/// has no coefficients and degree -1.
template <class Coeff>
class DensePoly {
public:
    DensePoly() = default;
    explicit DensePoly(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) { trim(); }
    DensePoly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static DensePoly monomial(const Coeff& c, int degree) {
        std::vector<Coeff> v(static_cast<std::size_t>(degree) + 1, Coeff(0));
        v.back() = c;
        return DensePoly(std::move(v));
    }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<Coeff>& coeffs() const noexcept { return c_; }
    /// Zero beyond the degree.
    Coeff operator[](int i) const { return (i >= 0 && i <= degree()) ? c_[i] : Coeff(0); }
    const Coeff& leading() const { return c_.back(); }

    friend DensePoly operator+(const DensePoly& a, const DensePoly& b) {
        std::vector<Coeff> r(std::max(a.c_.size(), b.c_.size()), Coeff(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return DensePoly(std::move(r));
    }
    friend DensePoly operator-(const DensePoly& a) {
        std::vector<Coeff> r(a.c_);
        for (auto& x : r) x = -x;
        return DensePoly(std::move(r));
    }
    friend DensePoly operator-(const DensePoly& a, const DensePoly& b) { return a + (-b); }
    friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Coeff> r(a.c_.size() + b.c_.size() - 1, Coeff(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return DensePoly(std::move(r));
    }
    friend DensePoly operator*(const Coeff& s, const DensePoly& a) {
        std::vector<Coeff> r(a.c_);
        for (auto& x : r) x *= s;
        return DensePoly(std::move(r));
    }
    friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.c_ == b.c_; }

    DensePoly pow(unsigned n) const {
        DensePoly result(std::vector<Coeff>{Coeff(1)});
        DensePoly base = *this;
        while (n) {
            if (n & 1u) result = result * base;
            n >>= 1u;
            if (n) base = base * base;
        }
        return result;
    }

    /// x^deg * p(1/x).
    DensePoly reversed() const {
        std::vector<Coeff> r(c_.rbegin(), c_.rend());
        return DensePoly(std::move(r));
    }

    /// p(q(x)) by Horner.
    DensePoly compose(const DensePoly& q) const {
        DensePoly r;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * q + DensePoly(std::vector<Coeff>{*it});
        return r;
    }

    Coeff eval(const Coeff& x) const {
        Coeff r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Coeff> c_;
};

using IntPoly = DensePoly<Integer>;
using RatPoly = DensePoly<Rational>;

RatPoly to_rat(const IntPoly& p);
/// Gcd of the coefficients (nonnegative; 0 for the zero polynomial).
Integer content(const IntPoly& p);
/// p / content(p), with positive leading coefficient.
IntPoly primitive_part(const IntPoly& p);
/// Scales by the lcm of denominators and takes the primitive part with
/// positive leading coefficient.
IntPoly clear_denominators(const RatPoly& p);
/// Exact value at a rational point.
Rational eval_rational(const RatPoly& p, const Rational& x);
std::complex<double> eval_complex(const RatPoly& p, std::complex<double> z);
std::vector<double> to_doubles(const RatPoly& p);
std::vector<double> to_doubles(const IntPoly& p);

/// Euclidean division over Q; throws InvalidArgument on a zero divisor.
void divmod(const RatPoly& a, const RatPoly& b, RatPoly& quotient, RatPoly& remainder);
/// Monic gcd over Q (zero only if both inputs are zero).
RatPoly gcd(const RatPoly& a, const RatPoly& b);

/// Canonical text form, e.g. "x^2 - 3/2*x + 1". Parsed back by parse_poly.
std::string to_string(const RatPoly& p, char var = 'x');
std::string to_string(const IntPoly& p, char var = 'x');

/// A binary form F(X, Y) = sum_i c_i X^i Y^(d-i) of fixed degree d. Unlike a
/// DensePoly the degree is part of the value: the X^d coefficient may be 0.
struct BinaryForm {
    int degree = 0;
    std::vector<Integer> coeffs; ///< size degree + 1, index = power of X

    Integer eval(const Integer& x, const Integer& y) const;
    /// Dehomogenization F(z, 1).
    IntPoly dehomogenize() const;
    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
};

BinaryForm form_mul(const BinaryForm& a, const BinaryForm& b);
BinaryForm form_add(const BinaryForm& a, const BinaryForm& b);

/// Sylvester resultant of two forms of equal degree d: the determinant of the
/// 2d x 2d matrix whose first d rows hold the coefficients of F0 (X^d first)
/// and last d rows those of F1. Res(X^2, 2Y^2) = 4.
Integer resultant(const BinaryForm& f0, const BinaryForm& f1);

/// Homogeneous lift (F0, F1) of a degree-d rational self-map of P^1.
/// Invariants: the pair is primitive, d >= 1 and Res(F0, F1) != 0.
class HomogPair {
public:
    /// Divides out the common content; throws DegenerateMap if Res = 0 and
    /// InvalidArgument on a degree mismatch.
    HomogPair(BinaryForm f0, BinaryForm f1);

    /// The map num(z)/den(z); gcd(num, den) must be 1.
    static HomogPair from_rational_function(const RatPoly& num, const RatPoly& den);
    static HomogPair from_polynomial(const RatPoly& p) {
        return from_rational_function(p, RatPoly{1});
    }

    int degree() const noexcept { return f0_.degree; }
    const BinaryForm& f0() const noexcept { return f0_; }
    const BinaryForm& f1() const noexcept { return f1_; }
    const Integer& res() const noexcept { return res_; }

    /// True when F1 = c*Y^d, i.e. the map is a polynomial.
    bool is_polynomial() const;

    /// Text form "num/den" (or "num" for polynomials) in the variable z.
    std::string to_string() const;

    friend bool operator==(const HomogPair& a, const HomogPair& b) {
        return a.f0_ == b.f0_ && a.f1_ == b.f1_;
    }

private:
    BinaryForm f0_;
    BinaryForm f1_;
    Integer res_;
};

/// Resultant of the lift (the value cached in the pair).
inline Integer resultant(const HomogPair& f) { return f.res(); }

/// Lift of F o G, re-primitivized.
HomogPair compose(const HomogPair& f, const HomogPair& g);

struct StepResult {
    ProjPointQ image;
    Integer gcd;                      ///< g = gcd(F0(a,b), F1(a,b)) > 0
    std::map<Integer, int> ledger;    ///< factorization of g
};

/// One application of F with gcd renormalization. Every prime in the ledger
/// divides Res(F).
StepResult homog_step(const HomogPair& f, const ProjPointQ& p);

/// Floating evaluation of a form at (x, y).
std::complex<double> eval_form(const BinaryForm& f, std::complex<double> x, std::complex<double> y);
double eval_form(const BinaryForm& f, double x, double y);

} // namespace heightlab
