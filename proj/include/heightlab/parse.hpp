#pragma once

// Expression parser for polynomials and rational maps in one variable.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary | primary)*     juxtaposition multiplies
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' digits)?
//   primary := digits | 'x' | 'z' | '(' expr ')'
//
// Exactly one of x or z may appear in an expression. Coefficients are exact
// rationals ("3/2*x" is (3/2)x).

#include <string>
#include <string_view>

#include "heightlab/poly.hpp"

namespace heightlab {

struct ParsedExpr {
    RatPoly num;
    RatPoly den; ///< monic, coprime to num
    char variable = 'x';

    bool is_polynomial() const { return den.degree() == 0; }
};

/// Throws ParseError (with position) on syntax errors, InvalidArgument on a
/// zero denominator.
ParsedExpr parse_expr(std::string_view text);

/// The expression must reduce to a polynomial.
RatPoly parse_poly(std::string_view text);
/// Integer-coefficient polynomial after clearing denominators and taking the
/// primitive part (sign chosen so the leading coefficient is positive).
IntPoly parse_int_poly(std::string_view text);
/// Polynomial with integer coefficients exactly as written (no rescaling).
IntPoly parse_integral_poly(std::string_view text);
/// Homogeneous lift of a rational map; throws DegenerateMap when Res = 0.
HomogPair parse_map(std::string_view text);

} // namespace heightlab
