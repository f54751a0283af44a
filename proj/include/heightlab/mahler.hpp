#pragma once

// Mahler measures: M(P) from roots or by circle quadrature, the one-sided
// variant M+(psi) = exp(mean of log max(|psi|, 1) over the unit circle), and
// heights of algebraic numbers from their minimal polynomials.

#include <string>

#include "heightlab/poly.hpp"
#include "heightlab/roots.hpp"

namespace heightlab {

enum class MahlerMethod { Roots, Quadrature };

std::string to_string(MahlerMethod m);

struct MahlerResult {
    double log_value = 0.0;
    MahlerMethod method = MahlerMethod::Roots;
    /// Roots: the largest root residual. Quadrature: |I(n) - I(n/2)|.
    double error_estimate = 0.0;
};

/// log M(P) = log|lead| + sum log max(1, |root|). Both methods first split P
/// into squarefree parts over Q, so repeated roots are handled exactly.
MahlerResult mahler_via_roots(const IntPoly& p, const RootOptions& opts = {});

/// log M(P) by the periodic trapezoid rule on `nodes` points (power of two,
/// >= 16). Roots within max(1e-8, 40/nodes) of the unit circle are deflated
/// and contribute log max(1, |root|) exactly; the smooth cofactor is integrated.
MahlerResult mahler_via_quadrature(const IntPoly& p, int nodes = 16384);

/// log M+(psi). The circle is split at the crossings |psi(e^it)| = 1 (found
/// by bisection from the node grid) and each piece where |psi| > 1 gets a
/// composite trapezoid rule with one Richardson step.
MahlerResult log_mahler_plus(const RatPoly& psi, int nodes = 16384);

/// log M(psi(x) - y), equal to log M+(psi) by Jensen's formula.
MahlerResult two_variable_mahler(const RatPoly& psi, int nodes = 16384);

/// Independent tensor-grid evaluation of the double circle average of
/// log|psi(e^it1) - e^it2|. The t2 grid is offset by half a step so it never
/// meets psi(e^it1) on a grid point. error_estimate compares against the
/// (n1/2) x (n2/2) grid.
MahlerResult two_variable_mahler_grid(const RatPoly& psi, int n1 = 1024, int n2 = 1024);

/// h(alpha) = log M(P) / deg P for the primitive minimal polynomial P.
double height_from_minpoly(const IntPoly& p);

} // namespace heightlab
