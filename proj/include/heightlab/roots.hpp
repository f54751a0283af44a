#pragma once

// Simultaneous complex root finding (Aberth-Ehrlich).

#include <complex>
#include <span>
#include <vector>

#include "heightlab/poly.hpp"

namespace heightlab {

struct ComplexApprox {
    double re = 0.0;
    double im = 0.0;
    double residual = 0.0; ///< |P(z)| at the returned approximation
    bool reliable = true;  ///< residual within the configured backward-error bound

    std::complex<double> value() const { return {re, im}; }
};

struct RootOptions {
    double tol = 1e-14;          ///< stop once every relative correction is below tol
    int max_iterations = 500;
    /// A root is unreliable when |P(z)| > reliability_factor * eps * sum |c_k| |z|^k.
    double reliability_factor = 1e4;
};

/// Raised on non-convergence; carries the best iterate.
class RootFinderError : public ComputationError {
public:
    RootFinderError(const std::string& msg, std::vector<ComplexApprox> best)
        : ComputationError(msg), best_(std::move(best)) {}
    const std::vector<ComplexApprox>& best_iterate() const noexcept { return best_; }

private:
    std::vector<ComplexApprox> best_;
};

/// All deg(P) roots with multiplicity. Roots at the origin are split off
/// exactly. Approximations closer than 10 * tol are merged to their centroid.
/// Deterministic: the start is a rotated circle of Fujiwara-bound radius.
std::vector<ComplexApprox> complex_roots(const IntPoly& p, const RootOptions& opts = {});
std::vector<ComplexApprox> complex_roots(std::span<const std::complex<double>> coeffs,
                                         const RootOptions& opts = {});
/// Same, starting the iteration from the given approximations (continuation).
std::vector<ComplexApprox> complex_roots_from(std::span<const std::complex<double>> coeffs,
                                              std::span<const std::complex<double>> start,
                                              const RootOptions& opts = {});

/// Fujiwara upper bound on the moduli of the roots.
double fujiwara_bound(std::span<const std::complex<double>> coeffs);

} // namespace heightlab
