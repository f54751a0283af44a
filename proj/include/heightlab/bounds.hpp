#pragma once

// Height lower bounds for pairs of polynomial maps from the arithmetic Hodge
// index inequality, archimedean Dirichlet energies, exception scans, and
// equidistribution diagnostics for small points.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "heightlab/dynamics.hpp"
#include "heightlab/mahler.hpp"

namespace heightlab {

/// phi (degree l) and psi (degree m) with integer coefficients. The metric on
/// L^m (x) M^-l is trivial at every finite place and at infinity is
/// f_inf(x) = m log max(|phi(x)|, 1) - l log max(|psi(x)|, 1).
struct DynPair {
    IntPoly phi;
    IntPoly psi;

    /// phi = x^l.
    static DynPair power(int l, IntPoly psi);
    DynPair(IntPoly phi, IntPoly psi);

    int l() const { return phi.degree(); }
    int m() const { return psi.degree(); }
    bool phi_is_power() const;
    double f_inf(std::complex<double> x) const;
};

struct BoundResult {
    double value = 0.0;    ///< (1/(l+m)) log M(psi(x) - y)
    MahlerResult mahler;   ///< the two-variable Mahler measure used
};

/// Lower bound for l h(x) + h(psi(x)) valid outside a finite set.
BoundResult pair_bound_power(int l, const IntPoly& psi, int nodes = 16384);

/// |D(f_inf)| = 2 l m log M+(psi) for phi = x^l.
double energy_arch_power(int l, const IntPoly& psi, int nodes = 16384);

struct LevelCurveEnergy {
    double value = 0.0;
    int nodes = 0;
    int skipped = 0;    ///< nodes where the root finder failed
    int perturbed = 0;  ///< nodes moved by half a step off a critical value
};

/// (m/pi) * integral over |phi| = 1 of log max(|psi|, 1) dArg(phi), sampled
/// by pulling the uniform grid on the circle back through phi (all l
/// preimages of each node weighted 2 pi / nodes). Reproduces
/// energy_arch_power for phi = x^l.
LevelCurveEnergy energy_level_curve(const IntPoly& phi, const IntPoly& psi, int nodes = 4096);

struct ExceptionPoint {
    std::string description;  ///< "0", "inf", "-3/2", or "root 1 of x^2 - x + 1"
    IntPoly minpoly;          ///< primitive minimal polynomial (empty for inf)
    std::complex<double> approx;
    double height_x = 0.0;
    double height_psi = 0.0;
    double value = 0.0;       ///< l h(x) + h(psi(x))
};

/// Points of height <= h_max with l h(x) + h(psi(x)) < threshold; with
/// include_quadratic also quadratic points whose primitive minimal polynomial
/// a x^2 + b x + c has |a|, |b|, |c| <= e^h_max. Rationals come first in enumeration
/// order, then quadratics in (a, b, c) loop order.
std::vector<ExceptionPoint> scan_exceptions(int l, const IntPoly& psi, double threshold, double h_max,
                                            bool include_quadratic);

/// Primitive minimal-polynomial candidate of psi(alpha), alpha a root of the
/// irreducible a: the characteristic polynomial of multiplication by psi(x)
/// on Q[x]/(a), i.e. Res_x(a(x), y - psi(x)) up to a constant.
IntPoly norm_polynomial(const IntPoly& a, const IntPoly& psi);

/// h(psi(zeta_n)) = (1/phi(n)) sum_{gcd(k,n)=1} log max(|psi(e^{2 pi i k/n})|, 1).
double roots_of_unity_height_sequence(const IntPoly& psi, long n);

struct EmpiricalMeasure {
    std::vector<std::complex<double>> points;
    std::vector<double> weights; ///< positive, summing to 1
};

struct PreimageStats {
    EmpiricalMeasure measure;
    std::vector<std::complex<double>> moments; ///< m_1 .. m_K
    double discrepancy = 0.0;   ///< angular star discrepancy vs. the uniform circle measure
    std::size_t on_circle = 0;  ///< points with ||z| - 1| <= band
    std::size_t at_infinity = 0;
    double max_residual = 0.0;
    bool reference_is_uniform = false; ///< true only for power maps z^d
};

/// Level-n preimages of a under the map, solved level by level
/// (phi(z) = w for each preimage w of the previous level), equal weights.
/// m_k = sum w z^k / |z|^k over points with ||z| - 1| <= band.
PreimageStats preimage_measure_stats(const DynSystem& s, const Rational& a, int level, int max_moment,
                                     double band = 1e-8);

/// sup_t |F(t) - t| for angles normalized to [0, 1).
double angular_star_discrepancy(const EmpiricalMeasure& m);

} // namespace heightlab
