#pragma once

// Canonical heights and homogeneous Green functions of rational self-maps of
// P^1 over Q, preperiodicity certificates, and common-preperiodic scans.

#include <map>
#include <optional>
#include <vector>

#include "heightlab/arith.hpp"
#include "heightlab/poly.hpp"

namespace heightlab {

/// How the archimedean distortion constant was obtained.
struct DistortionBound {
    double upper = 0.0;          ///< log((d+1) * max |coeff|)
    double lower = 0.0;          ///< log(2d * max |cofactor coeff|) - log|Res|
    Integer cofactor_max = 0;    ///< max |coeff| over the Nullstellensatz cofactors
    /// Cofactors G_ij (degree d-1) with G_i0 F0 + G_i1 F1 = Res * X^(2d-1) (i = 0)
    /// and Res * Y^(2d-1) (i = 1).
    BinaryForm g00, g01, g10, g11;
};

/// A map of degree d >= 2 with its bad primes and the constant C_arch with
/// |log||F(x)|| - d log||x||| <= C_arch for every nonzero x in C^2 (sup norm).
class DynSystem {
public:
    /// Throws DegenerateMap when d < 2.
    explicit DynSystem(HomogPair f);

    const HomogPair& map() const noexcept { return f_; }
    int degree() const noexcept { return f_.degree(); }
    const std::vector<Integer>& bad_primes() const noexcept { return bad_primes_; }
    /// v_p(Res) for each bad prime.
    const std::map<Integer, int>& res_valuations() const noexcept { return res_val_; }
    double c_arch() const noexcept { return c_arch_; }
    const DistortionBound& c_formula() const noexcept { return bound_; }
    /// Weil height above which a point provably has positive canonical height:
    /// (C_arch + log|Res|) / (d - 1).
    double escape_threshold() const noexcept { return escape_; }

private:
    HomogPair f_;
    std::vector<Integer> bad_primes_;
    std::map<Integer, int> res_val_;
    DistortionBound bound_;
    double c_arch_ = 0.0;
    double escape_ = 0.0;
};

/// Local contribution lim d^-k log||F^k(a, b)||_v at the coprime lift (a, b).
/// Finite places give values <= 0; the sum over all places is the canonical
/// height.
struct LocalGreen {
    Place place;
    double value = 0.0;
    double tail_bound = 0.0;          ///< |value - true limit| <= tail_bound
    /// Finite places: the exact p-exponents c_k of gcd(F(P_k)) along the orbit.
    std::vector<int> ledger;
    int iterations = 0;
};

LocalGreen local_green(const DynSystem& s, const ProjPointQ& p, const Place& v, double eps);

struct GreenLedger {
    std::map<Place, double> values;
    std::map<Place, double> tail_bounds;
    double total_tail = 0.0;
};

struct CanonicalHeight {
    double value = 0.0;
    double tail_bound = 0.0; ///< certified |value - h_phi(P)|, at most eps/4
    GreenLedger ledger;
};

/// h_phi(P) within eps as the sum of local Green functions over the
/// archimedean place and the bad primes (good primes contribute exactly 0).
CanonicalHeight canonical_height(const DynSystem& s, const ProjPointQ& p, double eps = 1e-9);

struct EscapeCertificate {
    std::size_t step = 0;   ///< index k of the orbit point P_k
    ProjPointQ point;       ///< P_k
    double height = 0.0;    ///< weil_height(P_k)
    double threshold = 0.0; ///< escape_threshold() of the system
};

struct PreperiodicResult {
    bool preperiodic = false;
    /// P_0, ..., P_k: the full tail and one copy of the cycle when preperiodic,
    /// the orbit up to the escaping point otherwise.
    std::vector<ProjPointQ> orbit;
    std::size_t cycle_start = 0; ///< index where the cycle begins (preperiodic only)
    std::optional<EscapeCertificate> escape;

    std::vector<ProjPointQ> cycle() const;
};

PreperiodicResult is_preperiodic(const DynSystem& s, const ProjPointQ& p);

/// Recomputes the orbit and checks the certificate's claims.
bool verify_escape(const DynSystem& s, const ProjPointQ& start, const EscapeCertificate& cert);

/// All rational points of Weil height <= h_max (max(|a|, |b|) <= e^h_max)
/// in Stern-Brocot order per sign, plus infinity.
std::vector<ProjPointQ> points_of_height_at_most(double h_max);

/// Points of height <= h_max preperiodic for both maps, sorted by (height, value).
std::vector<ProjPointQ> common_preperiodic_scan(const DynSystem& s1, const DynSystem& s2, double h_max);

} // namespace heightlab
