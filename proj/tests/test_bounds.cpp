#include <doctest.h>

#include <cmath>
#include <set>

#include "heightlab/bounds.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/parse.hpp"

using namespace heightlab;

namespace {

// log M(1 + x + y), see test_mahler for the series oracle
constexpr double kSmyth = 0.3230659472194505;

std::set<std::string> names(const std::vector<ExceptionPoint>& v) {
    std::set<std::string> s;
    for (const auto& p : v) s.insert(p.description);
    return s;
}

} // namespace

TEST_CASE("pair bound") {
    const IntPoly one_minus_x{1, -1};
    CHECK(pair_bound_power(1, one_minus_x).value == doctest::Approx(kSmyth / 2).epsilon(1e-10));
    CHECK(std::abs(pair_bound_power(1, IntPoly{0, 1}).value) < 1e-14);
    CHECK(pair_bound_power(2, one_minus_x).value == doctest::Approx(kSmyth / 3).epsilon(1e-10));
    CHECK_THROWS_AS(pair_bound_power(0, one_minus_x), InvalidArgument);
}

TEST_CASE("arch energy and its relation to the bound") {
    const IntPoly one_minus_x{1, -1};
    CHECK(energy_arch_power(1, one_minus_x) == doctest::Approx(2 * kSmyth).epsilon(1e-10));
    CHECK(energy_arch_power(2, one_minus_x) == doctest::Approx(4 * kSmyth).epsilon(1e-10));
    CHECK(std::abs(energy_arch_power(3, IntPoly{0, 1})) < 1e-14);
    for (const IntPoly& psi : {IntPoly{1, -1}, IntPoly{-2, 0, 1}, IntPoly{1, 1, 1, 3}})
        for (int l = 1; l <= 3; ++l) {
            const int m = psi.degree();
            CHECK(pair_bound_power(l, psi).value ==
                  doctest::Approx(energy_arch_power(l, psi) / (2.0 * (l + m) * l * m)).epsilon(1e-12));
        }
}

TEST_CASE("level-curve energy") {
    const IntPoly one_minus_x{1, -1};
    for (int l = 1; l <= 3; ++l) {
        const LevelCurveEnergy e = energy_level_curve(IntPoly::monomial(Integer(1), l), one_minus_x, 4096);
        CHECK(e.skipped == 0);
        CHECK(std::abs(e.value - energy_arch_power(l, one_minus_x)) <= 1e-3 * energy_arch_power(l, one_minus_x));
    }
    CHECK(std::abs(energy_level_curve(IntPoly{0, 1}, IntPoly{0, 1}, 1024).value) < 1e-12);
    // a non-monomial phi: the level set |x^2 - 1/2| = 1 passes nowhere near a
    // critical value, and psi = x gives the same answer as phi's own curve
    const LevelCurveEnergy g = energy_level_curve(IntPoly{-1, 0, 2}, IntPoly{1, -1}, 2048);
    CHECK(std::isfinite(g.value));
    CHECK(g.value > 0);
}

TEST_CASE("roots of unity sequence") {
    CHECK(std::abs(roots_of_unity_height_sequence(IntPoly{0, 1}, 37)) < 1e-15);
    // k = 1, 5, 7, 11: |1 - zeta| = 2 sin(pi k / 12); only k = 5, 7 exceed 1
    CHECK(roots_of_unity_height_sequence(IntPoly{1, -1}, 12) ==
          doctest::Approx(0.25 * 2 * std::log(2 * std::sin(5 * M_PI / 12))).epsilon(1e-14));
    CHECK(std::abs(roots_of_unity_height_sequence(IntPoly{1, -1}, 499) - kSmyth) < 0.02);
    CHECK_THROWS_AS(roots_of_unity_height_sequence(IntPoly{1, -1}, 0), InvalidArgument);
}

TEST_CASE("exception scan") {
    const IntPoly psi{1, -1};
    CHECK(names(scan_exceptions(1, psi, 0.16, 2.0, false)) == std::set<std::string>{"0", "1", "inf"});
    const auto q = scan_exceptions(1, psi, 0.2406, 2.0, true);
    CHECK(names(q) == std::set<std::string>{"0", "1", "inf", "root 1 of x^2 - x + 1", "root 2 of x^2 - x + 1"});
    for (const auto& p : q) CHECK(std::abs(p.value) < 1e-12);
    CHECK(scan_exceptions(1, psi, 0.0, 3.0, true).empty());
    const auto roots = scan_exceptions(1, psi, 0.2406, 3.0, true);
    for (const auto& p : roots)
        if (!p.minpoly.is_zero() && p.minpoly.degree() == 2) CHECK(std::abs(std::abs(p.approx) - 1) < 1e-12);
}

TEST_CASE("norm polynomial agrees with numerics") {
    const IntPoly irr{-2, 0, 0, 1};
    const IntPoly psi{1, -1, 1};
    const IntPoly n = norm_polynomial(irr, psi);
    CHECK(n.degree() == 3);
    for (const auto& r : complex_roots(irr)) {
        const std::complex<double> w = 1.0 - r.value() + r.value() * r.value();
        std::complex<double> acc = 0;
        for (int k = n.degree(); k >= 0; --k) acc = acc * w + n[k].get_d();
        CHECK(std::abs(acc) < 1e-9);
    }
}

TEST_CASE("equidistribution diagnostics") {
    const DynSystem z2(parse_map("z^2"));
    const PreimageStats s3 = preimage_measure_stats(z2, Rational(1), 3, 8);
    CHECK(s3.measure.points.size() == 8);
    CHECK(s3.reference_is_uniform);
    for (int k = 0; k < 7; ++k) CHECK(std::abs(s3.moments[k]) < 1e-13);
    CHECK(std::abs(s3.moments[7] - 1.0) < 1e-13);
    CHECK(s3.discrepancy == doctest::Approx(1.0 / 8).epsilon(1e-12));

    const PreimageStats s4 = preimage_measure_stats(z2, Rational(1), 4, 10);
    for (const auto& m : s4.moments) CHECK(std::abs(m) <= 1e-12);
    CHECK(std::abs(s4.discrepancy - 1.0 / 16) <= 1e-12);

    const PreimageStats cheb = preimage_measure_stats(DynSystem(parse_map("z^2-2")), Rational(0), 6, 4);
    CHECK(cheb.measure.points.size() == 64);
    CHECK_FALSE(cheb.reference_is_uniform);
    for (const auto& z : cheb.measure.points) {
        CHECK(std::abs(z.imag()) < 1e-6);
        CHECK(std::abs(z.real()) <= 2 + 1e-9);
    }
    double w = 0;
    for (double x : cheb.measure.weights) w += x;
    CHECK(w == doctest::Approx(1.0));
}

TEST_CASE("star discrepancy oracle") {
    EmpiricalMeasure m;
    m.points = {std::polar(1.0, 0.0)};
    m.weights = {1.0};
    CHECK(angular_star_discrepancy(m) == doctest::Approx(1.0));
    m.points = {std::polar(1.0, M_PI)};
    CHECK(angular_star_discrepancy(m) == doctest::Approx(0.5));
}
