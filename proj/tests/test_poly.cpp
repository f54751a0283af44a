#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "heightlab/bounds.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/parse.hpp"
#include "heightlab/roots.hpp"

using namespace heightlab;

namespace {

// Plain Gaussian elimination over Q on the Sylvester matrix, rows of F0 first.
Integer sylvester_oracle(const BinaryForm& f0, const BinaryForm& f1) {
    const int d = f0.degree, n = 2 * d;
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    for (int r = 0; r < d; ++r)
        for (int k = 0; k <= d; ++k) {
            m[r][r + k] = f0.coeffs[d - k];
            m[d + r][r + k] = f1.coeffs[d - k];
        }
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            const Rational f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det.get_num();
}

BinaryForm form(std::vector<long> c) {
    BinaryForm f;
    f.degree = static_cast<int>(c.size()) - 1;
    for (long x : c) f.coeffs.push_back(Integer(x));
    return f;
}

} // namespace

TEST_CASE("parse") {
    CHECK(parse_integral_poly("z^2 - 1") == IntPoly{-1, 0, 1});
    CHECK(parse_poly("1 - x") == to_rat(IntPoly{1, -1}));
    CHECK(parse_poly("3x^2 - x/2 + 1") == RatPoly(std::vector<Rational>{1, Rational(-1, 2), 3}));
    CHECK(parse_poly("(x+1)^3") == to_rat(IntPoly{1, 3, 3, 1}));
    CHECK(parse_poly("2(x - 1)x") == to_rat(IntPoly{0, -2, 2}));
    CHECK(parse_int_poly("x/2 - 1/3") == IntPoly{-2, 3});

    const HomogPair m = parse_map("(z^2+1)/z");
    CHECK(m.degree() == 2);
    CHECK(m.f0() == form({1, 0, 1}));
    CHECK(m.f1() == form({0, 1, 0}));

    const HomogPair q = parse_map("z^2 - 1");
    CHECK(q.f0() == form({-1, 0, 1}));
    CHECK(q.f1() == form({1, 0, 0}));
    CHECK(q.is_polynomial());

    CHECK(parse_map("(x^2 - 1)/(x - 1)").degree() == 1);
    CHECK_THROWS_AS(parse_expr("x + z"), ParseError);
    CHECK_THROWS_AS(parse_expr("2 +* x"), ParseError);
    CHECK_THROWS_AS(parse_expr("1/(x - x)"), InvalidArgument);
    CHECK_THROWS_AS(parse_integral_poly("x/2"), InvalidArgument);
    try {
        parse_expr("x^^2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 2);
    }
}

TEST_CASE("to_string round trip") {
    const RatPoly p = parse_poly("x^2 - 3/2*x + 1");
    CHECK(to_string(p) == "x^2 - 3/2*x + 1");
    CHECK(parse_poly(to_string(p)) == p);
    CHECK(to_string(IntPoly{}) == "0");
}

TEST_CASE("resultant") {
    CHECK(resultant(form({1, 0, 0}), form({0, 0, 1})) == 1);
    CHECK(resultant(form({-1, 0, 1}), form({1, 0, 0})) == 1);
    CHECK(resultant(form({0, 0, 1}), form({2, 0, 0})) == 4);
    CHECK(parse_map("z^2 - 29/16").res() == 65536);
    CHECK(parse_map("(z^2 - 1)/(z^2 - 2z + 1)").degree() == 1); // common factor cancels
    CHECK_THROWS_AS(HomogPair(form({-1, 0, 1}), form({1, -2, 1})), DegenerateMap);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> c(-9, 9);
    std::uniform_int_distribution<int> deg(1, 5);
    for (int t = 0; t < 60; ++t) {
        const int d = deg(rng);
        std::vector<long> a(d + 1), b(d + 1);
        for (auto& x : a) x = c(rng);
        for (auto& x : b) x = c(rng);
        const BinaryForm f0 = form(a), f1 = form(b);
        CHECK(resultant(f0, f1) == sylvester_oracle(f0, f1));
    }
}

TEST_CASE("homog_step") {
    const HomogPair f = parse_map("z^2 - 1");
    const StepResult s = homog_step(f, parse_point("3/2"));
    CHECK(s.image == parse_point("5/4"));
    CHECK(s.ledger.empty());
    const StepResult t = homog_step(parse_map("z^2"), parse_point("2/3"));
    CHECK(t.image == parse_point("4/9"));
    CHECK(t.ledger.empty());

    // ledger primes divide the resultant, and the image matches direct evaluation
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-6, 6), p(-50, 50);
    int with_ledger = 0;
    for (int t = 0; t < 300; ++t) {
        std::vector<long> a(3), b(3);
        for (auto& x : a) x = c(rng);
        for (auto& x : b) x = c(rng);
        if (sylvester_oracle(form(a), form(b)) == 0) continue;
        const HomogPair g(form(a), form(b));
        long x = p(rng), y = p(rng);
        if (x == 0 && y == 0) continue;
        const ProjPointQ pt = normalize_proj(Integer(x), Integer(y));
        const StepResult r = homog_step(g, pt);
        CHECK(r.image == normalize_proj(g.f0().eval(pt.a(), pt.b()), g.f1().eval(pt.a(), pt.b())));
        for (const auto& [q, e] : r.ledger) CHECK(g.res() % q == 0);
        with_ledger += !r.ledger.empty();
    }
    CHECK(with_ledger > 0);
}

TEST_CASE("complex roots") {
    auto sorted = [](std::vector<ComplexApprox> r) {
        std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
            return std::tie(a.re, a.im) < std::tie(b.re, b.im);
        });
        return r;
    };
    const auto i = sorted(complex_roots(IntPoly{1, 0, 1}));
    REQUIRE(i.size() == 2);
    CHECK(std::abs(i[0].value() - std::complex<double>(0, -1)) < 1e-14);
    CHECK(std::abs(i[1].value() - std::complex<double>(0, 1)) < 1e-14);

    const auto g = sorted(complex_roots(IntPoly{-1, -1, 1}));
    CHECK(std::abs(g[0].re - (1 - std::sqrt(5.0)) / 2) < 1e-15);
    CHECK(std::abs(g[1].re - (1 + std::sqrt(5.0)) / 2) < 1e-15);

    for (const auto& r : complex_roots(IntPoly{1, 0, 0, 0, 1})) {
        CHECK(std::abs(std::abs(r.value()) - 1) < 1e-14);
        CHECK(std::abs(std::pow(r.value(), 8) - 1.0) < 1e-13);
        CHECK(r.reliable);
    }

    const auto z = complex_roots(IntPoly{0, 0, 0, 2});
    REQUIRE(z.size() == 3);
    for (const auto& r : z) CHECK(r.value() == std::complex<double>(0, 0));

    // Vieta: rebuild random polynomials from their roots
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> c(-100, 100);
    for (int t = 0; t < 40; ++t) {
        std::vector<Integer> co(9);
        for (auto& x : co) x = c(rng);
        co.back() = 1 + std::abs(c(rng));
        const IntPoly p(co);
        std::vector<std::complex<double>> acc{1.0};
        for (const auto& r : complex_roots(p)) {
            std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
            for (std::size_t k = 0; k < acc.size(); ++k) {
                next[k + 1] += acc[k];
                next[k] -= acc[k] * r.value();
            }
            acc = next;
        }
        const double lead = p.leading().get_d();
        for (int k = 0; k <= p.degree(); ++k)
            CHECK(std::abs(acc[k] * lead - p[k].get_d()) < 1e-8 * (1 + std::abs(p[k].get_d())));
    }
}

TEST_CASE("multiple roots are flagged or merged, not lost") {
    const auto r = complex_roots(IntPoly{-1, 3, -3, 1}); // (x - 1)^3
    REQUIRE(r.size() == 3);
    for (const auto& z : r) CHECK(std::abs(z.value() - 1.0) < 1e-4);
}

TEST_CASE("norm polynomial") {
    // psi(x) = 1 - x on the roots of x^2 - x + 1 gives the same polynomial
    CHECK(norm_polynomial(IntPoly{1, -1, 1}, IntPoly{1, -1}) == IntPoly{1, -1, 1});
    // x^2 on a root of x^2 - 2 is 2
    CHECK(norm_polynomial(IntPoly{-2, 0, 1}, IntPoly{0, 0, 1}) == IntPoly{4, -4, 1});
}
