#include <doctest.h>

#include <cmath>
#include <random>

#include "heightlab/arith.hpp"
#include "heightlab/errors.hpp"

using namespace heightlab;

TEST_CASE("normalize_proj") {
    CHECK(normalize_proj(Integer(4), Integer(-6)) == normalize_proj(Integer(-2), Integer(3)));
    const ProjPointQ p = normalize_proj(Integer(4), Integer(-6));
    CHECK(p.a() == -2);
    CHECK(p.b() == 3);
    const ProjPointQ one = normalize_proj(Integer(1), Integer(1));
    CHECK(one.a() == 1);
    CHECK(one.b() == 1);
    const ProjPointQ inf = normalize_proj(Integer(-5), Integer(0));
    CHECK(inf.is_infinity());
    CHECK(inf.a() == 1);
    CHECK_THROWS_AS(normalize_proj(Integer(0), Integer(0)), InvalidPoint);
}

TEST_CASE("log_abs_at") {
    const Rational twelve(12);
    CHECK(log_abs_at(twelve, Place::finite(Integer(2))) == doctest::Approx(std::log(0.25)).epsilon(1e-15));
    CHECK(log_abs_at(twelve, Place::archimedean()) == doctest::Approx(std::log(12.0)));
    CHECK(log_abs_at(twelve, Place::finite(Integer(5))) == 0.0);
    CHECK_THROWS_AS(log_abs_at(Rational(0), Place::archimedean()), UndefinedLog);
    CHECK_THROWS_AS(Place::finite(Integer(6)), InvalidArgument);
}

TEST_CASE("weil height") {
    CHECK(weil_height(normalize_proj(Integer(1), Integer(1))) == 0.0);
    CHECK(weil_height(normalize_proj(Integer(2), Integer(3))) == doctest::Approx(std::log(3.0)));
    CHECK(weil_height(normalize_proj(Integer(4), Integer(6))) == doctest::Approx(std::log(3.0)));
    CHECK(weil_height(parse_point("inf")) == 0.0);
    CHECK(weil_height(parse_point("[10:-4]")) == doctest::Approx(std::log(5.0)));
    const Integer big("123456789012345678901234567890", 10);
    CHECK(weil_height_exact(point_from_rational(Rational(big))).value ==
          doctest::Approx(std::log(1.2345678901234568e29)).epsilon(1e-14));
}

TEST_CASE("parsing") {
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(parse_point("2/3") == normalize_proj(Integer(2), Integer(3)));
    CHECK_THROWS_AS(parse_rational("1.5"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
    CHECK_THROWS_AS(parse_point("[0:0]"), InvalidPoint);
}

TEST_CASE("primes and factoring") {
    CHECK(is_prime(Integer(2)));
    CHECK_FALSE(is_prime(Integer(1)));
    CHECK_FALSE(is_prime(Integer(561)));
    CHECK(is_prime(Integer("2305843009213693951", 10)));
    const Integer n = Integer("1000000007", 10) * Integer("998244353", 10) * 8;
    const auto f = factor(n);
    REQUIRE(f.size() == 3);
    CHECK(f[0].first == 2);
    CHECK(f[0].second == 3);
    CHECK(valuation(Rational(3, 40), Integer(2)) == -3);
}

TEST_CASE("product formula over random rationals") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-1000000, 1000000);
    for (int i = 0; i < 300; ++i) {
        const long a = d(rng), b = d(rng);
        if (a == 0 || b == 0) continue;
        const Rational x = make_rational(Integer(a), Integer(b));
        // exact form: |x| = prod p^{v_p(x)}
        Rational prod = 1;
        for (const Integer& c : {x.get_num(), x.get_den()})
            if (abs(c) > 1)
                for (const auto& [p, e] : factor(abs(c))) {
                    const long v = valuation(x, p);
                    Integer pe;
                    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(std::labs(v)));
                    prod *= v >= 0 ? Rational(pe) : Rational(1) / Rational(pe);
                }
        CHECK(prod == abs(x));
        double sum = log_abs_at(x, Place::archimedean());
        for (const Integer& c : {x.get_num(), x.get_den()})
            if (abs(c) > 1)
                for (const auto& [p, e] : factor(abs(c))) sum += log_abs_at(x, Place::finite(p));
        CHECK(std::abs(sum) < 1e-12);
    }
}
