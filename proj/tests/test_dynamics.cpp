#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "heightlab/dynamics.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/parallel.hpp"
#include "heightlab/parse.hpp"

using namespace heightlab;

namespace {

// Tate's limit by exact iteration: log max(|a_N|, |b_N|) / d^N with the
// coordinates kept coprime. The error is at most C / d^N for a constant C of
// the map; callers pass a tolerance that covers it.
double exact_iteration(const HomogPair& f, ProjPointQ p, int n) {
    for (int k = 0; k < n; ++k) {
        Integer a = f.f0().eval(p.a(), p.b()), b = f.f1().eval(p.a(), p.b());
        p = normalize_proj(a, b);
    }
    return weil_height(p) / std::pow(static_cast<double>(f.degree()), n);
}

DynSystem sys(const char* text) { return DynSystem(parse_map(text)); }

} // namespace

TEST_CASE("power maps give the Weil height") {
    CHECK(canonical_height(sys("z^2"), parse_point("2"), 1e-9).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(canonical_height(sys("z^3"), parse_point("-5/7"), 1e-9).value == doctest::Approx(std::log(7.0)).epsilon(1e-12));
    const LocalGreen arch = local_green(sys("z^2"), parse_point("2"), Place::archimedean(), 1e-12);
    CHECK(arch.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    for (long p : {2, 3, 5, 7})
        for (const char* pt : {"2", "3/4", "10/21", "inf", "0"}) {
            const LocalGreen g = local_green(sys("z^2"), parse_point(pt), Place::finite(Integer(p)), 1e-9);
            CHECK(g.value == 0.0);
            CHECK(g.ledger.empty());
        }
}

TEST_CASE("known canonical heights") {
    CHECK(std::abs(canonical_height(sys("z^2-1"), parse_point("0")).value) < 1e-9);
    // Chebyshev: h(3) for z^2 - 2 is log of the larger root of t^2 - 3t + 1
    CHECK(canonical_height(sys("z^2-2"), parse_point("3"), 1e-12).value ==
          doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)).epsilon(1e-13));
    const CanonicalHeight h = canonical_height(sys("z^2+1"), parse_point("0"), 1e-9);
    CHECK(std::abs(h.value - 0.2036772613697400) <= 1e-9);
    CHECK(h.tail_bound <= 1e-9 / 4);
}

TEST_CASE("exact iteration oracle, including bad primes") {
    struct Case {
        const char* map;
        const char* point;
    };
    for (const Case c : {Case{"z^2+1", "0"}, Case{"z^2-29/16", "1/3"}, Case{"(2z^2+1)/(3z)", "5/2"},
                         Case{"(z^2-3)/(2z+4)", "1/7"}, Case{"z^3/4 + z", "2/5"}}) {
        const DynSystem s = sys(c.map);
        const int n = s.degree() == 2 ? 20 : 13;
        const double oracle = exact_iteration(s.map(), parse_point(c.point), n);
        const double tol = 2 * (s.c_arch() + std::log(std::abs(s.map().res().get_d())) + 1) /
                           std::pow(static_cast<double>(s.degree()), n);
        CAPTURE(c.map);
        CHECK(std::abs(canonical_height(s, parse_point(c.point), 1e-10).value - oracle) <= tol);
    }
}

TEST_CASE("local Green functions sum to the canonical height") {
    const DynSystem s = sys("(2z^2+1)/(3z)");
    CHECK(s.bad_primes() == std::vector<Integer>{2, 3});
    for (const char* pt : {"1", "5/2", "-7/9", "inf", "0"}) {
        const ProjPointQ p = parse_point(pt);
        const CanonicalHeight h = canonical_height(s, p, 1e-10);
        double sum = local_green(s, p, Place::archimedean(), 1e-10).value;
        for (const auto& q : s.bad_primes()) {
            const LocalGreen g = local_green(s, p, Place::finite(q), 1e-10);
            CHECK(g.value <= 0.0);
            for (int c : g.ledger) CHECK(c <= s.res_valuations().at(q));
            sum += g.value;
        }
        CHECK(std::abs(sum - h.value) <= 1e-9);
    }
}

TEST_CASE("good reduction gives zero, brute force over small maps") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> c(-4, 4), x(-30, 30);
    int maps = 0;
    while (maps < 25) {
        BinaryForm f0{2, {Integer(c(rng)), Integer(c(rng)), Integer(c(rng))}};
        BinaryForm f1{2, {Integer(c(rng)), Integer(c(rng)), Integer(c(rng))}};
        if (resultant(f0, f1) == 0) continue;
        const DynSystem s{HomogPair(f0, f1)};
        ++maps;
        for (int t = 0; t < 8; ++t) {
            const long a = x(rng), b = x(rng);
            if (a == 0 && b == 0) continue;
            const ProjPointQ p = normalize_proj(Integer(a), Integer(b));
            for (long q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
                if (s.map().res() % q == 0) continue;
                const LocalGreen g = local_green(s, p, Place::finite(Integer(q)), 1e-9);
                CHECK(g.value == 0.0);
                CHECK(g.ledger.empty());
            }
        }
    }
}

TEST_CASE("functional equation on random points") {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<long> x(-2000, 2000);
    const double eps = 1e-9;
    for (const char* m : {"z^2-1", "(z^2+1)/z", "z^2-29/16", "(z^3-2)/(3z^2)"}) {
        const DynSystem s = sys(m);
        for (int t = 0; t < 15; ++t) {
            const long a = x(rng), b = x(rng);
            if (a == 0 && b == 0) continue;
            const ProjPointQ p = normalize_proj(Integer(a), Integer(b));
            const double lhs = canonical_height(s, homog_step(s.map(), p).image, eps).value;
            CHECK(std::abs(lhs - s.degree() * canonical_height(s, p, eps).value) <= (s.degree() + 1) * eps);
        }
    }
}

TEST_CASE("preperiodicity") {
    const PreperiodicResult a = is_preperiodic(sys("z^2-1"), parse_point("-1"));
    CHECK(a.preperiodic);
    const auto cyc = a.cycle();
    CHECK(std::set<ProjPointQ>(cyc.begin(), cyc.end()) == std::set<ProjPointQ>{parse_point("-1"), parse_point("0")});

    const DynSystem s = sys("z^2-1");
    const PreperiodicResult b = is_preperiodic(s, parse_point("2"));
    CHECK_FALSE(b.preperiodic);
    REQUIRE(b.escape.has_value());
    CHECK(verify_escape(s, parse_point("2"), *b.escape));
    CHECK(b.orbit[1] == parse_point("3"));
    CHECK(b.orbit[2] == parse_point("8"));
    // a doctored certificate is rejected
    EscapeCertificate bad = *b.escape;
    bad.step = 0;
    bad.point = parse_point("2");
    bad.height = std::log(2.0);
    CHECK_FALSE(verify_escape(s, parse_point("2"), bad));

    const PreperiodicResult c = is_preperiodic(sys("z^2-29/16"), parse_point("1/4"));
    REQUIRE(c.preperiodic);
    CHECK(c.orbit.front() == parse_point("1/4"));
    const auto c3 = c.cycle();
    CHECK(std::set<ProjPointQ>(c3.begin(), c3.end()) ==
          std::set<ProjPointQ>{parse_point("-7/4"), parse_point("5/4"), parse_point("-1/4")});
}

TEST_CASE("common preperiodic scans") {
    const std::set<ProjPointQ> unit{parse_point("0"), parse_point("1"), parse_point("-1"), parse_point("inf")};
    auto as_set = [](const std::vector<ProjPointQ>& v) { return std::set<ProjPointQ>(v.begin(), v.end()); };
    CHECK(as_set(common_preperiodic_scan(sys("z^2"), sys("z^2"), 0.1)) == unit);
    CHECK(as_set(common_preperiodic_scan(sys("z^2"), sys("z^2-1"), 1.0)) == unit);
    for (const auto& p : common_preperiodic_scan(sys("z^2"), sys("z^2+1"), 0.0)) CHECK(unit.count(p) == 1);
    CHECK(points_of_height_at_most(0.0).size() == 4);
    // height <= log 2: 0, inf, +-1, +-2, +-1/2
    CHECK(points_of_height_at_most(std::log(2.0) + 1e-12).size() == 8);
}

TEST_CASE("parallel scans are deterministic") {
    set_thread_count(1);
    const auto one = common_preperiodic_scan(sys("z^2"), sys("z^2-1"), 3.0);
    set_thread_count(4);
    const auto four = common_preperiodic_scan(sys("z^2"), sys("z^2-1"), 3.0);
    CHECK(one == four);
}

TEST_CASE("degenerate input") {
    CHECK_THROWS_AS(DynSystem(parse_map("3z+1")), DegenerateMap);
    CHECK_THROWS_AS(canonical_height(sys("z^2"), parse_point("1"), 0.0), InvalidArgument);
}
