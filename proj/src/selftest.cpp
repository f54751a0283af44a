#include "heightlab/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "heightlab/bounds.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/graph.hpp"
#include "heightlab/parse.hpp"

#ifndef HEIGHTLAB_SOURCE_DIR
#define HEIGHTLAB_SOURCE_DIR ""
#endif

namespace heightlab {

bool CriterionResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::map<std::string, double> default_golden() {
    return {
        {"bound_power_1_one_minus_x", 0.161538},
        {"log_mahler_plus_one_minus_x", 0.323076},
        {"height_golden_ratio", 0.240606},
        {"roots_of_unity_limit_one_minus_x", 0.323076},
        // Independent high-precision iteration of z^2 + 1 from 0.
        {"canonical_height_z2_plus_1_at_0", 0.2036772613697400},
    };
}

std::map<std::string, double> load_golden(const std::string& path) {
    auto g = default_golden();
    if (path.empty()) return g;
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open golden file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("malformed golden file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("golden file must hold a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw InvalidArgument("golden value '" + k + "' is not a number");
        g[k] = v.get<double>();
    }
    return g;
}

std::string default_golden_path() {
    const std::string p = std::string(HEIGHTLAB_SOURCE_DIR) + "/tests/golden/constants.json";
    if (std::string(HEIGHTLAB_SOURCE_DIR).empty()) return "";
    std::ifstream in(p);
    return in ? p : "";
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class Recorder {
public:
    explicit Recorder(CriterionResult& r) : r_(r) {}

    void near(const std::string& name, double actual, double expected, double tol) {
        const bool ok = std::isfinite(actual) && std::abs(actual - expected) <= tol;
        r_.checks.push_back({name, ok, fmt(expected) + " +- " + fmt(tol), fmt(actual)});
    }
    void at_most(const std::string& name, double actual, double limit) {
        r_.checks.push_back({name, std::isfinite(actual) && actual <= limit, "<= " + fmt(limit), fmt(actual)});
    }
    void truth(const std::string& name, bool ok, const std::string& expected = "true",
               const std::string& actual = "") {
        r_.checks.push_back({name, ok, expected, actual.empty() ? (ok ? expected : "false") : actual});
    }
    void count_failures(const std::string& name, std::size_t failures, std::size_t total,
                        const std::string& first) {
        r_.checks.push_back({name, failures == 0, "0 of " + std::to_string(total) + " failing",
                             std::to_string(failures) + " failing" + (first.empty() ? "" : " (first: " + first + ")")});
    }

private:
    CriterionResult& r_;
};

template <class F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(const std::vector<ProjPointQ>& pts) {
    std::string s = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + pts[i].to_string();
    return s + "}";
}

std::string describe(const std::vector<ExceptionPoint>& pts) {
    std::string s = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + pts[i].description;
    return s + "}";
}

// Uniform rational points with max(|a|, |b|) <= e^h_max.
std::vector<ProjPointQ> random_points(std::mt19937_64& rng, std::size_t n, double h_max) {
    const long bound = static_cast<long>(std::floor(std::exp(h_max)));
    std::uniform_int_distribution<long> coord(-bound, bound);
    std::vector<ProjPointQ> pts;
    while (pts.size() < n) {
        long a = coord(rng), b = coord(rng);
        if (a == 0 && b == 0) continue;
        pts.push_back(normalize_proj(Integer(a), Integer(b)));
    }
    return pts;
}

// The required sample, plus two maps with bad primes so the finite places are
// exercised as well.
const std::vector<std::string> kDynMaps = {"z^2", "z^2-1", "z^2+1", "z^2-2", "(z^2+1)/z",
                                           "z^2-29/16", "(2z^2+1)/(3z)"};

void criterion_golden(Recorder& rec, const std::map<std::string, double>& g) {
    const IntPoly one_minus_x{1, -1};
    double v = 0.0;
    double t = timed([&] { v = pair_bound_power(1, one_minus_x).value; });
    rec.near("pair_bound_power(1, 1-x)", v, g.at("bound_power_1_one_minus_x"), 5e-6);
    rec.at_most("pair_bound_power seconds", t, 1.0);

    t = timed([&] { v = log_mahler_plus(to_rat(one_minus_x)).log_value; });
    rec.near("log_mahler_plus(1-x)", v, g.at("log_mahler_plus_one_minus_x"), 1e-5);
    rec.at_most("log_mahler_plus seconds", t, 1.0);

    t = timed([&] { v = height_from_minpoly(IntPoly{-1, -1, 1}); });
    rec.near("height_from_minpoly(x^2-x-1)", v, g.at("height_golden_ratio"), 1e-6);
    rec.at_most("height_from_minpoly seconds", t, 1.0);
}

void criterion_mahler_cross(Recorder& rec) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> deg(1, 8), coef(-100, 100);
    double worst = 0.0;
    std::string worst_poly;
    const double t = timed([&] {
        for (int i = 0; i < 50; ++i) {
            const int d = deg(rng);
            std::vector<Integer> c(static_cast<std::size_t>(d) + 1);
            for (auto& x : c) x = coef(rng);
            while (c.back() == 0) c.back() = coef(rng);
            const IntPoly p(c);
            const double diff = std::abs(mahler_via_roots(p).log_value - mahler_via_quadrature(p, 1 << 14).log_value);
            if (diff > worst) {
                worst = diff;
                worst_poly = to_string(p);
            }
        }
    });
    rec.at_most("max |log M roots - log M quad| (" + worst_poly + ")", worst, 1e-6);
    rec.at_most("runtime seconds", t, 30.0);
}

void criterion_two_variable(Recorder& rec) {
    const RatPoly psi = to_rat(IntPoly{1, -1});
    const MahlerResult a = two_variable_mahler(psi);
    const MahlerResult b = two_variable_mahler_grid(psi, 1024, 1024);
    const double diff = std::abs(a.log_value - b.log_value);
    rec.at_most("|two_variable - grid| within combined estimates", diff, a.error_estimate + b.error_estimate);
    rec.at_most("|two_variable - grid|", diff, 1e-3);
}

void criterion_canonical(Recorder& rec, const std::map<std::string, double>& g) {
    const double eps = 1e-9;
    std::mt19937_64 rng(7177);
    const auto pts = random_points(rng, 100, 10.0);
    for (const auto& text : kDynMaps) {
        const DynSystem s(parse_map(text));
        std::size_t fn = 0, sum = 0;
        std::string first_fn, first_sum;
        for (const auto& p : pts) {
            const CanonicalHeight h = canonical_height(s, p, eps);
            const ProjPointQ img = homog_step(s.map(), p).image;
            const CanonicalHeight hi = canonical_height(s, img, eps);
            const double err = std::abs(hi.value - s.degree() * h.value);
            if (err > 2e-9 && fn++ == 0) first_fn = p.to_string() + ": " + fmt(err);
            double total = 0.0;
            for (const auto& [v, val] : h.ledger.values) total += local_green(s, p, v, eps).value;
            if (std::abs(total - h.value) > 1e-8 && sum++ == 0) first_sum = p.to_string();
        }
        rec.count_failures(text + ": |h(phi x) - d h(x)| <= 2e-9", fn, pts.size(), first_fn);
        rec.count_failures(text + ": sum of local Green = h", sum, pts.size(), first_sum);
    }
    for (int d : {2, 3}) {
        const DynSystem s(HomogPair::from_polynomial(RatPoly::monomial(Rational(1), d)));
        std::size_t bad = 0;
        std::string first;
        for (const auto& p : pts) {
            const double err = std::abs(canonical_height(s, p, eps).value - weil_height(p));
            if (err > eps && bad++ == 0) first = p.to_string();
        }
        rec.count_failures("z^" + std::to_string(d) + ": h = Weil height", bad, pts.size(), first);
    }
    const DynSystem s(parse_map("z^2+1"));
    rec.near("h_{z^2+1}(0)", canonical_height(s, parse_point("0"), eps).value,
             g.at("canonical_height_z2_plus_1_at_0"), eps);
}

void criterion_good_reduction(Recorder& rec) {
    std::mt19937_64 rng(7177);
    const auto pts = random_points(rng, 100, 10.0);
    std::vector<Integer> small_primes;
    for (long q = 2; q < 100; ++q)
        if (is_prime(Integer(q))) small_primes.push_back(Integer(q));
    for (const auto& text : kDynMaps) {
        const DynSystem s(parse_map(text));
        const Integer res = abs(s.map().res());
        std::size_t bad = 0, tested = 0;
        std::string first;
        for (const auto& p : pts) {
            std::set<Integer> primes(small_primes.begin(), small_primes.end());
            for (const Integer& c : {p.a(), p.b()})
                if (abs(c) > 1)
                    for (const auto& [q, e] : factor(abs(c))) primes.insert(q);
            for (const auto& q : primes) {
                if (res % q == 0) continue;
                ++tested;
                const LocalGreen lg = local_green(s, p, Place::finite(q), 1e-9);
                if ((lg.value != 0.0 || !lg.ledger.empty()) && bad++ == 0) first = p.to_string() + " at " + to_string(q);
            }
        }
        rec.count_failures(text + ": good primes give exactly 0", bad, tested, first);
    }
}

void criterion_preperiodic(Recorder& rec) {
    const DynSystem s(parse_map("z^2-29/16"));
    const PreperiodicResult r = is_preperiodic(s, parse_point("1/4"));
    const auto cyc = r.cycle();
    const bool ok = r.preperiodic && r.orbit.size() >= 2 && r.orbit[0] == parse_point("1/4") &&
                    r.orbit[1] == parse_point("-7/4") && cyc.size() == 3 &&
                    std::find(cyc.begin(), cyc.end(), parse_point("-7/4")) != cyc.end();
    rec.truth("1/4 -> -7/4 -> 3-cycle under z^2-29/16", ok, "preperiodic, cycle of length 3 through -7/4",
              describe(r.orbit) + (r.preperiodic ? " cycle from " + std::to_string(r.cycle_start) : " escapes"));

    const DynSystem a(parse_map("z^2")), b(parse_map("z^2-1"));
    const auto common = common_preperiodic_scan(a, b, 2.0);
    const std::set<ProjPointQ> got(common.begin(), common.end());
    const std::set<ProjPointQ> want{parse_point("0"), parse_point("1"), parse_point("-1"), parse_point("inf")};
    rec.truth("common_preperiodic_scan(z^2, z^2-1, H=2)", got == want && common.size() == 4, describe(
        std::vector<ProjPointQ>(want.begin(), want.end())), describe(common));

    std::size_t bad_true = 0, bad_false = 0, total = 0;
    std::string first;
    for (const auto* sys : {&a, &b, &s}) {
        for (const auto& p : points_of_height_at_most(2.0)) {
            ++total;
            const PreperiodicResult q = is_preperiodic(*sys, p);
            if (q.preperiodic) {
                if (canonical_height(*sys, p, 1e-10).value > 1e-9 && bad_true++ == 0) first = p.to_string();
            } else if (!q.escape || !verify_escape(*sys, p, *q.escape)) {
                if (bad_false++ == 0) first = p.to_string();
            }
        }
    }
    rec.count_failures("preperiodic answers have h <= 1e-9", bad_true, total, bad_true ? first : "");
    rec.count_failures("escape certificates verify", bad_false, total, bad_false ? first : "");
}

Rational random_rational(std::mt19937_64& rng, long num_bound, long den_bound, bool positive) {
    std::uniform_int_distribution<long> num(positive ? 1 : -num_bound, num_bound), den(1, den_bound);
    return make_rational(Integer(num(rng)), Integer(den(rng)));
}

GraphProblem random_graph(std::mt19937_64& rng, bool unit_lengths) {
    std::uniform_int_distribution<int> nv(2, 20);
    const int n = nv(rng);
    std::uniform_int_distribution<int> ne(n - 1, 40), vertex(0, n - 1);
    const int m = ne(rng);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    std::vector<GraphEdge> edges;
    for (int i = 1; i < n; ++i) { // spanning tree keeps the graph connected
        std::uniform_int_distribution<int> parent(0, i - 1);
        edges.push_back({static_cast<std::size_t>(parent(rng)), static_cast<std::size_t>(i), Rational(1)});
    }
    while (static_cast<int>(edges.size()) < m) {
        const int u = vertex(rng), v = vertex(rng);
        if (u != v) edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), Rational(1)});
    }
    if (!unit_lengths)
        for (auto& e : edges) e.length = random_rational(rng, 12, 7, true);
    VertexDivisor div;
    std::uniform_int_distribution<int> nterms(0, 6), coeff(-5, 5);
    for (int k = nterms(rng); k > 0; --k)
        div.terms.push_back({Integer(coeff(rng)), static_cast<std::size_t>(vertex(rng))});
    PLFunction f;
    for (int i = 0; i < n; ++i) f.values.push_back(random_rational(rng, 20, 9, false));
    return {MetrizedGraph(std::move(names), std::move(edges)), std::move(div), std::move(f)};
}

void criterion_graph(Recorder& rec) {
    std::mt19937_64 rng(424242);
    std::size_t bad_mass = 0, bad_lap = 0, bad_energy = 0, bad_sub = 0, bad_haar = 0;
    const double t = timed([&] {
        for (int trial = 0; trial < 200; ++trial) {
            const GraphProblem gp = random_graph(rng, trial % 4 == 0);
            const MetrizedGraph& g = gp.graph;
            const DiscreteMeasure mu = curvature(g, gp.divisor, gp.f);
            if (mu.total_mass(g) != Rational(gp.divisor.degree())) ++bad_mass;
            const DiscreteMeasure lap = laplacian_pl(g, gp.f);
            if (lap.total_mass(g) != 0) ++bad_lap;
            Rational pairing = 0;
            for (std::size_t i = 0; i < g.vertex_count(); ++i) pairing += gp.f.values[i] * lap.vertex_mass[i];
            if (dirichlet_energy(g, gp.f) != pairing) ++bad_energy;
            for (int e : {2, 3, 5}) {
                const Subdivision sub = subdivide(g, e);
                const DiscreteMeasure mu2 =
                    curvature(sub.graph, push_divisor(sub, gp.divisor), extend_linear(g, sub, gp.f));
                bool same = true;
                std::vector<bool> old(sub.graph.vertex_count(), false);
                for (std::size_t i = 0; i < g.vertex_count(); ++i) {
                    old[sub.vertex_embedding[i]] = true;
                    same = same && mu2.vertex_mass[sub.vertex_embedding[i]] == mu.vertex_mass[i];
                }
                for (std::size_t i = 0; i < old.size(); ++i) same = same && (old[i] || mu2.vertex_mass[i] == 0);
                if (!same) ++bad_sub;
            }
        }
        for (int trial = 0; trial < 50; ++trial) {
            std::uniform_int_distribution<int> nv(2, 20);
            const int n = nv(rng);
            std::vector<std::string> names;
            std::vector<GraphEdge> edges;
            for (int i = 0; i < n; ++i) {
                names.push_back("c" + std::to_string(i));
                edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n),
                                 random_rational(rng, 12, 7, true)});
            }
            const MetrizedGraph g(std::move(names), std::move(edges));
            const Rational mass = random_rational(rng, 30, 11, true);
            const DiscreteMeasure h = circle_haar_measure(g, mass);
            const bool ok = h.total_mass(g) == mass &&
                            std::all_of(h.edge_density.begin(), h.edge_density.end(),
                                        [&](const Rational& d) { return d == mass / g.total_length(); });
            if (!ok) ++bad_haar;
        }
    });
    rec.count_failures("total curvature mass = deg D", bad_mass, 200, "");
    rec.count_failures("Laplacian total mass = 0", bad_lap, 200, "");
    rec.count_failures("E(f) = <f, Laplacian f>", bad_energy, 200, "");
    rec.count_failures("curvature invariant under subdivision (e = 2, 3, 5)", bad_sub, 600, "");
    rec.count_failures("Haar density = mass / length", bad_haar, 50, "");
    rec.at_most("runtime seconds", t, 10.0);
}

void criterion_equidist(Recorder& rec, const std::map<std::string, double>& g) {
    const DynSystem s(parse_map("z^2"));
    const PreimageStats st = preimage_measure_stats(s, Rational(1), 4, 10);
    double worst = 0.0;
    for (const auto& m : st.moments) worst = std::max(worst, std::abs(m));
    rec.at_most("max |m_k|, k = 1..10", worst, 1e-12);
    rec.near("angular star discrepancy", st.discrepancy, 1.0 / 16.0, 1e-12);
    rec.near("roots_of_unity_height_sequence(1-x, 499)", roots_of_unity_height_sequence(IntPoly{1, -1}, 499),
             g.at("roots_of_unity_limit_one_minus_x"), 0.02);
}

void criterion_level_curve(Recorder& rec) {
    const IntPoly psi{1, -1};
    for (int l = 1; l <= 3; ++l) {
        const double ref = energy_arch_power(l, psi);
        const double v = energy_level_curve(IntPoly::monomial(Integer(1), l), psi, 4096).value;
        rec.at_most("relative gap, l = " + std::to_string(l), std::abs(v - ref) / std::abs(ref), 1e-3);
    }
}

std::set<std::string> descriptions(const std::vector<ExceptionPoint>& pts) {
    std::set<std::string> s;
    for (const auto& p : pts) s.insert(p.description);
    return s;
}

void criterion_scan(Recorder& rec) {
    const IntPoly psi{1, -1};
    const std::set<std::string> rationals{"0", "1", "inf"};
    const std::set<std::string> all{"0", "1", "inf", "root 1 of x^2 - x + 1", "root 2 of x^2 - x + 1"};
    for (double h : {3.0, 4.0}) {
        const std::string tag = " (H = " + fmt(h) + ")";
        const auto r = scan_exceptions(1, psi, 0.16, h, false);
        rec.truth("rational exceptions below 0.16" + tag, descriptions(r) == rationals && r.size() == 3,
                  "{0, 1, inf}", describe(r));
        const auto q = scan_exceptions(1, psi, 0.2406, h, true);
        rec.truth("exceptions below 0.2406 with quadratics" + tag, descriptions(q) == all && q.size() == 5,
                  "{0, 1, inf, roots of x^2 - x + 1}", describe(q));
    }
}

struct Criterion {
    int id;
    const char* name;
    std::vector<std::string> tags;
    std::function<void(Recorder&, const std::map<std::string, double>&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "golden constants", {"golden", "mahler", "bounds"}, criterion_golden},
        {2, "Mahler cross-method", {"mahler"}, [](Recorder& r, const auto&) { criterion_mahler_cross(r); }},
        {3, "two-variable oracle", {"mahler"}, [](Recorder& r, const auto&) { criterion_two_variable(r); }},
        {4, "canonical-height properties", {"dynamics", "canheight"}, criterion_canonical},
        {5, "good reduction", {"dynamics", "canheight"},
         [](Recorder& r, const auto&) { criterion_good_reduction(r); }},
        {6, "preperiodicity", {"dynamics", "preperiodic"},
         [](Recorder& r, const auto&) { criterion_preperiodic(r); }},
        {7, "graph exactness", {"graph"}, [](Recorder& r, const auto&) { criterion_graph(r); }},
        {8, "equidistribution diagnostics", {"bounds", "equidist"}, criterion_equidist},
        {9, "level-curve energy", {"bounds", "energy"}, [](Recorder& r, const auto&) { criterion_level_curve(r); }},
        {10, "exception scan", {"bounds", "scan"}, [](Recorder& r, const auto&) { criterion_scan(r); }},
    };
    return list;
}

bool matches(const Criterion& c, const std::string& filter) {
    if (filter.empty()) return true;
    if (filter == std::to_string(c.id)) return true;
    if (std::string(c.name).find(filter) != std::string::npos) return true;
    return std::find(c.tags.begin(), c.tags.end(), filter) != c.tags.end();
}

} // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts) {
    const auto golden = load_golden(opts.golden_path);
    std::vector<CriterionResult> out;
    for (const auto& c : criteria()) {
        if (!matches(c, opts.filter)) continue;
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        r.tags = c.tags;
        Recorder rec(r);
        r.seconds = timed([&] {
            try {
                c.run(rec, golden);
            } catch (const std::exception& e) {
                rec.truth("no exception", false, "no exception", e.what());
            }
        });
        out.push_back(std::move(r));
    }
    return out;
}

void print_table(std::ostream& os, const std::vector<CriterionResult>& results) {
    char line[160];
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-4s %2d  %-30s %8.3fs", r.passed() ? "PASS" : "FAIL", r.id,
                      r.name.c_str(), r.seconds);
        os << line << '\n';
        for (const auto& c : r.checks)
            if (!c.passed) os << "        " << c.name << ": expected " << c.expected << ", actual " << c.actual << '\n';
    }
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
    os << passed << "/" << results.size() << " criteria passed\n";
}

nlohmann::json results_to_json(const std::vector<CriterionResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"expected", c.expected}, {"actual", c.actual}});
        arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed()}, {"checks", checks}});
    }
    return arr;
}

} // namespace heightlab
