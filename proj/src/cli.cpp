#include "heightlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>

#include <CLI11.hpp>
#include <json.hpp>

#include "heightlab/bounds.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/graph.hpp"
#include "heightlab/json_out.hpp"
#include "heightlab/kernels.hpp"
#include "heightlab/parallel.hpp"
#include "heightlab/parse.hpp"
#include "heightlab/selftest.hpp"

#ifndef HEIGHTLAB_VERSION
#define HEIGHTLAB_VERSION "0.0.0"
#endif

namespace heightlab {

namespace {

using json = nlohmann::json;

json coeffs_json(const IntPoly& p) {
    json arr = json::array();
    for (const auto& c : p.coeffs()) {
        if (c.fits_slong_p())
            arr.push_back(c.get_si());
        else
            arr.push_back(to_string(c));
    }
    return arr;
}

json poly_json(const IntPoly& p) { return {{"text", to_string(p)}, {"coeffs", coeffs_json(p)}}; }

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json points_json(const std::vector<ProjPointQ>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(p.to_string());
    return arr;
}

json mahler_json(const MahlerResult& r) {
    return {{"log_value", r.log_value}, {"method", to_string(r.method)}, {"error_estimate", r.error_estimate}};
}

json escape_json(const EscapeCertificate& c) {
    return {{"step", c.step}, {"point", c.point.to_string()}, {"height", c.height}, {"threshold", c.threshold}};
}

// A subcommand fills `inputs` while parsing and produces its outputs on run.
struct Command {
    CLI::App* app = nullptr;
    std::function<json()> inputs;
    std::function<json()> run;
};

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heights, Green functions and Mahler measures over Q.\n"
                 "Expressions: integers, rationals a/b, one variable x or z, + - * / ^ and parentheses;\n"
                 "juxtaposition multiplies (\"3x^2 - x/2 + 1\", \"(z^2+1)/z\").",
                 "heightlab"};
    app.require_subcommand(1);
    unsigned threads = 0;
    bool timing = false;
    app.add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_flag("--timing", timing, "add wall-clock milliseconds to the record (breaks byte-identical output)");
    app.set_version_flag("--version", HEIGHTLAB_VERSION);

    std::vector<Command> commands;
    auto add = [&](const char* name, const char* help) -> Command& {
        commands.push_back({app.add_subcommand(name, help), {}, {}});
        return commands.back();
    };

    // Shared storage for flags; each subcommand binds what it needs.
    std::string point, map, poly, method = "roots", phi, psi, target = "1", file, action, filter, golden;
    double eps = 1e-9, max_height = 3.0, threshold = 0.0;
    int nodes = 16384, energy_nodes = 4096, ell = 1, level = 4, moments = 10;
    bool per_place = false, quadratic = false, as_json = false;

    {
        Command& c = add("height", "Weil height of a rational point");
        c.app->add_option("--point", point, "a/b, inf or [a:b]")->required();
        c.inputs = [&] { return json{{"point", point}}; };
        c.run = [&] {
            const ProjPointQ p = parse_point(point);
            const WeilHeight h = weil_height_exact(p);
            return json{{"point", p.to_string()}, {"max_coord", to_string(h.max_coord)}, {"height", h.value}};
        };
    }
    {
        Command& c = add("canheight", "canonical height as a sum of local Green functions");
        c.app->add_option("--map", map, "rational map, e.g. \"z^2+1\"")->required();
        c.app->add_option("--point", point, "a/b, inf or [a:b]")->required();
        c.app->add_option("--eps", eps, "absolute accuracy")->capture_default_str()->check(CLI::PositiveNumber);
        c.app->add_flag("--per-place", per_place, "report each local contribution");
        c.inputs = [&] { return json{{"map", map}, {"point", point}, {"eps", eps}, {"per_place", per_place}}; };
        c.run = [&] {
            const DynSystem s(parse_map(map));
            const ProjPointQ p = parse_point(point);
            const CanonicalHeight h = canonical_height(s, p, eps);
            json r{{"map", s.map().to_string()}, {"point", p.to_string()}, {"height", h.value},
                   {"tail_bound", h.tail_bound}};
            if (per_place) {
                json places = json::object();
                for (const auto& [v, val] : h.ledger.values) {
                    json e{{"value", val}, {"tail_bound", h.ledger.tail_bounds.at(v)}};
                    if (!v.is_archimedean()) e["ledger"] = local_green(s, p, v, eps).ledger;
                    places[v.label()] = e;
                }
                r["per_place"] = places;
                json bad = json::array();
                for (const auto& q : s.bad_primes()) bad.push_back(to_string(q));
                r["bad_primes"] = bad;
            }
            return r;
        };
    }
    {
        Command& c = add("preperiodic", "decide preperiodicity with a certificate");
        c.app->add_option("--map", map)->required();
        c.app->add_option("--point", point)->required();
        c.inputs = [&] { return json{{"map", map}, {"point", point}}; };
        c.run = [&] {
            const DynSystem s(parse_map(map));
            const PreperiodicResult r = is_preperiodic(s, parse_point(point));
            json o{{"preperiodic", r.preperiodic}, {"orbit", points_json(r.orbit)}};
            if (r.preperiodic) {
                o["cycle"] = points_json(r.cycle());
                o["cycle_start"] = r.cycle_start;
            } else if (r.escape) {
                o["escape_certificate"] = escape_json(*r.escape);
            }
            return o;
        };
    }
    {
        Command& c = add("scan-pair", "rational points preperiodic for two maps");
        c.app->add_option("--phi", phi)->required();
        c.app->add_option("--psi", psi)->required();
        c.app->add_option("--max-height", max_height)->capture_default_str()->check(CLI::NonNegativeNumber);
        c.inputs = [&] { return json{{"phi", phi}, {"psi", psi}, {"max_height", max_height}}; };
        c.run = [&] {
            const auto pts = common_preperiodic_scan(DynSystem(parse_map(phi)), DynSystem(parse_map(psi)), max_height);
            return json{{"points", points_json(pts)}, {"count", pts.size()}};
        };
    }
    {
        Command& c = add("mahler", "logarithmic Mahler measure of an integer polynomial");
        c.app->add_option("--poly", poly)->required();
        c.app->add_option("--method", method)->capture_default_str()->check(CLI::IsMember({"roots", "quad", "both"}));
        c.app->add_option("--nodes", nodes, "quadrature nodes, a power of two")->capture_default_str();
        c.inputs = [&] { return json{{"poly", poly}, {"method", method}, {"nodes", nodes}}; };
        c.run = [&] {
            const IntPoly p = parse_integral_poly(poly);
            json r{{"poly", poly_json(p)}};
            if (method != "both") {
                r.update(mahler_json(method == "roots" ? mahler_via_roots(p) : mahler_via_quadrature(p, nodes)));
                return r;
            }
            const MahlerResult a = mahler_via_roots(p), b = mahler_via_quadrature(p, nodes);
            r["roots"] = mahler_json(a);
            r["quad"] = mahler_json(b);
            r["difference"] = std::abs(a.log_value - b.log_value);
            return r;
        };
    }
    {
        Command& c = add("bound", "height lower bound for x^ell and psi");
        c.app->add_option("--ell", ell)->capture_default_str()->check(CLI::PositiveNumber);
        c.app->add_option("--psi", psi)->required();
        c.app->add_option("--nodes", nodes)->capture_default_str();
        c.inputs = [&] { return json{{"ell", ell}, {"psi", psi}, {"nodes", nodes}}; };
        c.run = [&] {
            const IntPoly q = parse_integral_poly(psi);
            const BoundResult b = pair_bound_power(ell, q, nodes);
            return json{{"psi", poly_json(q)}, {"bound", b.value}, {"log_mahler_plus", b.mahler.log_value},
                        {"error_estimate", b.mahler.error_estimate}};
        };
    }
    {
        Command& c = add("energy", "archimedean Dirichlet energy along |phi| = 1");
        c.app->add_option("--phi", phi)->required();
        c.app->add_option("--psi", psi)->required();
        c.app->add_option("--nodes", energy_nodes)->capture_default_str()->check(CLI::PositiveNumber);
        c.inputs = [&] { return json{{"phi", phi}, {"psi", psi}, {"nodes", energy_nodes}}; };
        c.run = [&] {
            const IntPoly f = parse_integral_poly(phi), g = parse_integral_poly(psi);
            const LevelCurveEnergy e = energy_level_curve(f, g, energy_nodes);
            if (e.perturbed > 0)
                err << "warning: " << e.perturbed << " node(s) hit a critical value and were moved half a step\n";
            json r{{"energy", e.value}, {"nodes", e.nodes}, {"skipped", e.skipped}, {"perturbed", e.perturbed}};
            DynPair pair(f, g);
            if (pair.phi_is_power()) r["reference"] = energy_arch_power(f.degree(), g);
            return r;
        };
    }
    {
        Command& c = add("scan", "points below the height bound");
        c.app->add_option("--ell", ell)->capture_default_str()->check(CLI::PositiveNumber);
        c.app->add_option("--psi", psi)->required();
        c.app->add_option("--threshold", threshold)->required();
        c.app->add_option("--max-height", max_height)->capture_default_str()->check(CLI::NonNegativeNumber);
        c.app->add_flag("--quadratic", quadratic, "also scan quadratic points");
        c.inputs = [&] {
            return json{{"ell", ell}, {"psi", psi}, {"threshold", threshold}, {"max_height", max_height},
                        {"quadratic", quadratic}};
        };
        c.run = [&] {
            const auto pts = scan_exceptions(ell, parse_integral_poly(psi), threshold, max_height, quadratic);
            json arr = json::array();
            for (const auto& p : pts) {
                json e{{"description", p.description}, {"approx", complex_json(p.approx)},
                       {"height_x", p.height_x}, {"height_psi", p.height_psi}, {"value", p.value}};
                if (!p.minpoly.is_zero()) e["minpoly"] = poly_json(p.minpoly);
                arr.push_back(e);
            }
            return json{{"points", arr}, {"count", pts.size()}};
        };
    }
    {
        Command& c = add("equidist", "moments and discrepancy of iterated preimages");
        c.app->add_option("--map", map)->required();
        c.app->add_option("--target", target, "rational a")->capture_default_str();
        c.app->add_option("--level", level)->capture_default_str()->check(CLI::Range(0, 20));
        c.app->add_option("--moments", moments)->capture_default_str()->check(CLI::Range(0, 1000));
        c.inputs = [&] { return json{{"map", map}, {"target", target}, {"level", level}, {"moments", moments}}; };
        c.run = [&] {
            const DynSystem s(parse_map(map));
            const PreimageStats st = preimage_measure_stats(s, parse_rational(target), level, moments);
            json m = json::array();
            for (const auto& z : st.moments) m.push_back(complex_json(z));
            return json{{"points", st.measure.points.size()}, {"moments", m}, {"discrepancy", st.discrepancy},
                        {"on_circle", st.on_circle}, {"at_infinity", st.at_infinity},
                        {"max_residual", st.max_residual}, {"reference_is_uniform", st.reference_is_uniform}};
        };
    }
    {
        Command& c = add("graph", "exact computations on a metrized graph file");
        c.app->add_option("action", action, "curvature, laplacian or energy")
            ->required()
            ->check(CLI::IsMember({"curvature", "laplacian", "energy"}));
        c.app->add_option("--file", file, "graph JSON")->required();
        c.inputs = [&] { return json{{"action", action}, {"file", file}}; };
        c.run = [&] {
            std::ifstream in(file);
            if (!in) throw InvalidArgument("cannot open '" + file + "'");
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw InvalidArgument(std::string("malformed graph file: ") + e.what());
            }
            const GraphProblem gp = graph_problem_from_json(j);
            if (action == "curvature") return measure_to_json(gp.graph, curvature(gp.graph, gp.divisor, gp.f));
            if (action == "laplacian") return measure_to_json(gp.graph, laplacian_pl(gp.graph, gp.f));
            const Rational e = dirichlet_energy(gp.graph, gp.f);
            return json{{"energy", to_string(e)}, {"dirichlet_form", to_string(Rational(-e))}};
        };
    }

    CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--filter", filter, "criterion id, name fragment or tag (mahler, dynamics, graph, ...)");
    selftest->add_option("--golden", golden, "golden constants JSON (default: the source tree copy)");
    selftest->add_flag("--json", as_json, "emit a JSON record instead of the table");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (threads > 0) set_thread_count(threads);

    json versions{{"tool", HEIGHTLAB_VERSION}, {"format_version", kFormatVersion}};

    if (selftest->parsed()) {
        try {
            SelftestOptions opts{filter, golden.empty() ? default_golden_path() : golden};
            const auto t0 = std::chrono::steady_clock::now();
            const auto results = run_selftest(opts);
            const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
            if (as_json) {
                json rec{{"command", "selftest"},
                         {"inputs", {{"filter", filter}, {"golden", opts.golden_path}}},
                         {"outputs", {{"criteria", results_to_json(results)}, {"passed", ok}}},
                         {"versions", versions}};
                if (timing)
                    rec["timing"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                out << canonical_dump(rec) << '\n';
            } else {
                print_table(out, results);
            }
            if (results.empty()) {
                err << "no criterion matches filter '" << filter << "'\n";
                return 2;
            }
            return ok ? 0 : 1;
        } catch (const InvalidArgument& e) {
            err << "error: " << e.what() << '\n';
            return 2;
        }
    }

    for (const Command& c : commands) {
        if (!c.app->parsed()) continue;
        const std::string name = c.app->get_name();
        json rec{{"command", name}, {"inputs", c.inputs()}, {"versions", versions}};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            rec["outputs"] = c.run();
        } catch (const InvalidArgument& e) {
            err << "error: " << e.what() << '\n';
            return 2;
        } catch (const ComputationError& e) {
            rec["error"] = {{"kind", "computation"}, {"message", e.what()}};
            out << canonical_dump(rec) << '\n';
            err << "computation failed: " << e.what() << '\n';
            return 1;
        }
        if (timing) rec["timing"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out << canonical_dump(rec) << '\n';
        return 0;
    }
    err << app.help();
    return 2;
}

} // namespace heightlab
