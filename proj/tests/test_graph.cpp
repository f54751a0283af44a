#include <doctest.h>

#include "heightlab/errors.hpp"
#include "heightlab/graph.hpp"

using namespace heightlab;

namespace {

MetrizedGraph two_parallel() {
    return MetrizedGraph({"a", "b"}, {{0, 1, Rational(1)}, {0, 1, Rational(1)}});
}

} // namespace

TEST_CASE("laplacian") {
    const MetrizedGraph g = two_parallel();
    const DiscreteMeasure lap = laplacian_pl(g, PLFunction{{Rational(0), Rational(1)}});
    CHECK(lap.vertex_mass == std::vector<Rational>{-2, 2});
    CHECK(lap.total_mass(g) == 0);
    const DiscreteMeasure flat = laplacian_pl(g, PLFunction{{Rational(3, 7), Rational(3, 7)}});
    CHECK(flat.vertex_mass == std::vector<Rational>{0, 0});
    CHECK_THROWS_AS(laplacian_pl(g, PLFunction{{Rational(1)}}), InvalidArgument);
}

TEST_CASE("curvature") {
    const MetrizedGraph g = two_parallel();
    const VertexDivisor d{{{Integer(1), 0}}};
    CHECK(curvature(g, d, PLFunction{{Rational(0), Rational(0)}}).vertex_mass == std::vector<Rational>{1, 0});
    const DiscreteMeasure mu = curvature(g, VertexDivisor{}, PLFunction{{Rational(0), Rational(1)}});
    CHECK(mu.vertex_mass == std::vector<Rational>{2, -2});
    CHECK(curvature_unit_formula(g, VertexDivisor{}, PLFunction{{Rational(0), Rational(1)}}) == mu);

    const MetrizedGraph h({"p", "q", "r"}, {{0, 1, Rational(1, 2)}, {1, 2, Rational(3)}, {2, 0, Rational(5, 4)}});
    const VertexDivisor dd{{{Integer(2), 1}, {Integer(-1), 2}}};
    const DiscreteMeasure m2 = curvature(h, dd, PLFunction{{Rational(1), Rational(-2, 3), Rational(4)}});
    CHECK(m2.total_mass(h) == 1);
    CHECK_THROWS_AS(curvature_unit_formula(h, dd, PLFunction{{Rational(0), Rational(0), Rational(0)}}), InvalidArgument);
}

TEST_CASE("dirichlet energy") {
    const MetrizedGraph g = two_parallel();
    CHECK(dirichlet_energy(g, PLFunction{{Rational(0), Rational(1)}}) == 2);
    CHECK(dirichlet_energy(g, PLFunction{{Rational(5), Rational(5)}}) == 0);
    const MetrizedGraph h({"p", "q", "r"}, {{0, 1, Rational(1, 2)}, {1, 2, Rational(3)}, {2, 0, Rational(5, 4)}});
    const PLFunction f{{Rational(1), Rational(-2, 3), Rational(4)}};
    const PLFunction cf{{Rational(-7, 2), Rational(7, 3), Rational(-14)}};
    CHECK(dirichlet_energy(h, cf) == Rational(49, 4) * dirichlet_energy(h, f));
}

TEST_CASE("subdivision") {
    const MetrizedGraph g({"a", "b"}, {{0, 1, Rational(1)}});
    const Subdivision s1 = subdivide(g, 1);
    CHECK(s1.graph.vertex_count() == 2);
    CHECK(s1.graph.edge_count() == 1);
    const Subdivision s3 = subdivide(g, 3);
    CHECK(s3.graph.edge_count() == 3);
    CHECK(s3.graph.vertex_count() == 4);
    for (const auto& e : s3.graph.edges()) CHECK(e.length == Rational(1, 3));
    const PLFunction f{{Rational(0), Rational(3)}};
    const PLFunction ext = extend_linear(g, s3, f);
    CHECK(ext.values[s3.edge_paths[0][1]] == 1);
    CHECK(ext.values[s3.edge_paths[0][2]] == 2);
    CHECK(dirichlet_energy(s3.graph, ext) == dirichlet_energy(g, f));
    CHECK_THROWS_AS(subdivide(g, 0), InvalidArgument);
}

TEST_CASE("haar measure on a circle") {
    const MetrizedGraph c({"a", "b", "c"}, {{0, 1, Rational(1, 2)}, {1, 2, Rational(1)}, {2, 0, Rational(3, 2)}});
    const DiscreteMeasure h = circle_haar_measure(c, Rational(5));
    for (const auto& d : h.edge_density) CHECK(d == Rational(5, 3));
    CHECK(h.total_mass(c) == 5);
    const DiscreteMeasure z = circle_haar_measure(c, Rational(0));
    CHECK(z.total_mass(c) == 0);
    const Subdivision s = subdivide(c, 4);
    for (const auto& d : circle_haar_measure(s.graph, Rational(5)).edge_density) CHECK(d == Rational(5, 3));
    CHECK(circle_haar_measure(two_parallel(), Rational(1)).edge_density == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const MetrizedGraph path({"a", "b", "c"}, {{0, 1, Rational(1)}, {1, 2, Rational(1)}});
    CHECK_THROWS_AS(circle_haar_measure(path, Rational(1)), ShapeError);
}

TEST_CASE("invalid graphs") {
    CHECK_THROWS_AS(MetrizedGraph({"a"}, {{0, 0, Rational(1)}}), InvalidArgument);
    CHECK_THROWS_AS(MetrizedGraph({"a", "b"}, {{0, 1, Rational(0)}}), InvalidArgument);
    CHECK_THROWS_AS(MetrizedGraph({"a", "a"}, {}), InvalidArgument);
    CHECK_THROWS_AS(MetrizedGraph({"a", "b"}, {{0, 2, Rational(1)}}), InvalidArgument);
}

TEST_CASE("json round trip") {
    const auto j = nlohmann::json::parse(R"({
        "vertices": ["a", "b"],
        "edges": [{"u": "a", "v": "b", "length": 1}, {"u": "a", "v": "b", "length": "1"}],
        "divisor": [{"coeff": 1, "vertex": "a"}],
        "f": {"a": 0, "b": "1"}
    })");
    const GraphProblem gp = graph_problem_from_json(j);
    const auto out = measure_to_json(gp.graph, curvature(gp.graph, gp.divisor, gp.f));
    CHECK(out["vertex_mass"]["a"] == "3");
    CHECK(out["vertex_mass"]["b"] == "-2");
    CHECK(out["total_mass"] == "1");
    CHECK_THROWS_AS(graph_problem_from_json(nlohmann::json::parse(R"({"vertices": ["a"]})")), InvalidArgument);
    CHECK_THROWS_AS(graph_problem_from_json(nlohmann::json::parse(
                        R"({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "c", "length": 1}]})")),
                    InvalidArgument);
}
