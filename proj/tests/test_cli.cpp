#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heightlab/cli.hpp"

using namespace heightlab;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
    json record() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / ("heightlab_test_" + name)).string();
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("documented examples") {
    const Run m = run({"mahler", "--poly", "x^2-x-1", "--method", "roots"});
    REQUIRE(m.code == 0);
    CHECK(m.record()["outputs"]["log_value"].get<double>() == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)));
    CHECK(m.record()["outputs"]["poly"]["coeffs"] == json::array({-1, -1, 1}));

    const Run b = run({"bound", "--ell", "1", "--psi", "1-x"});
    REQUIRE(b.code == 0);
    CHECK(b.record()["outputs"]["bound"].get<double>() == doctest::Approx(0.16153297).epsilon(1e-7));

    const Run h = run({"height", "--point", "2/3"});
    REQUIRE(h.code == 0);
    CHECK(h.record()["outputs"]["height"].get<double>() == doctest::Approx(std::log(3.0)));
    CHECK(h.record()["command"] == "height");
    CHECK(h.record()["versions"]["format_version"] == kFormatVersion);
    CHECK_FALSE(h.record().contains("timing"));
}

TEST_CASE("inputs are echoed") {
    const Run r = run({"canheight", "--map", "z^2+1", "--point", "0", "--per-place"});
    REQUIRE(r.code == 0);
    const json j = r.record();
    CHECK(j["inputs"]["map"] == "z^2+1");
    CHECK(j["inputs"]["point"] == "0");
    CHECK(j["inputs"]["eps"].get<double>() == 1e-9);
    CHECK(j["outputs"]["per_place"].contains("inf"));
    CHECK(j["outputs"]["height"].get<double>() == doctest::Approx(0.20367726136974).epsilon(1e-12));

    const Run s = run({"scan", "--ell", "1", "--psi", "1-x", "--threshold", "0.2406", "--quadratic"});
    REQUIRE(s.code == 0);
    CHECK(s.record()["inputs"]["quadratic"] == true);
    CHECK(s.record()["outputs"]["count"] == 5);

    const Run p = run({"preperiodic", "--map", "z^2-1", "--point", "2"});
    REQUIRE(p.code == 0);
    CHECK(p.record()["outputs"]["preperiodic"] == false);
    CHECK(p.record()["outputs"].contains("escape_certificate"));

    const Run e = run({"equidist", "--map", "z^2", "--target", "1", "--level", "3", "--moments", "8"});
    REQUIRE(e.code == 0);
    CHECK(e.record()["outputs"]["points"] == 8);

    const Run en = run({"energy", "--phi", "x^2", "--psi", "1-x", "--nodes", "1024"});
    REQUIRE(en.code == 0);
    CHECK(en.record()["outputs"]["energy"].get<double>() ==
          doctest::Approx(en.record()["outputs"]["reference"].get<double>()).epsilon(1e-3));
}

TEST_CASE("byte-identical output across runs and thread counts") {
    const std::vector<std::string> args{"scan-pair", "--phi", "z^2", "--psi", "z^2-1", "--max-height", "3"};
    const Run a = run(args);
    std::vector<std::string> t1{"--threads", "1"}, t3{"--threads", "3"};
    t1.insert(t1.end(), args.begin(), args.end());
    t3.insert(t3.end(), args.begin(), args.end());
    const Run b = run(t1), c = run(t3);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const Run m1 = run({"mahler", "--poly", "3x^5 - x + 7", "--method", "both"});
    const Run m2 = run({"mahler", "--poly", "3x^5 - x + 7", "--method", "both"});
    CHECK(m1.out == m2.out);
}

TEST_CASE("timing only on request") {
    const Run r = run({"--timing", "height", "--point", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.record().contains("timing"));
}

TEST_CASE("exit codes") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"mahler", "--poly", "x^^2"}).code == 2);
    CHECK(run({"mahler", "--poly", "x+1", "--nodes", "1000", "--method", "quad"}).code == 2);
    CHECK(run({"canheight", "--map", "2z+1", "--point", "1"}).code == 2);
    CHECK(run({"height", "--point", "[0:0]"}).code == 2);
    const Run bad = run({"height"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("graph subcommand") {
    const std::string path = temp_file("graph.json", R"({
        "vertices": ["a", "b"],
        "edges": [{"u": "a", "v": "b", "length": 1}, {"u": "a", "v": "b", "length": 1}],
        "divisor": [{"coeff": 1, "vertex": "a"}],
        "f": {"a": 0, "b": 1}
    })");
    const Run c = run({"graph", "curvature", "--file", path});
    REQUIRE(c.code == 0);
    CHECK(c.record()["outputs"]["vertex_mass"]["a"] == "3");
    const Run e = run({"graph", "energy", "--file", path});
    CHECK(e.record()["outputs"]["energy"] == "2");
    CHECK(e.record()["outputs"]["dirichlet_form"] == "-2");
    CHECK(run({"graph", "curvature", "--file", path + ".missing"}).code == 2);
    CHECK(run({"graph", "volume", "--file", path}).code == 2);
    std::remove(path.c_str());
}

TEST_CASE("selftest filter and golden file") {
    const Run r = run({"selftest", "--filter", "mahler", "--json"});
    const json j = r.record();
    std::vector<int> ids;
    for (const auto& c : j["outputs"]["criteria"]) ids.push_back(c["id"].get<int>());
    CHECK(ids == std::vector<int>{1, 2, 3});

    const std::string golden = temp_file("golden.json", R"({"height_golden_ratio": 0.25})");
    const Run p = run({"selftest", "--filter", "golden", "--golden", golden, "--json"});
    CHECK(p.code == 1);
    bool named = false;
    const json rec = p.record();
    for (const auto& c : rec["outputs"]["criteria"][0]["checks"])
        if (c["name"] == "height_from_minpoly(x^2-x-1)") {
            named = true;
            CHECK(c["passed"] == false);
            CHECK(c["expected"].get<std::string>().rfind("0.25", 0) == 0);
            CHECK(c["actual"].get<std::string>().rfind("0.2406059", 0) == 0);
        }
    CHECK(named);
    std::remove(golden.c_str());
    CHECK(run({"selftest", "--filter", "nothing-matches"}).code == 2);
}
