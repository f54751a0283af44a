// One PASS/FAIL line per acceptance criterion. Tolerances live in the suite
// itself (src/selftest.cpp); this driver only selects and reports.

#include <cstring>
#include <iostream>

#include "heightlab/selftest.hpp"

int main(int argc, char** argv) {
    heightlab::SelftestOptions opts;
    opts.golden_path = std::string(HEIGHTLAB_TEST_DATA) + "/golden/constants.json";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--filter") == 0) opts.filter = argv[++i];
    const auto results = heightlab::run_selftest(opts);
    bool ok = !results.empty();
    for (const auto& r : results) {
        std::cout << (r.passed() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name << '\n';
        for (const auto& c : r.checks)
            std::cout << "      [" << (c.passed ? "ok" : "FAILED") << "] " << c.name << ": expected " << c.expected
                      << ", actual " << c.actual << '\n';
        ok = ok && r.passed();
    }
    return ok ? 0 : 1;
}
