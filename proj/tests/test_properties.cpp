#include <catch_amalgamated.hpp>

#include <set>

#include "varunc/properties.hpp"

using namespace varunc;

TEST_CASE("every property holds at a small sample count", "[properties]") {
    properties::Config cfg;
    cfg.samples = 50;
    cfg.seed = 3;
    const auto results = properties::run_all(cfg);
    CHECK(results.size() == 28);
    std::set<std::string> modules;
    for (const auto& r : results) {
        INFO(r.module << ": " << r.name << " residual " << r.max_residual << " threshold " << r.threshold);
        CHECK(r.passed());
        modules.insert(r.module);
    }
    CHECK(modules.size() == 4);
}

TEST_CASE("a failing residual is reported as a failure", "[properties]") {
    const properties::Result bad{"m", "n", 1, 1e-3, 1e-6};
    CHECK_FALSE(bad.passed());
    const properties::Result nan{"m", "n", 1, std::nan(""), 1.0};
    CHECK_FALSE(nan.passed());
}
