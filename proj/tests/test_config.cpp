#include <doctest.h>

#include "nullgeo/catalog.hpp"
#include "nullgeo/run.hpp"

#include <string>

using namespace nullgeo;

namespace {

std::string error_of(const std::string& text, bool strict = true) {
    try {
        parse_config(text, strict);
    } catch (const ConfigError& e) {
        return e.what();
    } catch (const ParseError& e) {
        return std::string("parse: ") + e.what();
    }
    return "";
}

const char* kMinimal = R"({
  "ambient": {"metric": {"coordinates": ["t", "x", "y"],
                         "components": {"g00": "-1", "g11": "1", "g22": "1"}}},
  "immersion": {"parameters": ["s", "y"], "components": ["s", "s", "y"],
                "domain": [[1, 2], [0, 1]], "grid": [3, 3]},
  "screens": [{"name": "e0", "kind": "rigging", "fields": [["1", "0", "0"]]}]
})";

std::string replaced(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("catalog dumps round trip") {
    for (const auto& n : catalog_names()) {
        CAPTURE(n);
        const RunConfig cfg = entry(n);
        const std::string text = dump_config(cfg);
        const RunConfig back = parse_config(text);
        CHECK(back == cfg);
        CHECK(dump_config(back) == text);
        CHECK(config_hash(back) == config_hash(cfg));
    }
}

TEST_CASE("minimal config parses with defaults") {
    const RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.seed == 42);
    CHECK(cfg.screens.size() == 1);
    CHECK(cfg.checks.empty());
    CHECK(config_hash(cfg).size() == 16);
}

TEST_CASE("metric keys must name components") {
    const std::string e = error_of(replaced(kMinimal, "\"g00\"", "\"goo\""));
    CHECK(e.find("$.ambient.metric.components.goo") != std::string::npos);
}

TEST_CASE("unknown keys are rejected only in strict mode") {
    const std::string text = replaced(kMinimal, "\"grid\"", "\"gird\": 1, \"grid\"");
    CHECK(error_of(text).find("$.immersion.gird") != std::string::npos);
    CHECK(error_of(text, false).empty());
}

TEST_CASE("expression errors carry their location") {
    const std::string e = error_of(replaced(kMinimal, "\"s\", \"s\", \"y\"", "\"s\", \"s +\", \"y\""));
    CHECK(!e.empty());
    CHECK(e.find("immersion.components[1]") != std::string::npos);
}

TEST_CASE("semantic errors") {
    CHECK(!error_of(replaced(kMinimal, "\"rigging\"", "\"screwy\"")).empty());
    CHECK(!error_of(replaced(kMinimal, "[[1, 2], [0, 1]]", "[[1, 2]]")).empty());
    CHECK(!error_of(replaced(kMinimal, "\"screens\"", "\"checks\": [{\"check\": \"nope\"}], \"screens\"")).empty());
    CHECK(!error_of("{").empty());
}

TEST_CASE("cosh warp over the Hopf chart is a unit de Sitter space") {
    const Session s(entry("grw_transnormal_graph"));
    std::vector<Vec> xs;
    for (const auto& u : s.points()) xs.push_back(s.immersion()->point(u));
    const SpaceformReport r = spaceform_residual(s.ambient(), 1.0, xs, 7, 1);
    CHECK(r.evaluations == xs.size());
    CHECK(r.max_residual <= 1e-6);
    CHECK(spaceform_residual(s.ambient(), 0.5, xs, 7, 1).max_residual > 1e-2);
}
