#pragma once

#include "nullgeo/analysis.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nullgeo {

/// Screen recipe in source form. `rigging` and `closed_conformal` take one
/// field; `explicit` takes one field per screen direction.
struct ScreenConfig {
    std::string kind;
    std::vector<std::vector<std::string>> fields;

    bool operator==(const ScreenConfig&) const = default;
};

struct CheckRequest {
    std::string check;
    std::string screen;  // empty: first screen
    std::string field;   // empty: check takes no field
    std::optional<Verdict> expect;
    std::string expect_class;                 // umbilic classification, when given
    std::map<std::string, double> tolerances;  // overrides: exact, fd, rel, floor, step
    int gauges = 20;
    int triples = 0;  // spaceform: random triples in total; 0 means 200
    std::string note;

    bool operator==(const CheckRequest&) const = default;
};

struct RunConfig {
    std::string name;
    std::string description;
    AmbientSpec ambient;
    std::optional<double> spaceform_curvature;
    ImmersionSpec immersion;
    std::vector<std::pair<std::string, ScreenConfig>> screens;
    std::vector<std::pair<std::string, std::vector<std::string>>> fields;
    Tolerances tolerances;
    std::uint64_t seed = 42;
    std::vector<CheckRequest> checks;
    std::vector<std::string> notes;

    const ScreenConfig& screen(const std::string& name) const;
    const std::vector<std::string>& field(const std::string& name) const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Names accepted in CheckRequest::check.
const std::vector<std::string>& check_names();

/// Parses and validates a config document. Strict mode rejects unknown keys;
/// errors name the JSON path of the offending entry. Every expression is
/// parsed so that syntax errors surface here with their location.
RunConfig parse_config(const std::string& json_text, bool strict = true);
RunConfig load_config(const std::string& path, bool strict = true);

/// Canonical JSON text (two-space indent, trailing newline).
std::string dump_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace nullgeo
