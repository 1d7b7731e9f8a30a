#include "nullgeo/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nullgeo {

using json = nlohmann::ordered_json;

const ScreenConfig& RunConfig::screen(const std::string& n) const {
    for (const auto& [k, v] : screens)
        if (k == n) return v;
    throw ConfigError("unknown screen '" + n + "'");
}

const std::vector<std::string>& RunConfig::field(const std::string& n) const {
    for (const auto& [k, v] : fields)
        if (k == n) return v;
    throw ConfigError("unknown field '" + n + "'");
}

bool operator==(const RunConfig& a, const RunConfig& b) { return dump_config(a) == dump_config(b); }

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {
        "validate", "shape",      "angle",   "gauge",     "quasi_conformal_fit", "sqc_grw",   "qc-screen",
        "zstar-zero", "components", "codazzi", "eqgrads", "cpd",                 "principal", "geodesic",
        "flat-screen", "cmc",      "nonmetric", "zperp",   "umbilic",             "spaceform", "cc"};
    return names;
}

namespace {

bool needs_field(const std::string& check) {
    static const std::vector<std::string> none = {"validate",  "shape",   "quasi_conformal_fit", "sqc_grw",
                                                  "codazzi",   "nonmetric", "umbilic",           "spaceform"};
    return std::find(none.begin(), none.end(), check) == none.end();
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

/// Strict-mode key gate and typed accessors that report JSON paths.
class Reader {
public:
    explicit Reader(bool strict) : strict_(strict) {}

    void object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) fail(path, "expected an object");
        if (!strict_) return;
        for (const auto& [k, v] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) fail(path + "." + k, "unknown key");
        }
    }

    const json& required(const json& j, const std::string& path, const char* key) const {
        if (!j.contains(key)) fail(path + "." + key, "missing required key");
        return j.at(key);
    }

    std::string str(const json& j, const std::string& path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    double num(const json& j, const std::string& path) const {
        if (!j.is_number()) fail(path, "expected a number");
        return j.get<double>();
    }

    int integer(const json& j, const std::string& path) const {
        if (!j.is_number_integer()) fail(path, "expected an integer");
        return j.get<int>();
    }

    std::vector<std::string> strings(const json& j, const std::string& path) const {
        if (!j.is_array()) fail(path, "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }

    std::vector<double> numbers(const json& j, const std::string& path) const {
        if (!j.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }

private:
    bool strict_;
};

MetricSpec read_metric(const Reader& rd, const json& j, const std::string& path) {
    rd.object(j, path, {"coordinates", "components"});
    MetricSpec m;
    m.coordinates = rd.strings(rd.required(j, path, "coordinates"), path + ".coordinates");
    const std::string cp = path + ".components";
    const json& c = rd.required(j, path, "components");
    if (!c.is_object()) fail(cp, "expected an object");
    const int dim = static_cast<int>(m.coordinates.size());
    for (const auto& [k, v] : c.items()) {
        const bool shape = k.size() == 3 && k[0] == 'g' && std::isdigit(static_cast<unsigned char>(k[1])) &&
                           std::isdigit(static_cast<unsigned char>(k[2]));
        if (!shape || k[1] - '0' >= dim || k[2] - '0' >= dim || k[1] > k[2])
            fail(cp + "." + k, "metric keys are gij with i <= j < " + std::to_string(dim));
        m.components[k] = rd.str(v, cp + "." + k);
    }
    return m;
}

json write_metric(const MetricSpec& m) {
    json j;
    j["coordinates"] = m.coordinates;
    json c = json::object();
    for (const auto& [k, v] : m.components) c[k] = v;
    j["components"] = c;
    return j;
}

void read_ambient(const Reader& rd, const json& j, RunConfig& cfg) {
    const std::string path = "$.ambient";
    rd.object(j, path, {"metric", "grw", "check_points", "spaceform_curvature"});
    if (j.contains("metric") == j.contains("grw")) fail(path, "give exactly one of 'metric' and 'grw'");
    if (j.contains("metric")) {
        cfg.ambient.form = read_metric(rd, j.at("metric"), path + ".metric");
    } else {
        const std::string gp = path + ".grw";
        const json& g = j.at("grw");
        rd.object(g, gp, {"time", "t_range", "warp", "fiber"});
        GRWSpec s;
        if (g.contains("time")) s.time = rd.str(g.at("time"), gp + ".time");
        const auto range = rd.numbers(rd.required(g, gp, "t_range"), gp + ".t_range");
        if (range.size() != 2) fail(gp + ".t_range", "expected [t_min, t_max]");
        s.t_min = range[0];
        s.t_max = range[1];
        s.warp = rd.str(rd.required(g, gp, "warp"), gp + ".warp");
        s.fiber = read_metric(rd, rd.required(g, gp, "fiber"), gp + ".fiber");
        cfg.ambient.form = s;
    }
    if (j.contains("check_points")) {
        const json& cp = j.at("check_points");
        if (!cp.is_array()) fail(path + ".check_points", "expected an array");
        for (std::size_t i = 0; i < cp.size(); ++i)
            cfg.ambient.check_points.push_back(rd.numbers(cp[i], path + ".check_points[" + std::to_string(i) + "]"));
    }
    if (j.contains("spaceform_curvature"))
        cfg.spaceform_curvature = rd.num(j.at("spaceform_curvature"), path + ".spaceform_curvature");
}

json write_ambient(const RunConfig& cfg) {
    json j;
    if (const auto* m = std::get_if<MetricSpec>(&cfg.ambient.form)) {
        j["metric"] = write_metric(*m);
    } else {
        const auto& s = std::get<GRWSpec>(cfg.ambient.form);
        json g;
        g["time"] = s.time;
        g["t_range"] = {s.t_min, s.t_max};
        g["warp"] = s.warp;
        g["fiber"] = write_metric(s.fiber);
        j["grw"] = g;
    }
    if (!cfg.ambient.check_points.empty()) j["check_points"] = cfg.ambient.check_points;
    if (cfg.spaceform_curvature) j["spaceform_curvature"] = *cfg.spaceform_curvature;
    return j;
}

void read_immersion(const Reader& rd, const json& j, RunConfig& cfg) {
    const std::string path = "$.immersion";
    rd.object(j, path, {"parameters", "components", "domain", "grid", "xi_reference", "xi_scale"});
    ImmersionSpec& s = cfg.immersion;
    s.parameters = rd.strings(rd.required(j, path, "parameters"), path + ".parameters");
    s.components = rd.strings(rd.required(j, path, "components"), path + ".components");
    const json& d = rd.required(j, path, "domain");
    if (!d.is_array()) fail(path + ".domain", "expected an array of [lo, hi] pairs");
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::string p = path + ".domain[" + std::to_string(i) + "]";
        const auto lh = rd.numbers(d[i], p);
        if (lh.size() != 2) fail(p, "expected [lo, hi]");
        s.domain.emplace_back(lh[0], lh[1]);
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_array()) fail(path + ".grid", "expected an array of integers");
        for (std::size_t i = 0; i < g.size(); ++i)
            s.grid.push_back(rd.integer(g[i], path + ".grid[" + std::to_string(i) + "]"));
    }
    if (j.contains("xi_reference")) s.xi_reference = rd.strings(j.at("xi_reference"), path + ".xi_reference");
    if (j.contains("xi_scale")) s.xi_scale = rd.num(j.at("xi_scale"), path + ".xi_scale");
}

json write_immersion(const ImmersionSpec& s) {
    json j;
    j["parameters"] = s.parameters;
    j["components"] = s.components;
    json d = json::array();
    for (const auto& [lo, hi] : s.domain) d.push_back({lo, hi});
    j["domain"] = d;
    j["grid"] = s.grid;
    if (!s.xi_reference.empty()) j["xi_reference"] = s.xi_reference;
    j["xi_scale"] = s.xi_scale;
    return j;
}

Verdict read_verdict(const Reader& rd, const json& j, const std::string& path) {
    const std::string v = rd.str(j, path);
    for (Verdict c : {Verdict::pass, Verdict::fail, Verdict::inapplicable})
        if (v == verdict_name(c)) return c;
    fail(path, "expected pass, fail or inapplicable");
}

void read_tolerances(const Reader& rd, const json& j, const std::string& path, std::map<std::string, double>& out) {
    rd.object(j, path, {"exact", "fd", "rel", "floor", "step"});
    for (const auto& [k, v] : j.items()) {
        const double x = rd.num(v, path + "." + k);
        if (!(x > 0)) fail(path + "." + k, "tolerances must be positive");
        out[k] = x;
    }
}

void read_checks(const Reader& rd, const json& j, RunConfig& cfg) {
    const std::string path = "$.checks";
    if (!j.is_array()) fail(path, "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& c = j[i];
        rd.object(c, p, {"check", "screen", "field", "expect", "class", "tolerances", "gauges", "triples", "note"});
        CheckRequest q;
        q.check = rd.str(rd.required(c, p, "check"), p + ".check");
        if (c.contains("screen")) q.screen = rd.str(c.at("screen"), p + ".screen");
        if (c.contains("field")) q.field = rd.str(c.at("field"), p + ".field");
        if (c.contains("expect")) q.expect = read_verdict(rd, c.at("expect"), p + ".expect");
        if (c.contains("class")) q.expect_class = rd.str(c.at("class"), p + ".class");
        if (c.contains("tolerances")) read_tolerances(rd, c.at("tolerances"), p + ".tolerances", q.tolerances);
        if (c.contains("gauges")) q.gauges = rd.integer(c.at("gauges"), p + ".gauges");
        if (c.contains("triples")) q.triples = rd.integer(c.at("triples"), p + ".triples");
        if (c.contains("note")) q.note = rd.str(c.at("note"), p + ".note");
        cfg.checks.push_back(q);
    }
}

json write_check(const CheckRequest& q) {
    json j;
    j["check"] = q.check;
    if (!q.screen.empty()) j["screen"] = q.screen;
    if (!q.field.empty()) j["field"] = q.field;
    if (q.expect) j["expect"] = verdict_name(*q.expect);
    if (!q.expect_class.empty()) j["class"] = q.expect_class;
    if (!q.tolerances.empty()) {
        json t = json::object();
        for (const auto& [k, v] : q.tolerances) t[k] = v;
        j["tolerances"] = t;
    }
    if (q.gauges != 20) j["gauges"] = q.gauges;
    if (q.triples != 0) j["triples"] = q.triples;
    if (!q.note.empty()) j["note"] = q.note;
    return j;
}

template <class F>
void wrap(const std::string& path, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    } catch (const ParseError& e) {
        fail(path, std::string("parse error: ") + e.what());
    } catch (const GeometryError& e) {
        fail(path, e.what());
    }
}

/// Semantic validation: builds every object once so that bad expressions,
/// dimensions and references fail before any computation.
void validate(const RunConfig& cfg) {
    if (const auto* m = std::get_if<MetricSpec>(&cfg.ambient.form))
        for (const auto& [k, src] : m->components)
            wrap("$.ambient.metric.components." + k, [&] { parse_expression(src, m->coordinates); });
    for (std::size_t k = 0; k < cfg.immersion.components.size(); ++k)
        wrap("$.immersion.components[" + std::to_string(k) + "]",
             [&] { parse_expression(cfg.immersion.components[k], cfg.immersion.parameters); });
    std::shared_ptr<const AmbientManifold> M;
    wrap("$.ambient", [&] { M = std::make_shared<AmbientManifold>(build_ambient(cfg.ambient)); });
    std::shared_ptr<const NullImmersion> imm;
    wrap("$.immersion", [&] { imm = std::make_shared<NullImmersion>(M, cfg.immersion); });
    const auto& coords = M->coordinates();
    const auto parse_field = [&](const std::vector<std::string>& src, const std::string& path) {
        if (static_cast<int>(src.size()) != M->dim())
            fail(path, "expected " + std::to_string(M->dim()) + " components");
        for (std::size_t k = 0; k < src.size(); ++k)
            wrap(path + "[" + std::to_string(k) + "]", [&] { parse_expression(src[k], coords); });
    };
    for (std::size_t i = 0; i < cfg.fields.size(); ++i)
        parse_field(cfg.fields[i].second, "$.fields[" + std::to_string(i) + "].components");
    if (cfg.screens.empty()) fail("$.screens", "at least one screen is required");
    for (std::size_t i = 0; i < cfg.screens.size(); ++i) {
        const std::string p = "$.screens[" + std::to_string(i) + "]";
        const ScreenConfig& s = cfg.screens[i].second;
        std::size_t want = 1;
        if (s.kind == "explicit") want = static_cast<std::size_t>(imm->screen_dim());
        else if (s.kind != "rigging" && s.kind != "closed_conformal")
            fail(p + ".kind", "expected rigging, closed_conformal or explicit");
        if (s.fields.size() != want) fail(p + ".fields", "expected " + std::to_string(want) + " field(s)");
        for (std::size_t k = 0; k < s.fields.size(); ++k)
            parse_field(s.fields[k], p + ".fields[" + std::to_string(k) + "]");
    }
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
        const std::string p = "$.checks[" + std::to_string(i) + "]";
        const CheckRequest& q = cfg.checks[i];
        const auto& names = check_names();
        if (std::find(names.begin(), names.end(), q.check) == names.end()) fail(p + ".check", "unknown check");
        if (!q.screen.empty()) wrap(p + ".screen", [&] { cfg.screen(q.screen); });
        if (!q.field.empty()) wrap(p + ".field", [&] { cfg.field(q.field); });
        if (q.field.empty() && needs_field(q.check)) fail(p + ".field", "check '" + q.check + "' needs a field");
        if (!q.expect_class.empty() && q.check != "umbilic") fail(p + ".class", "only umbilic checks take a class");
        if (q.gauges < 1) fail(p + ".gauges", "must be positive");
        if (q.triples < 0) fail(p + ".triples", "must be non-negative");
    }
    const Tolerances& t = cfg.tolerances;
    for (double v : {t.exact, t.fd, t.rel, t.floor, t.step})
        if (!(v > 0)) fail("$.tolerances", "tolerances must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text, bool strict) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("$: invalid JSON: ") + e.what());
    }
    const Reader rd(strict);
    rd.object(j, "$",
              {"name", "description", "ambient", "immersion", "screens", "fields", "tolerances", "seed", "checks",
               "notes"});
    RunConfig cfg;
    if (j.contains("name")) cfg.name = rd.str(j.at("name"), "$.name");
    if (j.contains("description")) cfg.description = rd.str(j.at("description"), "$.description");
    read_ambient(rd, rd.required(j, "$", "ambient"), cfg);
    read_immersion(rd, rd.required(j, "$", "immersion"), cfg);

    const json& screens = rd.required(j, "$", "screens");
    if (!screens.is_array()) fail("$.screens", "expected an array");
    for (std::size_t i = 0; i < screens.size(); ++i) {
        const std::string p = "$.screens[" + std::to_string(i) + "]";
        rd.object(screens[i], p, {"name", "kind", "fields"});
        ScreenConfig s;
        s.kind = rd.str(rd.required(screens[i], p, "kind"), p + ".kind");
        const json& fs = rd.required(screens[i], p, "fields");
        if (!fs.is_array()) fail(p + ".fields", "expected an array of fields");
        for (std::size_t k = 0; k < fs.size(); ++k)
            s.fields.push_back(rd.strings(fs[k], p + ".fields[" + std::to_string(k) + "]"));
        cfg.screens.emplace_back(rd.str(rd.required(screens[i], p, "name"), p + ".name"), s);
    }
    if (j.contains("fields")) {
        const json& fs = j.at("fields");
        if (!fs.is_array()) fail("$.fields", "expected an array");
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string p = "$.fields[" + std::to_string(i) + "]";
            rd.object(fs[i], p, {"name", "components"});
            cfg.fields.emplace_back(rd.str(rd.required(fs[i], p, "name"), p + ".name"),
                                    rd.strings(rd.required(fs[i], p, "components"), p + ".components"));
        }
    }
    if (j.contains("tolerances")) {
        std::map<std::string, double> t;
        read_tolerances(rd, j.at("tolerances"), "$.tolerances", t);
        Tolerances& o = cfg.tolerances;
        for (const auto& [k, v] : t) {
            if (k == "exact") o.exact = v;
            else if (k == "fd") o.fd = v;
            else if (k == "rel") o.rel = v;
            else if (k == "floor") o.floor = v;
            else if (k == "step") o.step = v;
        }
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) fail("$.seed", "expected a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("checks")) read_checks(rd, j.at("checks"), cfg);
    if (j.contains("notes")) cfg.notes = rd.strings(j.at("notes"), "$.notes");
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), strict);
}

std::string dump_config(const RunConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    if (!cfg.description.empty()) j["description"] = cfg.description;
    j["ambient"] = write_ambient(cfg);
    j["immersion"] = write_immersion(cfg.immersion);
    json screens = json::array();
    for (const auto& [n, s] : cfg.screens) {
        json e;
        e["name"] = n;
        e["kind"] = s.kind;
        e["fields"] = s.fields;
        screens.push_back(e);
    }
    j["screens"] = screens;
    json fields = json::array();
    for (const auto& [n, f] : cfg.fields) {
        json e;
        e["name"] = n;
        e["components"] = f;
        fields.push_back(e);
    }
    j["fields"] = fields;
    const Tolerances& t = cfg.tolerances;
    j["tolerances"] = {{"exact", t.exact}, {"fd", t.fd}, {"rel", t.rel}, {"floor", t.floor}, {"step", t.step}};
    j["seed"] = cfg.seed;
    json checks = json::array();
    for (const auto& q : cfg.checks) checks.push_back(write_check(q));
    j["checks"] = checks;
    if (!cfg.notes.empty()) j["notes"] = cfg.notes;
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump_config(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace nullgeo
