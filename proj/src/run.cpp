#include "nullgeo/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#ifndef NULLGEO_VERSION
#define NULLGEO_VERSION "unknown"
#endif

namespace nullgeo {

using json = nlohmann::ordered_json;

namespace {

ScreenRecipe make_recipe(const ScreenConfig& s, const std::vector<std::string>& coords) {
    if (s.kind == "rigging") return RiggingRecipe{VectorField::parse(s.fields.at(0), coords)};
    if (s.kind == "closed_conformal") return ClosedConformalRecipe{VectorField::parse(s.fields.at(0), coords)};
    ExplicitRecipe e;
    for (const auto& f : s.fields) e.fields.push_back(VectorField::parse(f, coords));
    return e;
}

Tolerances effective(const Tolerances& base, const std::map<std::string, double>& over) {
    Tolerances t = base;
    for (const auto& [k, v] : over) {
        if (k == "exact") t.exact = v;
        else if (k == "fd") t.fd = v;
        else if (k == "rel") t.rel = v;
        else if (k == "floor") t.floor = v;
        else if (k == "step") t.step = v;
    }
    return t;
}

Report inapplicable(const std::string& check, const std::string& note) {
    Report r;
    r.check = check;
    r.note = note;
    return r;
}

Report dispatch(const Session& s, const CheckRequest& q) {
    const RunConfig& cfg = s.config();
    const Tolerances tol = effective(cfg.tolerances, q.tolerances);
    const auto pts = s.points();
    const std::string& c = q.check;
    const auto frame = [&]() -> const NullFrameField& { return s.screen(q.screen); };
    const auto Z = [&] { return s.field(q.field); };
    const auto ambient_points = [&] {
        std::vector<Vec> xs;
        for (const Vec& u : pts) xs.push_back(s.immersion()->point(u));
        for (const auto& p : cfg.ambient.check_points) xs.push_back(Eigen::Map<const Vec>(p.data(), p.size()));
        return xs;
    };

    if (c == "validate") return frame_check(frame(), pts, tol);
    if (c == "shape") return shape_check(frame(), pts, tol);
    if (c == "angle") return constant_angle_test(frame(), Z(), pts, tol);
    if (c == "gauge") return gauge_invariance_check(frame(), Z(), pts, q.gauges, cfg.seed, tol);
    if (c == "quasi_conformal_fit") return quasi_conformal_check(frame(), pts, tol);
    if (c == "sqc_grw") {
        const auto* g = std::get_if<GRWSpec>(&cfg.ambient.form);
        if (!g) return inapplicable(c, "ambient is not a GRW spacetime");
        return grw_pair_check(frame(), pts, g->warp, g->time, 0, tol);
    }
    if (c == "qc-screen") return cc_screen_theorem_check(s.immersion(), Z(), pts, tol);
    if (c == "zstar-zero") return zstar_zero_qc_check(frame(), Z(), pts, tol);
    if (c == "components") return components_check(frame(), Z(), pts, tol);
    if (c == "codazzi") return codazzi_check(frame(), pts, q.tolerances.count("fd") ? tol.fd : 1e-4);
    if (c == "eqgrads") return screen_gradient_check(frame(), Z(), pts, tol);
    if (c == "cpd") return cpd_test(frame(), Z(), pts, tol);
    if (c == "principal") return principal_value_check(frame(), Z(), pts, tol);
    if (c == "geodesic") return geodesic_direction_check(frame(), Z(), pts, tol);
    if (c == "flat-screen") return flat_screen_check(frame(), Z(), pts, tol);
    if (c == "cmc") return cmc_cc_check(frame(), Z(), pts, cfg.spaceform_curvature, cfg.seed, tol);
    if (c == "nonmetric") return nonmetric_check(frame(), pts, tol);
    if (c == "zperp") return zperp_check(frame(), Z(), pts, tol);
    if (c == "umbilic") {
        UmbilicReport u = umbilic_classifier(frame(), pts, tol);
        if (!q.expect_class.empty() && u.verdict == Verdict::pass && q.expect_class != umbilic_name(u.classification)) {
            u.verdict = Verdict::fail;
            u.note = std::string("classified as ") + umbilic_name(u.classification) + ", expected " + q.expect_class;
        }
        return u;
    }
    if (c == "spaceform") {
        if (!cfg.spaceform_curvature) return inapplicable(c, "no spaceform curvature declared");
        const auto xs = ambient_points();
        if (xs.empty()) return inapplicable(c, "no sample points");
        return spaceform_check(s.ambient(), *cfg.spaceform_curvature, xs, cfg.seed, q.triples > 0 ? q.triples : 200,
                               tol.fd);
    }
    if (c == "cc") return cc_field_check(s.ambient(), Z(), ambient_points(), tol);
    throw ConfigError("unknown check '" + c + "'");
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json summary(std::vector<double> v) {
    json j;
    if (v.empty()) {
        j["max"] = nullptr;
        j["mean"] = nullptr;
        j["p95"] = nullptr;
        return j;
    }
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
    j["max"] = number(v.back());
    j["mean"] = number(mean);
    j["p95"] = number(v[std::max<std::size_t>(rank, 1) - 1]);
    return j;
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Session::Session(RunConfig config) : config_(std::move(config)) {
    ambient_ = std::make_shared<AmbientManifold>(build_ambient(config_.ambient));
    immersion_ = std::make_shared<NullImmersion>(ambient_, config_.immersion);
    for (const auto& [name, sc] : config_.screens)
        screens_.emplace_back(name, NullFrameField(immersion_, make_recipe(sc, ambient_->coordinates())));
}

const NullFrameField& Session::screen(const std::string& name) const {
    if (screens_.empty()) throw ConfigError("config has no screens");
    if (name.empty()) return screens_.front().second;
    for (const auto& [n, f] : screens_)
        if (n == name) return f;
    throw ConfigError("unknown screen '" + name + "'");
}

VectorField Session::field(const std::string& name) const {
    return VectorField::parse(config_.field(name), ambient_->coordinates());
}

std::string CheckOutcome::label() const {
    std::string s = request.check;
    if (!request.screen.empty()) s += "@" + request.screen;
    if (!request.field.empty()) s += "/" + request.field;
    return s;
}

bool RunResult::any_fail() const {
    return std::any_of(outcomes.begin(), outcomes.end(),
                       [](const CheckOutcome& o) { return o.report.verdict == Verdict::fail; });
}

bool RunResult::expectations_met() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& o) { return o.expectation_met; });
}

CheckOutcome run_check(const Session& session, const CheckRequest& request) {
    CheckOutcome o;
    o.request = request;
    try {
        o.report = dispatch(session, request);
    } catch (const std::exception& e) {
        o.error = e.what();
        o.report = Report{};
        o.report.check = request.check;
        o.report.verdict = Verdict::fail;
        o.report.note = "error: " + o.error;
    }
    o.expectation_met = o.error.empty() && (!request.expect || *request.expect == o.report.verdict);
    return o;
}

RunResult run(const Session& session, const std::vector<std::string>& only) {
    RunResult r;
    r.name = session.config().name;
    r.config_hash = config_hash(session.config());
    r.seed = session.config().seed;
    for (const auto& q : session.config().checks) {
        if (!only.empty() && std::find(only.begin(), only.end(), q.check) == only.end()) continue;
        r.outcomes.push_back(run_check(session, q));
    }
    return r;
}

RunResult run(const RunConfig& config, const std::vector<std::string>& only) { return run(Session(config), only); }

std::string report_json(const RunResult& r) {
    json j;
    j["report_version"] = 1;
    j["name"] = r.name;
    j["provenance"] = {{"config_hash", r.config_hash}, {"seed", r.seed}, {"version", NULLGEO_VERSION}};
    j["status"] = r.any_fail() ? "fail" : "pass";
    j["expectations_met"] = r.expectations_met();
    json checks = json::array();
    for (const auto& o : r.outcomes) {
        const Report& rep = o.report;
        json c;
        c["label"] = o.label();
        c["check"] = o.request.check;
        c["screen"] = o.request.screen;
        c["field"] = o.request.field;
        c["verdict"] = verdict_name(rep.verdict);
        c["expected"] = o.request.expect ? json(verdict_name(*o.request.expect)) : json(nullptr);
        c["expectation_met"] = o.expectation_met;
        c["note"] = rep.note;
        if (!o.request.note.empty()) c["catalog_note"] = o.request.note;
        if (!o.error.empty()) c["error"] = o.error;
        json sum = json::object(), series = json::object(), scalars = json::object();
        for (const auto& [n, v] : rep.series) {
            sum[n] = summary(v);
            json a = json::array();
            for (double x : v) a.push_back(number(x));
            series[n] = a;
        }
        for (const auto& [n, v] : rep.scalars) scalars[n] = number(v);
        c["summary"] = sum;
        c["scalars"] = scalars;
        json points = json::array();
        for (const Vec& u : rep.points) points.push_back(vec_json(u));
        c["points"] = points;
        c["series"] = series;
        json ex = json::array();
        for (const auto& e : rep.excluded) ex.push_back({{"u", vec_json(e.u)}, {"reason", e.reason}});
        c["excluded"] = ex;
        checks.push_back(c);
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

void export_csv(const Session& session, const RunResult& result, const std::string& screen,
                const std::vector<std::string>& columns, const std::string& path) {
    const NullFrameField& frames = session.screen(screen);
    const std::string screen_name = screen.empty() ? session.config().screens.front().first : screen;
    const auto& params = session.config().immersion.parameters;
    const auto& coords = session.ambient().coordinates();
    const int n = session.immersion()->screen_dim();

    std::vector<std::pair<std::string, std::string>> header;  // name, description
    for (const auto& p : params) header.emplace_back("u_" + p, "parameter " + p);
    for (const auto& c : coords) header.emplace_back("x_" + c, "ambient coordinate " + c + " of the immersion");
    for (const auto& c : coords) header.emplace_back("xi_" + c, "radical vector component " + c);
    for (const auto& c : coords) header.emplace_back("N_" + c, "null transversal component " + c);
    for (int k = 0; k < n; ++k)
        for (const auto& c : coords)
            header.emplace_back("e" + std::to_string(k) + "_" + c, "screen vector " + std::to_string(k) + " component " + c);

    // Residual columns: (outcome, series) pairs in request order.
    struct Col {
        const CheckOutcome* o;
        std::string series;
    };
    std::vector<Col> cols;
    const auto on_screen = [&](const CheckOutcome& o) {
        return o.request.screen == screen_name || (o.request.screen.empty() && screen.empty());
    };
    if (columns.empty()) {
        for (const auto& o : result.outcomes)
            if (on_screen(o))
                for (const auto& [sn, v] : o.report.series) cols.push_back({&o, sn});
    } else {
        for (const auto& want : columns) {
            const auto dot = want.rfind('.');
            bool found = false;
            if (dot != std::string::npos)
                for (const auto& o : result.outcomes)
                    if (o.label() == want.substr(0, dot))
                        for (const auto& [sn, v] : o.report.series)
                            if (sn == want.substr(dot + 1)) {
                                cols.push_back({&o, sn});
                                found = true;
                            }
            if (!found) throw ConfigError("unknown export column '" + want + "'");
        }
    }
    for (const auto& c : cols)
        header.emplace_back(c.o->label() + "." + c.series, "per-sample " + c.series + " of " + c.o->label());

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot write");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i].first;
    out << "\n";
    for (const Vec& u : session.points()) {
        std::vector<std::string> row;
        for (Eigen::Index i = 0; i < u.size(); ++i) row.push_back(fmt(u(i)));
        const std::size_t frame_cols = coords.size() * static_cast<std::size_t>(3 + n);
        try {
            const NullFrame f = frames.at(u);
            const auto push = [&](const Vec& v) {
                for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(fmt(v(i)));
            };
            push(f.x);
            push(f.xi);
            push(f.nt);
            for (int k = 0; k < n; ++k) push(f.screen.col(k));
        } catch (const GeometryError&) {
            row.resize(row.size() + frame_cols);
        }
        for (const auto& c : cols) {
            const auto& pts = c.o->report.points;
            std::string cell;
            for (std::size_t k = 0; k < pts.size(); ++k)
                if (pts[k].size() == u.size() && pts[k] == u) {
                    cell = fmt(c.o->report.at(c.series)[k]);
                    break;
                }
            row.push_back(cell);
        }
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }

    json schema;
    schema["csv_contract_version"] = kCsvContractVersion;
    schema["rows"] = "one per grid point, first parameter slowest; empty cells mark excluded samples";
    schema["screen"] = screen_name;
    json cs = json::array();
    for (const auto& [name, desc] : header) cs.push_back({{"name", name}, {"description", desc}});
    schema["columns"] = cs;
    std::ofstream side(path + ".schema.json", std::ios::binary);
    if (!side) throw ConfigError(path + ".schema.json: cannot write");
    side << schema.dump(2) << "\n";
}

}  // namespace nullgeo
